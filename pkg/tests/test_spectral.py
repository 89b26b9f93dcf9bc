import numpy as np
import pytest
from hypothesis import given, settings

from digraph_consensus import (
    check_rank_law,
    check_spectrum_localization,
    decompose,
    eigenprojector_resolvent,
    enumerate_maximal_in_forests,
    forest_matrix,
    laplacian,
    spectrum,
)
from digraph_consensus.generate import all_digraphs, converging_path, random_digraph
from digraph_consensus.spectral import SpectralError, default_tolerance, matrix_rank

from conftest import digraphs, empty, two_cycle, two_disjoint_two_cycles


def test_two_cycle_spectrum():
    rep = spectrum(laplacian(two_cycle()))
    np.testing.assert_allclose(rep.eigenvalues, [0, 2], atol=1e-14)
    assert rep.numerical_rank == 1 and rep.zero_multiplicity == 1
    assert rep.min_positive_real_part == pytest.approx(2.0)


def test_zero_laplacian_spectrum():
    rep = spectrum(laplacian(empty(3)))
    assert rep.eigenvalues == (0j, 0j, 0j)
    assert rep.numerical_rank == 0 and rep.zero_multiplicity == 3
    assert rep.min_positive_real_part is None


def test_converging_path_rank():
    rep = spectrum(laplacian(converging_path(5)))
    assert rep.numerical_rank == 4 and rep.nullity == 1 and rep.semisimple_zero


def test_default_tolerance_scales_with_degree():
    assert default_tolerance(laplacian(two_cycle(2.0, 1.0))) == pytest.approx(2e-9)
    assert default_tolerance(laplacian(empty(2))) == 1e-9


@pytest.mark.parametrize(
    "g, d, rank",
    [(two_cycle(), 1, 1), (empty(4), 4, 0), (two_disjoint_two_cycles(), 2, 2), (converging_path(5), 1, 4)],
)
def test_rank_law_examples(g, d, rank):
    rep = spectrum(laplacian(g))
    assert rep.numerical_rank == rank
    assert check_rank_law(rep, d)
    assert not check_rank_law(rep, d + 1)


def test_localization_examples():
    assert check_spectrum_localization(spectrum(laplacian(two_cycle())))
    assert check_spectrum_localization(spectrum(laplacian(empty(3))))


def test_localization_rejects_a_negative_real_part():
    # not a Laplacian; the check itself must be able to say no
    rep = spectrum(np.array([[-1.0, 0.0], [0.0, 1.0]]))
    assert not check_spectrum_localization(rep)


def test_rank_law_on_every_labelled_digraph_up_to_4():
    for n in range(1, 5):
        for g in all_digraphs(n):
            assert check_rank_law(spectrum(laplacian(g)), decompose(g).sink_count), g


@given(digraphs(max_n=10))
@settings(max_examples=300)
def test_rank_law_and_localization_random(g):
    rep = spectrum(laplacian(g))
    assert check_rank_law(rep, decompose(g).sink_count)
    assert check_spectrum_localization(rep)
    assert len(rep.eigenvalues) == g.n


def test_resolvent_of_zero_laplacian_is_identity():
    for tau in (1.0, 1e3, 1e8):
        assert np.array_equal(eigenprojector_resolvent(laplacian(empty(4)), tau), np.eye(4))


@pytest.mark.parametrize(
    "g, expected",
    [(two_cycle(), [[0.5, 0.5], [0.5, 0.5]]), (two_cycle(2.0, 1.0), [[1 / 3, 2 / 3], [1 / 3, 2 / 3]])],
)
def test_resolvent_examples(g, expected):
    np.testing.assert_allclose(eigenprojector_resolvent(laplacian(g), 1e8), expected, rtol=0, atol=1e-7)


def test_resolvent_error_decays_like_one_over_tau():
    g = two_cycle(2.0, 1.0)
    jbar = forest_matrix(enumerate_maximal_in_forests(g))
    lap = laplacian(g)
    errs = [np.abs(eigenprojector_resolvent(lap, t) - jbar).max() for t in (1e2, 1e3, 1e4)]
    # exact error for this graph is (2/3) / (1 + 3 tau)
    np.testing.assert_allclose(errs, [(2 / 3) / (1 + 3 * t) for t in (1e2, 1e3, 1e4)], rtol=1e-8)


def test_resolvent_rank_matches_d(rng):
    for _ in range(200):
        g = random_digraph(rng, int(rng.integers(1, 10)))
        res = eigenprojector_resolvent(laplacian(g))
        assert matrix_rank(res, 0.5) == decompose(g).sink_count


def test_resolvent_rejects_bad_input():
    with pytest.raises(ValueError):
        eigenprojector_resolvent(laplacian(two_cycle()), 0.0)
    with pytest.raises(SpectralError):
        # -1/tau is an eigenvalue: I + tau*M singular
        eigenprojector_resolvent(np.array([[-1.0]]), 1.0)


def test_spectrum_limits():
    with pytest.raises(ValueError):
        spectrum(np.zeros((65, 65)))
    with pytest.raises(ValueError):
        spectrum(np.zeros((2, 3)))
