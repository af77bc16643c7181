import numpy as np
import pytest

from bellmono.bell import facet_m, mermin3, svetlichny3
from bellmono.errors import ArgumentError, ShapeError
from bellmono.filters import LocalFilter, apply_filter, uniform_filters
from bellmono.library import ghz_state, reduced_w, w_state
from bellmono.monogamy import (
    MonogamyMode,
    MonogamyReport,
    MonogamyTerm,
    OptimizerParams,
    chsh_monogamy,
    cm_bound,
    multipartite_monogamy,
    subsystem_states,
)
from bellmono.states import density_from_vector

from conftest import random_ket

FAST = OptimizerParams(restarts=16)
W3 = density_from_vector(w_state(3))
GHZ3 = density_from_vector(ghz_state(3))


def test_cm_bound_values():
    assert cm_bound(2, 3, 2) == 12
    assert cm_bound(3, 4, 2) == 16
    assert cm_bound(3, 4, 4) == 64
    assert cm_bound(4, 5, 2) == 20
    with pytest.raises(ArgumentError):
        cm_bound(4, 3, 2)


def test_report_consistency():
    r = MonogamyReport("x", [MonogamyTerm("AB", 2.0), MonogamyTerm("AC", 2.0), MonogamyTerm("BC", 2.0)], 12.0)
    assert r.sum_of_squares == 12.0 and not r.violated
    r = MonogamyReport("x", [MonogamyTerm("AB", 3.0)], 4.0)
    assert r.violated
    assert r.as_dict()["terms"][0]["label"] == "AB"


def test_ghz_pairwise_saturates():
    report = chsh_monogamy(GHZ3)
    assert [t.label for t in report.terms] == ["AB", "AC", "BC"]
    for t in report.terms:
        assert abs(t.value - 2) < 1e-12
    assert abs(report.sum_of_squares - 12) < 1e-12
    assert not report.violated


def test_w3_pairwise():
    report = chsh_monogamy(W3)
    for t in report.terms:
        assert abs(t.squared - 32 / 9) < 1e-12
    assert abs(report.sum_of_squares - 32 / 3) < 1e-10
    assert not report.violated


def test_w3_filtered_pairs_violate():
    report = chsh_monogamy(W3, pair_filter=LocalFilter(0.5))
    for t in report.terms:
        assert abs(t.squared - 4 * 8 / 2.25**2) < 1e-10
    assert abs(report.sum_of_squares - 12 * 8 / 2.25**2) < 1e-9
    assert report.violated


def test_shared_settings_mode():
    ghz = chsh_monogamy(GHZ3, MonogamyMode.SHARED_SETTINGS, params=FAST)
    assert ghz.mode == "shared"
    assert ghz.sum_of_squares <= 12 + 1e-9 and not ghz.violated
    w = chsh_monogamy(W3, MonogamyMode.SHARED_SETTINGS, params=FAST)
    # shared settings can never beat independently optimized ones
    assert w.sum_of_squares <= chsh_monogamy(W3).sum_of_squares + 1e-9
    with pytest.raises(ArgumentError):
        chsh_monogamy(W3, MonogamyMode.SHARED_SETTINGS, pair_filter=LocalFilter(0.5))


def test_chsh_monogamy_input_checks():
    with pytest.raises(ShapeError):
        chsh_monogamy(reduced_w(3, 2))
    with pytest.raises(ArgumentError):
        chsh_monogamy(W3, pairs=[(1, 1)])


def test_random_pure_states_respect_pairwise_bound(rng):
    for _ in range(20):
        rho = density_from_vector(random_ket(rng, 8))
        assert chsh_monogamy(rho).sum_of_squares <= 12 + 1e-6


def test_mermin_replicated_boundary():
    report = multipartite_monogamy([("rho43", reduced_w(4, 3))], mermin3(), 4, FAST)
    assert len(report.terms) == 4
    assert abs(report.sum_of_squares - 16) < 1e-6
    assert report.bound == 16
    assert not report.violated


def test_svetlichny_filtered_violates():
    rho = apply_filter(reduced_w(4, 3), uniform_filters(3, 0.4))
    report = multipartite_monogamy([("f", rho)], svetlichny3(), 4, FAST)
    assert abs(report.terms[0].value - 4.02814) < 1e-5
    assert report.sum_of_squares > 64 and report.violated


def test_facet4_on_w5_marginal_not_violated():
    report = multipartite_monogamy([("rho54", reduced_w(5, 4))], facet_m(4), 5, FAST)
    assert report.bound == 20
    assert report.sum_of_squares <= 20 + 1e-6 and not report.violated


def test_replicated_equals_explicit_subsets():
    full = density_from_vector(w_state(4))
    explicit = multipartite_monogamy(subsystem_states(full, 3), svetlichny3(), 4, FAST)
    replicated = multipartite_monogamy([("any", reduced_w(4, 3))], svetlichny3(), 4, FAST)
    assert [t.label for t in explicit.terms] == ["ABC", "ABD", "ACD", "BCD"]
    assert abs(explicit.sum_of_squares - replicated.sum_of_squares) < 1e-6


def test_subsystem_states_filtered():
    states = subsystem_states(W3, 2, LocalFilter(0.5))
    assert [lbl for lbl, _ in states] == ["AB", "AC", "BC"]
    expected = apply_filter(reduced_w(3, 2), uniform_filters(2, 0.5))
    for _, rho in states:
        assert np.max(np.abs(rho - expected)) < 1e-14


def test_multipartite_input_checks():
    with pytest.raises(ArgumentError):
        multipartite_monogamy([("a", reduced_w(4, 3))] * 2, mermin3(), 4, FAST)
    with pytest.raises(ShapeError):
        multipartite_monogamy([("a", reduced_w(4, 2))], mermin3(), 4, FAST)
