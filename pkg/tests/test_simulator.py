import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from contactgb.simulator import (
    LatticeState,
    ProcessExtinct,
    SimConfig,
    SplitMix64,
    density_estimate,
    duality_check,
    extinction_probability,
    mix64,
    next_event,
    pattern_occupancy,
    stream_key,
    total_rate,
    transition_weights,
    _evolve,
)
from contactgb.identities import ConfigurationPattern


def reference_rate(occ, site, lam: Fraction) -> Fraction:
    """c(site, occ) written straight from the flip-rate definition."""
    L = len(occ)
    neighbours = occ[(site - 1) % L] + occ[(site + 1) % L]
    return (1 - occ[site]) * lam * neighbours + occ[site]


# ---------------------------------------------------------------------------
# exact rate audit


@pytest.mark.parametrize("lam", [Fraction(1, 3), Fraction(2), Fraction(7, 2)])
def test_weights_match_rate_function(lam):
    for L in (3, 4, 5, 6):
        for occ in itertools.product((0, 1), repeat=L):
            weights = transition_weights(occ, lam)
            for site in range(L):
                assert weights[site] == reference_rate(occ, site, lam)


def test_total_rate_matches_tracked_counts():
    lam = Fraction(5, 4)
    for L in (3, 5, 8):
        for occ in itertools.product((0, 1), repeat=L):
            if not any(occ):
                continue
            state = LatticeState(occ)
            tracked = state.n_occupied + lam * state.n_edges
            assert tracked == total_rate(occ, lam)


def test_wrap_around_state_gives_double_weight():
    # ring of three with the middle vacant: both neighbours occupied
    weights = transition_weights([1, 0, 1], Fraction(3))
    assert weights == [Fraction(1), Fraction(6), Fraction(1)]


def test_single_site_total_rate():
    lam = Fraction(9, 7)
    occ = [0] * 11
    occ[5] = 1
    assert total_rate(occ, lam) == 1 + 2 * lam


# ---------------------------------------------------------------------------
# state bookkeeping


def test_state_counters_survive_event_storm():
    rng = SplitMix64(stream_key(99, 0))
    state = LatticeState(pattern_occupancy(ConfigurationPattern.from_string("ooxo"), 16))
    for _ in range(300):
        try:
            _, event = next_event(state, 1.6, rng)
        except ProcessExtinct:
            break
        state.apply(event)
        assert state.n_occupied == int(state.occ.sum())
        fresh = LatticeState(state.occ)
        assert state.n_edges == fresh.n_edges


def test_next_event_on_empty_state_raises():
    state = LatticeState(np.zeros(5, dtype=np.uint8))
    with pytest.raises(ProcessExtinct):
        next_event(state, 1.0, SplitMix64(1))


def test_zero_rate_only_deaths():
    rng = SplitMix64(stream_key(5, 0))
    state = LatticeState(np.ones(6, dtype=np.uint8))
    events = []
    while True:
        try:
            _, event = next_event(state, 0.0, rng)
        except ProcessExtinct:
            break
        events.append(event[0])
        state.apply(event)
    assert events == ["death"] * 6
    assert state.n_occupied == 0


# ---------------------------------------------------------------------------
# python reference path vs compiled kernel


@pytest.mark.parametrize("seed", [3, 17, 20260809])
def test_kernel_matches_reference_path(seed):
    lam, L, T = 1.7, 12, 6.0
    occ0 = pattern_occupancy(ConfigurationPattern.from_string("oo"), L)

    key = stream_key(seed, 0)
    compiled = occ0.copy()
    _evolve(compiled, lam, T, np.uint64(key))

    state = LatticeState(occ0)
    rng = SplitMix64(key)
    t = 0.0
    while state.n_occupied:
        dt, event = next_event(state, lam, rng)
        t += dt
        if t >= T:
            break
        state.apply(event)
    assert np.array_equal(compiled, state.occ)


# ---------------------------------------------------------------------------
# estimates


def test_seed_determinism():
    cfg = SimConfig(1.2, 30, 8.0, 50, 424242, "o")
    a = extinction_probability(cfg)
    b = extinction_probability(cfg)
    assert a.mean == b.mean and a.half_width == b.half_width


def test_pure_death_extinction_certain():
    est = extinction_probability(SimConfig(0.0, 20, 50.0, 40, 7, "o"))
    assert est.mean == 1.0


def test_pure_death_density_vanishes():
    est = density_estimate(SimConfig(0.0, 20, 50.0, 40, 7, "ones"))
    assert est.mean == 0.0


def test_extinction_monotone_in_rate():
    rates = [0.5, 1.0, 1.5, 2.0, 3.0]
    estimates = [
        extinction_probability(SimConfig(lam, 100, 50.0, 400, 1234, "o")) for lam in rates
    ]
    for lo, hi in zip(estimates, estimates[1:]):
        slack = 2 * (lo.half_width + hi.half_width)
        assert hi.mean <= lo.mean + slack


def test_supercritical_extinction_tracks_branch_value():
    # third-order branch value at rate 3 is about 0.2067
    est = extinction_probability(SimConfig(3.0, 200, 60.0, 600, 99, "o"))
    assert est.mean < 0.9
    assert abs(est.mean - 0.206734) <= 0.1


def test_duality_trivial_at_zero_rate():
    lhs, rhs = duality_check(0.0, "o", 20, 50.0, 30, 3)
    assert lhs.mean == 1.0 and rhs.mean == 1.0


def test_duality_monotone_in_pattern():
    lhs_o, _ = duality_check(2.5, "o", 100, 40.0, 400, 11)
    lhs_oo, rhs_oo = duality_check(2.5, "oo", 100, 40.0, 400, 11)
    slack = 2 * (lhs_o.half_width + lhs_oo.half_width)
    assert lhs_oo.mean <= lhs_o.mean + slack
    assert abs(lhs_oo.mean - rhs_oo.mean) <= 0.1


def test_pattern_margin_enforced():
    wide = "o" * 11
    with pytest.raises(ValueError):
        pattern_occupancy(ConfigurationPattern.from_string(wide), 20)


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(-1.0, 20, 5.0, 10, 0, "o")
    with pytest.raises(ValueError):
        SimConfig(1.0, 2, 5.0, 10, 0, "o")
    with pytest.raises(ValueError):
        SimConfig(1.0, 20, 0.0, 10, 0, "o")
    with pytest.raises(ValueError):
        SimConfig(1.0, 20, 5.0, 0, 0, "o")
    with pytest.raises(ValueError):
        SimConfig(1.0, 20, 5.0, 10, 0, "ox")
    with pytest.raises(ValueError):
        density_estimate(SimConfig(1.0, 20, 5.0, 10, 0, "o"))


def test_estimate_fields():
    est = extinction_probability(SimConfig(1.0, 30, 5.0, 25, 8, "o"))
    assert 0.0 <= est.mean <= 1.0
    assert est.half_width >= 0.0
    assert est.replicas == 25
    assert est.rng == "splitmix64-streams-1"


# ---------------------------------------------------------------------------
# generator internals


def test_mix64_reference_vector():
    # SplitMix64 with seed 1234567: first outputs per the reference algorithm
    s = 1234567
    golden = 0x9E3779B97F4A7C15
    out = []
    for _ in range(3):
        s = (s + golden) & ((1 << 64) - 1)
        out.append(mix64(s))
    gen = SplitMix64(1234567)
    assert [gen.next_u64() for _ in range(3)] == out


def test_uniform_ranges():
    gen = SplitMix64(9)
    for _ in range(1000):
        u = gen.uniform()
        assert 0.0 <= u < 1.0
    for _ in range(1000):
        u = gen.uniform_pos()
        assert 0.0 < u <= 1.0
