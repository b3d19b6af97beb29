"""Continuous-time Monte Carlo for the one-dimensional contact process.

Occupied sites die at rate 1; a vacant site is infected at the infection
rate times its number of occupied neighbours.  The lattice is a ring of L
sites, which stands in for the infinite lattice as long as the initial
pattern keeps a quarter-lattice margin on each side and the horizon stays
moderate.

Sampling protocol, identical in the Python reference path and the compiled
batch kernel so that trajectories agree draw for draw:

1. waiting time ~ Exponential(total), total = occupied + rate * edges,
   where `edges` counts ordered occupied->vacant neighbour pairs;
2. event type (only drawn when edges > 0): infection iff u * total is at
   least the occupied count, death otherwise;
3. death: uniform occupied site; infection: uniform (occupied site,
   direction) pair, redrawn until the neighbour is vacant.

Randomness comes from SplitMix64 streams ("splitmix64-streams-1"): replica
r of master seed S draws from SplitMix64 seeded with mix64(S + (r + offset)
* GOLDEN), so replicas are independent of each other and of scheduling.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numba import njit, prange

from .identities import ConfigurationPattern

RNG_NAME = "splitmix64-streams-1"

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB
_U53 = 2.0 ** -53


class ProcessExtinct(Exception):
    """The empty configuration is absorbing: no further event exists."""


def mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK
    return (z ^ (z >> 31)) & _MASK


def stream_key(seed: int, index: int) -> int:
    """Initial SplitMix64 state of stream `index` under a master seed."""
    return mix64((seed + index * _GOLDEN) & _MASK)


class SplitMix64:
    """Reference generator; the compiled kernel inlines the same updates."""

    def __init__(self, state: int):
        self._s = state & _MASK

    def next_u64(self) -> int:
        self._s = (self._s + _GOLDEN) & _MASK
        return mix64(self._s)

    def uniform(self) -> float:
        """Uniform on [0, 1)."""
        return (self.next_u64() >> 11) * _U53

    def uniform_pos(self) -> float:
        """Uniform on (0, 1]."""
        return ((self.next_u64() >> 11) + 1) * _U53

    def exponential(self, rate: float) -> float:
        return -math.log(self.uniform_pos()) / rate


# ---------------------------------------------------------------------------
# lattice state (Python reference path)


class LatticeState:
    """Ring occupancy with incremental occupied-site and edge bookkeeping.

    `edges` counts ordered (occupied site, vacant neighbour) pairs, the
    quantity the total infection rate is proportional to.
    """

    def __init__(self, occupancy):
        occ = np.array(occupancy, dtype=np.uint8)
        if occ.ndim != 1 or len(occ) < 3:
            raise ValueError("occupancy must be a vector of length >= 3")
        if set(np.unique(occ)) - {0, 1}:
            raise ValueError("occupancy entries must be 0 or 1")
        self.occ = occ
        self.L = len(occ)
        self.sites: list[int] = [i for i in range(self.L) if occ[i]]
        self.pos = np.full(self.L, -1, dtype=np.int64)
        for k, site in enumerate(self.sites):
            self.pos[site] = k
        self.n_edges = 0
        for i in range(self.L):
            if occ[i]:
                self.n_edges += int(occ[(i - 1) % self.L] == 0)
                self.n_edges += int(occ[(i + 1) % self.L] == 0)

    @property
    def n_occupied(self) -> int:
        return len(self.sites)

    def neighbours(self, site: int) -> tuple[int, int]:
        return (site - 1) % self.L, (site + 1) % self.L

    def kill(self, site: int):
        assert self.occ[site]
        for nb in self.neighbours(site):
            self.n_edges += 1 if self.occ[nb] else -1
        self.occ[site] = 0
        k = self.pos[site]
        last = self.sites[-1]
        self.sites[k] = last
        self.pos[last] = k
        self.sites.pop()
        self.pos[site] = -1

    def infect(self, site: int):
        assert not self.occ[site]
        for nb in self.neighbours(site):
            self.n_edges += -1 if self.occ[nb] else 1
        self.occ[site] = 1
        self.pos[site] = len(self.sites)
        self.sites.append(site)

    def apply(self, event: tuple[str, int]):
        kind, site = event
        if kind == "death":
            self.kill(site)
        elif kind == "infect":
            self.infect(site)
        else:
            raise ValueError(f"unknown event kind {kind!r}")


def next_event(state: LatticeState, rate: float, rng: SplitMix64) -> tuple[float, tuple[str, int]]:
    """Sample the waiting time and the next transition (not applied).

    Raises ProcessExtinct on an empty state.
    """
    n = state.n_occupied
    if n == 0:
        raise ProcessExtinct
    total = n + rate * state.n_edges
    dt = rng.exponential(total)
    if state.n_edges == 0:
        infecting = False
    else:
        infecting = rng.uniform() * total >= n
    if not infecting:
        k = min(int(rng.uniform() * n), n - 1)
        return dt, ("death", state.sites[k])
    while True:
        k = min(int(rng.uniform() * (2 * n)), 2 * n - 1)
        site = state.sites[k >> 1]
        nb = (site + 1) % state.L if k & 1 else (site - 1) % state.L
        if not state.occ[nb]:
            return dt, ("infect", nb)


def transition_weights(occupancy, rate: Fraction) -> list[Fraction]:
    """Exact per-site event weights the sampler realizes.

    Site i gets weight 1 if occupied (death) and rate * (occupied
    neighbours) if vacant (infection).  This is the distribution next_event
    draws from, stated in exact rationals for auditing.
    """
    occ = list(occupancy)
    L = len(occ)
    rate = Fraction(rate)
    weights = []
    for i in range(L):
        if occ[i]:
            weights.append(Fraction(1))
        else:
            weights.append(rate * (occ[(i - 1) % L] + occ[(i + 1) % L]))
    return weights


def total_rate(occupancy, rate: Fraction) -> Fraction:
    return sum(transition_weights(occupancy, rate), Fraction(0))


# ---------------------------------------------------------------------------
# compiled batch kernel


@njit(inline="always")
def _nb_mix64(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(inline="always")
def _nb_next(s):
    s = s + np.uint64(0x9E3779B97F4A7C15)
    return s, _nb_mix64(s)


@njit(cache=True)
def _evolve(occ, rate, t_max, key):
    """Run one replica in place until extinction or the horizon."""
    L = occ.shape[0]
    sites = np.empty(L, np.int64)
    pos = np.full(L, -1, np.int64)
    n = 0
    edges = 0
    for i in range(L):
        if occ[i]:
            sites[n] = i
            pos[i] = n
            n += 1
            left = i - 1 if i > 0 else L - 1
            right = i + 1 if i < L - 1 else 0
            if occ[left] == 0:
                edges += 1
            if occ[right] == 0:
                edges += 1
    s = key
    t = 0.0
    while n > 0:
        total = n + rate * edges
        s, bits = _nb_next(s)
        u = ((bits >> np.uint64(11)) + np.uint64(1)) * 2.0 ** -53
        t += -np.log(u) / total
        if t >= t_max:
            break
        infecting = False
        if edges > 0:
            s, bits = _nb_next(s)
            v = (bits >> np.uint64(11)) * 2.0 ** -53
            infecting = v * total >= n
        if not infecting:
            s, bits = _nb_next(s)
            w = (bits >> np.uint64(11)) * 2.0 ** -53
            k = int(w * n)
            if k > n - 1:
                k = n - 1
            site = sites[k]
            left = site - 1 if site > 0 else L - 1
            right = site + 1 if site < L - 1 else 0
            edges += 1 if occ[left] else -1
            edges += 1 if occ[right] else -1
            occ[site] = 0
            idx = pos[site]
            last = sites[n - 1]
            sites[idx] = last
            pos[last] = idx
            pos[site] = -1
            n -= 1
        else:
            while True:
                s, bits = _nb_next(s)
                w = (bits >> np.uint64(11)) * 2.0 ** -53
                k = int(w * (2 * n))
                if k > 2 * n - 1:
                    k = 2 * n - 1
                site = sites[k >> 1]
                if k & 1:
                    nb = site + 1 if site < L - 1 else 0
                else:
                    nb = site - 1 if site > 0 else L - 1
                if occ[nb] == 0:
                    left = nb - 1 if nb > 0 else L - 1
                    right = nb + 1 if nb < L - 1 else 0
                    edges += -1 if occ[left] else 1
                    edges += -1 if occ[right] else 1
                    occ[nb] = 1
                    sites[n] = nb
                    pos[nb] = n
                    n += 1
                    break


@njit(parallel=True, cache=True)
def _run_batch(occ0, rate, t_max, keys, out):
    for r in prange(keys.shape[0]):
        out[r, :] = occ0
        _evolve(out[r], rate, t_max, keys[r])


# ---------------------------------------------------------------------------
# estimates


@dataclass(frozen=True)
class SimulationEstimate:
    """A Monte Carlo mean with a 95% normal-approximation half-width."""

    mean: float
    half_width: float
    replicas: int
    elapsed: float
    rng: str = RNG_NAME

    def __post_init__(self):
        if not 0.0 <= self.mean <= 1.0 or self.half_width < 0:
            raise ValueError("estimate out of range")


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one simulation experiment.

    ``initial`` is either "ones" (fully occupied start) or a pattern string
    such as "o" or "ooxo", placed in the middle of the lattice.
    """

    lam: float
    L: int
    T: float
    replicas: int
    seed: int
    initial: str = "o"

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("infection rate must be nonnegative")
        if self.L < 3:
            raise ValueError("lattice size must be at least 3")
        if self.T <= 0:
            raise ValueError("time horizon must be positive")
        if self.replicas < 1:
            raise ValueError("need at least one replica")
        if self.initial != "ones":
            ConfigurationPattern.from_string(self.initial)

    def pattern(self) -> ConfigurationPattern:
        if self.initial == "ones":
            raise ValueError("all-ones start has no pattern")
        return ConfigurationPattern.from_string(self.initial)


def pattern_occupancy(pattern: ConfigurationPattern, L: int) -> np.ndarray:
    """Centered occupancy for a pattern, enforcing the quarter-lattice margin."""
    margin = L // 4
    if pattern.span > L - 2 * margin:
        raise ValueError(
            f"pattern spans {pattern.span} sites; a lattice of {L} leaves only "
            f"{L - 2 * margin} after the {margin}-site margins"
        )
    occ = np.zeros(L, dtype=np.uint8)
    offset = (L - pattern.span) // 2
    for site in pattern.sites:
        occ[offset + site] = 1
    return occ


def _keys(seed: int, count: int, offset: int = 0) -> np.ndarray:
    return np.array(
        [stream_key(seed, offset + i) for i in range(count)], dtype=np.uint64
    )


def _final_states(occ0: np.ndarray, lam: float, T: float, keys: np.ndarray) -> np.ndarray:
    out = np.empty((len(keys), len(occ0)), dtype=np.uint8)
    _run_batch(occ0, float(lam), float(T), keys, out)
    return out


def _binomial_estimate(hits: np.ndarray, elapsed: float) -> SimulationEstimate:
    n = len(hits)
    p = float(np.mean(hits))
    hw = 1.96 * math.sqrt(p * (1.0 - p) / n)
    return SimulationEstimate(mean=p, half_width=hw, replicas=n, elapsed=elapsed)


def extinction_probability(cfg: SimConfig, key_offset: int = 0) -> SimulationEstimate:
    """Fraction of replicas that reach the empty configuration before T."""
    occ0 = pattern_occupancy(cfg.pattern(), cfg.L)
    start = time.perf_counter()
    finals = _final_states(occ0, cfg.lam, cfg.T, _keys(cfg.seed, cfg.replicas, key_offset))
    extinct = finals.sum(axis=1) == 0
    return _binomial_estimate(extinct, time.perf_counter() - start)


def density_estimate(cfg: SimConfig) -> SimulationEstimate:
    """Mean occupancy of the middle half of the lattice at time T, from all ones."""
    if cfg.initial != "ones":
        raise ValueError("density estimation starts from the all-ones state")
    occ0 = np.ones(cfg.L, dtype=np.uint8)
    start = time.perf_counter()
    finals = _final_states(occ0, cfg.lam, cfg.T, _keys(cfg.seed, cfg.replicas))
    window = slice(cfg.L // 4, cfg.L // 4 + cfg.L // 2)
    vals = finals[:, window].mean(axis=1)
    n = len(vals)
    hw = 1.96 * float(np.std(vals, ddof=1)) / math.sqrt(n) if n > 1 else 0.0
    return SimulationEstimate(
        mean=float(np.mean(vals)),
        half_width=hw,
        replicas=n,
        elapsed=time.perf_counter() - start,
    )


def duality_check(
    lam: float, pattern: ConfigurationPattern | str, L: int, T: float, replicas: int, seed: int
) -> tuple[SimulationEstimate, SimulationEstimate]:
    """Estimate both sides of the self-duality identity.

    Left: probability, under the all-ones start, that every site of the
    centered pattern is vacant at time T (the pattern's vacancy probability
    under the upper invariant measure).  Right: extinction probability of
    the process started from the pattern.  Replica streams of the two sides
    are disjoint (offsets 0 and `replicas`).
    """
    if isinstance(pattern, str):
        pattern = ConfigurationPattern.from_string(pattern)
    sites = np.flatnonzero(pattern_occupancy(pattern, L))
    start = time.perf_counter()
    finals = _final_states(np.ones(L, dtype=np.uint8), lam, T, _keys(seed, replicas))
    vacant = (finals[:, sites] == 0).all(axis=1)
    lhs = _binomial_estimate(vacant, time.perf_counter() - start)
    rhs = extinction_probability(
        SimConfig(lam=lam, L=L, T=T, replicas=replicas, seed=seed, initial=pattern.string),
        key_offset=replicas,
    )
    return lhs, rhs
