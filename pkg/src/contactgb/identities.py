"""Correlation identities for the one-dimensional contact process.

Stationarity of the upper invariant measure ties the vacancy probability of
every finite site pattern to the probabilities of its one-site extensions
(infection, weighted by the rate) and deletions (death).  Each pattern
therefore contributes one linear identity; this module generates those
identities as exact polynomials over a registry that assigns correlation
variables to canonical patterns.

A pattern is canonical when it is translated to start at site 0 and, of the
pattern and its mirror image, is the one whose `o`/`x` string is
lexicographically smaller.  Mirror identification is what keeps the
variable count at six for the classical third-order system: the rates are
left-right symmetric, so reflected patterns have equal vacancy probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .polyring import NAME_BY_ID, LexOrder, Polynomial, RATE


class EmptyPatternError(ValueError):
    """The empty configuration is the constant 1, not a variable."""


@dataclass(frozen=True)
class ConfigurationPattern:
    """A canonical finite set of occupied sites, anchored at 0."""

    sites: tuple[int, ...]

    def __post_init__(self):
        if not self.sites:
            raise EmptyPatternError("pattern has no occupied sites")
        if list(self.sites) != sorted(set(self.sites)) or self.sites[0] != 0:
            raise ValueError("sites must be strictly increasing and start at 0")

    @classmethod
    def from_string(cls, text: str) -> "ConfigurationPattern":
        if not text or set(text) - {"o", "x"}:
            raise ValueError(f"bad pattern string {text!r}: use 'o' and 'x' only")
        if text[0] == "x" or text[-1] == "x":
            raise ValueError(f"bad pattern string {text!r}: must start and end with 'o'")
        return canonicalize(i for i, ch in enumerate(text) if ch == "o")

    @property
    def span(self) -> int:
        return self.sites[-1] + 1

    @property
    def size(self) -> int:
        return len(self.sites)

    @property
    def string(self) -> str:
        occupied = set(self.sites)
        return "".join("o" if i in occupied else "x" for i in range(self.span))

    def __str__(self) -> str:
        return self.string


def _pattern_string(sites: Sequence[int]) -> str:
    occupied = set(sites)
    return "".join("o" if i in occupied else "x" for i in range(max(occupied) + 1))


def canonicalize(sites: Iterable[int]) -> ConfigurationPattern:
    """Translate to anchor 0, then reflect to the smaller string form."""
    ordered = sorted(set(sites))
    if not ordered:
        raise EmptyPatternError("cannot canonicalize an empty site set")
    base = ordered[0]
    shifted = [s - base for s in ordered]
    mirrored = sorted(shifted[-1] - s for s in shifted)
    if _pattern_string(mirrored) < _pattern_string(shifted):
        shifted = mirrored
    return ConfigurationPattern(tuple(shifted))


#: preload order fixes variable ids 1..6 for the classical six patterns.
_PRELOADED = ("o", "oo", "oxo", "ooo", "ooxo", "oooo")


class VariableRegistry:
    """Bidirectional map between canonical patterns and variable ids.

    Id 0 is the infection rate.  The six classical patterns are preloaded
    as ids 1..6.  Precedence for the monomial order ranks the rate lowest
    and patterns by (span, occupied count, string) ascending, which on the
    preloaded six reproduces the classical elimination order.
    """

    def __init__(self):
        self._id_by_pattern: dict[ConfigurationPattern, int] = {}
        self._pattern_by_id: dict[int, ConfigurationPattern] = {}
        for text in _PRELOADED:
            self.register(ConfigurationPattern.from_string(text))

    def register(self, pattern: ConfigurationPattern) -> int:
        """Idempotent: a known pattern returns its existing id."""
        vid = self._id_by_pattern.get(pattern)
        if vid is None:
            vid = len(self._id_by_pattern) + 1
            self._id_by_pattern[pattern] = vid
            self._pattern_by_id[vid] = pattern
        return vid

    def id_of(self, pattern: ConfigurationPattern) -> int | None:
        return self._id_by_pattern.get(pattern)

    def pattern_of(self, vid: int) -> ConfigurationPattern:
        return self._pattern_by_id[vid]

    def __len__(self) -> int:
        return len(self._id_by_pattern)

    def patterns(self) -> list[ConfigurationPattern]:
        return [self._pattern_by_id[i] for i in sorted(self._pattern_by_id)]

    def name_of(self, vid: int) -> str:
        return NAME_BY_ID.get(vid, f"v{vid}")

    def names(self) -> dict[str, int]:
        """Name table for the text grammar, covering every registered id."""
        return {self.name_of(v): v for v in [RATE, *self._pattern_by_id]}

    def precedence_key(self, vid: int):
        if vid == RATE:
            return (0, 0, "")
        p = self._pattern_by_id[vid]
        return (p.span, p.size, p.string)

    def lex_order(self) -> LexOrder:
        """Lexicographic order bound to this registry's precedence.

        The order object stays valid as further patterns are registered:
        precedence keys depend only on the pattern, never on registration
        order.
        """
        return LexOrder(self.precedence_key)


def _vacancy(sites: set[int], registry: VariableRegistry) -> Polynomial:
    if not sites:
        return Polynomial.constant(1)
    return Polynomial.variable(registry.register(canonicalize(sites)))


def correlation_identity(
    pattern: ConfigurationPattern, registry: VariableRegistry
) -> Polynomial:
    """Stationarity identity of a pattern, as a normalized polynomial.

    One infection term per (occupied site, vacant neighbour) adjacency,
    weighted by the rate variable; one death term per occupied site.  New
    patterns encountered along the way are registered on demand.  The
    result is divided by its integer content and sign-fixed so the largest
    monomial has a positive coefficient.
    """
    sites = set(pattern.sites)
    rate = Polynomial.variable(RATE)
    own = _vacancy(sites, registry)
    total = Polynomial.zero()
    for site in sites:
        for neighbour in (site - 1, site + 1):
            if neighbour not in sites:
                total = total + rate * (_vacancy(sites | {neighbour}, registry) - own)
    for site in sites:
        total = total + (_vacancy(sites - {site}, registry) - own)
    _, normalized = total.primitive(registry.lex_order())
    return normalized


#: identity patterns per classical approximation order.
_SYSTEM_PATTERNS = {
    1: ("o",),
    2: ("o", "oo"),
    3: ("o", "oo", "ooo", "oxo"),
}


def identities_for(
    patterns: Iterable[ConfigurationPattern | str], registry: VariableRegistry
) -> list[Polynomial]:
    """Identities for an explicit pattern list (the hook for higher orders)."""
    out = []
    for p in patterns:
        if isinstance(p, str):
            p = ConfigurationPattern.from_string(p)
        out.append(correlation_identity(p, registry))
    return out


def identity_system(m: int, registry: VariableRegistry) -> list[Polynomial]:
    """The identity lists feeding the classical order-m systems, m in 1..3."""
    if m not in _SYSTEM_PATTERNS:
        raise ValueError(
            f"no built-in identity schedule for order {m}; pass an explicit "
            "pattern list to identities_for instead"
        )
    return identities_for(_SYSTEM_PATTERNS[m], registry)
