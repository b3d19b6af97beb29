"""Closure schemes: the approximations that make the identity hierarchy finite.

A closure relation equates two products of pattern vacancy probabilities,
e.g. the pair approximation ``v(o) * v(ooo) = v(oo)^2``.  Relations are
stored as pattern-string pairs and only turned into polynomials against a
registry, so the same scheme text works for any variable assignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .identities import ConfigurationPattern, VariableRegistry, identities_for, identity_system
from .polyring import Polynomial

#: a relation LHS-product = RHS-product, each side a tuple of pattern strings.
Relation = tuple[tuple[str, ...], tuple[str, ...]]


@dataclass(frozen=True)
class ClosureScheme:
    name: str
    relations: tuple[Relation, ...]


MEAN_FIELD_1 = ClosureScheme("mean_field_1", ((("oo",), ("o", "o")),))
PAIR_2 = ClosureScheme("pair_2", ((("o", "ooo"), ("oo", "oo")),))
NAIVE_2PRIME = ClosureScheme(
    "naive_2prime",
    (
        (("oo",), ("o", "o")),
        (("ooo",), ("o", "o", "o")),
    ),
)
THIRD_3 = ClosureScheme(
    "third_3",
    (
        (("oo", "oooo"), ("ooo", "ooo")),
        (("o", "ooxo"), ("oo", "oxo")),
    ),
)


def custom_scheme(relations: Iterable[Relation | str]) -> ClosureScheme:
    """Build a custom scheme; string relations look like ``o*ooxo=oo*oxo``."""
    parsed: list[Relation] = []
    for rel in relations:
        if isinstance(rel, str):
            try:
                lhs, rhs = rel.split("=")
            except ValueError:
                raise ValueError(f"relation {rel!r} must contain exactly one '='") from None
            parsed.append(
                (tuple(p.strip() for p in lhs.split("*")), tuple(p.strip() for p in rhs.split("*")))
            )
        else:
            parsed.append((tuple(rel[0]), tuple(rel[1])))
    return ClosureScheme("custom", tuple(parsed))


def _side_product(side: Sequence[str], registry: VariableRegistry) -> Polynomial:
    out = Polynomial.constant(1)
    for text in side:
        pattern = ConfigurationPattern.from_string(text)
        out = out * Polynomial.variable(registry.register(pattern))
    return out


def closure_polynomials(scheme: ClosureScheme, registry: VariableRegistry) -> list[Polynomial]:
    """LHS - RHS per relation, content-normalized; identities give 0."""
    polys = []
    for lhs, rhs in scheme.relations:
        p = _side_product(lhs, registry) - _side_product(rhs, registry)
        if p:
            _, p = p.primitive(registry.lex_order())
        polys.append(p)
    return polys


_ORDER_ALIASES = {
    "1": "1", 1: "1",
    "2": "2", 2: "2",
    "3": "3", 3: "3",
    "2prime": "2prime", "2'": "2prime", "2p": "2prime",
}

_SCHEME_BY_ORDER = {
    "1": MEAN_FIELD_1,
    "2": PAIR_2,
    "2prime": NAIVE_2PRIME,
    "3": THIRD_3,
}

_IDENTITY_ORDER = {"1": 1, "2": 2, "2prime": 2, "3": 3}


def normalize_order_label(order) -> str:
    try:
        return _ORDER_ALIASES[order]
    except KeyError:
        raise ValueError(f"unknown approximation order {order!r}; expected 1, 2, 2prime or 3") from None


def scheme_for_order(order) -> ClosureScheme:
    return _SCHEME_BY_ORDER[normalize_order_label(order)]


def build_ideal(order, registry: VariableRegistry) -> list[Polynomial]:
    """Generators for a classical system: identities first, closures after."""
    label = normalize_order_label(order)
    gens = identity_system(_IDENTITY_ORDER[label], registry)
    gens.extend(closure_polynomials(_SCHEME_BY_ORDER[label], registry))
    return gens


def build_custom_ideal(
    patterns: Iterable[ConfigurationPattern | str],
    scheme: ClosureScheme,
    registry: VariableRegistry,
) -> list[Polynomial]:
    """Generators for a user-specified identity/closure combination."""
    gens = identities_for(patterns, registry)
    gens.extend(closure_polynomials(scheme, registry))
    return gens
