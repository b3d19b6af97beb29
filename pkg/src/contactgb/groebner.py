"""Buchberger's algorithm and reduced Groebner bases.

Plain Buchberger with the normal pair-selection strategy (smallest lcm
first) and the coprime-leading-monomial skip; the target systems are tiny,
so no Gebauer-Moeller bookkeeping or F4-style batching is needed.  A term
budget guards against runaway user-supplied systems.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator

from .polyring import LexOrder, Monomial, Polynomial, reduce

log = logging.getLogger(__name__)


class EmptyIdealError(ValueError):
    """Every supplied generator was zero."""


class BasisSizeExceededError(RuntimeError):
    """The intermediate basis blew past the term budget."""


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced basis: auto-reduced, normalized, sorted by leading monomial."""

    elements: tuple[Polynomial, ...]
    order: LexOrder
    source: str = ""

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> Polynomial:
        return self.elements[i]


def s_polynomial(f: Polynomial, g: Polynomial, order: LexOrder) -> Polynomial:
    """The minimal combination of f and g cancelling both leading terms."""
    fm, fc = f.leading_term(order)
    gm, gc = g.leading_term(order)
    L = fm.lcm(gm)
    return f * Polynomial({L / fm: 1 / fc}) - g * Polynomial({L / gm: 1 / gc})


def normalize_basis(polys: Iterable[Polynomial], order: LexOrder) -> list[Polynomial]:
    """Turn a Groebner basis into its unique reduced, normalized form.

    Drops elements whose leading monomial is divisible by another's, tail
    reduces each survivor against the rest to a fixed point, scales to
    integer coefficients with content 1 and positive leading coefficient,
    and sorts by ascending leading monomial.
    """
    elems = [p.primitive(order)[1] for p in polys if p]
    elems.sort(key=lambda p: order.key(p.leading_monomial(order)))
    minimal: list[Polynomial] = []
    for p in elems:
        lm = p.leading_monomial(order)
        if not any(q.leading_monomial(order).divides(lm) for q in minimal):
            minimal.append(p)
    changed = True
    while changed and len(minimal) > 1:
        changed = False
        for i, p in enumerate(minimal):
            others = minimal[:i] + minimal[i + 1 :]
            _, r = reduce(p, others, order)
            # minimality protects the leading monomial, so r is never zero
            r = r.primitive(order)[1]
            if r != p:
                minimal[i] = r
                changed = True
    minimal.sort(key=lambda p: order.key(p.leading_monomial(order)))
    return minimal


def buchberger(
    generators: Iterable[Polynomial],
    order: LexOrder,
    source: str = "",
    max_total_terms: int = 10_000,
    trace: bool = False,
) -> GroebnerBasis:
    """Compute the reduced Groebner basis of the ideal the generators span."""
    gens = [g for g in generators if g]
    if not gens:
        raise EmptyIdealError("all generators are zero")

    basis: list[Polynomial] = []
    leads: list[Monomial] = []
    pairs: list[tuple[tuple, int, int]] = []

    def admit(p: Polynomial):
        _, prim = p.primitive(order)
        basis.append(prim)
        leads.append(prim.leading_monomial(order))
        j = len(basis) - 1
        for i in range(j):
            heapq.heappush(pairs, (order.key(leads[i].lcm(leads[j])), i, j))

    for g in gens:
        admit(g)

    while pairs:
        _, i, j = heapq.heappop(pairs)
        lcm = leads[i].lcm(leads[j])
        if lcm == leads[i] * leads[j]:
            # coprime leading monomials: the S-polynomial reduces to zero
            if trace:
                log.debug("pair (%d, %d): skipped, coprime leads", i, j)
            continue
        s = s_polynomial(basis[i], basis[j], order)
        _, remainder = reduce(s, basis, order)
        if trace:
            log.debug(
                "pair (%d, %d): S-polynomial %s to zero",
                i, j, "did not reduce" if remainder else "reduced",
            )
        if remainder:
            admit(remainder)
            total = sum(len(g.terms) for g in basis)
            if total > max_total_terms:
                raise BasisSizeExceededError(
                    f"intermediate basis holds {total} terms (> {max_total_terms}); "
                    "the system is likely too large for this plain Buchberger loop"
                )
    return GroebnerBasis(tuple(normalize_basis(basis, order)), order, source)


def is_member(f: Polynomial, basis: GroebnerBasis) -> bool:
    """Ideal membership: does f reduce to zero modulo the basis?"""
    if not f:
        return True
    _, r = reduce(f, list(basis.elements), basis.order)
    return not r
