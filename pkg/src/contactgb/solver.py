"""From a reduced basis to the density curve and critical-value bound.

The lexicographic order ranks the rate and the single-site variable lowest,
so the reduced basis of each approximation system contains one element in
those two variables alone: the elimination polynomial.  Stripping its
trivial root (the single-site variable equal to 1, i.e. certain extinction)
leaves the branch polynomial; its root in [0, 1] at a fixed rate is the
approximate extinction probability, and the rate where that branch crosses
1 is the order's critical-value bound.

Real roots of univariate rational polynomials are isolated with exact
Sturm sequences and refined by bisection on Fractions, so every reported
digit is certified rather than floating-point folklore.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .closures import build_ideal, normalize_order_label
from .groebner import GroebnerBasis, buchberger
from .identities import VariableRegistry
from .polyring import (
    LexOrder,
    Monomial,
    NotDivisibleError,
    Polynomial,
    RATE,
    exact_divide,
)

#: variable id of the single-site vacancy probability.
SITE = 1

#: refinement target for root values (isolating interval width).
ROOT_TOL = Fraction(1, 10**13)


class SolverError(RuntimeError):
    pass


class NoEliminationElementError(SolverError):
    """No basis element lives in the (rate, single-site) subring."""


class MultipleEliminationElementsError(SolverError):
    def __init__(self, elements):
        super().__init__(f"{len(elements)} basis elements involve only the rate and single-site variables")
        self.elements = list(elements)


class DegenerateSystemError(SolverError):
    """Only the trivial all-vacant solution survives the closure."""

    def __init__(self, message, basis=None, elim=None):
        super().__init__(message)
        self.basis = basis
        self.elim = elim


class NoPhysicalRootError(SolverError):
    """No root in [0, 1]: the subcritical regime."""


class AmbiguousRootError(SolverError):
    def __init__(self, roots):
        super().__init__(f"{len(roots)} roots in [0, 1]: {roots}; refusing to pick one")
        self.roots = list(roots)


# ---------------------------------------------------------------------------
# univariate real-root machinery (dense ascending Fraction coefficients)


def _strip(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _eval(coeffs: list[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _derivative(coeffs: list[Fraction]) -> list[Fraction]:
    return [c * k for k, c in enumerate(coeffs)][1:]


def _divmod_poly(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    num = num[:]
    q = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(num) - len(den), -1, -1):
        factor = num[k + len(den) - 1] / lead
        q[k] = factor
        for i, d in enumerate(den):
            num[k + i] -= factor * d
    return _strip(q), _strip(num)


def _gcd_poly(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = a[:], b[:]
    while b:
        a, b = b, _divmod_poly(a, b)[1]
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _squarefree(coeffs: list[Fraction]) -> list[Fraction]:
    if len(coeffs) <= 2:
        return coeffs[:]
    g = _gcd_poly(coeffs, _derivative(coeffs))
    if len(g) <= 1:
        return coeffs[:]
    return _divmod_poly(coeffs, g)[0]


def _sturm_chain(coeffs: list[Fraction]) -> list[list[Fraction]]:
    chain = [coeffs[:], _derivative(coeffs)]
    while chain[-1]:
        rem = _divmod_poly(chain[-2], chain[-1])[1]
        chain.append([-c for c in rem])
    chain.pop()
    return chain


def _variations(chain: list[list[Fraction]], t: Fraction) -> int:
    signs = []
    for p in chain:
        v = _eval(p, t)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _deflate(coeffs: list[Fraction], root: Fraction) -> list[Fraction]:
    out = []
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * root + c
        out.append(acc)
    out.reverse()
    assert out[0] == 0, "synthetic division by a non-root"
    return out[1:]


def _cauchy_bound(coeffs: list[Fraction]) -> Fraction:
    lead = abs(coeffs[-1])
    return 1 + max(abs(c) / lead for c in coeffs[:-1]) if len(coeffs) > 1 else Fraction(1)


def _isolate(
    coeffs: list[Fraction], lo: Fraction, hi: Fraction
) -> list[tuple[Fraction, Fraction, list[Fraction] | None]]:
    """Disjoint brackets for the distinct real roots in [lo, hi].

    Yields triples (a, b, g): a == b marks an exact rational root (g is
    None); otherwise (a, b) is open, g is square-free, has exactly one
    root there, and changes sign between the endpoints.  Exact roots found
    along the way (endpoints, bisection midpoints) are deflated from g, so
    the brackets stay valid even when rational roots sit on their edges.
    """
    f = _strip(_squarefree(list(coeffs)))
    if len(f) <= 1:
        return []
    exact: list[Fraction] = []
    intervals: list[tuple[Fraction, Fraction]] = []
    while True:
        for point in (lo, hi):
            while len(f) > 1 and _eval(f, point) == 0:
                exact.append(point)
                f = _deflate(f, point)
        if len(f) <= 1:
            intervals = []
            break
        chain = _sturm_chain(f)
        intervals = []
        stack = [(lo, hi)]
        restarted = False
        while stack:
            a, b = stack.pop()
            count = _variations(chain, a) - _variations(chain, b)
            if count == 0:
                continue
            if count == 1:
                intervals.append((a, b))
                continue
            mid = (a + b) / 2
            if _eval(f, mid) == 0:
                exact.append(mid)
                f = _deflate(f, mid)
                restarted = True
                break
            stack.append((a, mid))
            stack.append((mid, b))
        if not restarted:
            break
    out: list[tuple[Fraction, Fraction, list[Fraction] | None]] = [
        (a, b, f) for a, b in intervals
    ]
    out.extend((r, r, None) for r in exact)
    out.sort(key=lambda t: (t[0], t[1]))
    return out


def isolate_roots(
    coeffs: list[Fraction], lo: Fraction, hi: Fraction
) -> list[tuple[Fraction, Fraction]]:
    """Brackets only (see _isolate); (a, a) marks an exact rational root."""
    return [(a, b) for a, b, _ in _isolate(coeffs, lo, hi)]


def _bisect(
    f: list[Fraction], a: Fraction, b: Fraction, tol: Fraction
) -> Fraction:
    sign_a = _eval(f, a) > 0
    while b - a > tol:
        mid = (a + b) / 2
        v = _eval(f, mid)
        if v == 0:
            return mid
        if (v > 0) == sign_a:
            a = mid
        else:
            b = mid
    return (a + b) / 2


def refine_root(
    coeffs: list[Fraction], a: Fraction, b: Fraction, tol: Fraction = ROOT_TOL
) -> Fraction:
    """Locate the single interior root of a bracket to within tol.

    Exact roots of the square-free part sitting on the bracket endpoints
    are deflated first, so they cannot shadow the interior root.
    """
    if a == b:
        return a
    f = _strip(_squarefree(list(coeffs)))
    for point in (a, b):
        while len(f) > 1 and _eval(f, point) == 0:
            f = _deflate(f, point)
    if len(f) <= 1 or (_eval(f, a) > 0) == (_eval(f, b) > 0):
        raise ValueError("bracket does not isolate a sign change")
    return _bisect(f, a, b, tol)


def real_roots_in(
    coeffs: list[Fraction], lo: Fraction, hi: Fraction, tol: Fraction = ROOT_TOL
) -> list[Fraction]:
    """Distinct real roots in [lo, hi], each located to within tol."""
    roots = []
    for a, b, g in _isolate(coeffs, lo, hi):
        roots.append(a if g is None else _bisect(g, a, b, tol))
    return roots


# ---------------------------------------------------------------------------
# branch extraction


def elimination_polynomial(basis: GroebnerBasis) -> Polynomial:
    """The unique basis element in the rate and single-site variables only."""
    found = [p for p in basis if p.variables() <= {RATE, SITE}]
    if not found:
        raise NoEliminationElementError(
            "the closure system does not determine the single-site variable"
        )
    if len(found) > 1:
        raise MultipleEliminationElementsError(found)
    return found[0]


def strip_trivial(elim: Polynomial) -> Polynomial:
    """Divide out the certain-extinction root, normalized.

    Raises DegenerateSystemError when nothing but the trivial solution
    remains (quotient constant, or free of the single-site variable) and
    NotDivisibleError when the expected trivial factor is missing, which
    signals broken identity generation.
    """
    trivial = Polynomial.variable(SITE) - 1
    quotient = exact_divide(elim, trivial)
    if quotient.degree(SITE) <= 0:
        raise DegenerateSystemError(
            "only the trivial all-vacant solution exists", elim=elim
        )
    _, normalized = quotient.primitive(_pair_order())
    return normalized


def _pair_order():
    return LexOrder.from_sequence([RATE, SITE])


def _coeffs_in_site(p: Polynomial, rate_value: Fraction) -> list[Fraction]:
    coeffs = [Fraction(0)] * (p.degree(SITE) + 1)
    for m, c in p.terms.items():
        extra = m.variables() - {RATE, SITE}
        if extra:
            raise ValueError(f"polynomial involves variables {extra} beyond the rate and site")
        coeffs[m.exponent(SITE)] += c * rate_value ** m.exponent(RATE)
    return _strip(coeffs)


def branch_value(nontrivial: Polynomial, rate, boundary_tol: float = 1e-9) -> float:
    """The root of the branch polynomial in [0, 1] at a fixed rate.

    A root found just above 1 (within ``boundary_tol``) is reported as 1.0:
    it is the trivial crossing seen through the float rounding of a rate at
    the critical bound.  For quadratic branches the isolated root is
    cross-checked against the closed-form quadratic solution.
    """
    rate_value = Fraction(rate)
    coeffs = _coeffs_in_site(nontrivial, rate_value)
    if not coeffs:
        raise SolverError(f"branch polynomial vanishes identically at rate {rate}")
    if len(coeffs) == 1:
        raise NoPhysicalRootError(f"no root in [0, 1] at rate {rate}")
    roots = real_roots_in(coeffs, Fraction(0), Fraction(1))
    if len(roots) > 1:
        raise AmbiguousRootError([float(r) for r in roots])
    if not roots:
        grace = real_roots_in(coeffs, Fraction(1), Fraction(1) + Fraction(boundary_tol))
        if grace:
            return 1.0
        raise NoPhysicalRootError(f"no root in [0, 1] at rate {rate}")
    root = float(roots[0])
    if len(coeffs) == 3:
        a, b, c = float(coeffs[2]), float(coeffs[1]), float(coeffs[0])
        disc = b * b - 4 * a * c
        if disc < 0:
            raise SolverError("isolated a real root but the float discriminant is negative")
        closed = min(
            ((-b + s * math.sqrt(disc)) / (2 * a) for s in (1.0, -1.0)),
            key=lambda r: abs(r - root),
        )
        if abs(closed - root) > 1e-8 * max(1.0, abs(root)):
            raise SolverError(
                f"quadratic cross-check failed: bisection {root} vs formula {closed}"
            )
    return root


def critical_bound(nontrivial: Polynomial) -> Fraction | float:
    """Largest rate at which the branch meets the trivial solution.

    Substitutes 1 for the single-site variable and returns the largest real
    root of the resulting rate polynomial: exact for a linear polynomial,
    refined to 1e-12 otherwise.
    """
    q = nontrivial.substitute({SITE: 1})
    if not q:
        raise DegenerateSystemError("branch polynomial vanishes at the trivial solution")
    coeffs = q.univariate(RATE)
    if len(coeffs) == 1:
        raise NoPhysicalRootError("branch never meets the trivial solution")
    if len(coeffs) == 2:
        return -coeffs[0] / coeffs[1]
    bound = _cauchy_bound(coeffs)
    roots = real_roots_in(coeffs, -bound, bound)
    if not roots:
        raise NoPhysicalRootError("branch never meets the trivial solution")
    top = roots[-1]
    return top if top.denominator == 1 else float(top)


def _site_coefficient_polys(nontrivial: Polynomial) -> list[Polynomial]:
    """Coefficients of the branch polynomial as rate polynomials, ascending."""
    out = [Polynomial.zero() for _ in range(nontrivial.degree(SITE) + 1)]
    for m, c in nontrivial.terms.items():
        rate_part = Monomial([(RATE, m.exponent(RATE))]) if m.exponent(RATE) else Monomial()
        out[m.exponent(SITE)] = out[m.exponent(SITE)] + Polynomial({rate_part: c})
    return out


def branch_discriminant(nontrivial: Polynomial) -> Polynomial:
    """Discriminant of a quadratic branch, as a rate polynomial.

    Uses the reduced form (b/2)^2 - ac when the middle coefficient is even,
    so the square root in the closed-form branch carries no spurious factor.
    """
    c, b, a = _site_coefficient_polys(nontrivial)
    if all(v.denominator == 1 and v.numerator % 2 == 0 for v in b.terms.values()):
        half = b * Fraction(1, 2)
        return half * half - a * c
    return b * b - 4 * a * c


@dataclass
class ApproximationResult:
    """Everything the pipeline extracts for one approximation order."""

    order_label: str
    basis: GroebnerBasis
    elim: Polynomial
    nontrivial: Polynomial
    lambda_c: Fraction | float
    discriminant: Polynomial | None

    def branch_value(self, rate) -> float:
        return branch_value(self.nontrivial, rate)

    def density(self, rate) -> float:
        return density(self, rate)


def density(result: ApproximationResult, rate) -> float:
    """Approximate particle density: 1 - branch value, 0 below the bound."""
    if rate < 0:
        raise ValueError("the infection rate is nonnegative")
    if rate < float(result.lambda_c):
        return 0.0
    try:
        return max(0.0, 1.0 - branch_value(result.nontrivial, rate))
    except NoPhysicalRootError:
        return 0.0


def approximate(order, registry: VariableRegistry | None = None) -> ApproximationResult:
    """Run the full pipeline for a classical order: 1, 2, 2prime or 3."""
    label = normalize_order_label(order)
    reg = registry if registry is not None else VariableRegistry()
    gens = build_ideal(label, reg)
    gb = buchberger(gens, reg.lex_order(), source=f"order-{label} system")
    elim = elimination_polynomial(gb)
    try:
        nontrivial = strip_trivial(elim)
    except DegenerateSystemError as err:
        err.basis = gb
        err.elim = elim
        raise
    lam_c = critical_bound(nontrivial)
    disc = branch_discriminant(nontrivial) if nontrivial.degree(SITE) == 2 else None
    return ApproximationResult(label, gb, elim, nontrivial, lam_c, disc)
