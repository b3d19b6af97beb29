from itertools import combinations

import pytest

from contactgb.identities import (
    ConfigurationPattern,
    EmptyPatternError,
    VariableRegistry,
    canonicalize,
    correlation_identity,
    identities_for,
    identity_system,
)
from contactgb.polyring import RATE, parse


def all_patterns_with_span_at_most(n):
    """Every canonical pattern whose string is at most n characters."""
    seen = set()
    for span in range(1, n + 1):
        interior = range(1, span - 1)
        for k in range(len(interior) + 1):
            for middle in combinations(interior, k):
                sites = {0, span - 1} | set(middle)
                seen.add(canonicalize(sites))
    return sorted(seen, key=lambda p: (p.span, p.size, p.string))


# ---------------------------------------------------------------------------
# canonical form


def test_canonicalize_translates():
    assert canonicalize({5, 7}).string == "oxo"


def test_canonicalize_single_site():
    assert canonicalize({0}).string == "o"


def test_canonicalize_reflects():
    assert canonicalize({0, 2, 3}).string == "ooxo"


def test_canonicalize_empty_set_raises():
    with pytest.raises(EmptyPatternError):
        canonicalize(set())


def test_canonicalize_idempotent_and_reflection_invariant():
    for pattern in all_patterns_with_span_at_most(6):
        again = canonicalize(pattern.sites)
        assert again == pattern
        reflected = {pattern.sites[-1] - s for s in pattern.sites}
        assert canonicalize(reflected) == pattern


def test_pattern_string_never_ragged():
    for pattern in all_patterns_with_span_at_most(6):
        assert pattern.string[0] == "o" and pattern.string[-1] == "o"


def test_from_string_rejects_garbage():
    for bad in ("", "q", "xo", "ox", "oxx"):
        with pytest.raises(ValueError):
            ConfigurationPattern.from_string(bad)


# ---------------------------------------------------------------------------
# registry


def test_registry_preloads_classical_variables(registry):
    expected = {"o": 1, "oo": 2, "oxo": 3, "ooo": 4, "ooxo": 5, "oooo": 6}
    for text, vid in expected.items():
        assert registry.id_of(ConfigurationPattern.from_string(text)) == vid


def test_registry_idempotent(registry):
    p = ConfigurationPattern.from_string("ooxxo")
    first = registry.register(p)
    assert registry.register(p) == first


def test_registry_precedence_matches_classical_order(registry):
    keys = [registry.precedence_key(v) for v in range(7)]
    assert keys == sorted(keys)


def test_lex_order_survives_new_registrations(registry):
    order = registry.lex_order()
    from contactgb.polyring import Monomial

    a = Monomial([(1, 1)])
    vid = registry.register(ConfigurationPattern.from_string("oxxo"))
    b = Monomial([(vid, 1)])
    # span-4 pattern outranks the single site
    assert order.compare(b, a) > 0


# ---------------------------------------------------------------------------
# identities


CLASSICAL_IDENTITIES = {
    "o": "2*l*y - (2*l+1)*x + 1",
    "oo": "l*z - (l+1)*y + x",
    "ooo": "2*l*s + w - (2*l+3)*z + 2*y",
    "oxo": "l*u - (2*l+1)*w + l*z + x",
}


@pytest.mark.parametrize("pattern,expected", CLASSICAL_IDENTITIES.items())
def test_classical_identity_fixtures(registry, pattern, expected):
    generated = correlation_identity(ConfigurationPattern.from_string(pattern), registry)
    assert generated == parse(expected)


def test_identity_system_orders(registry):
    assert identity_system(1, registry) == [parse(CLASSICAL_IDENTITIES["o"])]
    assert identity_system(2, registry) == [
        parse(CLASSICAL_IDENTITIES["o"]),
        parse(CLASSICAL_IDENTITIES["oo"]),
    ]
    assert identity_system(3, registry) == [parse(CLASSICAL_IDENTITIES[p]) for p in ("o", "oo", "ooo", "oxo")]


def test_identity_system_rejects_unscheduled_order(registry):
    with pytest.raises(ValueError):
        identity_system(4, registry)


def test_identities_for_accepts_strings_and_patterns(registry):
    a = identities_for(["o"], registry)
    b = identities_for([ConfigurationPattern.from_string("o")], registry)
    assert a == b


def test_all_ones_annihilates_every_identity(registry):
    for pattern in all_patterns_with_span_at_most(6):
        poly = correlation_identity(pattern, registry)
        ones = {v: 1 for v in poly.variables() if v != RATE}
        assert not poly.substitute(ones)


def test_identity_degree_bounds(registry):
    for pattern in all_patterns_with_span_at_most(6):
        poly = correlation_identity(pattern, registry)
        assert poly.degree(RATE) <= 1
        for m in poly.terms:
            config_degree = sum(e for v, e in m.exps if v != RATE)
            assert config_degree <= 1
        assert poly.degree() <= 2
