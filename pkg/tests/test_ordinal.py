"""Ordinal arithmetic checked against a flat tuple oracle.

The oracle encodes ordinals below w^4 as coefficient 4-tuples
(a, b, c, d) standing for w^3*a + w^2*b + w*c + d.  Comparison is
lexicographic and addition follows the textbook left-absorption rule,
all written without touching the CNF term lists under test.
"""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from jaffard.ordinal import (
    OMEGA,
    ONE,
    ZERO,
    NotDivisible,
    Ordinal,
    OrdinalDepthError,
    PointKind,
    compare,
    omega_quotient,
    omega_times,
    parse_ordinal,
)

# -- oracle -----------------------------------------------------------

Quad = tuple[int, int, int, int]


def quad_add(x: Quad, y: Quad) -> Quad:
    """x + y below w^4: y's leading term erases x's lower terms."""
    lead = next((k for k in range(4) if y[k] > 0), None)
    if lead is None:
        return x
    out = list(x[:lead]) + [x[lead] + y[lead]] + list(y[lead + 1 :])
    return tuple(out)


def quad_classify(x: Quad) -> PointKind:
    if x == (0, 0, 0, 0):
        return PointKind.ZERO
    if x[3] > 0:
        return PointKind.SUCCESSOR
    return PointKind.LIMIT


def quad_omega_times(x: Quad) -> Quad | None:
    """w * x shifts every coefficient one slot up, None on overflow."""
    if x[0] > 0:
        return None
    return (x[1], x[2], x[3], 0)


def to_ordinal(x: Quad) -> Ordinal:
    total = ZERO
    for slot, coeff in enumerate(x):
        if coeff:
            total = total + Ordinal.omega_power(3 - slot, coeff)
    return total


quads = st.tuples(
    st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 9)
)


# -- normal form ------------------------------------------------------


def test_terms_strictly_decreasing_rejected():
    with pytest.raises(ValueError):
        Ordinal(((ONE, 1), (ONE, 2)))
    with pytest.raises(ValueError):
        Ordinal(((ONE, 1), (Ordinal.from_int(2), 1)))


def test_zero_coefficient_rejected():
    with pytest.raises(ValueError):
        Ordinal(((ONE, 0),))


def test_depth_cap():
    tower = Ordinal.omega_power(Ordinal.omega_power(ONE))
    assert tower.depth() == 3
    with pytest.raises(OrdinalDepthError):
        Ordinal.omega_power(tower)


# -- comparison -------------------------------------------------------


def test_compare_pinned():
    assert compare(OMEGA, OMEGA) == 0
    assert compare(omega_times(Ordinal.from_int(2)) + ONE, Ordinal.omega_power(2)) < 0
    assert (
        compare(
            Ordinal.omega_power(2, 3),
            Ordinal.omega_power(2, 2) + Ordinal.omega_power(1, 9),
        )
        > 0
    )


@given(quads, quads)
def test_compare_matches_lex_order(x, y):
    got = compare(to_ordinal(x), to_ordinal(y))
    want = (x > y) - (x < y)
    assert got == want


@given(quads, quads, quads)
def test_order_is_transitive(x, y, z):
    a, b, c = to_ordinal(x), to_ordinal(y), to_ordinal(z)
    if a < b and b < c:
        assert a < c


# -- addition ---------------------------------------------------------


def test_add_pinned():
    assert ONE + OMEGA == OMEGA
    assert str(OMEGA + ONE) == "w + 1"
    lhs = Ordinal.omega_power(2) + OMEGA
    rhs = Ordinal.omega_power(1, 4)
    assert lhs + rhs == Ordinal.omega_power(2) + Ordinal.omega_power(1, 5)
    assert str(lhs + rhs) == "w^2 + w*5"


@given(quads, quads)
def test_add_matches_oracle(x, y):
    assert to_ordinal(x) + to_ordinal(y) == to_ordinal(quad_add(x, y))


@given(quads, quads, quads)
def test_add_associative(x, y, z):
    a, b, c = to_ordinal(x), to_ordinal(y), to_ordinal(z)
    assert (a + b) + c == a + (b + c)


@given(quads)
def test_successor_predecessor_roundtrip(x):
    a = to_ordinal(x)
    assert a.successor().predecessor() == a


def test_predecessor_rejects_limits():
    with pytest.raises(ValueError):
        OMEGA.predecessor()
    with pytest.raises(ValueError):
        ZERO.predecessor()


# -- classification ---------------------------------------------------


def test_classify_pinned():
    assert ZERO.classify() is PointKind.ZERO
    assert (Ordinal.omega_power(2) + Ordinal.from_int(3)).classify() is (
        PointKind.SUCCESSOR
    )
    assert (Ordinal.omega_power(3, 2) + OMEGA).classify() is PointKind.LIMIT


@given(quads)
def test_classify_matches_oracle(x):
    assert to_ordinal(x).classify() is quad_classify(x)


# -- division by omega ------------------------------------------------


def test_omega_quotient_pinned():
    assert omega_quotient(OMEGA) == ONE
    got = omega_quotient(Ordinal.omega_power(2, 3) + Ordinal.omega_power(1, 2))
    assert got == Ordinal.omega_power(1, 3) + Ordinal.from_int(2)
    with pytest.raises(NotDivisible):
        omega_quotient(OMEGA + ONE)


@given(quads)
def test_omega_times_then_quotient(x):
    shifted = quad_omega_times(x)
    if shifted is None:
        return
    a = to_ordinal(x)
    assert omega_quotient(omega_times(a)) == a
    assert omega_times(a) == to_ordinal(shifted)


@given(quads)
def test_quotient_times_recovers_limits(x):
    a = to_ordinal(x)
    if a.classify() is PointKind.SUCCESSOR:
        return
    assert omega_times(omega_quotient(a)) == a


# -- text format ------------------------------------------------------


def test_parse_pinned():
    a = parse_ordinal("w^2*3 + w*2 + 5")
    assert a == (
        Ordinal.omega_power(2, 3) + Ordinal.omega_power(1, 2) + Ordinal.from_int(5)
    )
    assert parse_ordinal("0") == ZERO
    assert parse_ordinal("w^(w*2)") == Ordinal.omega_power(omega_times(Ordinal.from_int(2)))


def test_parse_rejects_garbage():
    for bad in ["", "w^", "3w", "w**2", "+w", "w^-1"]:
        with pytest.raises(ValueError):
            parse_ordinal(bad)


@given(quads)
def test_str_parse_roundtrip(x):
    a = to_ordinal(x)
    assert parse_ordinal(str(a)) == a


@given(quads)
def test_least_exponent_is_last_term(x):
    a = to_ordinal(x)
    if a.is_zero():
        return
    slots = [3 - k for k in range(4) if x[k] > 0]
    assert a.least_exponent() == Ordinal.from_int(min(slots))
