"""Domain models checked against element-profile sampling.

A valuation vector denotes the set of field elements whose valuation
profile clears every component bound.  The oracle here works on that
set directly: module operations are recomputed as exists-a-split
searches over a profile window wide enough to separate any pair of
bounds appearing in the tests, then compared with the componentwise
arithmetic under test.
"""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from jaffard.domain import (
    BOT,
    TOP,
    IdealSketch,
    Overring,
    SemilocalPrufer,
    SequenceDomain,
    ValuationVector,
    extend_to_overring,
    ideal_survives,
    module_intersect,
    module_mult,
    sigma_Sigma,
)
from jaffard.ordinal import OMEGA, ONE, Ordinal, parse_ordinal
from jaffard.space import (
    ALL,
    Discrete,
    LevelMinusFinite,
    OrdinalInterval,
    PresentedSpace,
    SetDescriptor,
)

N = 2
MODEL = SemilocalPrufer(N)

PROFILE_GRID = [-4, -2, 0, 1, 4]
SPLIT_GRID = range(-6, 7)

components = st.sampled_from([BOT, -2, -1, 0, 1, 2, TOP])
modules = st.tuples(*([components] * N)).map(lambda c: ValuationVector.of(MODEL, c))
profiles = st.tuples(*([st.sampled_from(PROFILE_GRID)] * N))


def admitted(m: ValuationVector) -> set[tuple[int, ...]]:
    return {
        v
        for v in itertools.product(PROFILE_GRID, repeat=N)
        if m.admits_element(v)
    }


# -- vector normalization ----------------------------------------------


def test_top_component_zeroes_the_module():
    m = ValuationVector.of(MODEL, (0, TOP))
    assert m.components == (TOP, TOP)
    assert not m.admits_element((5, 5))


def test_component_count_enforced():
    with pytest.raises(ValueError):
        ValuationVector.of(MODEL, (0,))
    with pytest.raises(ValueError):
        ValuationVector.of(MODEL, (0, "x"))


def test_cross_model_operations_rejected():
    other = SemilocalPrufer(N)
    assert other == MODEL
    bigger = SemilocalPrufer(N + 1)
    with pytest.raises(ValueError):
        ValuationVector.of(MODEL, (0, 0)).intersect(
            ValuationVector.of(bigger, (0, 0, 0))
        )


# -- intersection --------------------------------------------------------


def test_intersect_pinned():
    a = ValuationVector.of(MODEL, (1, BOT))
    b = ValuationVector.of(MODEL, (BOT, 1))
    assert a.intersect(b) == ValuationVector.of(MODEL, (1, 1))


@given(modules, modules)
@settings(max_examples=60, deadline=None)
def test_intersect_is_set_intersection(a, b):
    assert admitted(module_intersect(a, b)) == admitted(a) & admitted(b)


# -- products --------------------------------------------------------------


def split_admits(a: ValuationVector, b: ValuationVector, v) -> bool:
    """Whether v = x + y is realizable with x admitted by a, y by b."""
    return any(
        a.admits_element(x) and b.admits_element(tuple(vi - xi for vi, xi in zip(v, x)))
        for x in itertools.product(SPLIT_GRID, repeat=N)
    )


@given(modules, modules)
@settings(max_examples=40, deadline=None)
def test_mult_matches_split_search(a, b):
    prod = module_mult(a, b)
    for v in itertools.product(PROFILE_GRID, repeat=N):
        assert prod.admits_element(v) == split_admits(a, b, v), v


@given(modules, st.frozensets(st.integers(1, N)))
@settings(max_examples=40, deadline=None)
def test_extend_matches_split_search(a, support):
    t = Overring(MODEL, support)
    ext = extend_to_overring(a, t)
    for v in itertools.product(PROFILE_GRID, repeat=N):
        definitional = any(
            a.admits_element(tuple(vi - yi for vi, yi in zip(v, y)))
            for y in itertools.product(SPLIT_GRID, repeat=N)
            if all(y[i - 1] >= 0 for i in support)
        )
        assert ext.admits_element(v) == definitional, v


# -- containment --------------------------------------------------------


@given(modules, modules)
@settings(max_examples=60, deadline=None)
def test_submodule_matches_admitted_sets(a, b):
    assert a.is_submodule_of(b) == (admitted(a) <= admitted(b))


@given(modules, modules)
@settings(max_examples=60, deadline=None)
def test_mutual_containment_is_equality(a, b):
    if a.is_submodule_of(b) and b.is_submodule_of(a):
        assert a == b


# -- semilocal overrings ----------------------------------------------------


def as_module(t: Overring) -> ValuationVector:
    assert isinstance(t.model, SemilocalPrufer)
    return ValuationVector.of(
        t.model,
        tuple(0 if i in t.support else BOT for i in range(1, t.model.n + 1)),
    )


def test_all_supports_deterministic():
    model = SemilocalPrufer(2)
    assert model.all_supports() == [
        frozenset(),
        frozenset({1}),
        frozenset({2}),
        frozenset({1, 2}),
    ]


def test_semilocal_one_based_indices():
    model = SemilocalPrufer(3)
    assert model.indices == frozenset({1, 2, 3})
    with pytest.raises(ValueError):
        model.localization(0)
    with pytest.raises(ValueError):
        Overring(model, frozenset({4}))


def test_overring_product_is_module_mult():
    model = SemilocalPrufer(3)
    for s in model.all_supports():
        for r in model.all_supports():
            ts, tr = Overring(model, s), Overring(model, r)
            assert ts.product(tr).support == s & r
            assert as_module(ts.product(tr)) == as_module(ts).mult(as_module(tr))


def test_subring_of_is_module_containment():
    model = SemilocalPrufer(3)
    for s in model.all_supports():
        for r in model.all_supports():
            ts, tr = Overring(model, s), Overring(model, r)
            assert ts.subring_of(tr) == as_module(ts).is_submodule_of(as_module(tr))


def test_orthogonal_and_cover():
    model = SemilocalPrufer(3)
    t = model.localization(2)
    assert t.orthogonal().support == frozenset({1, 3})
    sig, big_sig = sigma_Sigma(t)
    assert sig == big_sig == frozenset({2})


def test_intersect_all_accumulates_supports():
    model = SemilocalPrufer(3)
    got = Overring.intersect_all([model.localization(i) for i in (1, 3)])
    assert got.support == frozenset({1, 3})
    with pytest.raises(ValueError):
        Overring.intersect_all([])


def test_ring_and_fraction_field_extremes():
    model = SemilocalPrufer(2)
    assert model.ring().is_whole_ring()
    assert model.fraction_field().is_fraction_field()
    assert model.ring().subring_of(model.localization(1))
    assert model.localization(1).subring_of(model.fraction_field())


# -- sequence overrings -------------------------------------------------------


def omega_space():
    return SequenceDomain(PresentedSpace.of(OrdinalInterval(ONE, 1)))


def test_sequence_supports_are_closed_on_construction():
    dom = omega_space()
    top = OMEGA
    dented = SetDescriptor.on_atoms(
        dom.max_space, {0: LevelMinusFinite(Ordinal(), frozenset({top}))}
    )
    t = dom.overring(dented)
    assert t.support.is_full()
    assert t == dom.ring()


def test_localization_at_limit_point_orthogonal_is_everything():
    dom = omega_space()
    d_omega = dom.localization(0, OMEGA)
    assert d_omega.orthogonal().support.is_full()
    sig, big_sig = sigma_Sigma(d_omega)
    assert sig == big_sig == d_omega.support


def test_isolated_point_orthogonal_misses_it():
    dom = omega_space()
    d_five = dom.localization(0, Ordinal.from_int(5))
    ortho = d_five.orthogonal()
    assert not ortho.support.contains(0, Ordinal.from_int(5))
    assert ortho.support.contains(0, OMEGA)
    assert d_five.product(ortho).is_fraction_field()


def test_product_of_distinct_isolated_localizations_is_field():
    dom = omega_space()
    a = dom.localization(0, Ordinal.from_int(1))
    b = dom.localization(0, Ordinal.from_int(2))
    assert a.product(b).is_fraction_field()
    assert not a.product(a).is_fraction_field()


def test_sequence_subring_order():
    dom = omega_space()
    assert dom.ring().subring_of(dom.localization(0, OMEGA))
    assert dom.localization(0, OMEGA).subring_of(dom.fraction_field())
    assert not dom.localization(0, OMEGA).subring_of(dom.localization(0, ONE))


# -- ideal sketches -----------------------------------------------------------


def test_ideal_survival():
    dom = omega_space()
    at_omega = SetDescriptor.points_of(dom.max_space, [(0, OMEGA)])
    sketch = IdealSketch(((at_omega, 2),))
    assert ideal_survives(sketch, dom.localization(0, OMEGA))
    assert not ideal_survives(sketch, dom.localization(0, ONE))
    assert ideal_survives(sketch, dom.ring())


def test_ideal_sketch_support_ignores_zero_entries():
    dom = omega_space()
    at_omega = SetDescriptor.points_of(dom.max_space, [(0, OMEGA)])
    at_one = SetDescriptor.points_of(dom.max_space, [(0, ONE)])
    sketch = IdealSketch(((at_omega, 0), (at_one, 3)))
    assert sketch.support() == at_one


def test_ideal_sketch_validation():
    dom = omega_space()
    other = SequenceDomain(PresentedSpace.of(Discrete(2)))
    at_omega = SetDescriptor.points_of(dom.max_space, [(0, OMEGA)])
    stray = SetDescriptor.full(other.max_space)
    with pytest.raises(ValueError):
        IdealSketch(((at_omega, -1),))
    with pytest.raises(ValueError):
        IdealSketch(((at_omega, 1), (stray, 1)))
    with pytest.raises(ValueError):
        ideal_survives(IdealSketch(((at_omega, 1),)), SemilocalPrufer(2).ring())
