"""Stable operations on module lattices, transfer maps, factorization.

A stable operation on the semilocal model is stored by its support: a
set of maximal-ideal indices L, acting on a valuation-vector module by
keeping the components inside L and relaxing the rest to BOT (the
closed form of I -> intersection of the I*D_M over M in L).  The
representation is sound by construction and verified axiom by axiom
with brute force over a truncated module lattice; its completeness (no
stable operation falls outside the support form) is checked by raw
search where that is feasible (one maximal ideal) and is theorem-backed
beyond that.

Brute-force quantifier loops are deterministic and order-independent,
so their aggregation order never affects a report.

Module components in the fast loops use float('-inf') for BOT; the
definitional path through the domain module keeps its own sentinels and
the two are compared in tests, not here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .domain import (
    BOT,
    TOP,
    Overring,
    SemilocalPrufer,
    SequenceDomain,
    ValuationVector,
)
from .family import Family, check_family
from .space import SetDescriptor

NEG_INF = float("-inf")

RawModule = tuple  # components are ints or float('-inf')


class EnumerationMismatch(Exception):
    """The raw closure-operator search disagreed with the support family."""


class HypothesisViolation(Exception):
    """A transfer-map statement was applied outside its hypotheses."""


class NotStablePreserving(Exception):
    """Factorization requested for a family that fails stable preservation."""

    def __init__(self, counterexample):
        super().__init__(f"family is not stable-preserving: {counterexample}")
        self.counterexample = counterexample


# ---------------------------------------------------------------------------
# Stable operations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StableOp:
    """A stable operation in support form, acting on the modules of ``on``."""

    model: SemilocalPrufer
    support: frozenset[int]
    on: Overring

    def __post_init__(self) -> None:
        if not isinstance(self.model, SemilocalPrufer):
            raise ValueError("stable operations live on the semilocal model")
        if self.on.model != self.model:
            raise ValueError("carrier ring belongs to a different model")
        carrier = self.on.support
        assert isinstance(carrier, frozenset)
        if not self.support <= carrier:
            raise ValueError("support must sit inside the carrier ring's spectrum")

    @staticmethod
    def on_ring(model: SemilocalPrufer, support: Iterable[int]) -> StableOp:
        return StableOp(model, frozenset(support), model.ring())

    def is_identity(self) -> bool:
        return self.support == self.on.support

    def is_constant_field(self) -> bool:
        return not self.support


def apply(op: StableOp, i: ValuationVector) -> ValuationVector:
    """The action: keep components inside the support, relax the rest."""
    if i.model != op.model:
        raise ValueError("module belongs to a different model")
    if any(c is TOP for c in i.components):
        return i
    return ValuationVector.of(
        op.model,
        (
            c if idx in op.support else BOT
            for idx, c in enumerate(i.components, start=1)
        ),
    )


def _raw_apply(support: frozenset[int], m: RawModule) -> RawModule:
    return tuple(
        c if idx in support else NEG_INF for idx, c in enumerate(m, start=1)
    )


def _raw_le(a: RawModule, b: RawModule) -> bool:
    """Module containment a within b: b constrains no more than a."""
    return all(y <= x for x, y in zip(a, b))


def _raw_intersect(a: RawModule, b: RawModule) -> RawModule:
    return tuple(max(x, y) for x, y in zip(a, b))


def truncated_modules(
    model: SemilocalPrufer, bound: int, carrier: frozenset[int] | None = None
) -> list[RawModule]:
    """All raw modules with components in {-bound..bound} + BOT.

    With a carrier, components outside it are pinned to BOT (the
    modules of the carrier overring).
    """
    if carrier is None:
        carrier = model.indices
    values = [NEG_INF] + list(range(-bound, bound + 1))
    axes = [
        values if idx in carrier else [NEG_INF]
        for idx in range(1, model.n + 1)
    ]
    return [tuple(m) for m in itertools.product(*axes)]


def _shift_vectors(model: SemilocalPrufer, bound: int,
                   carrier: frozenset[int]) -> list[tuple[int, ...]]:
    """Principal-module shifts: small vectors plus extreme one-hots."""
    small = [-1, 0, 1]
    axes = [
        small if idx in carrier else [0] for idx in range(1, model.n + 1)
    ]
    vectors = [tuple(v) for v in itertools.product(*axes)]
    for idx in sorted(carrier):
        for extreme in (bound, -bound):
            one_hot = tuple(
                extreme if j == idx else 0 for j in range(1, model.n + 1)
            )
            if one_hot not in vectors:
                vectors.append(one_hot)
    return vectors


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    passed: int
    failed: int
    skipped: int
    counterexample: Optional[dict] = field(default=None, hash=False)


def verify_action(
    model: SemilocalPrufer,
    carrier: frozenset[int],
    action: Callable[[RawModule], RawModule],
    bound: int,
) -> VerificationReport:
    """Brute-force the axioms for an arbitrary action on a truncated lattice.

    Checks extensivity, monotonicity, idempotence, translation by
    principal shifts, and stability.  Instances whose exact result
    would leave the component range are counted as skipped, never as
    passed.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    modules = truncated_modules(model, bound, carrier)
    passed = failed = skipped = 0
    counterexample: Optional[dict] = None

    def fail(axiom: str, data: dict) -> None:
        nonlocal failed, counterexample
        failed += 1
        if counterexample is None:
            counterexample = {"axiom": axiom, **data}

    images = {}
    for m in modules:
        img = action(m)
        images[m] = img
        if _raw_le(m, img):
            passed += 1
        else:
            fail("extensivity", {"i": m, "image": img})
    for m, img in images.items():
        img2 = images[img] if img in images else action(img)
        if img2 == img:
            passed += 1
        else:
            fail("idempotence", {"i": m, "image": img, "image2": img2})
    for a in modules:
        ia = images[a]
        for b in modules:
            if _raw_le(a, b):
                if _raw_le(ia, images[b]):
                    passed += 1
                else:
                    fail("monotonicity", {"i": a, "j": b})
    for a in modules:
        ia = images[a]
        for b in modules:
            meet = _raw_intersect(a, b)
            if _raw_intersect(ia, images[b]) == images[meet]:
                passed += 1
            else:
                fail("stability", {"i": a, "j": b, "meet": meet})
    in_range = lambda c: c == NEG_INF or -bound <= c <= bound
    for v in _shift_vectors(model, bound, carrier):
        for m in modules:
            shifted = tuple(c + dv for c, dv in zip(m, v))
            image_shifted = tuple(c + dv for c, dv in zip(images[m], v))
            if not all(map(in_range, shifted)) or not all(map(in_range, image_shifted)):
                skipped += 1
                continue
            if images[shifted] == image_shifted:
                passed += 1
            else:
                fail("translation", {"i": m, "shift": v})

    return VerificationReport(failed == 0, passed, failed, skipped, counterexample)


def verify_axioms(op: StableOp, bound: int) -> VerificationReport:
    """Brute-force axiom check of a support-form operation."""
    carrier = op.on.support
    assert isinstance(carrier, frozenset)
    return verify_action(
        op.model, carrier, lambda m: _raw_apply(op.support, m), bound
    )


# ---------------------------------------------------------------------------
# Enumeration and the operation lattice
# ---------------------------------------------------------------------------


def support_ops(model: SemilocalPrufer,
                on: Overring | None = None) -> list[StableOp]:
    """The support-form operations on a carrier, in a deterministic order."""
    carrier = on if on is not None else model.ring()
    idx = carrier.support
    assert isinstance(idx, frozenset)
    out = []
    for size in range(len(idx) + 1):
        for combo in itertools.combinations(sorted(idx), size):
            out.append(StableOp(model, frozenset(combo), carrier))
    return out


def _closure_operators_on_chain(bound: int) -> list[dict]:
    """Every closure operator on the one-ideal truncated lattice.

    Extensive monotone idempotent maps on a finite lattice are exactly
    the maps "send I to the least fixed point above I", one for each
    fixed-point set that contains the top and is closed under meets;
    on this chain any subset containing the top works.  The search is
    therefore exhaustive over all such maps, not a sample.
    """
    chain = [NEG_INF] + list(range(-bound, bound + 1))  # ascending constraint
    non_top = chain[1:]
    operators = []
    for r in range(len(non_top) + 1):
        for fixed in itertools.combinations(non_top, r):
            fixed_set = set(fixed) | {NEG_INF}
            table = {}
            for c in chain:
                # least fixed point whose constraint is still below c
                candidates = [f for f in fixed_set if f <= c]
                table[(c,)] = (max(candidates),)
            operators.append(table)
    return operators


def _axioms_hold_on_table(table: dict, bound: int) -> bool:
    modules = list(table.keys())
    for m in modules:
        img = table[m]
        if not _raw_le(m, img) or table[img] != img:
            return False
    for a in modules:
        for b in modules:
            if _raw_le(a, b) and not _raw_le(table[a], table[b]):
                return False
            meet = _raw_intersect(a, b)
            if _raw_intersect(table[a], table[b]) != table[meet]:
                return False
    in_range = lambda c: c == NEG_INF or -bound <= c <= bound
    for v in (-1, 1):
        for m in modules:
            shifted = tuple(c + v for c in m)
            image_shifted = tuple(c + v for c in table[m])
            if not all(map(in_range, shifted)) or not all(map(in_range, image_shifted)):
                continue
            if table[shifted] != image_shifted:
                return False
    return True


@dataclass(frozen=True)
class OpLattice:
    """The enumerated stable operations with their brute-forced order."""

    ops: tuple[StableOp, ...]
    order: tuple[tuple[bool, ...], ...]
    reports: tuple[VerificationReport, ...]
    completeness: str  # SEARCH-VERIFIED for n=1, THEOREM-BACKED beyond
    raw_search_count: Optional[int] = None

    def leq(self, i: int, j: int) -> bool:
        return self.order[i][j]

    def infimum(self, indices: Sequence[int]) -> StableOp:
        """The largest operation below all of the chosen ones.

        Supports accumulate by union; the empty choice gives the top,
        the constant-field operation.
        """
        acc: frozenset[int] = frozenset()
        for i in indices:
            acc = acc | self.ops[i].support
        return StableOp(self.ops[0].model, acc, self.ops[0].on)

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Covering pairs (i, j) with op_i strictly below op_j."""
        strictly = [
            [self.order[i][j] and i != j and not self.order[j][i]
             for j in range(len(self.ops))]
            for i in range(len(self.ops))
        ]
        edges = []
        for i in range(len(self.ops)):
            for j in range(len(self.ops)):
                if not strictly[i][j]:
                    continue
                if any(strictly[i][k] and strictly[k][j]
                       for k in range(len(self.ops))):
                    continue
                edges.append((i, j))
        return edges


def enumerate_stable(model: SemilocalPrufer, bound: int,
                     limit: int = 4) -> OpLattice:
    """Enumerate the support-form operations, verify them, order them.

    For one maximal ideal the enumeration is cross-validated by an
    exhaustive closure-operator search on the truncated lattice, which
    must recover exactly the support family.
    """
    if model.n > limit:
        raise ValueError(f"enumeration limited to n <= {limit}")
    ops = support_ops(model)
    reports = tuple(verify_axioms(op, bound) for op in ops)
    for op, report in zip(ops, reports):
        if not report.ok:
            raise EnumerationMismatch(
                f"support op {sorted(op.support)} failed verification: "
                f"{report.counterexample}"
            )

    modules = truncated_modules(model, bound)
    images = [
        {m: _raw_apply(op.support, m) for m in modules} for op in ops
    ]
    order = tuple(
        tuple(
            all(_raw_le(images[i][m], images[j][m]) for m in modules)
            for j in range(len(ops))
        )
        for i in range(len(ops))
    )
    for i, a in enumerate(ops):
        for j, b in enumerate(ops):
            if order[i][j] != (b.support <= a.support):
                raise AssertionError(
                    "order on the truncated lattice must mirror reverse "
                    "inclusion of supports"
                )

    raw_count: Optional[int] = None
    if model.n == 1:
        found = [
            table
            for table in _closure_operators_on_chain(bound)
            if _axioms_hold_on_table(table, bound)
        ]
        raw_count = len(found)
        support_tables = []
        for op in ops:
            support_tables.append(
                {m: _raw_apply(op.support, m) for m in truncated_modules(model, bound)}
            )
        if raw_count != len(ops) or any(t not in support_tables for t in found):
            raise EnumerationMismatch(
                f"raw search found {raw_count} operators, support family has "
                f"{len(ops)}"
            )

    completeness = "SEARCH-VERIFIED" if model.n == 1 else "THEOREM-BACKED"
    return OpLattice(tuple(ops), order, reports, completeness, raw_count)


# ---------------------------------------------------------------------------
# Transfer maps
# ---------------------------------------------------------------------------


def restrict_op(op: StableOp, t: Overring) -> StableOp:
    """Restriction to the modules of t: intersect the support."""
    if t.model != op.model:
        raise ValueError("overring belongs to a different model")
    assert isinstance(t.support, frozenset)
    return StableOp(op.model, op.support & t.support, t)


def extend_op(op: StableOp, model: SemilocalPrufer) -> StableOp:
    """Extension back to the base ring: same support, new carrier."""
    if model != op.model:
        raise ValueError("operation belongs to a different model")
    return StableOp(model, op.support, model.ring())


def _family_members(f: Family) -> tuple[Overring, ...]:
    if not isinstance(f.model, SemilocalPrufer):
        raise HypothesisViolation("transfer maps act on semilocal families")
    return f.listed


def roundtrip_check(f: Family, ops: Sequence[StableOp], bound: int = 2) -> bool:
    """Restriction after extension is the identity on per-member tuples.

    Builds the infimum of the extensions (support union), restricts it
    back to every member, and compares actions on the truncated module
    lattices of the members.
    """
    members = _family_members(f)
    report = check_family(f)
    if not (report.complete and report.independent):
        raise HypothesisViolation(
            "the roundtrip statement assumes a complete independent family"
        )
    if len(ops) != len(members):
        raise ValueError("one operation per member")
    for t, op in zip(members, ops):
        if op.on != t:
            raise ValueError("operation carrier must match its member")

    union: frozenset[int] = frozenset()
    for op in ops:
        union = union | op.support
    combined = StableOp.on_ring(f.model, union)

    for t, op in zip(members, ops):
        back = restrict_op(combined, t)
        if back.support != op.support:
            return False
        carrier = t.support
        assert isinstance(carrier, frozenset)
        for m in truncated_modules(f.model, bound, carrier):
            if _raw_apply(back.support, m) != _raw_apply(op.support, m):
                return False
    return True


# ---------------------------------------------------------------------------
# Stable preservation and factorization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StablePreservingReport:
    ok: bool
    method: str  # BRUTE-FORCE on semilocal models, SUPPORT-COVERING otherwise
    counterexample: Optional[dict] = field(default=None, hash=False)


def is_stable_preserving(f: Family, bound: int = 2) -> StablePreservingReport:
    """Whether every stable operation factors through the family.

    Semilocal families get the full brute force: every support
    operation against every truncated module, checking that applying
    the operation equals intersecting its values on the member
    extensions.  Families over sequence domains carry no truncated
    module lattice, so the same identity is decided at support level:
    it holds exactly when the member supports cover the base spectrum.
    """
    if isinstance(f.model, SequenceDomain):
        union = f.support_union()
        assert isinstance(union, SetDescriptor)
        base = f.base.support
        assert isinstance(base, SetDescriptor)
        ok = base.subset_of(union)
        ce = None if ok else {"uncovered": True}
        return StablePreservingReport(ok, "SUPPORT-COVERING", ce)

    members = f.listed
    supports = []
    for t in members:
        assert isinstance(t.support, frozenset)
        supports.append(t.support)
    modules = truncated_modules(f.model, bound)
    for op in support_ops(f.model):
        for m in modules:
            lhs = _raw_apply(op.support, m)
            rhs = tuple(NEG_INF for _ in m)
            for s in supports:
                rhs = _raw_intersect(rhs, _raw_apply(op.support & s, m))
            if lhs != rhs:
                return StablePreservingReport(
                    False,
                    "BRUTE-FORCE",
                    {"op_support": sorted(op.support), "i": m,
                     "lhs": lhs, "rhs": rhs},
                )
    return StablePreservingReport(True, "BRUTE-FORCE")


@dataclass(frozen=True)
class FactorizationReport:
    ok: bool
    base_count: int
    member_counts: tuple[int, ...]
    product_count: int
    mutual_inverse: bool
    order_preserving: bool


def factorization_iso(f: Family, bound: int = 2) -> FactorizationReport:
    """The restriction/extension bijection between operation lattices.

    Verifies stable preservation first, then checks that restricting to
    all members and re-extending is mutually inverse and order
    preserving, and that the cardinalities multiply.
    """
    preserving = is_stable_preserving(f, bound)
    if not preserving.ok:
        raise NotStablePreserving(preserving.counterexample)
    members = _family_members(f)

    base_ops = support_ops(f.model)
    member_ops = [support_ops(f.model, t) for t in members]

    def forward(op: StableOp) -> tuple[frozenset[int], ...]:
        return tuple(restrict_op(op, t).support for t in members)

    def backward(tup: Sequence[frozenset[int]]) -> StableOp:
        acc: frozenset[int] = frozenset()
        for s in tup:
            acc = acc | s
        return StableOp.on_ring(f.model, acc)

    mutual = True
    for op in base_ops:
        if backward(forward(op)) != op:
            mutual = False
    for tup in itertools.product(*[[o.support for o in mops] for mops in member_ops]):
        if forward(backward(tup)) != tuple(tup):
            mutual = False

    order_ok = True
    for a in base_ops:
        for b in base_ops:
            lhs = b.support <= a.support  # a below b in the action order
            fa, fb = forward(a), forward(b)
            rhs = all(y <= x for x, y in zip(fa, fb))
            if lhs != rhs:
                order_ok = False

    member_counts = tuple(len(mops) for mops in member_ops)
    product = 1
    for c in member_counts:
        product *= c
    ok = mutual and order_ok and product == len(base_ops)
    return FactorizationReport(
        ok, len(base_ops), member_counts, product, mutual, order_ok
    )
