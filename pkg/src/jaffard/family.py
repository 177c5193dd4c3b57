"""Families of flat overrings: predicates, classification, derived sequences.

A ``Family`` holds its members in two compartments:

* ``point_part``: a descriptor C over a sequence domain, standing for
  the localizations {D_M : M in C} (the canonical family is C = All);
* ``listed``: finitely many explicit overrings.

Explicit semilocal families use only ``listed``; the engine's
transfinite stages use only ``point_part``; weak families produced by
``derived_step`` use both (the isolated localizations plus the pointed
ring).  The fraction field is dropped from listed members on
construction unless it would be the only member.

Every classification question is asked relative to the family's
``base`` ring: a member is a Jaffard overring of the base, completeness
means covering the spectrum of the base, and so on.  The derived
sequence removes Jaffard members stage by stage, taking descriptor
intersections at limit stages, and stops when nothing changes; the
stage at which it stabilizes is the Jaffard degree and the family is
sharp when the stable ring is the fraction field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Union

from .domain import (
    Model,
    Overring,
    SemilocalPrufer,
    SequenceDomain,
)
from .ordinal import OMEGA, ONE, ZERO, Ordinal, PointKind
from .space import (
    Discrete,
    PresentedSpace,
    SetDescriptor,
    UnrepresentableResult,
    cb_derivative,
    has_finite_horizon,
    omega_limit,
)


class AlreadyJaffard(Exception):
    """Every member is already a Jaffard overring; no step to take."""


class StepBudgetExceeded(Exception):
    """The derived sequence ran past its step budget."""

    def __init__(self, partial: DerivedSequence):
        super().__init__(f"no stabilization within {len(partial.stages)} stages")
        self.partial = partial


class NotPreJaffard(Exception):
    """The engine needs a pre-Jaffard family."""

    def __init__(self, report: FamilyReport):
        failed = [name for name, ok in report.pre_jaffard_flags() if not ok]
        super().__init__(f"family is not pre-Jaffard (failing: {', '.join(failed)})")
        self.report = report


class ConditionDisagreement(Exception):
    """Equivalent Jaffard-overring criteria returned different verdicts (bug trap)."""


class NotCompactPart(ValueError):
    pass


class OverlappingParts(ValueError):
    pass


class Classification(str, Enum):
    JAFFARD = "JAFFARD"
    WEAK_JAFFARD = "WEAK_JAFFARD"
    PRE_JAFFARD = "PRE_JAFFARD"
    NONE = "NONE"


class Verdict(str, Enum):
    SHARP = "SHARP"
    DULL = "DULL"


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


def _support_key(t: Overring):
    if isinstance(t.support, frozenset):
        return (0, len(t.support), tuple(sorted(t.support)))
    return (1, tuple(str(piece) for piece in t.support.pieces))


@dataclass(frozen=True)
class Family:
    """A family of flat overrings of ``base``."""

    model: Model
    point_part: Optional[SetDescriptor]
    listed: tuple[Overring, ...]
    base: Overring

    def __post_init__(self) -> None:
        if isinstance(self.model, SequenceDomain):
            if self.point_part is None:
                object.__setattr__(
                    self, "point_part", SetDescriptor.empty(self.model.max_space)
                )
        elif self.point_part is not None:
            raise ValueError("semilocal families have no point part")
        if self.base.model != self.model:
            raise ValueError("base belongs to a different model")
        for t in self.listed:
            if t.model != self.model:
                raise ValueError("member belongs to a different model")
        # fraction-field convention: K is dropped unless it is the only member
        proper = tuple(t for t in self.listed if not t.is_fraction_field())
        if len(proper) < len(self.listed):
            empty_points = self.point_part is None or self.point_part.is_empty()
            if proper or not empty_points:
                object.__setattr__(self, "listed", proper)
            else:
                object.__setattr__(self, "listed", (self.listed[0],))
        ordered = tuple(sorted(set(self.listed), key=_support_key))
        object.__setattr__(self, "listed", ordered)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def all_localizations(model: Model) -> Family:
        """The canonical family of every localization at a maximal ideal."""
        if isinstance(model, SemilocalPrufer):
            return Family.of_members(
                model, [model.localization(i) for i in sorted(model.indices)]
            )
        return Family(
            model, SetDescriptor.full(model.max_space), (), model.ring()
        )

    @staticmethod
    def of_members(
        model: Model, members: Iterable[Overring], base: Overring | None = None
    ) -> Family:
        return Family(
            model,
            None if isinstance(model, SemilocalPrufer) else
            SetDescriptor.empty(model.max_space),
            tuple(members),
            base if base is not None else _whole_ring(model),
        )

    @staticmethod
    def canonical(model: SequenceDomain, points: SetDescriptor,
                  base: Overring | None = None) -> Family:
        return Family(
            model, points, (), base if base is not None else model.ring()
        )

    # -- queries ----------------------------------------------------------

    def has_points(self) -> bool:
        return self.point_part is not None and not self.point_part.is_empty()

    def is_empty(self) -> bool:
        return not self.listed and not self.has_points()

    def member_count(self) -> int | None:
        """Number of members when finite, else None."""
        if self.point_part is None:
            return len(self.listed)
        size = self.point_part.finite_size()
        if size is None:
            return None
        return size + len(self.listed)

    def point_members(self) -> list[Overring]:
        """Explicit localizations of a finite point part."""
        assert isinstance(self.model, SequenceDomain)
        assert self.point_part is not None
        return [
            self.model.localization(idx, p)
            for idx, p in self.point_part.finite_points()
        ]

    def all_members(self) -> list[Overring]:
        """All members of a finite family."""
        members: list[Overring] = []
        if self.point_part is not None and not self.point_part.is_empty():
            members.extend(self.point_members())
        members.extend(self.listed)
        return members

    def support_union(self) -> Union[frozenset, SetDescriptor]:
        if isinstance(self.model, SemilocalPrufer):
            acc: frozenset = frozenset()
            for t in self.listed:
                acc = acc | t.support
            return acc
        assert self.point_part is not None
        acc_d = self.point_part
        for t in self.listed:
            assert isinstance(t.support, SetDescriptor)
            acc_d = acc_d.union(t.support)
        return acc_d

    def intersection_ring(self) -> Overring:
        """The ring cut out by the whole family (K for the empty family)."""
        if self.is_empty():
            return _fraction_field(self.model)
        if isinstance(self.model, SemilocalPrufer):
            return Overring(self.model, self.support_union())
        union = self.support_union()
        assert isinstance(union, SetDescriptor)
        return Overring(self.model, union.closure())


def _whole_ring(model: Model) -> Overring:
    return model.ring()


def _fraction_field(model: Model) -> Overring:
    return model.fraction_field()


# ---------------------------------------------------------------------------
# Jaffard overrings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JaffardEvidence:
    verdict: bool
    conditions: dict = field(hash=False)


def _relative_orthogonal(t: Overring, base: Overring) -> Overring:
    """The complement sublocalization of t inside the base ring."""
    if isinstance(t.support, frozenset):
        assert isinstance(base.support, frozenset)
        return Overring(t.model, base.support - t.support)
    assert isinstance(base.support, SetDescriptor)
    return Overring(t.model, base.support.difference(t.support).closure())


def is_jaffard_overring(t: Overring, base: Overring | None = None) -> JaffardEvidence:
    """Evaluate the equivalent Jaffard-overring criteria and their agreement.

    All representable conditions are computed independently; a split
    vote raises ConditionDisagreement, which would indicate a bug.
    """
    if base is None:
        base = t.model.ring()
    ortho = _relative_orthogonal(t, base)

    conditions: dict = {}
    product = t.product(ortho)
    conditions["product_with_orthogonal_is_K"] = product.is_fraction_field()

    if isinstance(t.support, frozenset):
        conditions["sigma_intersection_empty"] = not (t.sigma & ortho.sigma)
        conditions["primes_die_in_orthogonal"] = all(
            p not in ortho.sigma for p in t.sigma
        )
        conditions["isolated_point"] = None
    else:
        assert isinstance(ortho.support, SetDescriptor)
        conditions["sigma_intersection_empty"] = (
            t.support.intersect(ortho.support).is_empty()
        )
        conditions["primes_die_in_orthogonal"] = (
            t.support.difference(ortho.support) == t.support
        )
        isolated: bool | None = None
        try:
            pts = t.support.finite_points()
        except UnrepresentableResult:
            pts = None
        if pts is not None and len(pts) == 1:
            assert isinstance(base.support, SetDescriptor)
            idx, p = pts[0]
            isolated = not cb_derivative(base.support).contains(idx, p)
        conditions["isolated_point"] = isolated

    votes = {v for v in conditions.values() if v is not None}
    if len(votes) != 1:
        raise ConditionDisagreement(f"criteria disagree: {conditions}")
    return JaffardEvidence(votes.pop(), conditions)


def _failing_points(f: Family) -> SetDescriptor | None:
    """Descriptor of point members that are not Jaffard over the base."""
    if f.point_part is None:
        return None
    assert isinstance(f.base.support, SetDescriptor)
    return f.point_part.intersect(cb_derivative(f.base.support))


def _failing_listed(f: Family) -> tuple[Overring, ...]:
    return tuple(
        t for t in f.listed if not is_jaffard_overring(t, f.base).verdict
    )


# ---------------------------------------------------------------------------
# Family reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyReport:
    complete: bool
    independent: bool
    strongly_independent: Optional[bool]
    locally_finite: Optional[bool]
    compact: bool
    classification: Classification
    pointed_at: Optional[Overring] = None

    def pre_jaffard_flags(self) -> list[tuple[str, bool]]:
        return [
            ("complete", self.complete),
            ("independent", self.independent),
            ("compact", self.compact),
        ]

    def is_pre_jaffard(self) -> bool:
        return self.complete and self.independent and self.compact


def _is_complete(f: Family) -> bool:
    union = f.support_union()
    if isinstance(union, frozenset):
        assert isinstance(f.base.support, frozenset)
        return f.base.support <= union
    assert isinstance(f.base.support, SetDescriptor)
    return f.base.support.subset_of(union)


def _is_independent(f: Family) -> bool:
    for i, t in enumerate(f.listed):
        for s in f.listed[i + 1:]:
            if not t.product(s).is_fraction_field():
                return False
    if f.point_part is not None and not f.point_part.is_empty():
        for t in f.listed:
            assert isinstance(t.support, SetDescriptor)
            if not f.point_part.intersect(t.support).is_empty():
                return False
    return True


def _is_compact(f: Family) -> bool:
    """Closedness of the member set, listed members covering point defects."""
    if f.point_part is None:
        return True
    if f.point_part.is_closed():
        return True
    defect = f.point_part.closure().difference(f.point_part)
    for t in f.listed:
        assert isinstance(t.support, SetDescriptor)
        defect = defect.difference(t.support)
    return defect.is_empty()


def _is_strongly_independent(f: Family, independent: bool) -> Optional[bool]:
    count = f.member_count()
    if count is not None:
        members = f.all_members()
        for i, t in enumerate(members):
            others = members[:i] + members[i + 1:]
            if not others:
                continue
            rest = Overring.intersect_all(others)
            if not t.product(rest).is_fraction_field():
                return False
        return True
    # infinite point part: the product criterion at descriptor level
    if not independent:
        return None
    assert f.point_part is not None
    if not cb_derivative(f.point_part).is_empty():
        return False
    closure = f.point_part.closure()
    for t in f.listed:
        assert isinstance(t.support, SetDescriptor)
        if not t.support.intersect(closure).is_empty():
            return False
    return True


def check_family(f: Family) -> FamilyReport:
    """Evaluate the definitional flags and assemble the classification."""
    complete = _is_complete(f)
    independent = _is_independent(f)
    compact = _is_compact(f)
    strongly = _is_strongly_independent(f, independent)

    finite = f.member_count() is not None
    if finite:
        locally_finite: Optional[bool] = True
    elif complete and independent:
        # strong independence and local finiteness coincide here
        locally_finite = strongly
    else:
        locally_finite = None

    failing_pts = _failing_points(f)
    failing_listed = _failing_listed(f)
    failing_count: int | None
    if failing_pts is None:
        failing_count = len(failing_listed)
    else:
        pts_count = failing_pts.finite_size()
        failing_count = (
            None if pts_count is None else pts_count + len(failing_listed)
        )

    classification = Classification.NONE
    pointed: Optional[Overring] = None
    if complete and independent:
        all_jaffard = failing_count == 0
        if all_jaffard and locally_finite is True:
            classification = Classification.JAFFARD
        elif failing_count == 1:
            classification = Classification.WEAK_JAFFARD
            if failing_listed:
                pointed = failing_listed[0]
            else:
                assert failing_pts is not None
                assert isinstance(f.model, SequenceDomain)
                idx, p = failing_pts.finite_points()[0]
                pointed = f.model.localization(idx, p)
        elif compact:
            classification = Classification.PRE_JAFFARD

    return FamilyReport(
        complete=complete,
        independent=independent,
        strongly_independent=strongly,
        locally_finite=locally_finite,
        compact=compact,
        classification=classification,
        pointed_at=pointed,
    )


def jaffard_part(f: Family) -> Family:
    """The subfamily of members that are Jaffard overrings of the base."""
    failing_listed = set(_failing_listed(f))
    passing = tuple(t for t in f.listed if t not in failing_listed)
    if f.point_part is None:
        return Family(f.model, None, passing, f.base)
    failing_pts = _failing_points(f)
    assert failing_pts is not None
    return Family(
        f.model, f.point_part.difference(failing_pts), passing, f.base
    )


# ---------------------------------------------------------------------------
# Derived sequence engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DerivedStep:
    weak: Family
    pointed_at: Overring
    rest: Family
    new_base: Overring


@dataclass(frozen=True)
class Stage:
    alpha: Ordinal
    family: Family
    ring: Overring


@dataclass(frozen=True)
class DerivedSequence:
    stages: tuple[Stage, ...]
    degree: Ordinal
    verdict: Verdict
    dull_limit: Overring


def _rest_family(f: Family) -> tuple[Family, bool]:
    """The non-Jaffard members over their intersection ring.

    The flag reports whether anything was removed.
    """
    failing_pts = _failing_points(f)
    failing_listed = _failing_listed(f)
    same_pts = failing_pts is None or failing_pts == f.point_part
    changed = not (same_pts and len(failing_listed) == len(f.listed))
    loose = Family(f.model, failing_pts, failing_listed, f.base)
    rest = Family(f.model, failing_pts, failing_listed, loose.intersection_ring())
    return rest, changed


def derived_step(f: Family) -> DerivedStep:
    """One stage: split off the Jaffard part and re-base the rest.

    The weak family is the Jaffard part together with the new base
    ring, pointed there.
    """
    rest, _ = _rest_family(f)
    if rest.is_empty():
        raise AlreadyJaffard("every member is a Jaffard overring")
    new_base = rest.base

    jaff = jaffard_part(f)
    weak = Family(
        f.model, jaff.point_part, jaff.listed + (new_base,), f.base
    )
    weak_report = check_family(weak)
    if weak_report.classification not in (
        Classification.JAFFARD, Classification.WEAK_JAFFARD
    ):
        raise AssertionError(
            f"split family should be weak Jaffard, got {weak_report.classification}"
        )
    rest_report = check_family(rest)
    if not rest_report.is_pre_jaffard():
        raise AssertionError("remaining members should form a pre-Jaffard family")
    return DerivedStep(weak, new_base, rest, new_base)


def _advance(fam: Family) -> tuple[Ordinal, Family] | None:
    """The next distinct stage as (increment, family); None at stabilization."""
    if fam.point_part is not None and not has_finite_horizon(fam.point_part):
        # the successor chain never stabilizes below the next limit stage,
        # but jump only once the finitely many listed members have settled
        failing_listed = _failing_listed(fam)
        if failing_listed == fam.listed:
            limit_pts = omega_limit(fam.point_part)
            return OMEGA, Family(fam.model, limit_pts, failing_listed, fam.base)
    rest, changed = _rest_family(fam)
    if not changed:
        return None
    return ONE, rest


def derived_sequence(f: Family, max_steps: int = 64) -> DerivedSequence:
    """Run the transfinite removal process until it stabilizes.

    Successor stages drop the Jaffard members; when a descriptor piece
    provably descends forever, the engine jumps to the next limit stage
    (the intersection of the finite chain).  Stage rings ascend until
    the sequence stabilizes; the family is SHARP when the stable ring
    is the fraction field.
    """
    report = check_family(f)
    if not report.is_pre_jaffard():
        raise NotPreJaffard(report)

    alpha = ZERO
    current = Family(f.model, f.point_part, f.listed, f.intersection_ring())
    stages = [Stage(alpha, current, current.base)]
    while True:
        step = _advance(current)
        if step is None:
            break
        if len(stages) > max_steps:
            partial = DerivedSequence(
                tuple(stages), alpha, Verdict.DULL, current.base
            )
            raise StepBudgetExceeded(partial)
        increment, nxt = step
        alpha = alpha + increment
        nxt = Family(nxt.model, nxt.point_part, nxt.listed, nxt.intersection_ring())
        current = nxt
        stages.append(Stage(alpha, current, current.base))

    limit_ring = current.base
    verdict = Verdict.SHARP if limit_ring.is_fraction_field() else Verdict.DULL
    return DerivedSequence(tuple(stages), alpha, verdict, limit_ring)


@dataclass(frozen=True)
class DegreeTranslation:
    sharp_degree: Optional[Ordinal]
    dull_degree: Optional[Ordinal]


def degree_translation(ds: DerivedSequence) -> DegreeTranslation:
    """Convert a Jaffard degree into the sharp/dull degree conventions.

    A sharp family of successor degree a+1 has sharp degree a; at limit
    degrees the sharp degree does not exist.  A dull family's dull
    degree is the Jaffard degree itself.
    """
    if ds.verdict is Verdict.SHARP:
        if ds.degree.classify() is PointKind.SUCCESSOR:
            return DegreeTranslation(ds.degree.predecessor(), None)
        return DegreeTranslation(None, None)
    return DegreeTranslation(None, ds.degree)


# ---------------------------------------------------------------------------
# Family surgery
# ---------------------------------------------------------------------------


def merge_compact_subsets(f: Family, parts: list[SetDescriptor]) -> Family:
    """Replace pairwise disjoint compact member blocks by their intersections.

    In the canonical representation a mergeable block must be a union
    of whole atoms (such blocks are clopen, so the merged ring is an
    isolated member of the new family); the result is the canonical
    family over the surgered space, where each block collapses to one
    new discrete point.
    """
    if not isinstance(f.model, SequenceDomain):
        return _merge_listed(f, parts)
    if f.listed or f.point_part is None or not f.point_part.is_full():
        raise ValueError("merging is supported on all-localizations families")
    space = f.model.max_space
    chosen: list[frozenset[int]] = []
    for part in parts:
        if part.space != space:
            raise ValueError("part lives on a different space")
        atoms = set()
        for idx, piece in enumerate(part.pieces):
            if piece == SetDescriptor.full(space).pieces[idx]:
                atoms.add(idx)
            elif not part.pieces[idx] == SetDescriptor.empty(space).pieces[idx]:
                raise NotCompactPart(
                    "parts must be clopen unions of whole atoms in this presentation"
                )
        if not part.is_closed():
            raise NotCompactPart("parts must be compact (closed) member sets")
        if not atoms:
            raise NotCompactPart("empty part")
        chosen.append(frozenset(atoms))
    for i, a in enumerate(chosen):
        for b in chosen[i + 1:]:
            if a & b:
                raise OverlappingParts("parts share an atom")

    merged_away = set().union(*chosen) if chosen else set()
    remaining = [
        atom for idx, atom in enumerate(space.atoms) if idx not in merged_away
    ]
    new_atoms = remaining + [Discrete(len(chosen))]
    new_space, _ = PresentedSpace.build(new_atoms)
    new_model = SequenceDomain(new_space)
    result = Family.all_localizations(new_model)
    if not check_family(result).is_pre_jaffard():
        raise AssertionError("merged family should be pre-Jaffard")
    return result


def _merge_listed(f: Family, parts: list) -> Family:
    """Semilocal merging: each part is a support set covering whole members."""
    for part in parts:
        if not isinstance(part, frozenset):
            raise ValueError("semilocal parts are index sets")
    for i, a in enumerate(parts):
        for b in parts[i + 1:]:
            if a & b:
                raise OverlappingParts("parts share an index")
    taken: set[Overring] = set()
    merged: list[Overring] = []
    for part in parts:
        block = [t for t in f.listed if t.support <= part]
        covered: frozenset = frozenset()
        for t in block:
            covered = covered | t.support
        if covered != part:
            raise NotCompactPart("part does not match a union of member supports")
        taken.update(block)
        merged.append(Overring(f.model, part))
    rest = [t for t in f.listed if t not in taken]
    out = Family.of_members(f.model, rest + merged, f.base)
    if not check_family(out).is_pre_jaffard():
        raise AssertionError("merged family should be pre-Jaffard")
    return out


def extend_family(f: Family, b: Overring) -> Family:
    """The family of member products with b, over b."""
    if b.model != f.model:
        raise ValueError("overring belongs to a different model")
    listed = tuple(t.product(b) for t in f.listed)
    if f.point_part is None:
        out = Family(f.model, None, listed, b)
    else:
        assert isinstance(b.support, SetDescriptor)
        out = Family(f.model, f.point_part.intersect(b.support), listed, b)
    if _is_complete(f) and f.base.subring_of(b):
        if not _is_complete(out):
            raise AssertionError("extension of a complete family must cover the base")
    if _is_independent(f) and not _is_independent(out):
        raise AssertionError("extension cannot break independence")
    return out


@dataclass(frozen=True)
class HausdorffReport:
    ok: bool
    witnesses: tuple[tuple[int, int], ...]
    clashes: tuple[tuple[int, int], ...]


def hausdorff_check(f: Family) -> HausdorffReport:
    """Pairwise separation of a finite family at the support level."""
    members = f.all_members()
    witnesses = []
    clashes = []
    for i, t in enumerate(members):
        for j in range(i + 1, len(members)):
            if t.product(members[j]).is_fraction_field():
                witnesses.append((i, j))
            else:
                clashes.append((i, j))
    return HausdorffReport(not clashes, tuple(witnesses), tuple(clashes))
