"""Executable domain models with exact support-level arithmetic.

``SemilocalPrufer(n)`` models a semilocal one-dimensional Prufer domain
with maximal ideals M_1..M_n whose localizations are DVRs with value
group Z.  Nonzero K-submodules are valuation vectors: component i is
the minimal allowed valuation at M_i, ``BOT`` meaning no constraint
(the component ring is K) and ``TOP`` the zero module.  Intersection is
componentwise max, module product componentwise sum.

``SequenceDomain`` wraps a PresentedSpace read as Max(D) with the
inverse topology.  Overrings are the sublocalizations T_C indexed by
descriptors; the identification Sigma(T_C) = closure(C) is a model
axiom (flagged MODEL-AXIOM in reports), chosen so that localizations at
dense sets of maximal ideals intersect back to the base ring.

In both models every overring is a flat sublocalization, so sigma and
Sigma coincide and an overring is determined by its support.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Union

from .space import (
    Point,
    PresentedSpace,
    SetDescriptor,
    UnrepresentableResult,
)


class _Marker:
    __slots__ = ("_name",)

    def __init__(self, name: str):
        self._name = name

    def __repr__(self) -> str:
        return self._name


BOT = _Marker("BOT")
TOP = _Marker("TOP")

Component = Union[int, _Marker]


def _comp_rank(c: Component) -> tuple[int, int]:
    if c is BOT:
        return (0, 0)
    if c is TOP:
        return (2, 0)
    return (1, c)


def comp_le(a: Component, b: Component) -> bool:
    """Order BOT < integers < TOP (constraint strength)."""
    return _comp_rank(a) <= _comp_rank(b)


def comp_max(a: Component, b: Component) -> Component:
    return b if comp_le(a, b) else a


def comp_add(a: Component, b: Component) -> Component:
    """Valuation of a product: TOP dominates, else BOT absorbs, else sum."""
    if a is TOP or b is TOP:
        return TOP
    if a is BOT or b is BOT:
        return BOT
    return a + b


# ---------------------------------------------------------------------------
# Semilocal model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SemilocalPrufer:
    """Semilocal 1-dimensional Prufer model with n maximal ideals."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("the model needs at least one maximal ideal")

    @property
    def indices(self) -> frozenset[int]:
        return frozenset(range(1, self.n + 1))

    def ring(self) -> Overring:
        return Overring(self, self.indices)

    def fraction_field(self) -> Overring:
        return Overring(self, frozenset())

    def localization(self, i: int) -> Overring:
        return Overring(self, frozenset({i}))

    def module(self, *components: Component) -> ValuationVector:
        return ValuationVector.of(self, components)

    def unit_module(self) -> ValuationVector:
        """The ring D itself, as a module: all valuations at least 0."""
        return ValuationVector.of(self, (0,) * self.n)

    def all_supports(self) -> list[frozenset[int]]:
        """All 2^n overring supports, in a deterministic order."""
        out = []
        for size in range(self.n + 1):
            for combo in itertools.combinations(range(1, self.n + 1), size):
                out.append(frozenset(combo))
        return out


@dataclass(frozen=True)
class ValuationVector:
    """A K-submodule of the semilocal model, by componentwise valuations."""

    model: SemilocalPrufer
    components: tuple[Component, ...]

    def __post_init__(self) -> None:
        if len(self.components) != self.model.n:
            raise ValueError("component count must match the model")
        for c in self.components:
            if not (c is BOT or c is TOP or isinstance(c, int)):
                raise ValueError(f"bad component {c!r}")
        if any(c is TOP for c in self.components):
            object.__setattr__(
                self, "components", (TOP,) * self.model.n
            )

    @staticmethod
    def of(model: SemilocalPrufer, components: Iterable[Component]) -> ValuationVector:
        return ValuationVector(model, tuple(components))

    def _check_model(self, other: ValuationVector) -> None:
        if self.model != other.model:
            raise ValueError("modules live over different models")

    def intersect(self, other: ValuationVector) -> ValuationVector:
        self._check_model(other)
        return ValuationVector.of(
            self.model,
            (comp_max(a, b) for a, b in zip(self.components, other.components)),
        )

    def mult(self, other: ValuationVector) -> ValuationVector:
        self._check_model(other)
        return ValuationVector.of(
            self.model,
            (comp_add(a, b) for a, b in zip(self.components, other.components)),
        )

    def is_submodule_of(self, other: ValuationVector) -> bool:
        """Containment: tighter constraints mean a smaller module."""
        self._check_model(other)
        return all(
            comp_le(b, a) for a, b in zip(self.components, other.components)
        )

    def extend(self, t: Overring) -> ValuationVector:
        """The T-module IT: constraints survive only inside the support of T."""
        if t.model != self.model:
            raise ValueError("overring belongs to a different model")
        assert isinstance(t.support, frozenset)
        if any(c is TOP for c in self.components):
            return self
        return ValuationVector.of(
            self.model,
            (
                c if i in t.support else BOT
                for i, c in enumerate(self.components, start=1)
            ),
        )

    def admits_element(self, valuations: tuple[int, ...]) -> bool:
        """Whether an element with the given valuation profile lies in the module."""
        if len(valuations) != self.model.n:
            raise ValueError("valuation profile has wrong length")
        for c, v in zip(self.components, valuations):
            if c is TOP:
                return False
            if c is BOT:
                continue
            if v < c:
                return False
        return True


def extend_to_overring(i: ValuationVector, t: Overring) -> ValuationVector:
    return i.extend(t)


def module_intersect(a: ValuationVector, b: ValuationVector) -> ValuationVector:
    return a.intersect(b)


def module_mult(a: ValuationVector, b: ValuationVector) -> ValuationVector:
    return a.mult(b)


# ---------------------------------------------------------------------------
# Sequence model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SequenceDomain:
    """A 1-dimensional domain presented by its inverse-topology Max spectrum."""

    max_space: PresentedSpace

    def ring(self) -> Overring:
        return Overring(self, SetDescriptor.full(self.max_space))

    def fraction_field(self) -> Overring:
        return Overring(self, SetDescriptor.empty(self.max_space))

    def localization(self, atom_index: int, point: Point) -> Overring:
        return Overring(
            self,
            SetDescriptor.points_of(self.max_space, [(atom_index, point)]),
        )

    def overring(self, support: SetDescriptor) -> Overring:
        return Overring(self, support)


Model = Union[SemilocalPrufer, SequenceDomain]
Support = Union[frozenset, SetDescriptor]


@dataclass(frozen=True)
class Overring:
    """A flat sublocalization, identified by its support.

    In the sequence model the support is normalized to its closure on
    construction (model axiom: the primes over which T localizes are
    the closure of the defining set), so equality of overrings is
    structural equality of supports.
    """

    model: Model
    support: Support

    def __post_init__(self) -> None:
        if isinstance(self.model, SemilocalPrufer):
            if not isinstance(self.support, frozenset):
                raise ValueError("semilocal overrings use index-set supports")
            if not self.support <= self.model.indices:
                raise ValueError("support indices outside the model")
        else:
            if not isinstance(self.support, SetDescriptor):
                raise ValueError("sequence overrings use descriptor supports")
            if self.support.space != self.model.max_space:
                raise ValueError("support lives on a different space")
            object.__setattr__(self, "support", self.support.closure())

    # -- spectra -------------------------------------------------------

    @property
    def sigma(self) -> Support:
        """The common value sigma(T) = Sigma(T); the zero prime is implicit."""
        return self.support

    def is_fraction_field(self) -> bool:
        if isinstance(self.support, frozenset):
            return not self.support
        return self.support.is_empty()

    def is_whole_ring(self) -> bool:
        if isinstance(self.model, SemilocalPrufer):
            return self.support == self.model.indices
        return self.support.is_full()

    # -- ring-level operations ------------------------------------------

    def _check_model(self, other: Overring) -> None:
        if self.model != other.model:
            raise ValueError("overrings belong to different models")

    def product(self, other: Overring) -> Overring:
        """The compositum TS; equals K exactly when the spectra are disjoint."""
        self._check_model(other)
        if isinstance(self.support, frozenset):
            return Overring(self.model, self.support & other.support)
        return Overring(self.model, self.support.intersect(other.support))

    def orthogonal(self) -> Overring:
        """The sublocalization cut out by the primes outside Sigma(T)."""
        if isinstance(self.support, frozenset):
            assert isinstance(self.model, SemilocalPrufer)
            return Overring(self.model, self.model.indices - self.support)
        return Overring(self.model, self.support.complement().closure())

    def subring_of(self, other: Overring) -> bool:
        """T is contained in S iff S localizes at fewer primes: supp(S) within Sigma(T)."""
        self._check_model(other)
        if isinstance(self.support, frozenset):
            return other.support <= self.support
        return other.support.subset_of(self.support)

    @staticmethod
    def intersect_all(overrings: Iterable[Overring]) -> Overring:
        """The intersection ring: supports accumulate by union."""
        items = list(overrings)
        if not items:
            raise ValueError("cannot intersect an empty collection of overrings")
        model = items[0].model
        acc = items[0]
        for t in items[1:]:
            acc._check_model(t)
            if isinstance(acc.support, frozenset):
                acc = Overring(model, acc.support | t.support)
            else:
                acc = Overring(model, acc.support.union(t.support))
        return acc


def sigma_Sigma(t: Overring) -> tuple[Support, Support]:
    """Both prime-tracking sets of a flat overring; equal by flatness.

    Also asserts, when the orthogonal is representable, that the two
    spectra cover the whole space.
    """
    try:
        ortho = t.orthogonal()
    except UnrepresentableResult:
        ortho = None
    if ortho is not None:
        if isinstance(t.support, frozenset):
            assert isinstance(t.model, SemilocalPrufer)
            covered = t.support | ortho.support
            if covered != t.model.indices:
                raise AssertionError("spectra of T and its orthogonal must cover Max")
        else:
            if not t.support.union(ortho.support).is_full():
                raise AssertionError("spectra of T and its orthogonal must cover Max")
    return (t.sigma, t.sigma)


def overring_product(a: Overring, b: Overring) -> Overring:
    return a.product(b)


def orthogonal(t: Overring) -> Overring:
    return t.orthogonal()


# ---------------------------------------------------------------------------
# Ideal sketches
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdealSketch:
    """A finitely presented value pattern, used only for survival tests."""

    entries: tuple[tuple[SetDescriptor, int], ...]

    def __post_init__(self) -> None:
        for _, value in self.entries:
            if value < 0:
                raise ValueError("sketch values are nonnegative")
        spaces = {d.space for d, _ in self.entries}
        if len(spaces) > 1:
            raise ValueError("sketch pieces live on different spaces")

    def support(self) -> SetDescriptor:
        """Where the sketch is positive."""
        if not self.entries:
            raise ValueError("empty sketch has no ambient space")
        acc = SetDescriptor.empty(self.entries[0][0].space)
        for desc, value in self.entries:
            if value > 0:
                acc = acc.union(desc)
        return acc


def ideal_survives(j: IdealSketch, t: Overring) -> bool:
    """Whether JT is still proper in T: the supports must meet."""
    if not isinstance(t.model, SequenceDomain):
        raise ValueError("survival tests run on sequence domains")
    assert isinstance(t.support, SetDescriptor)
    return not j.support().intersect(t.support).is_empty()
