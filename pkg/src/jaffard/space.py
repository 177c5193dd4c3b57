"""Presented compact zero-dimensional spaces and Cantor-Bendixson calculus.

A ``PresentedSpace`` is a finite disjoint sum of three kinds of atoms:

* ``Discrete(n)``        n isolated points, addressed 0..n-1;
* ``OrdinalInterval``    the interval [0, w^rank * copies] with the
                         order topology, points addressed by ordinals;
* ``Cantor``             a perfect compact zero-dimensional block with
                         no individually addressable points.

Subsets the library can talk about are ``SetDescriptor`` values: one
piece per atom, drawn from a small closed fragment (empty, everything,
a finite point set, a Cantor-Bendixson level, or a level minus finitely
many points).  Every constructor canonicalizes its piece, so descriptor
equality is structural.  Operations whose true result escapes the
fragment raise ``UnrepresentableResult`` instead of approximating.

``FinitePoset`` models finite spectral spaces directly; isolated points
are read off the open-set definition in either the Zariski or the
inverse topology.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union

from .ordinal import OMEGA, ONE, ZERO, Ordinal


class UnrepresentableResult(Exception):
    """The exact result of a set operation escapes the descriptor fragment."""


# ---------------------------------------------------------------------------
# Finite spectral spaces
# ---------------------------------------------------------------------------


class Topology(Enum):
    ZARISKI = "zariski"
    INVERSE = "inverse"


@dataclass(frozen=True)
class FinitePoset:
    """A finite poset, read as a finite spectral space.

    ``x <= y`` means y is a specialization of x, so Zariski-closed sets
    are the up-closed sets and inverse-closed sets are the down-closed
    ones.
    """

    points: tuple[str, ...]
    leq: frozenset[tuple[str, str]]

    @staticmethod
    def build(points: Iterable[str], below: Iterable[tuple[str, str]]) -> FinitePoset:
        """Build from generating pairs (x, y) with x <= y; closure is taken."""
        pts = tuple(points)
        index = set(pts)
        if len(index) != len(pts):
            raise ValueError("duplicate points")
        rel = {(p, p) for p in pts}
        for x, y in below:
            if x not in index or y not in index:
                raise ValueError(f"pair ({x}, {y}) uses unknown points")
            rel.add((x, y))
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in itertools.product(tuple(rel), tuple(rel)):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
        for x, y in rel:
            if x != y and (y, x) in rel:
                raise ValueError(f"antisymmetry fails on {x}, {y}")
        return FinitePoset(pts, frozenset(rel))

    def is_below(self, x: str, y: str) -> bool:
        return (x, y) in self.leq

    def down_set(self, x: str) -> frozenset[str]:
        return frozenset(y for y in self.points if self.is_below(y, x))

    def up_set(self, x: str) -> frozenset[str]:
        return frozenset(y for y in self.points if self.is_below(x, y))

    def is_open(self, subset: frozenset[str], topology: Topology) -> bool:
        """Open sets are generization-closed (Zariski) or specialization-closed (inverse)."""
        if topology is Topology.ZARISKI:
            return all(self.down_set(x) <= subset for x in subset)
        return all(self.up_set(x) <= subset for x in subset)

    def is_closed(self, subset: frozenset[str], topology: Topology) -> bool:
        return self.is_open(frozenset(self.points) - subset, topology)


def finite_isolated_points(poset: FinitePoset, topology: Topology) -> frozenset[str]:
    """Points whose singleton is open in the chosen topology."""
    return frozenset(
        x for x in poset.points if poset.is_open(frozenset({x}), topology)
    )


# ---------------------------------------------------------------------------
# Atoms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Discrete:
    size: int

    def __post_init__(self) -> None:
        if self.size < 0:
            raise ValueError("size must be nonnegative")


@dataclass(frozen=True)
class OrdinalInterval:
    """The ordinal interval [0, w^rank * copies] with the order topology."""

    rank: Ordinal
    copies: int

    def __post_init__(self) -> None:
        if self.copies < 0:
            raise ValueError("copies must be nonnegative")
        for exp, _ in self.rank.terms:
            if not exp.is_finite():
                raise ValueError("interval ranks must have finite CNF exponents")

    @property
    def top(self) -> Ordinal:
        return Ordinal.omega_power(self.rank, self.copies)


@dataclass(frozen=True)
class Cantor:
    pass


Atom = Union[Discrete, OrdinalInterval, Cantor]

Point = Union[int, Ordinal]


def _atom_sort_key(atom: Atom):
    if isinstance(atom, Discrete):
        return (0, ZERO, atom.size)
    if isinstance(atom, OrdinalInterval):
        return (1, atom.rank, atom.copies)
    return (2, ZERO, 0)


def _valid_point(atom: Atom, p: Point) -> bool:
    if isinstance(atom, Discrete):
        return isinstance(p, int) and 0 <= p < atom.size
    if isinstance(atom, OrdinalInterval):
        return isinstance(p, Ordinal) and p <= atom.top
    return False


def level_contains(atom: Atom, index: Ordinal, p: Point) -> bool:
    """Membership of a point in the Cantor-Bendixson level of its atom."""
    if isinstance(atom, Discrete):
        return index.is_zero()
    if isinstance(atom, Cantor):
        raise UnrepresentableResult("Cantor atoms have no addressable points")
    if index.is_zero():
        return True
    assert isinstance(p, Ordinal)
    if p.is_zero():
        return False
    return p.least_exponent() >= index


def _interval_level_points(atom: OrdinalInterval, index: Ordinal) -> frozenset[Ordinal]:
    """The level set when it is finite; only valid for index == rank."""
    if index != atom.rank:
        raise ValueError("only the top level of an interval is finite")
    return frozenset(
        Ordinal.omega_power(atom.rank, k) for k in range(1, atom.copies + 1)
    )


# ---------------------------------------------------------------------------
# Descriptor pieces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class All:
    pass


@dataclass(frozen=True)
class FinitePoints:
    points: frozenset

    @staticmethod
    def of(pts: Iterable[Point]) -> FinitePoints:
        return FinitePoints(frozenset(pts))


@dataclass(frozen=True)
class Level:
    index: Ordinal


@dataclass(frozen=True)
class LevelMinusFinite:
    index: Ordinal
    removed: frozenset


Piece = Union[Empty, All, FinitePoints, Level, LevelMinusFinite]

EMPTY = Empty()
ALL = All()


def _point_sort_key(p: Point):
    if isinstance(p, int):
        return (0, p)
    return (1, p)


def sorted_points(pts: Iterable[Point]) -> list[Point]:
    by_kind: dict[int, list] = {0: [], 1: []}
    for p in pts:
        by_kind[0 if isinstance(p, int) else 1].append(p)
    return sorted(by_kind[0]) + sorted(by_kind[1])


def canon_piece(atom: Atom, piece: Piece) -> Piece:
    """Rewrite a piece into the unique canonical form for its atom."""
    if isinstance(piece, Empty):
        return EMPTY
    if isinstance(atom, Cantor):
        if isinstance(piece, All):
            return ALL
        if isinstance(piece, Level):
            return ALL
        raise UnrepresentableResult("Cantor atoms have no addressable points")
    if isinstance(piece, All):
        return ALL

    if isinstance(atom, Discrete):
        if isinstance(piece, Level):
            return ALL if piece.index.is_zero() else EMPTY
        if isinstance(piece, LevelMinusFinite):
            if not piece.index.is_zero():
                return EMPTY
            piece = FinitePoints(
                frozenset(range(atom.size)) - frozenset(piece.removed)
            )
        assert isinstance(piece, FinitePoints)
        for p in piece.points:
            if not _valid_point(atom, p):
                raise ValueError(f"{p!r} is not a point of {atom}")
        if not piece.points:
            return EMPTY
        if len(piece.points) == atom.size:
            return ALL
        return piece

    assert isinstance(atom, OrdinalInterval)
    if isinstance(piece, FinitePoints):
        for p in piece.points:
            if not _valid_point(atom, p):
                raise ValueError(f"{p!r} is not a point of {atom}")
        if not piece.points:
            return EMPTY
        if atom.rank.is_zero() and len(piece.points) == atom.copies + 1:
            return ALL
        return piece
    if isinstance(piece, Level):
        j = piece.index
        if j.is_zero():
            return ALL
        if j > atom.rank:
            return EMPTY
        if j == atom.rank:
            return FinitePoints(_interval_level_points(atom, j))
        return piece
    assert isinstance(piece, LevelMinusFinite)
    j = piece.index
    if j > atom.rank:
        return EMPTY
    removed = frozenset(
        p for p in piece.removed
        if _valid_point(atom, p) and level_contains(atom, j, p)
    )
    if not removed:
        return canon_piece(atom, Level(j))
    if j == atom.rank and not j.is_zero():
        return canon_piece(atom, FinitePoints(_interval_level_points(atom, j) - removed))
    if j.is_zero() and atom.rank.is_zero():
        full = frozenset(Ordinal.from_int(k) for k in range(atom.copies + 1))
        return canon_piece(atom, FinitePoints(full - removed))
    return LevelMinusFinite(j, removed)


# -- per-piece set algebra (canonical in, canonical out) -------------------


def _piece_level_base(piece: Piece) -> Ordinal | None:
    """The level index of a Level or LevelMinusFinite piece (All reads as level 0)."""
    if isinstance(piece, All):
        return ZERO
    if isinstance(piece, Level):
        return piece.index
    if isinstance(piece, LevelMinusFinite):
        return piece.index
    return None


def _piece_removed(piece: Piece) -> frozenset:
    if isinstance(piece, LevelMinusFinite):
        return piece.removed
    return frozenset()


def piece_contains(atom: Atom, piece: Piece, p: Point) -> bool:
    if not _valid_point(atom, p):
        raise ValueError(f"{p!r} is not a point of {atom}")
    if isinstance(piece, Empty):
        return False
    if isinstance(piece, All):
        return True
    if isinstance(piece, FinitePoints):
        return p in piece.points
    if isinstance(piece, Level):
        return level_contains(atom, piece.index, p)
    assert isinstance(piece, LevelMinusFinite)
    return level_contains(atom, piece.index, p) and p not in piece.removed


def piece_intersect(atom: Atom, a: Piece, b: Piece) -> Piece:
    if isinstance(a, Empty) or isinstance(b, Empty):
        return EMPTY
    if isinstance(a, All):
        return b
    if isinstance(b, All):
        return a
    if isinstance(b, FinitePoints) and not isinstance(a, FinitePoints):
        a, b = b, a
    if isinstance(a, FinitePoints):
        return canon_piece(
            atom, FinitePoints(frozenset(p for p in a.points if piece_contains(atom, b, p)))
        )
    ja, jb = _piece_level_base(a), _piece_level_base(b)
    assert ja is not None and jb is not None
    j = max(ja, jb)
    removed = _piece_removed(a) | _piece_removed(b)
    return canon_piece(atom, LevelMinusFinite(j, removed))


def piece_union(atom: Atom, a: Piece, b: Piece) -> Piece:
    if isinstance(a, Empty):
        return b
    if isinstance(b, Empty):
        return a
    if isinstance(a, All) or isinstance(b, All):
        return ALL
    if isinstance(a, FinitePoints) and isinstance(b, FinitePoints):
        return canon_piece(atom, FinitePoints(a.points | b.points))
    if isinstance(b, FinitePoints):
        a, b = b, a
    if isinstance(a, FinitePoints):
        # finite extras are absorbed only if they already sit in the level part
        jb = _piece_level_base(b)
        assert jb is not None
        outside = frozenset(
            p for p in a.points if not level_contains(atom, jb, p)
        )
        if outside:
            raise UnrepresentableResult(
                "union of a level piece with points outside the level"
            )
        return canon_piece(atom, LevelMinusFinite(jb, _piece_removed(b) - a.points))
    ja, jb = _piece_level_base(a), _piece_level_base(b)
    assert ja is not None and jb is not None
    if jb < ja:
        a, b = b, a
        ja, jb = jb, ja
    # a covers the lower level j; survivors of b fill removed points back in
    removed = frozenset(
        p for p in _piece_removed(a)
        if not piece_contains(atom, b, p)
    )
    return canon_piece(atom, LevelMinusFinite(ja, removed))


def piece_complement(atom: Atom, a: Piece) -> Piece:
    if isinstance(a, Empty):
        return ALL
    if isinstance(a, All):
        return EMPTY
    if isinstance(atom, Discrete):
        assert isinstance(a, FinitePoints)
        return canon_piece(atom, FinitePoints(frozenset(range(atom.size)) - a.points))
    assert isinstance(atom, OrdinalInterval)
    if isinstance(a, FinitePoints):
        return canon_piece(atom, LevelMinusFinite(ZERO, a.points))
    if isinstance(a, LevelMinusFinite) and a.index.is_zero():
        return canon_piece(atom, FinitePoints(a.removed))
    raise UnrepresentableResult("complement of an infinite level piece")


def piece_difference(atom: Atom, a: Piece, b: Piece) -> Piece:
    if isinstance(a, Empty) or isinstance(b, All):
        return EMPTY
    if isinstance(b, Empty):
        return a
    if isinstance(a, FinitePoints):
        return canon_piece(
            atom,
            FinitePoints(frozenset(p for p in a.points if not piece_contains(atom, b, p))),
        )
    if isinstance(b, FinitePoints):
        ja = _piece_level_base(a)
        assert ja is not None
        return canon_piece(
            atom, LevelMinusFinite(ja, _piece_removed(a) | b.points)
        )
    ja, jb = _piece_level_base(a), _piece_level_base(b)
    assert ja is not None and jb is not None
    if jb <= ja:
        # removing a wider level: only b's removed points can survive
        survivors = frozenset(
            p for p in _piece_removed(b) if piece_contains(atom, a, p)
        )
        return canon_piece(atom, FinitePoints(survivors))
    raise UnrepresentableResult("difference leaves an infinite co-level set")


def piece_closure(atom: Atom, a: Piece) -> Piece:
    if isinstance(a, LevelMinusFinite):
        assert isinstance(atom, OrdinalInterval)
        next_level = a.index + ONE
        kept_out = frozenset(
            p for p in a.removed if not level_contains(atom, next_level, p)
        )
        return canon_piece(atom, LevelMinusFinite(a.index, kept_out))
    return a


def piece_is_closed(atom: Atom, a: Piece) -> bool:
    return piece_closure(atom, a) == a


def piece_derivative(atom: Atom, a: Piece) -> Piece:
    """Set of limit points of the piece within the ambient atom.

    Removing finitely many points never destroys a limit point here
    (approach sequences are infinite), so the removed set of a level
    piece does not propagate.
    """
    if isinstance(a, Empty):
        return EMPTY
    if isinstance(atom, Cantor):
        return ALL
    if isinstance(atom, Discrete):
        return EMPTY
    if isinstance(a, FinitePoints):
        return EMPTY
    base = _piece_level_base(a)
    assert base is not None
    return canon_piece(atom, LevelMinusFinite(base + ONE, frozenset()))


def piece_omega_limit(atom: Atom, a: Piece) -> Piece:
    """Intersection of the piece with its full derivative chain.

    This is the limit-stage operator of the derived-sequence engine,
    not the transfinite derivative: stages only ever shed members, so
    points removed from a level piece stay removed across the jump.
    """
    if isinstance(a, Empty):
        return EMPTY
    if isinstance(atom, Cantor):
        return ALL
    if isinstance(atom, Discrete):
        return EMPTY
    if isinstance(a, FinitePoints):
        return EMPTY
    base = _piece_level_base(a)
    assert base is not None
    return canon_piece(atom, LevelMinusFinite(base + OMEGA, _piece_removed(a)))


def piece_has_finite_horizon(atom: Atom, a: Piece) -> bool:
    """Whether the derivative chain of the piece stabilizes in finitely many steps."""
    if not isinstance(atom, OrdinalInterval):
        return True
    base = _piece_level_base(a)
    if base is None:
        return True
    return atom.rank < base + OMEGA


# ---------------------------------------------------------------------------
# Presented spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtomLocation:
    """Where an input atom landed after normalization."""

    atom_index: int
    point_offset: int = 0

    def map_point(self, p: Point) -> Point:
        if self.point_offset and isinstance(p, int):
            return p + self.point_offset
        return p


@dataclass(frozen=True)
class PresentedSpace:
    """A normalized disjoint sum of atoms.

    Normal form: at most one Discrete atom, placed first; intervals
    sorted by (rank, copies); Cantor atoms last; no empty atoms.  Use
    ``build`` to normalize arbitrary atom lists.
    """

    atoms: tuple[Atom, ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ValueError("a presented space needs at least one atom")
        normal, _ = _normalize(self.atoms)
        if normal != self.atoms:
            raise ValueError(
                "atoms are not in normal form; use PresentedSpace.build"
            )

    @staticmethod
    def build(atoms: Iterable[Atom]) -> tuple[PresentedSpace, list[AtomLocation]]:
        normal, locations = _normalize(tuple(atoms))
        return PresentedSpace(normal), locations

    @staticmethod
    def of(*atoms: Atom) -> PresentedSpace:
        space, _ = PresentedSpace.build(atoms)
        return space

    def is_scattered_presentation(self) -> bool:
        return not any(isinstance(a, Cantor) for a in self.atoms)


def _normalize(atoms: tuple[Atom, ...]) -> tuple[tuple[Atom, ...], list[AtomLocation]]:
    kept: list[tuple[int, Atom]] = []
    dropped: set[int] = set()
    for i, atom in enumerate(atoms):
        if isinstance(atom, Discrete) and atom.size == 0:
            dropped.add(i)
        elif isinstance(atom, OrdinalInterval) and atom.copies == 0:
            dropped.add(i)
        else:
            kept.append((i, atom))
    discretes = [(i, a) for i, a in kept if isinstance(a, Discrete)]
    rest = [(i, a) for i, a in kept if not isinstance(a, Discrete)]
    rest.sort(key=lambda pair: _atom_sort_key(pair[1]))

    normal: list[Atom] = []
    locations: dict[int, AtomLocation] = {}
    if discretes:
        offset = 0
        for i, a in discretes:
            locations[i] = AtomLocation(0, offset)
            offset += a.size
        normal.append(Discrete(offset))
    for i, a in rest:
        locations[i] = AtomLocation(len(normal))
        normal.append(a)
    if not normal:
        raise ValueError("a presented space needs at least one nonempty atom")
    loc_list = [
        locations.get(i, AtomLocation(-1)) if i not in dropped else AtomLocation(-1)
        for i in range(len(atoms))
    ]
    return tuple(normal), loc_list


# ---------------------------------------------------------------------------
# Set descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SetDescriptor:
    """A subset of a presented space, one canonical piece per atom."""

    space: PresentedSpace
    pieces: tuple[Piece, ...]

    def __post_init__(self) -> None:
        if len(self.pieces) != len(self.space.atoms):
            raise ValueError("descriptor needs exactly one piece per atom")
        canon = tuple(
            canon_piece(atom, piece)
            for atom, piece in zip(self.space.atoms, self.pieces)
        )
        object.__setattr__(self, "pieces", canon)

    # -- constructors --------------------------------------------------

    @staticmethod
    def empty(space: PresentedSpace) -> SetDescriptor:
        return SetDescriptor(space, tuple(EMPTY for _ in space.atoms))

    @staticmethod
    def full(space: PresentedSpace) -> SetDescriptor:
        return SetDescriptor(space, tuple(ALL for _ in space.atoms))

    @staticmethod
    def on_atoms(space: PresentedSpace, chosen: dict[int, Piece]) -> SetDescriptor:
        pieces = [EMPTY] * len(space.atoms)
        for idx, piece in chosen.items():
            pieces[idx] = piece
        return SetDescriptor(space, tuple(pieces))

    @staticmethod
    def points_of(space: PresentedSpace, pts: Iterable[tuple[int, Point]]) -> SetDescriptor:
        grouped: dict[int, set] = {}
        for idx, p in pts:
            grouped.setdefault(idx, set()).add(p)
        return SetDescriptor.on_atoms(
            space, {idx: FinitePoints(frozenset(g)) for idx, g in grouped.items()}
        )

    # -- queries ---------------------------------------------------------

    def is_empty(self) -> bool:
        return all(isinstance(p, Empty) for p in self.pieces)

    def is_full(self) -> bool:
        return all(isinstance(p, All) for p in self.pieces)

    def contains(self, atom_index: int, p: Point) -> bool:
        return piece_contains(self.space.atoms[atom_index], self.pieces[atom_index], p)

    def finite_points(self) -> list[tuple[int, Point]]:
        """Enumerate the set when finite, else raise UnrepresentableResult."""
        out: list[tuple[int, Point]] = []
        for idx, (atom, piece) in enumerate(zip(self.space.atoms, self.pieces)):
            if isinstance(piece, Empty):
                continue
            if isinstance(piece, FinitePoints):
                out.extend((idx, p) for p in sorted_points(piece.points))
            elif isinstance(piece, All) and isinstance(atom, Discrete):
                out.extend((idx, p) for p in range(atom.size))
            elif isinstance(piece, All) and isinstance(atom, OrdinalInterval) \
                    and atom.rank.is_zero():
                out.extend(
                    (idx, Ordinal.from_int(k)) for k in range(atom.copies + 1)
                )
            else:
                raise UnrepresentableResult("set is not finite")
        return out

    def finite_size(self) -> int | None:
        try:
            return len(self.finite_points())
        except UnrepresentableResult:
            return None

    def is_closed(self) -> bool:
        return all(
            piece_is_closed(atom, piece)
            for atom, piece in zip(self.space.atoms, self.pieces)
        )

    # -- algebra ----------------------------------------------------------

    def _zip(self, other: SetDescriptor, op) -> SetDescriptor:
        if self.space != other.space:
            raise ValueError("descriptors live on different spaces")
        return SetDescriptor(
            self.space,
            tuple(
                op(atom, a, b)
                for atom, a, b in zip(self.space.atoms, self.pieces, other.pieces)
            ),
        )

    def intersect(self, other: SetDescriptor) -> SetDescriptor:
        return self._zip(other, piece_intersect)

    def union(self, other: SetDescriptor) -> SetDescriptor:
        return self._zip(other, piece_union)

    def difference(self, other: SetDescriptor) -> SetDescriptor:
        return self._zip(other, piece_difference)

    def complement(self) -> SetDescriptor:
        return SetDescriptor(
            self.space,
            tuple(
                piece_complement(atom, piece)
                for atom, piece in zip(self.space.atoms, self.pieces)
            ),
        )

    def closure(self) -> SetDescriptor:
        return SetDescriptor(
            self.space,
            tuple(
                piece_closure(atom, piece)
                for atom, piece in zip(self.space.atoms, self.pieces)
            ),
        )

    def subset_of(self, other: SetDescriptor) -> bool:
        return self.intersect(other) == self


# ---------------------------------------------------------------------------
# Cantor-Bendixson operators
# ---------------------------------------------------------------------------


def cb_derivative(s: PresentedSpace | SetDescriptor) -> SetDescriptor:
    """The set of non-isolated points of the (sub)space, as a descriptor."""
    if isinstance(s, PresentedSpace):
        s = SetDescriptor.full(s)
    return SetDescriptor(
        s.space,
        tuple(
            piece_derivative(atom, piece)
            for atom, piece in zip(s.space.atoms, s.pieces)
        ),
    )


def omega_limit(s: SetDescriptor) -> SetDescriptor:
    """The intersection of the whole finite derivative chain of s."""
    return SetDescriptor(
        s.space,
        tuple(
            piece_omega_limit(atom, piece)
            for atom, piece in zip(s.space.atoms, s.pieces)
        ),
    )


def has_finite_horizon(s: SetDescriptor) -> bool:
    return all(
        piece_has_finite_horizon(atom, piece)
        for atom, piece in zip(s.space.atoms, s.pieces)
    )


def _atom_iterate(atom: Atom, alpha: Ordinal) -> Piece:
    if alpha.is_zero():
        return ALL
    if isinstance(atom, Discrete):
        return EMPTY
    if isinstance(atom, Cantor):
        return ALL
    return canon_piece(atom, Level(alpha))


def cb_iterate(s: PresentedSpace, alpha: Ordinal) -> SetDescriptor:
    """The alpha-th Cantor-Bendixson derivative of the whole space.

    Computed in closed form per atom; limit stages agree with the
    intersection of all earlier stages because levels are decreasing.
    """
    return SetDescriptor(s, tuple(_atom_iterate(atom, alpha) for atom in s.atoms))


def cb_rank(s: PresentedSpace) -> Ordinal:
    """Least alpha with the alpha-th derivative equal to the next one."""
    best = ZERO
    for atom in s.atoms:
        if isinstance(atom, Discrete):
            r = ONE
        elif isinstance(atom, OrdinalInterval):
            r = atom.rank + ONE
        else:
            r = ZERO
        if r > best:
            best = r
    return best


def is_scattered(s: PresentedSpace) -> bool:
    """True iff the perfect kernel (the stable derivative) is empty."""
    return cb_iterate(s, cb_rank(s)).is_empty()
