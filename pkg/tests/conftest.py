"""Shared corpus of presented spaces for the cross-module tests."""

from __future__ import annotations

import random

from jaffard.ordinal import Ordinal, compare, parse_ordinal
from jaffard.space import Cantor, Discrete, OrdinalInterval, PresentedSpace

CORPUS_SEED = 20260814
CORPUS_SIZE = 24
MAX_RANK = 5
MAX_COPIES = 3


def corpus_spaces(count: int = CORPUS_SIZE, seed: int = CORPUS_SEED,
                  with_cantor: bool = True) -> list[PresentedSpace]:
    """Reproducible random spaces with interval ranks up to MAX_RANK."""
    rng = random.Random(seed)
    spaces = []
    while len(spaces) < count:
        kinds = ["discrete", "interval", "interval"]
        if with_cantor:
            kinds.append("cantor")
        atoms = []
        for _ in range(rng.randint(1, 3)):
            kind = rng.choice(kinds)
            if kind == "discrete":
                atoms.append(Discrete(rng.randint(1, 3)))
            elif kind == "interval":
                atoms.append(OrdinalInterval(
                    Ordinal.from_int(rng.randint(0, MAX_RANK)),
                    rng.randint(1, MAX_COPIES),
                ))
            else:
                atoms.append(Cantor())
        space, _ = PresentedSpace.build(atoms)
        spaces.append(space)
    return spaces


_INTERVAL_POOL = [
    "1", "4", "w", "w + 1", "w*2", "w^2", "w^2 + w", "w^3", "w^4", "w^5",
]


def sample_finite_points(space: PresentedSpace) -> list[tuple[int, Ordinal]]:
    """A small grid of representable points on each non-perfect atom."""
    pts: list[tuple[int, Ordinal]] = []
    for idx, atom in enumerate(space.atoms):
        if isinstance(atom, Discrete):
            pts.extend((idx, k) for k in range(atom.size))
        elif isinstance(atom, OrdinalInterval) and atom.copies:
            top = Ordinal.omega_power(atom.rank, atom.copies)
            pool = [Ordinal.from_int(0)]
            pool.extend(parse_ordinal(text) for text in _INTERVAL_POOL)
            pool.extend(
                Ordinal.omega_power(atom.rank, k)
                for k in range(1, atom.copies + 1)
            )
            seen = set()
            for p in pool:
                if compare(p, top) <= 0 and p not in seen:
                    seen.add(p)
                    pts.append((idx, p))
    return pts
