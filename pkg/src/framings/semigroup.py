"""Finite *-semigroups with unit, given by explicit tables."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, TooManyAtoms

__all__ = [
    "FiniteStarSemigroup",
    "validate",
    "subset_semigroup",
    "cyclic_group",
    "MAX_ATOMS",
]

MAX_ATOMS = 12


@dataclass(frozen=True, eq=False)
class FiniteStarSemigroup:
    """Elements are ``0..n-1``; ``mul[a, b]`` is the product ``ab``."""

    mul: np.ndarray
    star: np.ndarray
    unit: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        mul = np.array(self.mul, dtype=np.int64)
        star = np.array(self.star, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise ShapeError(f"multiplication table must be square and nonempty, got {mul.shape}")
        n = mul.shape[0]
        if star.shape != (n,):
            raise ShapeError(f"involution table must have length {n}, got shape {star.shape}")
        if mul.min() < 0 or mul.max() >= n or star.min() < 0 or star.max() >= n:
            raise ShapeError(f"table entries must be element indices in 0..{n - 1}")
        if not 0 <= int(self.unit) < n:
            raise ShapeError(f"unit {self.unit} is not an element index")
        labels = self.labels
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise ShapeError(f"need {n} labels, got {len(labels)}")
        mul.setflags(write=False)
        star.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "star", star)
        object.__setattr__(self, "unit", int(self.unit))
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.mul.shape[0]

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def __len__(self):
        return self.n


def validate(sg: FiniteStarSemigroup, limit: int = 50) -> list[str]:
    """Exhaustively check the *-semigroup axioms.

    Returns a list of human-readable violations (empty when all hold).  At most
    ``limit`` violations per axiom are spelled out; a trailing entry gives the
    remaining count.
    """
    mul, star, u, n = sg.mul, sg.star, sg.unit, sg.n
    out: list[str] = []

    def report(kind, items, fmt):
        items = list(items)
        for it in items[:limit]:
            out.append(fmt(*it))
        if len(items) > limit:
            out.append(f"{kind}: {len(items) - limit} further violations")

    # associativity, one slab of the n^3 cube at a time
    bad = []
    for a in range(n):
        lhs = mul[mul[a]][:, :]          # (ab)c  indexed [b, c]
        rhs = mul[a][mul]                # a(bc)  indexed [b, c]
        for b, c in zip(*np.nonzero(lhs != rhs)):
            bad.append((a, int(b), int(c)))
            if len(bad) > limit:
                break
        if len(bad) > limit:
            break
    report("associativity", bad,
           lambda a, b, c: f"associativity fails for ({sg.label(a)}, {sg.label(b)}, {sg.label(c)})")

    report("unit", [(a,) for a in range(n) if mul[u, a] != a or mul[a, u] != a],
           lambda a: f"unit {sg.label(u)} does not fix {sg.label(a)}")
    report("involution", [(a,) for a in range(n) if star[star[a]] != a],
           lambda a: f"star(star({sg.label(a)})) != {sg.label(a)}")
    if star[u] != u:
        out.append(f"star(unit) = {sg.label(int(star[u]))} != unit")
    anti = np.nonzero(star[mul] != mul.T[star][:, star])
    report("anti-multiplicativity", list(zip(*(x.tolist() for x in anti))),
           lambda a, b: f"star({sg.label(a)}{sg.label(b)}) != star({sg.label(b)})star({sg.label(a)})")
    return out


def subset_semigroup(m: int) -> FiniteStarSemigroup:
    """All subsets of ``{0..m-1}`` under intersection, encoded as bitmasks.

    Element ``k`` is the set of atoms whose bits are set in ``k``; the unit is
    the full set and the involution is the identity.
    """
    if m < 1:
        raise ShapeError("need at least one atom")
    if m > MAX_ATOMS:
        raise TooManyAtoms(f"{m} atoms exceeds the cap of {MAX_ATOMS}")
    n = 1 << m
    k = np.arange(n)
    mul = k[:, None] & k[None, :]
    labels = tuple(format(i, f"0{m}b") for i in range(n))
    return FiniteStarSemigroup(mul, k.copy(), n - 1, labels)


def cyclic_group(n: int) -> FiniteStarSemigroup:
    """``Z_n`` written additively, with ``a* = -a``."""
    k = np.arange(n)
    return FiniteStarSemigroup((k[:, None] + k[None, :]) % n, (-k) % n, 0)
