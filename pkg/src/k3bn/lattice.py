"""Exact arithmetic in an even integer lattice.

The lattice models the divisor-class group of a surface together with its
intersection pairing: a symmetric integer Gram matrix with even diagonal.
Classes are plain integer coordinate vectors in a fixed basis; everything is
computed with exact (arbitrary-precision) integers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce
from math import gcd

from .errors import InputError


@dataclass(frozen=True)
class DivClass:
    """A divisor class: an integer coordinate vector in the lattice basis."""

    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        coords = tuple(self.coords)
        for c in coords:
            if not isinstance(c, int) or isinstance(c, bool):
                raise InputError(f"coordinates must be integers, got {c!r}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def content(self) -> int:
        """gcd of the coordinates (0 for the zero class)."""
        return reduce(gcd, (abs(c) for c in self.coords), 0)

    def primitive(self) -> "DivClass":
        """The primitive class on the same ray; undefined for the zero class."""
        c = self.content()
        if c == 0:
            raise InputError("the zero class has no primitive part")
        return DivClass(tuple(v // c for v in self.coords))

    def _match(self, other: "DivClass") -> None:
        if not isinstance(other, DivClass):
            raise InputError(f"expected a divisor class, got {other!r}")
        if other.dim != self.dim:
            raise InputError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "DivClass") -> "DivClass":
        self._match(other)
        return DivClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivClass") -> "DivClass":
        self._match(other)
        return DivClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "DivClass":
        return DivClass(tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> "DivClass":
        if not isinstance(k, int) or isinstance(k, bool):
            raise InputError("divisor classes scale by integers only")
        return DivClass(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"DivClass{self.coords}"


@dataclass(frozen=True)
class GramLattice:
    """A free abelian group of finite rank with an even symmetric pairing."""

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(entry for entry in row) for row in self.gram)
        n = len(rows)
        if n == 0:
            raise InputError("lattice rank must be positive")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise InputError(f"gram row {i} has length {len(row)}, expected {n}")
            for j, entry in enumerate(row):
                if not isinstance(entry, int) or isinstance(entry, bool):
                    raise InputError(f"gram[{i}][{j}] is not an integer: {entry!r}")
        for i in range(n):
            if rows[i][i] % 2 != 0:
                raise InputError(f"gram[{i}][{i}] = {rows[i][i]} is odd; the lattice must be even")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise InputError(f"gram is not symmetric at ({i}, {j})")
        object.__setattr__(self, "gram", rows)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def zero(self) -> DivClass:
        return DivClass((0,) * self.rank)

    def basis(self, i: int) -> DivClass:
        if not 0 <= i < self.rank:
            raise InputError(f"basis index {i} out of range for rank {self.rank}")
        return DivClass(tuple(1 if j == i else 0 for j in range(self.rank)))

    def _check(self, d: DivClass) -> None:
        if not isinstance(d, DivClass):
            raise InputError(f"expected a divisor class, got {d!r}")
        if d.dim != self.rank:
            raise InputError(f"class of length {d.dim} does not live in a rank-{self.rank} lattice")

    def intersect(self, d: DivClass, e: DivClass) -> int:
        """The intersection product d . e, i.e. d^T (gram) e."""
        self._check(d)
        self._check(e)
        total = 0
        for i, di in enumerate(d.coords):
            if di == 0:
                continue
            row = self.gram[i]
            total += di * sum(g * ej for g, ej in zip(row, e.coords))
        return total

    def square(self, d: DivClass) -> int:
        return self.intersect(d, d)

    def chi(self, d: DivClass) -> int:
        """Euler characteristic of the class: d^2/2 + 2 (exact; squares are even)."""
        return self.square(d) // 2 + 2

    def genus(self, d: DivClass) -> int:
        """Arithmetic genus of the class: d^2/2 + 1."""
        return self.square(d) // 2 + 1


def hyperbolic_plane() -> GramLattice:
    """The rank-2 lattice with Gram matrix [[0, 1], [1, 0]]."""
    return GramLattice(((0, 1), (1, 0)))


@dataclass(frozen=True)
class QuasiPolarization:
    """A distinguished class with positive square; nefness is an assertion.

    The lattice cannot decide nefness without a full description of the
    curve classes, so ``asserts_nef`` records the caller's claim.
    """

    lattice: GramLattice
    h: DivClass
    asserts_nef: bool = True

    def __post_init__(self) -> None:
        self.lattice._check(self.h)
        if self.lattice.square(self.h) <= 0:
            raise InputError(
                f"quasi-polarization must have positive square, got {self.lattice.square(self.h)}"
            )

    def degree(self, d: DivClass) -> int:
        """Degree of a class against the polarization: H . d."""
        return self.lattice.intersect(self.h, d)

    @property
    def genus(self) -> int:
        return self.lattice.genus(self.h)


def hyperbolic_plane_warnings(
    pol: QuasiPolarization, trials: int = 16, seed: int = 7
) -> list[str]:
    """Advisory diagnostic: sample 2-planes through H and test their type.

    On a surface the pairing has signature (1, rank-1), so the plane spanned
    by H (with H^2 > 0) and any independent class must have nonpositive Gram
    determinant.  A positive determinant means the input lattice cannot be a
    surface class group with H ample-like; callers get a warning, never an
    error -- the check is sampled, not exhaustive.
    """
    lat = pol.lattice
    h2 = lat.square(pol.h)
    rng = random.Random(seed)
    warnings: list[str] = []
    for _ in range(trials):
        d = DivClass(tuple(rng.randint(-3, 3) for _ in range(lat.rank)))
        if d.is_zero:
            continue
        det2 = h2 * lat.square(d) - pol.degree(d) ** 2
        if det2 > 0:
            warnings.append(
                f"plane spanned by H and {d.coords} has positive Gram determinant {det2}; "
                "the form does not look hyperbolic"
            )
            break
    return warnings
