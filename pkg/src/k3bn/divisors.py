"""Effectivity certificates, h^0 lower bounds, and divisor decomposition moves.

Everything here is a numeric shadow of statements about effective divisors on
a surface with an even class lattice: the sufficient criterion for
effectivity is Riemann-Roch style (chi >= 1 and positive degree), bounded
cone searches certify sums of declared (-2)-classes, and an honest Unknown is
returned when neither route applies.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from enum import Enum

from .errors import InconsistentGeometryError, InputError, PreconditionError
from .lattice import DivClass, GramLattice, QuasiPolarization

# Coefficient bound for the cone-membership search over declared roots.
DEFAULT_COEFF_BOUND = 10

# Hard cap on the size of the cone search, to keep pathological inputs from
# hanging; realistic root sets are tiny.
_MAX_SEARCH_STATES = 5_000_000


@dataclass(frozen=True)
class RootSet:
    """Declared classes of irreducible curves with self-intersection -2.

    Construction checks R^2 = -2 and R.H >= 0 for every root (a nef
    polarization has nonnegative degree on every irreducible curve).
    """

    pol: InitVar[QuasiPolarization]
    roots: tuple[DivClass, ...] = ()

    def __post_init__(self, pol: QuasiPolarization) -> None:
        roots = tuple(self.roots)
        lat = pol.lattice
        for k, r in enumerate(roots):
            lat._check(r)
            sq = lat.square(r)
            if sq != -2:
                raise InputError(f"roots[{k}] has square {sq}, expected -2")
            if pol.degree(r) < 0:
                raise InputError(
                    f"roots[{k}] has negative degree {pol.degree(r)} on the polarization"
                )
        object.__setattr__(self, "roots", roots)

    def __len__(self) -> int:
        return len(self.roots)


class Effectivity(Enum):
    EFFECTIVE = "Effective"
    NOT_EFFECTIVE = "NotEffective"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class EffectivityVerdict:
    """Outcome of an effectivity test together with its certificate.

    An Effective verdict always stores a certificate and a NotEffective
    verdict always stores an obstruction; Unknown is the honest third value.
    """

    status: Effectivity
    witness: str
    combination: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.status in (Effectivity.EFFECTIVE, Effectivity.NOT_EFFECTIVE) and not self.witness:
            raise InputError(f"a {self.status.value} verdict requires a stored witness")

    def __bool__(self) -> bool:
        return self.status is Effectivity.EFFECTIVE


def _root_combination(
    pol: QuasiPolarization,
    d: DivClass,
    roots: tuple[DivClass, ...],
    bound: int,
    allow_remainder: bool,
) -> tuple[tuple[int, ...], DivClass] | None:
    """Search c_j in [0, bound] with d - sum c_j R_j zero or RR-certified effective.

    Remainders are accepted only with positive degree and square >= -2, so a
    hit is always a sound effectivity certificate.  Returns (coefficients,
    remainder) or None.
    """
    lat = pol.lattice
    if (bound + 1) ** len(roots) > _MAX_SEARCH_STATES:
        raise InputError(
            "root combination search too large; lower the coefficient bound or declare fewer roots"
        )

    def leaf_ok(rem: DivClass) -> bool:
        if rem.is_zero:
            return True
        return allow_remainder and pol.degree(rem) > 0 and lat.square(rem) >= -2

    coeffs = [0] * len(roots)

    def dfs(idx: int, rem: DivClass) -> bool:
        # every remaining summand has nonnegative degree, so a negative-degree
        # remainder can never be completed
        if pol.degree(rem) < 0:
            return False
        if idx == len(roots):
            return leaf_ok(rem)
        cur = rem
        for c in range(bound + 1):
            coeffs[idx] = c
            if dfs(idx + 1, cur):
                return True
            cur = cur - roots[idx]
        coeffs[idx] = 0
        return False

    if dfs(0, d):
        rem = d
        for c, r in zip(coeffs, roots):
            rem = rem - c * r
        return tuple(coeffs), rem
    return None


def effectivity_status(
    pol: QuasiPolarization,
    d: DivClass,
    roots: RootSet | None = None,
    coeff_bound: int = DEFAULT_COEFF_BOUND,
) -> EffectivityVerdict:
    """Certify a class Effective / NotEffective, or report Unknown.

    Certificates, in order of attempt:
      * nonzero, positive degree and square >= -2 (chi >= 1 forces sections);
      * a bounded nonnegative combination of declared roots, possibly plus a
        remainder that carries its own Riemann-Roch certificate.
    Obstructions: the zero class, negative degree on the (nef) polarization,
    or degree zero with no bounded combination of degree-zero roots.
    """
    lat = pol.lattice
    lat._check(d)
    if coeff_bound < 0:
        raise InputError("coefficient bound must be nonnegative")
    if d.is_zero:
        return EffectivityVerdict(Effectivity.NOT_EFFECTIVE, "the zero class is excluded")
    deg = pol.degree(d)
    if deg < 0:
        return EffectivityVerdict(
            Effectivity.NOT_EFFECTIVE,
            f"degree {deg} < 0 on the polarization",
        )
    sq = lat.square(d)
    if deg > 0 and sq >= -2:
        return EffectivityVerdict(
            Effectivity.EFFECTIVE,
            f"chi = {sq // 2 + 2} >= 1 and degree {deg} > 0",
        )
    declared = roots.roots if roots is not None else ()
    if deg == 0:
        orth = tuple(r for r in declared if pol.degree(r) == 0)
        hit = _root_combination(pol, d, orth, coeff_bound, allow_remainder=False)
        if hit is not None:
            return EffectivityVerdict(
                Effectivity.EFFECTIVE,
                f"nonnegative combination of degree-zero roots, multiplicities {hit[0]}",
                combination=hit[0],
            )
        return EffectivityVerdict(
            Effectivity.NOT_EFFECTIVE,
            f"degree 0 and not a combination of degree-zero roots with coefficients <= {coeff_bound}",
        )
    hit = _root_combination(pol, d, declared, coeff_bound, allow_remainder=True)
    if hit is not None:
        coeffs, rem = hit
        tail = "zero remainder" if rem.is_zero else f"remainder {rem.coords} carries its own certificate"
        return EffectivityVerdict(
            Effectivity.EFFECTIVE,
            f"root multiplicities {coeffs}, {tail}",
            combination=coeffs,
        )
    return EffectivityVerdict(
        Effectivity.UNKNOWN,
        f"no certificate within coefficient bound {coeff_bound}",
    )


def h0_lower_bound(
    pol: QuasiPolarization,
    d: DivClass,
    roots: RootSet | None = None,
    coeff_bound: int = DEFAULT_COEFF_BOUND,
) -> int:
    """A valid lower bound for h^0 of a class already certified Effective.

    Base bound max(chi, 0); for a multiple k*P of a primitive isotropic class
    of positive degree the pencil count k + 1 is used instead when larger.
    """
    verdict = effectivity_status(pol, d, roots, coeff_bound)
    if verdict.status is not Effectivity.EFFECTIVE:
        raise PreconditionError(
            f"h0_lower_bound requires an Effective class, got {verdict.status.value}: {verdict.witness}"
        )
    lat = pol.lattice
    lb = max(lat.chi(d), 0)
    k = d.content()
    p = d.primitive()
    if lat.square(p) == 0 and pol.degree(p) > 0:
        lb = max(lb, k + 1)
    return lb


def reduce_fixed_components(
    pol: QuasiPolarization,
    parts: list[DivClass],
    delta: list[DivClass],
    roots: RootSet | None = None,
) -> list[DivClass]:
    """Absorb declared irreducible summands into the main parts.

    Input: H = sum(parts) + sum(delta) with every part effective and every
    delta entry a declared irreducible class (square >= -2).  Repeatedly the
    lexicographically smallest pair (i, j) with parts[i] . delta[j] >= 1
    absorbs delta[j]; each absorption can only grow the square of the part.
    Output sums to H with output[i]^2 >= parts[i]^2.
    """
    lat = pol.lattice
    if not parts:
        raise PreconditionError("parts must be nonempty")
    for k, dd in enumerate(delta):
        lat._check(dd)
        if lat.square(dd) < -2:
            raise InputError(f"delta[{k}] has square {lat.square(dd)} < -2; not an irreducible class")
    total = pol.lattice.zero()
    for p in parts:
        total = total + p
    for dd in delta:
        total = total + dd
    if total != pol.h:
        raise PreconditionError("parts and delta must sum to the polarization class")
    for k, p in enumerate(parts):
        if not effectivity_status(pol, p, roots):
            raise PreconditionError(f"parts[{k}] = {p.coords} is not certified effective")

    work = list(parts)
    remaining = list(delta)
    while remaining:
        hit = None
        for i, part in enumerate(work):
            for j, dd in enumerate(remaining):
                if lat.intersect(part, dd) >= 1:
                    hit = (i, j)
                    break
            if hit:
                break
        if hit is None:
            raise InconsistentGeometryError(
                "no part meets any remaining irreducible summand; "
                "the input violates numerical 1-connectedness of the polarization"
            )
        i, j = hit
        work[i] = work[i] + remaining.pop(j)
    return work


@dataclass(frozen=True)
class SameEllipticPencil:
    """Both classes are multiples (n1, n2) of one primitive isotropic class."""

    n1: int
    n2: int


@dataclass(frozen=True)
class SumSquareAtLeastFour:
    total_square: int


@dataclass(frozen=True)
class IncompatiblePair:
    """The numeric data cannot come from two fixed-component-free classes."""

    reason: str


def two_divisor_classification(
    lat: GramLattice, m1: DivClass, m2: DivClass
) -> SameEllipticPencil | SumSquareAtLeastFour | IncompatiblePair:
    """Dichotomy for two effective classes without fixed components.

    Zero product forces both classes onto a common elliptic pencil; positive
    product forces (M1 + M2)^2 >= 4.  A positive product with total square
    below 4 is reported (not raised) as an incompatible pair: the shadow is
    unrealizable by fixed-component-free classes under a 2-connected
    polarization.
    """
    sq1, sq2 = lat.square(m1), lat.square(m2)
    if sq1 < 0 or sq2 < 0:
        raise PreconditionError("both classes must have nonnegative square")
    m = lat.intersect(m1, m2)
    if m < 0:
        raise InconsistentGeometryError(
            f"product {m} < 0 is impossible for classes without fixed components"
        )
    if m == 0:
        if sq1 != 0 or sq2 != 0:
            raise InconsistentGeometryError(
                "orthogonal fixed-component-free classes must both be isotropic"
            )
        if m1.is_zero or m2.is_zero:
            raise PreconditionError("classes must be nonzero")
        p1, p2 = m1.primitive(), m2.primitive()
        if p1 != p2:
            raise InconsistentGeometryError(
                "orthogonal isotropic classes are not multiples of a common primitive class"
            )
        return SameEllipticPencil(m1.content(), m2.content())
    total = sq1 + sq2 + 2 * m
    if total >= 4:
        return SumSquareAtLeastFour(total)
    return IncompatiblePair(
        f"positive product {m} but (M1+M2)^2 = {total} < 4; "
        "incompatible with the two-divisor dichotomy"
    )
