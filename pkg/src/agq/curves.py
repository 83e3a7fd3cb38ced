"""Curve families, their rational-point fibers, and one-point monomial bases.

Six families share one interface: the projective line, a supersingular
elliptic curve in even characteristic, the hyperelliptic curve
y^2+y = x^(q+1), the Hermitian curve y^q+y = x^(q+1), its half-exponent
variant y^q+y = x^((q+1)/2), and Artin-Schreier curves y^q-y = x^t.
Riemann-Roch spaces of (k-1)*P_inf are represented purely by monomial
exponent pairs (i, j) inside the Weierstrass semigroup at P_inf.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd

from .errors import (
    BadCharacteristic,
    BadTraceConstant,
    EmptyFiber,
    GcdConditionViolated,
    UnsupportedFamily,
)
from .fields import AdditiveMap, FieldElement, FieldTower
from .points import EvaluationSet, explicit_set, roots_of_unity_set


class CurveFamily(Enum):
    LINE = "line"
    ELLIPTIC = "elliptic"
    HYPERELLIPTIC = "hyperelliptic"
    HERMITIAN = "hermitian"
    SEMI_HERMITIAN = "semi_hermitian"
    ARTIN_SCHREIER = "artin_schreier"


@dataclass(frozen=True)
class CurveSpec:
    family: CurveFamily
    tower: FieldTower
    genus: int
    pole_x: int
    pole_y: int
    y_degree: int
    t: int | None = None
    c: FieldElement | None = None

    def label(self) -> str:
        extra = ""
        if self.t is not None:
            extra = f"(t={self.t})"
        if self.c is not None:
            extra = f"(c={self.tower.format(self.c)})"
        return f"{self.family.value}{extra}"


@dataclass(frozen=True)
class MonomialBasis:
    """Ordered exponent pairs (i, j) for x^i y^j, sorted by pole order."""

    monomials: tuple
    pole_x: int
    pole_y: int

    def __len__(self):
        return len(self.monomials)


def absolute_trace(el: FieldElement) -> FieldElement:
    """Trace from GF(p^{2m}) down to GF(p)."""
    acc = el
    cur = el
    for _ in range(2 * el.tower.m - 1):
        cur = cur ** el.tower.p
        acc = acc + cur
    return acc


def semigroup_gap_count(a: int, b: int) -> int:
    """Number of gaps of the numerical semigroup <a, b> (gcd(a,b)=1)."""
    if gcd(a, b) != 1:
        raise ValueError("generators must be coprime")
    bound = a * b - a - b + 1
    reachable = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for s in frontier:
            for g in (a, b):
                v = s + g
                if v <= bound + max(a, b) and v not in reachable:
                    reachable.add(v)
                    nxt.append(v)
        frontier = nxt
    return sum(1 for v in range(1, bound + 1) if v not in reachable)


def _default_elliptic_constant(tower: FieldTower) -> FieldElement:
    # degree of the top field over GF(2) is 2m: constant is 0 when 2m = 2 mod 4,
    # otherwise the smallest generator power with absolute trace 1
    if tower.m % 2 == 1:
        return tower.zero()
    for e in range(tower.n_units):
        cand = tower.element(e)
        if absolute_trace(cand).is_one():
            return cand
    raise AssertionError("no trace-one element found")


def curve(
    family: CurveFamily,
    tower: FieldTower,
    t: int | None = None,
    c: FieldElement | None = None,
) -> CurveSpec:
    q = tower.q
    if family is CurveFamily.LINE:
        return CurveSpec(family, tower, genus=0, pole_x=1, pole_y=0, y_degree=1)
    if family is CurveFamily.ELLIPTIC:
        if tower.p != 2:
            raise BadCharacteristic("elliptic family needs characteristic 2")
        if c is None:
            c = _default_elliptic_constant(tower)
        if tower.m % 2 == 1:
            if not c.is_zero():
                raise BadTraceConstant("constant must be 0 when 2m = 2 mod 4")
        elif not absolute_trace(c).is_one():
            raise BadTraceConstant("constant must have absolute trace 1 when 2m = 0 mod 4")
        return CurveSpec(family, tower, genus=1, pole_x=2, pole_y=3, y_degree=2, c=c)
    if family is CurveFamily.HYPERELLIPTIC:
        if tower.p != 2:
            raise BadCharacteristic("hyperelliptic family needs characteristic 2")
        return CurveSpec(family, tower, genus=q // 2, pole_x=2, pole_y=q + 1, y_degree=2)
    if family is CurveFamily.HERMITIAN:
        return CurveSpec(
            family, tower, genus=q * (q - 1) // 2, pole_x=q, pole_y=q + 1, y_degree=q
        )
    if family is CurveFamily.SEMI_HERMITIAN:
        if q % 2 == 0:
            raise BadCharacteristic("half-exponent Hermitian family needs odd q")
        return CurveSpec(
            family,
            tower,
            genus=(q - 1) ** 2 // 4,
            pole_x=q,
            pole_y=(q + 1) // 2,
            y_degree=q,
        )
    if family is CurveFamily.ARTIN_SCHREIER:
        if t is None or t < 1:
            raise ValueError("Artin-Schreier family needs a positive exponent t")
        if q % 2 == 1:
            if ((q + 1) // 2) % gcd(t, q + 1) != 0:
                raise GcdConditionViolated("gcd(t, q+1) must divide (q+1)/2")
        elif t % 2 == 0:
            raise GcdConditionViolated("even q needs odd t")
        return CurveSpec(
            family,
            tower,
            genus=(q - 1) * (t - 1) // 2,
            pole_x=q,
            pole_y=t,
            y_degree=q,
            t=t,
        )
    raise UnsupportedFamily(str(family))


def x_support(spec: CurveSpec, selector: EvaluationSet | None = None) -> EvaluationSet:
    """Admissible x-coordinates (x-values whose fiber is full).

    Hyperelliptic and Hermitian curves take a caller-supplied subset of the
    plane (any point-set family); the default is the full field.  The other
    families have a canonical support.
    """
    tower = spec.tower
    q = tower.q
    if spec.family is CurveFamily.LINE:
        raise UnsupportedFamily("the line takes its points directly from the point-set module")
    if spec.family in (CurveFamily.HYPERELLIPTIC, CurveFamily.HERMITIAN):
        if selector is not None:
            return selector
        return roots_of_unity_set(tower, tower.q2)
    if selector is not None:
        raise UnsupportedFamily(f"{spec.family.value} has a fixed x-support")
    if spec.family is CurveFamily.ELLIPTIC:
        pts = [
            a
            for a in tower.elements()
            if absolute_trace(a ** 3 + spec.c).is_zero()
        ]
        return explicit_set(tower, pts, tag="elliptic_trace_zero")
    if spec.family is CurveFamily.SEMI_HERMITIAN:
        # squares of GF(q^2) = roots of x^((q^2+1)/2) - x
        return roots_of_unity_set(tower, (tower.q2 + 1) // 2)
    if spec.family is CurveFamily.ARTIN_SCHREIER:
        pts = [
            a for a in tower.elements() if (a ** spec.t).relative_trace().is_zero()
        ]
        return explicit_set(tower, pts, tag="artin_schreier_trace_zero")
    raise UnsupportedFamily(str(spec.family))


def _fiber_rhs(spec: CurveSpec, x0: FieldElement) -> tuple[AdditiveMap, FieldElement]:
    q = spec.tower.q
    if spec.family is CurveFamily.ELLIPTIC:
        return AdditiveMap.SQUARE_PLUS_Y, x0 ** 3 + spec.c
    if spec.family is CurveFamily.HYPERELLIPTIC:
        return AdditiveMap.SQUARE_PLUS_Y, x0 ** (q + 1)
    if spec.family is CurveFamily.HERMITIAN:
        return AdditiveMap.FROB_PLUS_Y, x0 ** (q + 1)
    if spec.family is CurveFamily.SEMI_HERMITIAN:
        return AdditiveMap.FROB_PLUS_Y, x0 ** ((q + 1) // 2)
    if spec.family is CurveFamily.ARTIN_SCHREIER:
        return AdditiveMap.FROB_MINUS_Y, x0 ** spec.t
    raise UnsupportedFamily(str(spec.family))


def fiber(spec: CurveSpec, x0: FieldElement) -> tuple:
    """All rational points (x0, y) above x0, in deterministic y order."""
    if spec.family is CurveFamily.LINE:
        return ((x0, None),)
    amap, rhs = _fiber_rhs(spec, x0)
    ys = spec.tower.solve_additive(amap, rhs)
    if not ys:
        raise EmptyFiber(f"x = {spec.tower.format(x0)} is outside the admissible set")
    return tuple((x0, y) for y in ys)


def rational_points(spec: CurveSpec, xs: EvaluationSet) -> tuple:
    """Concatenated fibers over an x-set, fiber order following the set order."""
    pts = []
    for x0 in xs.points:
        pts.extend(fiber(spec, x0))
    return tuple(pts)


def rr_basis(spec: CurveSpec, k: int) -> MonomialBasis:
    """Monomials x^i y^j with pole order <= k-1 at P_inf, 0 <= j < y_degree."""
    if k < 1:
        raise ValueError("k must be at least 1")
    bound = k - 1
    monos = []
    for j in range(spec.y_degree):
        if spec.y_degree == 1 and j > 0:
            break
        base = spec.pole_y * j
        if base > bound:
            continue
        i = 0
        while base + spec.pole_x * i <= bound:
            monos.append((i, j))
            i += 1
    monos.sort(key=lambda ij: (spec.pole_x * ij[0] + spec.pole_y * ij[1], ij[1]))
    return MonomialBasis(tuple(monos), spec.pole_x, spec.pole_y)
