"""Smooth projective toric surfaces and their equivariant line bundles.

A connected surface is stored as the cyclically ordered primitive rays of its
fan; everything else (fixed charts, tangent characters, intersection numbers,
lattice-point counts) is derived from that.  Finite disjoint unions are first
class: Chern numbers add, charts concatenate.

Characters of the two-torus are integer pairs ``(a, b)`` standing for the
linear form ``a*u + b*v``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .errors import CatalogError, ValidationError

Character = tuple[int, int]


@dataclass(frozen=True)
class FixedChart:
    """A torus-fixed point with the two tangent characters of its chart."""

    id: str
    tangent_characters: tuple[Character, Character]


def _det(a: tuple[int, int], b: tuple[int, int]) -> int:
    return a[0] * b[1] - a[1] * b[0]


class ToricComponent:
    """One connected smooth projective toric surface, given by its fan rays."""

    __slots__ = ("rays",)

    def __init__(self, rays):
        rays = tuple((int(x), int(y)) for x, y in rays)
        if len(rays) < 3:
            raise ValidationError("a complete fan needs at least 3 rays")
        for i, v in enumerate(rays):
            w = rays[(i + 1) % len(rays)]
            if _det(v, w) != 1:
                raise ValidationError(
                    f"rays {v} and {w} do not span a smooth cone (det != 1)"
                )
        self.rays = rays

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def self_intersection(self, i: int) -> int:
        """Self-intersection of the boundary divisor of ray i."""
        r = self.n_rays
        v = self.rays[i]
        s = tuple(
            self.rays[(i - 1) % r][j] + self.rays[(i + 1) % r][j] for j in (0, 1)
        )
        c = s[0] // v[0] if v[0] else s[1] // v[1]
        if (c * v[0], c * v[1]) != s:
            raise ValidationError(f"ray {v} is not smoothable in its fan")
        return -c

    def pairing(self, a, b) -> int:
        """Intersection number of the divisors sum(a_i D_i) and sum(b_i D_i)."""
        r = self.n_rays
        if len(a) != r or len(b) != r:
            raise ValidationError("coefficient vector length must equal the ray count")
        total = 0
        for i in range(r):
            j = (i + 1) % r
            total += a[i] * b[i] * self.self_intersection(i)
            total += a[i] * b[j] + a[j] * b[i]
        return total

    @property
    def c1_sq(self) -> int:
        ones = (1,) * self.n_rays
        return self.pairing(ones, ones)

    @property
    def c2(self) -> int:
        return self.n_rays

    def cone_dual_basis(self, i: int) -> tuple[Character, Character]:
        """Characters (U, V) with <U,v_i>=1, <U,v_j>=0, <V,v_i>=0, <V,v_j>=1."""
        p, q = self.rays[i]
        r, s = self.rays[(i + 1) % self.n_rays]
        return (s, -r), (-q, p)

    def blow_up(self, points: int) -> "ToricComponent":
        """Blow up the first ``points`` torus-fixed points (in fan order)."""
        if not 1 <= points <= 3:
            raise CatalogError("blowups support 1 to 3 torus-fixed points")
        rays = []
        for i, v in enumerate(self.rays):
            rays.append(v)
            if i < points:
                w = self.rays[(i + 1) % self.n_rays]
                rays.append((v[0] + w[0], v[1] + w[1]))
        return ToricComponent(rays)

    def __eq__(self, other):
        return isinstance(other, ToricComponent) and self.rays == other.rays

    def __hash__(self):
        return hash(self.rays)

    def __repr__(self):
        return f"ToricComponent({list(self.rays)})"


def p2() -> ToricComponent:
    return ToricComponent([(1, 0), (0, 1), (-1, -1)])


def hirzebruch(a: int) -> ToricComponent:
    if a < 0:
        raise CatalogError("Hirzebruch index must be >= 0")
    return ToricComponent([(1, 0), (0, 1), (-1, a), (0, -1)])


class ToricSurfaceModel:
    """A finite disjoint union of connected smooth toric surfaces."""

    __slots__ = ("components", "descriptor", "charts", "chart_component")

    def __init__(self, components, descriptor: str = ""):
        components = tuple(components)
        if not components:
            raise ValidationError("a surface needs at least one component")
        charts = []
        chart_component = []
        for ci, comp in enumerate(components):
            if comp.c1_sq + comp.c2 != 12:
                raise ValidationError("connected toric surface must have c1^2 + c2 = 12")
            for cone in range(comp.n_rays):
                charts.append(
                    FixedChart(id=f"{ci}:{cone}", tangent_characters=comp.cone_dual_basis(cone))
                )
                chart_component.append(ci)
        self.components = components
        self.descriptor = descriptor
        self.charts = tuple(charts)
        self.chart_component = tuple(chart_component)

    @property
    def c1_sq(self) -> int:
        return sum(c.c1_sq for c in self.components)

    @property
    def c2(self) -> int:
        return sum(c.c2 for c in self.components)

    @property
    def chi_O(self) -> int:
        return len(self.components)

    def __eq__(self, other):
        return isinstance(other, ToricSurfaceModel) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"ToricSurfaceModel({self.descriptor or self.components!r})"


_CONNECTED_RE = re.compile(r"^(?:(P2)|F(\d+)|Bl([123])(P2|F\d+))$")


def _build_component(token: str) -> ToricComponent:
    m = _CONNECTED_RE.match(token)
    if not m:
        raise CatalogError(f"unsupported surface descriptor {token!r}")
    if m.group(1):
        return p2()
    if m.group(2) is not None:
        return hirzebruch(int(m.group(2)))
    base = _build_component(m.group(4))
    return base.blow_up(int(m.group(3)))


def build_surface(descriptor: str) -> ToricSurfaceModel:
    """Build a catalog surface from a descriptor such as ``"P2"`` or ``"P2+F0"``."""
    descriptor = descriptor.strip()
    if not descriptor:
        raise CatalogError("empty surface descriptor")
    tokens = [t.strip() for t in descriptor.split("+")]
    return ToricSurfaceModel([_build_component(t) for t in tokens], descriptor=descriptor)


@dataclass(frozen=True)
class ClassData:
    beta_sq: int
    beta_c1: int

    def __post_init__(self):
        if (self.beta_sq + self.beta_c1) % 2 != 0:
            raise ValidationError(
                f"beta^2 + beta.c1 = {self.beta_sq + self.beta_c1} must be even"
            )


class EquivariantLineBundle:
    """A line bundle on a toric surface with a chosen equivariant lift.

    The canonical lift of ``sum(a_i D_i)`` has weight ``a_i U + a_j V`` at the
    fixed point of the cone spanned by rays i, j (with (U, V) the cone's dual
    basis); ``retwist`` shifts every weight by a global character.
    """

    __slots__ = ("surface", "divisor_coefficients", "chart_weights")

    def __init__(self, surface: ToricSurfaceModel, divisor_coefficients, chart_weights=None):
        coeffs = tuple(tuple(int(x) for x in comp) for comp in divisor_coefficients)
        if len(coeffs) != len(surface.components):
            raise ValidationError("one coefficient vector per component required")
        for comp, a in zip(surface.components, coeffs):
            if len(a) != comp.n_rays:
                raise ValidationError(
                    f"component with {comp.n_rays} rays got {len(a)} coefficients"
                )
        if chart_weights is None:
            weights = []
            for ci, comp in enumerate(surface.components):
                a = coeffs[ci]
                for cone in range(comp.n_rays):
                    u, v = comp.cone_dual_basis(cone)
                    ai, aj = a[cone], a[(cone + 1) % comp.n_rays]
                    weights.append(
                        (ai * u[0] + aj * v[0], ai * u[1] + aj * v[1])
                    )
            chart_weights = tuple(weights)
        else:
            chart_weights = tuple((int(w[0]), int(w[1])) for w in chart_weights)
            if len(chart_weights) != len(surface.charts):
                raise ValidationError("one chart weight per fixed chart required")
        self.surface = surface
        self.divisor_coefficients = coeffs
        self.chart_weights = chart_weights

    def __eq__(self, other):
        return (
            isinstance(other, EquivariantLineBundle)
            and self.surface == other.surface
            and self.divisor_coefficients == other.divisor_coefficients
            and self.chart_weights == other.chart_weights
        )

    def __hash__(self):
        return hash((self.surface, self.divisor_coefficients, self.chart_weights))

    def __repr__(self):
        return f"EquivariantLineBundle({self.surface!r}, {self.divisor_coefficients})"


def line_bundle(surface: ToricSurfaceModel, coefficients) -> EquivariantLineBundle:
    """Bundle from per-component coefficient lists; short lists are zero-padded."""
    if coefficients and isinstance(coefficients[0], int):
        coefficients = [coefficients]
    if len(coefficients) != len(surface.components):
        raise ValidationError(
            f"expected {len(surface.components)} coefficient list(s), got {len(coefficients)}"
        )
    padded = []
    for comp, coeff in zip(surface.components, coefficients):
        coeff = list(coeff)
        if len(coeff) > comp.n_rays:
            raise ValidationError(
                f"{len(coeff)} coefficients for a component with {comp.n_rays} rays"
            )
        padded.append(tuple(coeff) + (0,) * (comp.n_rays - len(coeff)))
    return EquivariantLineBundle(surface, padded)


def intersection_numbers(bundle: EquivariantLineBundle) -> ClassData:
    beta_sq = 0
    beta_c1 = 0
    for comp, a in zip(bundle.surface.components, bundle.divisor_coefficients):
        ones = (1,) * comp.n_rays
        beta_sq += comp.pairing(a, a)
        beta_c1 += comp.pairing(a, ones)
    return ClassData(beta_sq=beta_sq, beta_c1=beta_c1)


def _component_lattice_points(comp: ToricComponent, coeffs) -> int:
    """Lattice points of {m : <m, v_i> >= -a_i for all rays}."""
    rays = comp.rays
    constraints = list(zip(rays, coeffs))

    def feasible(m0: Fraction, m1: Fraction) -> bool:
        return all(v[0] * m0 + v[1] * m1 >= -a for v, a in constraints)

    vertices = []
    for (v, a), (w, b) in itertools.combinations(constraints, 2):
        d = _det(v, w)
        if d == 0:
            continue
        # <m,v> = -a, <m,w> = -b
        m0 = Fraction(-a * w[1] + b * v[1], d)
        m1 = Fraction(-b * v[0] + a * w[0], d)
        if feasible(m0, m1):
            vertices.append((m0, m1))
    if not vertices:
        return 0
    lo0 = ceil(min(p[0] for p in vertices))
    hi0 = floor(max(p[0] for p in vertices))
    lo1 = ceil(min(p[1] for p in vertices))
    hi1 = floor(max(p[1] for p in vertices))
    count = 0
    for m0 in range(lo0, hi0 + 1):
        for m1 in range(lo1, hi1 + 1):
            if feasible(Fraction(m0), Fraction(m1)):
                count += 1
    return count


def h0_dimension(bundle: EquivariantLineBundle) -> int:
    """Lattice points of the divisor polytope, summed over components.

    Equals h^0 when the bundle is nef on each component (see ``is_nef``).
    """
    return sum(
        _component_lattice_points(comp, a)
        for comp, a in zip(bundle.surface.components, bundle.divisor_coefficients)
    )


def h2_vanishes(bundle: EquivariantLineBundle) -> bool:
    """H^2(L) = 0, checked per component as H^0(K - L) = 0 by Serre duality."""
    for comp, a in zip(bundle.surface.components, bundle.divisor_coefficients):
        k_minus_l = tuple(-1 - x for x in a)
        if _component_lattice_points(comp, k_minus_l) != 0:
            return False
    return True


def is_nef(bundle: EquivariantLineBundle) -> bool:
    for comp, a in zip(bundle.surface.components, bundle.divisor_coefficients):
        for i in range(comp.n_rays):
            e_i = tuple(1 if j == i else 0 for j in range(comp.n_rays))
            if comp.pairing(a, e_i) < 0:
                return False
    return True


def retwist(bundle: EquivariantLineBundle, character: Character) -> EquivariantLineBundle:
    """Change the equivariant lift by adding ``character`` to every chart weight."""
    cu, cv = int(character[0]), int(character[1])
    shifted = tuple((w[0] + cu, w[1] + cv) for w in bundle.chart_weights)
    return EquivariantLineBundle(bundle.surface, bundle.divisor_coefficients, shifted)


def chart_weights_compatible(bundle: EquivariantLineBundle) -> bool:
    """Weights at the two ends of each invariant curve differ along the curve.

    The difference of the weights at the two fixed points of the curve of ray
    v must pair to zero with v (so it is a multiple of the curve's character).
    """
    offset = 0
    for comp in bundle.surface.components:
        r = comp.n_rays
        for i in range(r):
            w_prev = bundle.chart_weights[offset + (i - 1) % r]
            w_next = bundle.chart_weights[offset + i]
            d = (w_prev[0] - w_next[0], w_prev[1] - w_next[1])
            if d[0] * comp.rays[i][0] + d[1] * comp.rays[i][1] != 0:
                return False
        offset += r
    return True
