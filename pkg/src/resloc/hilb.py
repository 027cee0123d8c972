"""Torus-fixed points of Hilbert schemes of points and exact fixed-point sums.

A fixed point of the Hilbert scheme of n points on a toric surface assigns a
partition (monomial ideal) to each fixed chart, with total size n.  At a chart
with tangent characters (U, V) and partition L, each box with arm a and leg l
contributes the tangent characters

    (a + 1)*U - l*V      and      -a*U + (l + 1)*V,

and the box in row r, column c (zero-indexed) contributes the tautological
character  w + c*U + r*V,  where w is the bundle's chart weight.  Arms count
boxes strictly to the right in the same row (the U direction), legs boxes
strictly below in the same column (the V direction).

Integrals are evaluated by summing, over the fixed points, the integrand's
degree-2n part divided by the product of the tangent characters, at two
independent rational specializations of (u, v); both values must agree and
the common value is returned.  Specializations hitting a zero tangent weight
are redrawn.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import MultiPoly
from .errors import InternalComputationError, ValidationError
from .toric import Character, EquivariantLineBundle, ToricSurfaceModel

DEFAULT_SEED = 1729

_SPECIALIZATION_RANGE = 10_000
_MAX_DRAWS = 64


def taut_class_var(i: int) -> str:
    """Variable name for the i-th Chern class of the tautological bundle."""
    return f"cL{i}"


def tangent_class_var(j: int) -> str:
    """Variable name for the j-th Chern class of the tangent bundle."""
    return f"cT{j}"


_VAR_RE = re.compile(r"^c([LT])([1-9]\d*)$")


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive integers; the empty partition is ()."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p <= 0 for p in parts):
            raise ValidationError("partition parts must be positive")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValidationError("partition parts must be weakly decreasing")

    @property
    def size(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> tuple[int, ...]:
        if not self.parts:
            return ()
        cols = [0] * self.parts[0]
        for p in self.parts:
            for c in range(p):
                cols[c] += 1
        return tuple(cols)

    def boxes(self):
        for r, width in enumerate(self.parts):
            for c in range(width):
                yield r, c


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of n, largest first part first."""
    if n < 0:
        raise ValidationError("partition size must be non-negative")
    if n == 0:
        return (Partition(()),)
    out = []

    def extend(remaining: int, cap: int, prefix: tuple[int, ...]):
        if remaining == 0:
            out.append(Partition(prefix))
            return
        for part in range(min(cap, remaining), 0, -1):
            extend(remaining - part, part, prefix + (part,))

    extend(n, n, ())
    return tuple(out)


@dataclass(frozen=True)
class HilbFixedPoint:
    """One partition per fixed chart of the surface, total size n."""

    parts: tuple[Partition, ...]

    @property
    def size(self) -> int:
        return sum(p.size for p in self.parts)

    def to_lists(self) -> list[list[int]]:
        return [list(p.parts) for p in self.parts]


def hilb_fixed_points(surface: ToricSurfaceModel, n: int) -> list[HilbFixedPoint]:
    """All assignments of partitions to the charts with total size n."""
    if n < 0:
        raise ValidationError("number of points must be non-negative")
    n_charts = len(surface.charts)
    points: list[HilbFixedPoint] = []

    def assign(chart: int, remaining: int, prefix: tuple[Partition, ...]):
        if chart == n_charts - 1:
            for lam in partitions_of(remaining):
                points.append(HilbFixedPoint(prefix + (lam,)))
            return
        for here in range(remaining, -1, -1):
            for lam in partitions_of(here):
                assign(chart + 1, remaining - here, prefix + (lam,))

    assign(0, n, ())
    return points


def fixed_points_json(surface: ToricSurfaceModel, n: int) -> str:
    """Debug dump: the fixed points as JSON lists of partition arrays."""
    return json.dumps([p.to_lists() for p in hilb_fixed_points(surface, n)])


def tangent_weights(surface: ToricSurfaceModel, point: HilbFixedPoint) -> tuple[Character, ...]:
    """The 2n tangent characters of the Hilbert scheme at a fixed point."""
    if len(point.parts) != len(surface.charts):
        raise ValidationError("fixed point does not match the surface's charts")
    weights: list[Character] = []
    for chart, lam in zip(surface.charts, point.parts):
        (u0, u1), (v0, v1) = chart.tangent_characters
        conj = lam.conjugate()
        for r, c in lam.boxes():
            arm = lam.parts[r] - c - 1
            leg = conj[c] - r - 1
            weights.append(((arm + 1) * u0 - leg * v0, (arm + 1) * u1 - leg * v1))
            weights.append((-arm * u0 + (leg + 1) * v0, -arm * u1 + (leg + 1) * v1))
    return tuple(weights)


def taut_weights(
    surface: ToricSurfaceModel, point: HilbFixedPoint, bundle: EquivariantLineBundle
) -> tuple[Character, ...]:
    """The n characters of the tautological bundle of ``bundle`` at a fixed point."""
    if bundle.surface != surface:
        raise ValidationError("bundle lives on a different surface")
    if len(point.parts) != len(surface.charts):
        raise ValidationError("fixed point does not match the surface's charts")
    weights: list[Character] = []
    for idx, (chart, lam) in enumerate(zip(surface.charts, point.parts)):
        (u0, u1), (v0, v1) = chart.tangent_characters
        w0, w1 = bundle.chart_weights[idx]
        for r, c in lam.boxes():
            weights.append((w0 + c * u0 + r * v0, w1 + c * u1 + r * v1))
    return tuple(weights)


def _compile_integrand(poly: MultiPoly, n: int):
    """Degree-2n part of ``poly`` as (coefficient, factors) pairs.

    Factors are (kind, index, exponent) with kind "L" for tautological and
    "T" for tangent Chern classes; the grading weights cL_i -> i, cT_j -> j.
    """
    kinds = []
    weights = {}
    for v in poly.variables:
        m = _VAR_RE.match(v)
        if not m:
            if any(e[poly.variables.index(v)] for e in poly.terms):
                raise ValidationError(
                    f"integrand variable {v!r} is not a Chern class of L^[n] or T"
                )
            kinds.append(None)
            continue
        kinds.append((m.group(1), int(m.group(2))))
        weights[v] = int(m.group(2))
    part = poly.graded_part(weights, 2 * n)
    compiled = []
    for exp, coeff in part.terms.items():
        factors = []
        for pos, e in enumerate(exp):
            if e:
                kind, idx = kinds[pos]
                factors.append((kind, idx, e))
        compiled.append((coeff, tuple(factors)))
    return compiled


def _elementary(values) -> list[int]:
    """Elementary symmetric functions e_0..e_m of integer values."""
    e = [1]
    for w in values:
        e.append(0)
        for i in range(len(e) - 1, 0, -1):
            e[i] = e[i] + w * e[i - 1]
    return e


def _sum_over_fixed_points(fp_data, compiled, u0: int, v0: int) -> Fraction:
    total = Fraction(0)
    for tangent_forms, taut_forms in fp_data:
        tvals = [a * u0 + b * v0 for a, b in tangent_forms]
        lvals = [a * u0 + b * v0 for a, b in taut_forms]
        e_tan = _elementary(tvals)
        e_taut = _elementary(lvals)
        denom = 1
        for t in tvals:
            denom *= t
        numer = Fraction(0)
        for coeff, factors in compiled:
            val = 1
            for kind, idx, exp in factors:
                table = e_tan if kind == "T" else e_taut
                base = table[idx] if idx < len(table) else 0
                if base == 0:
                    val = 0
                    break
                val *= base**exp
            if val:
                numer += coeff * val
        total += numer / denom
    return total


def localization_integral(
    surface: ToricSurfaceModel,
    bundle: EquivariantLineBundle,
    integrand,
    n: int,
    *,
    seed: int | None = None,
    rng: random.Random | None = None,
) -> Fraction:
    """Exact integral of the degree-2n part of ``integrand`` over the Hilbert scheme.

    ``integrand`` is a MultiPoly in the variables cL1..cLn and cT1..cT2n (an
    object with a ``poly`` attribute is also accepted).  Chern classes of
    index above the bundle rank substitute to zero.
    """
    poly = getattr(integrand, "poly", integrand)
    if not isinstance(poly, MultiPoly):
        raise ValidationError("integrand must be a MultiPoly in Chern-class variables")
    compiled = _compile_integrand(poly, n)
    if not compiled:
        return Fraction(0)
    if rng is None:
        rng = random.Random(DEFAULT_SEED if seed is None else seed)

    points = hilb_fixed_points(surface, n)
    fp_data = [
        (tangent_weights(surface, p), taut_weights(surface, p, bundle)) for p in points
    ]
    all_tangent = [form for tangent, _ in fp_data for form in tangent]

    values = []
    draws = []
    attempts = 0
    while len(values) < 2:
        attempts += 1
        if attempts > _MAX_DRAWS:
            raise InternalComputationError(
                "could not find specializations avoiding zero tangent weights"
            )
        u0 = rng.randrange(1, _SPECIALIZATION_RANGE + 1)
        v0 = rng.randrange(1, _SPECIALIZATION_RANGE + 1)
        if (u0, v0) in draws:
            continue
        if any(a * u0 + b * v0 == 0 for a, b in all_tangent):
            continue
        draws.append((u0, v0))
        values.append(_sum_over_fixed_points(fp_data, compiled, u0, v0))

    if values[0] != values[1]:
        # a third draw pinpoints which evaluation went wrong, for the report
        while True:
            u0 = rng.randrange(1, _SPECIALIZATION_RANGE + 1)
            v0 = rng.randrange(1, _SPECIALIZATION_RANGE + 1)
            if (u0, v0) not in draws and all(a * u0 + b * v0 != 0 for a, b in all_tangent):
                break
        third = _sum_over_fixed_points(fp_data, compiled, u0, v0)
        raise InternalComputationError(
            "specializations disagree (non-equivariant-class bug): "
            f"{values[0]} vs {values[1]} (arbiter draw gives {third})"
        )
    return values[0]
