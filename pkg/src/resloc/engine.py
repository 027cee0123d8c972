"""Reduced residue invariants of surfaces.

The pipeline has three layers:

* ``build_integrand`` assembles, for given (n, chi(L), k), the Chern-class
  polynomial whose integral over the Hilbert scheme of n points is the
  unsigned invariant: the coefficient of h^k in

      c(T) * (1+h)^chi * (sum_i h^i c_{n-i}(L^[n])) / (sum_i (1+h)^i c_{n-i}(L^[n])),

  with the denominator inverted as a truncated series (its constant term is 1).
* ``direct_invariant`` evaluates that integral exactly on a toric test
  configuration by torus localization and attaches the sign (-1)^(k+n) and
  the power of the equivariant parameter t.
* ``fit_universal`` solves exactly for the universal polynomial F_{n,k} in
  (beta^2, beta.c1, c1^2, c2) of total degree <= n+k through the values on a
  spanning training set, then demands zero residual on every holdout;
  ``linear_system_invariant`` evaluates a fitted polynomial at arbitrary
  topological input.

k = chi(L) - 1 - m throughout, where m is the number of point insertions.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .algebra import (
    MultiPoly,
    TruncatedSeries,
    fraction_from_str,
    fraction_to_str,
    generalized_binomial,
    series_invert,
)
from .errors import (
    HoldoutResidualError,
    RankDeficiencyError,
    UnsupportedScopeError,
    ValidationError,
)
from .hilb import DEFAULT_SEED, localization_integral, tangent_class_var, taut_class_var
from .surface_arithmetic import SurfaceTopology, euler_char_L
from .toric import (
    EquivariantLineBundle,
    ToricSurfaceModel,
    build_surface,
    h2_vanishes,
    intersection_numbers,
    line_bundle,
)

Exponent4 = tuple[int, int, int, int]


@dataclass(frozen=True)
class Integrand:
    """The h^k coefficient of the residue integrand, before degree selection."""

    n: int
    chi_L: int
    k: int
    poly: MultiPoly


@lru_cache(maxsize=256)
def build_integrand(n: int, chi_L: int, k: int) -> Integrand:
    if n < 0 or k < 0:
        raise ValidationError("build_integrand needs n >= 0 and k >= 0")
    orders = {"h": k + 1}
    for i in range(1, n + 1):
        orders[taut_class_var(i)] = 2 * n // i + 1
    for j in range(1, 2 * n + 1):
        orders[tangent_class_var(j)] = 2 * n // j + 1

    h = MultiPoly.variable("h")
    one_plus_h = MultiPoly.constant(1) + h
    c_taut = [MultiPoly.constant(1)] + [
        MultiPoly.variable(taut_class_var(i)) for i in range(1, n + 1)
    ]
    total_tangent = MultiPoly.constant(1)
    for j in range(1, 2 * n + 1):
        total_tangent = total_tangent + MultiPoly.variable(tangent_class_var(j))
    binomial_factor = MultiPoly(
        ("h",), {(j,): generalized_binomial(chi_L, j) for j in range(k + 1)}
    )
    numerator_sum = MultiPoly.zero()
    denominator_sum = MultiPoly.zero()
    for i in range(n + 1):
        numerator_sum = numerator_sum + h**i * c_taut[n - i]
        denominator_sum = denominator_sum + one_plus_h**i * c_taut[n - i]

    series = (
        TruncatedSeries(total_tangent, orders)
        * binomial_factor
        * numerator_sum
        * series_invert(TruncatedSeries(denominator_sum, orders))
    )
    return Integrand(n=n, chi_L=chi_L, k=k, poly=series.base.coefficient_of("h", k))


@dataclass(frozen=True)
class InvariantValue:
    """A coefficient times an integer power of the equivariant parameter t."""

    coefficient: Fraction
    t_exponent: int

    def __post_init__(self):
        object.__setattr__(self, "coefficient", Fraction(self.coefficient))
        if self.coefficient == 0:
            object.__setattr__(self, "t_exponent", 0)

    def to_json_dict(self) -> dict:
        return {
            "coefficient": fraction_to_str(self.coefficient),
            "t_exponent": self.t_exponent,
        }


def bundle_chi(surface: ToricSurfaceModel, bundle: EquivariantLineBundle) -> int:
    data = intersection_numbers(bundle)
    return surface.chi_O + (data.beta_sq + data.beta_c1) // 2


def direct_invariant(
    surface: ToricSurfaceModel,
    bundle: EquivariantLineBundle,
    n: int,
    m: int,
    *,
    seed: int | None = None,
    rng: random.Random | None = None,
) -> InvariantValue:
    """Invariant of a toric configuration, computed by localization."""
    if n < 0:
        raise ValidationError("n must be non-negative")
    chi = bundle_chi(surface, bundle)
    k = chi - 1 - m
    if k < 0:
        return InvariantValue(Fraction(0), 0)
    magnitude = localization_integral(
        surface, bundle, build_integrand(n, chi, k), n, seed=seed, rng=rng
    )
    sign = -1 if (k + n) % 2 else 1
    return InvariantValue(sign * magnitude, m + 1 - surface.chi_O)


@dataclass(frozen=True)
class FitConfig:
    """A (surface, bundle) test configuration, identified by its descriptor."""

    descriptor: str
    coefficients: tuple[tuple[int, ...], ...]

    def build(self) -> tuple[ToricSurfaceModel, EquivariantLineBundle]:
        surface = build_surface(self.descriptor)
        return surface, line_bundle(surface, list(map(list, self.coefficients)))

    def chern_data(self) -> Exponent4:
        surface, bundle = self.build()
        data = intersection_numbers(bundle)
        return (data.beta_sq, data.beta_c1, surface.c1_sq, surface.c2)

    def chi_L(self) -> int:
        surface, bundle = self.build()
        return bundle_chi(surface, bundle)

    def digest(self) -> str:
        blob = json.dumps(
            [self.descriptor, [list(c) for c in self.coefficients]],
            separators=(",", ":"),
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def is_disjoint_union(self) -> bool:
        return "+" in self.descriptor


def make_config(descriptor: str, coefficients) -> FitConfig:
    """Build a FitConfig with coefficients zero-padded to the ray counts."""
    surface = build_surface(descriptor)
    if coefficients and isinstance(coefficients[0], int):
        coefficients = [coefficients]
    if len(coefficients) != len(surface.components):
        raise ValidationError("one coefficient list per component required")
    padded = []
    for comp, c in zip(surface.components, coefficients):
        c = tuple(int(x) for x in c)
        if len(c) > comp.n_rays:
            raise ValidationError(
                f"{len(c)} coefficients for a component with {comp.n_rays} rays"
            )
        padded.append(c + (0,) * (comp.n_rays - len(c)))
    return FitConfig(descriptor=descriptor, coefficients=tuple(padded))


def config_magnitude(config: FitConfig, n: int, k: int, seed: int = DEFAULT_SEED) -> Fraction:
    """Unsigned invariant of a configuration at extraction degree k."""
    surface, bundle = config.build()
    chi = bundle_chi(surface, bundle)
    rng = random.Random(f"{seed}|{config.digest()}|{n}|{k}")
    return localization_integral(surface, bundle, build_integrand(n, chi, k), n, rng=rng)


def _magnitude_task(payload) -> Fraction:
    descriptor, coefficients, n, k, seed = payload
    return config_magnitude(FitConfig(descriptor, coefficients), n, k, seed)


def _magnitudes(configs: Sequence[FitConfig], n: int, k: int, seed: int, jobs: int):
    payloads = [(c.descriptor, c.coefficients, n, k, seed) for c in configs]
    if jobs <= 1 or len(payloads) < 2:
        return [_magnitude_task(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_magnitude_task, payloads))


def monomial_exponents(degree_bound: int) -> list[Exponent4]:
    """All 4-variable exponent vectors of total degree <= degree_bound, sorted."""
    return sorted(
        e
        for e in itertools.product(range(degree_bound + 1), repeat=4)
        if sum(e) <= degree_bound
    )


def _monomial_row(data: Exponent4, monomials: Sequence[Exponent4]) -> list[int]:
    row = []
    for exp in monomials:
        value = 1
        for base, e in zip(data, exp):
            if e:
                value *= base**e
        row.append(value)
    return row


class _RankTracker:
    """Incremental exact row-echelon basis over Q."""

    def __init__(self, n_cols: int):
        self.n_cols = n_cols
        self.basis: dict[int, list[Fraction]] = {}

    def reduce(self, row) -> list[Fraction]:
        row = [Fraction(x) for x in row]
        for col, basis_row in self.basis.items():
            if row[col]:
                factor = row[col]
                row = [x - factor * y for x, y in zip(row, basis_row)]
        return row

    def try_add(self, row) -> bool:
        row = self.reduce(row)
        pivot = next((i for i, x in enumerate(row) if x), None)
        if pivot is None:
            return False
        inv = Fraction(1) / row[pivot]
        self.basis[pivot] = [x * inv for x in row]
        return True

    @property
    def rank(self) -> int:
        return len(self.basis)

    def missing_columns(self) -> list[int]:
        return [c for c in range(self.n_cols) if c not in self.basis]


@dataclass(frozen=True)
class UniversalPolynomial:
    """Fitted polynomial F_{n,k} in (beta^2, beta.c1, c1^2, c2), degree <= n+k."""

    n: int
    k: int
    coefficients: Mapping[Exponent4, Fraction]
    provenance: tuple[str, ...] = ()
    holdouts_validated: int = 0

    def __post_init__(self):
        clean = {}
        bound = self.degree_bound
        for exp, coeff in self.coefficients.items():
            exp = tuple(int(x) for x in exp)
            if len(exp) != 4 or any(x < 0 for x in exp) or sum(exp) > bound:
                raise ValidationError(f"monomial {exp} violates the degree bound {bound}")
            coeff = Fraction(coeff)
            if coeff:
                clean[exp] = coeff
        object.__setattr__(self, "coefficients", clean)
        object.__setattr__(self, "provenance", tuple(self.provenance))

    @property
    def degree_bound(self) -> int:
        return self.n + self.k

    def evaluate(self, beta_sq: int, beta_c1: int, c1_sq: int, c2: int) -> Fraction:
        data = (beta_sq, beta_c1, c1_sq, c2)
        total = Fraction(0)
        for exp, coeff in self.coefficients.items():
            term = coeff
            for base, e in zip(data, exp):
                if e:
                    term *= Fraction(base) ** e
            total += term
        return total

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "degree_bound": self.degree_bound,
            "coeffs": [
                {"exp": list(exp), "value": fraction_to_str(coeff)}
                for exp, coeff in sorted(self.coefficients.items())
            ],
            "provenance": list(self.provenance),
            "holdouts_validated": self.holdouts_validated,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "UniversalPolynomial":
        required = {"n", "k", "degree_bound", "coeffs", "provenance", "holdouts_validated"}
        if not isinstance(data, dict) or set(data) != required:
            raise ValidationError(f"cache schema mismatch: keys {sorted(data) if isinstance(data, dict) else type(data)}")
        n, k = data["n"], data["k"]
        if not (isinstance(n, int) and isinstance(k, int) and n >= 0 and k >= 0):
            raise ValidationError("cache schema mismatch: bad n or k")
        if data["degree_bound"] != n + k:
            raise ValidationError("cache schema mismatch: degree_bound != n + k")
        if not isinstance(data["holdouts_validated"], int) or data["holdouts_validated"] < 0:
            raise ValidationError("cache schema mismatch: bad holdouts_validated")
        provenance = data["provenance"]
        if not isinstance(provenance, list) or not all(isinstance(p, str) for p in provenance):
            raise ValidationError("cache schema mismatch: bad provenance")
        coeffs: dict[Exponent4, Fraction] = {}
        if not isinstance(data["coeffs"], list):
            raise ValidationError("cache schema mismatch: coeffs must be a list")
        for entry in data["coeffs"]:
            if not isinstance(entry, dict) or set(entry) != {"exp", "value"}:
                raise ValidationError("cache schema mismatch: bad coefficient entry")
            exp = entry["exp"]
            if not (isinstance(exp, list) and len(exp) == 4 and all(isinstance(x, int) for x in exp)):
                raise ValidationError("cache schema mismatch: bad exponent vector")
            exp = tuple(exp)
            if exp in coeffs:
                raise ValidationError("cache schema mismatch: duplicate exponent vector")
            if not isinstance(entry["value"], str):
                raise ValidationError("cache schema mismatch: coefficient must be a string")
            coeffs[exp] = fraction_from_str(entry["value"])
        return cls(
            n=n,
            k=k,
            coefficients=coeffs,
            provenance=tuple(provenance),
            holdouts_validated=data["holdouts_validated"],
        )


def fit_universal(
    n: int,
    k: int,
    training: Sequence[FitConfig],
    holdouts: Sequence[FitConfig] = (),
    *,
    seed: int = DEFAULT_SEED,
    jobs: int = 1,
) -> UniversalPolynomial:
    """Exact fit of F_{n,k} through the training values; all holdouts must match.

    Raises RankDeficiencyError when the training data do not span the
    monomial space, and HoldoutResidualError when any training or holdout
    residual is nonzero (either falsifies universality or the pipeline).
    """
    if n < 0 or k < 0:
        raise ValidationError("fit_universal needs n >= 0 and k >= 0")
    monomials = monomial_exponents(n + k)
    rows = [_monomial_row(cfg.chern_data(), monomials) for cfg in training]

    tracker = _RankTracker(len(monomials))
    for row in rows:
        tracker.try_add(row)
    if tracker.rank < len(monomials):
        missing = [monomials[c] for c in tracker.missing_columns()]
        raise RankDeficiencyError(
            "training set is rank-deficient: no pivot for monomial direction(s) "
            + ", ".join(f"(beta^2)^{a}(beta.c1)^{b}(c1^2)^{c}(c2)^{d}" for a, b, c, d in missing),
            missing_directions=missing,
        )

    values = _magnitudes(list(training) + list(holdouts), n, k, seed, jobs)
    train_values = values[: len(training)]
    holdout_values = values[len(training) :]

    # Gauss-Jordan on the augmented system
    aug = [
        [Fraction(x) for x in row] + [Fraction(y)]
        for row, y in zip(rows, train_values)
    ]
    n_cols = len(monomials)
    used = [False] * len(aug)
    pivot_of_col: dict[int, int] = {}
    for col in range(n_cols):
        pr = next((r for r in range(len(aug)) if not used[r] and aug[r][col]), None)
        if pr is None:
            continue
        used[pr] = True
        pivot_of_col[col] = pr
        inv = Fraction(1) / aug[pr][col]
        aug[pr] = [x * inv for x in aug[pr]]
        for r in range(len(aug)):
            if r != pr and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[pr])]
    for r in range(len(aug)):
        if not used[r] and aug[r][n_cols] != 0:
            raise HoldoutResidualError(
                f"training configuration {training[r].descriptor} has nonzero "
                f"residual {aug[r][n_cols]}; universality or the pipeline is falsified"
            )
    solution = {
        monomials[col]: aug[pr][n_cols] for col, pr in pivot_of_col.items()
    }
    poly = UniversalPolynomial(
        n=n,
        k=k,
        coefficients=solution,
        provenance=tuple(cfg.digest() for cfg in training),
        holdouts_validated=len(holdouts),
    )
    for cfg, value in zip(holdouts, holdout_values):
        predicted = poly.evaluate(*cfg.chern_data())
        if predicted != value:
            raise HoldoutResidualError(
                f"holdout {cfg.descriptor} {cfg.coefficients}: fitted polynomial "
                f"gives {predicted}, localization gives {value}"
            )
    return poly


_CONNECTED_CATALOG = (
    "P2",
    "F0",
    "F1",
    "F2",
    "F3",
    "Bl1P2",
    "Bl2P2",
    "Bl3P2",
    "Bl1F2",
    "Bl2F2",
    "Bl3F2",
)
_UNION_BASE = ("P2", "F0", "F1", "Bl2P2")


def _bundle_patterns() -> list[tuple[int, ...]]:
    patterns: list[tuple[int, ...]] = []
    for d in (1, 2, 3, 0, -1, 4, -2, 5, 6):
        patterns.append((d,))
    for a in (1, 2, 3, -1, 0, 4):
        for b in (1, 2, 3):
            patterns.append((a, b))
    return patterns


def _config_pool(max_components: int):
    """Deterministic sweep of catalog surfaces and bundle coefficient boxes."""
    patterns = _bundle_patterns()
    for descriptor in _CONNECTED_CATALOG:
        for pattern in patterns:
            yield make_config(descriptor, [list(pattern)])
    for size in range(2, max_components + 1):
        for combo in itertools.combinations_with_replacement(_UNION_BASE, size):
            descriptor = "+".join(combo)
            for t in range(14):
                coeffs = [
                    list(patterns[(t + 3 * ci) % len(patterns)]) for ci in range(size)
                ]
                yield make_config(descriptor, coeffs)


def _admissible_data(config: FitConfig, k: int) -> Exponent4 | None:
    """Chern data if the config is a valid training point for extraction degree k."""
    surface, bundle = config.build()
    if not h2_vanishes(bundle):
        return None
    data = intersection_numbers(bundle)
    chi = surface.chi_O + (data.beta_sq + data.beta_c1) // 2
    if chi - 1 - k < 0:
        return None
    return (data.beta_sq, data.beta_c1, surface.c1_sq, surface.c2)


def generate_training_configs(
    n: int, k: int, *, min_holdouts: int = 5
) -> tuple[list[FitConfig], list[FitConfig]]:
    """Sweep the catalog until the fit matrix has full rank, then add holdouts.

    Holdouts have Chern data distinct from every training point and include at
    least one disjoint-union surface.  Deterministic: no randomness involved.
    """
    monomials = monomial_exponents(n + k)
    tracker = _RankTracker(len(monomials))
    # degree-d fits need d+1 distinct values of chi(O) (the catalog's c1^2+c2
    # is 12 chi(O)); a union is always included so holdouts can contain one
    pool = _config_pool(max_components=max(2, n + k + 1))
    training: list[FitConfig] = []
    seen_data: set[Exponent4] = set()
    for config in pool:
        data = _admissible_data(config, k)
        if data is None:
            continue
        if tracker.try_add(_monomial_row(data, monomials)):
            training.append(config)
            seen_data.add(data)
            if tracker.rank == len(monomials):
                break
    if tracker.rank < len(monomials):
        missing = [monomials[c] for c in tracker.missing_columns()]
        raise RankDeficiencyError(
            f"catalog sweep exhausted at rank {tracker.rank} of {len(monomials)}",
            missing_directions=missing,
        )
    holdouts: list[FitConfig] = []
    have_union = False
    for config in pool:
        if len(holdouts) >= min_holdouts and have_union:
            break
        data = _admissible_data(config, k)
        if data is None or data in seen_data:
            continue
        if len(holdouts) >= min_holdouts and not config.is_disjoint_union():
            continue
        holdouts.append(config)
        seen_data.add(data)
        have_union = have_union or config.is_disjoint_union()
    if len(holdouts) < min_holdouts or not have_union:
        raise ValidationError(
            "catalog pool exhausted before collecting enough holdouts"
        )
    return training, holdouts


def fit_universal_default(
    n: int,
    k: int,
    *,
    seed: int = DEFAULT_SEED,
    jobs: int = 1,
    min_holdouts: int = 5,
) -> UniversalPolynomial:
    training, holdouts = generate_training_configs(n, k, min_holdouts=min_holdouts)
    return fit_universal(n, k, training, holdouts, seed=seed, jobs=jobs)


def topology_of(surface: ToricSurfaceModel, bundle: EquivariantLineBundle) -> SurfaceTopology:
    """Topological data of a toric configuration (h01 = 0, h02 = chi(O) - 1)."""
    data = intersection_numbers(bundle)
    return SurfaceTopology(
        beta_sq=data.beta_sq,
        beta_c1=data.beta_c1,
        c1_sq=surface.c1_sq,
        c2=surface.c2,
        h01=0,
        h02=surface.chi_O - 1,
    )


def linear_system_invariant(
    topology: SurfaceTopology,
    n: int,
    m: int,
    *,
    cache=None,
    seed: int = DEFAULT_SEED,
    jobs: int = 1,
) -> InvariantValue:
    """Invariant of curves in a single linear system, via the fitted polynomial.

    coefficient = (-1)^(chi(L)-1-m+n) F_{n,k}(beta^2, beta.c1, c1^2, c2) and
    t exponent m + h01 - h02; zero when m > chi(L) - 1.
    """
    if n < 0:
        raise ValidationError("n must be non-negative")
    chi = euler_char_L(topology)
    k = chi - 1 - m
    if k < 0:
        return InvariantValue(Fraction(0), 0)
    if cache is not None:
        upoly = cache.get_or_fit(n, k, seed=seed, jobs=jobs)
    else:
        upoly = fit_universal_default(n, k, seed=seed, jobs=jobs)
    value = upoly.evaluate(
        topology.beta_sq, topology.beta_c1, topology.c1_sq, topology.c2
    )
    sign = -1 if (k + n) % 2 else 1
    return InvariantValue(sign * value, m + topology.h01 - topology.h02)


def point_insertion_invariant(
    topology: SurfaceTopology,
    n: int,
    m: int,
    *,
    cache=None,
    seed: int = DEFAULT_SEED,
    jobs: int = 1,
) -> InvariantValue:
    """Invariant without the H1 cut, supported only for b1 = 0 (h01 = 0).

    With h01 = 0 the full-family invariant coincides with the linear-system
    one; the sign gains (-1)^h01 = 1 and the t exponent is m - h02.
    """
    if topology.h01 != 0:
        raise UnsupportedScopeError(
            "full-family evaluation requires b1 = 0; for b1 > 0 only the "
            "Picard-variety wedge data is computed (picard module)"
        )
    base = linear_system_invariant(topology, n, m, cache=cache, seed=seed, jobs=jobs)
    return InvariantValue(base.coefficient, m - topology.h02)
