"""Exact multivariate polynomials and truncated graded power series over Q.

Coefficients are ``fractions.Fraction`` throughout; there is no floating
point anywhere in this package.  A polynomial is a map from exponent vectors
to coefficients over an ordered tuple of named variables.  A truncated series
is a polynomial together with a per-variable truncation order: exponents
greater than or equal to a variable's order are discarded, so an order of 3
retains the powers 0, 1, 2.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import SeriesInversionError, ValidationError

Exponent = tuple[int, ...]


def fraction_to_str(x: Fraction) -> str:
    """Render a rational as ``"p"`` or ``"p/q"`` with q > 0 in lowest terms."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def fraction_from_str(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"not a rational: {s!r}") from exc


class MultiPoly:
    """Immutable exact polynomial over named variables.

    Variables are kept in sorted order internally; any constructor input is
    remapped.  No zero coefficients are stored.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Iterable[str], terms: Mapping[Exponent, Fraction | int]):
        given = tuple(variables)
        if len(set(given)) != len(given):
            raise ValidationError(f"duplicate variable names in {given}")
        ordered = tuple(sorted(given))
        if ordered != given:
            perm = [given.index(v) for v in ordered]
            terms = {tuple(e[i] for i in perm): c for e, c in terms.items()}
        clean: dict[Exponent, Fraction] = {}
        for exp, coeff in terms.items():
            exp = tuple(exp)
            if len(exp) != len(ordered) or any(x < 0 for x in exp):
                raise ValidationError(f"exponent {exp} does not match arity {len(ordered)}")
            coeff = Fraction(coeff)
            if coeff:
                clean[exp] = coeff
        object.__setattr__(self, "variables", ordered)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    @classmethod
    def constant(cls, value: Fraction | int) -> "MultiPoly":
        return cls((), {(): Fraction(value)})

    @classmethod
    def variable(cls, name: str) -> "MultiPoly":
        return cls((name,), {(1,): Fraction(1)})

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls((), {})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def occurring_variables(self) -> tuple[str, ...]:
        """Variables with a nonzero exponent in at least one stored term."""
        seen = [False] * len(self.variables)
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    seen[i] = True
        return tuple(v for v, s in zip(self.variables, seen) if s)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def total_degree(self) -> int:
        """Max total degree of a stored term; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    # -- arithmetic --------------------------------------------------------

    def _aligned(self, other: "MultiPoly"):
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        union = tuple(sorted(set(self.variables) | set(other.variables)))

        def remap(poly: "MultiPoly"):
            pos = [union.index(v) for v in poly.variables]
            out: dict[Exponent, Fraction] = {}
            for exp, coeff in poly.terms.items():
                new = [0] * len(union)
                for p, e in zip(pos, exp):
                    new[p] = e
                out[tuple(new)] = coeff
            return out

        return union, remap(self), remap(other)

    @staticmethod
    def _coerce(value) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            return value
        if isinstance(value, (int, Fraction)):
            return MultiPoly.constant(value)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        variables, a, b = self._aligned(other)
        out = dict(a)
        for exp, coeff in b.items():
            out[exp] = out.get(exp, Fraction(0)) + coeff
        return MultiPoly(variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        variables, a, b = self._aligned(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                exp = tuple(x + y for x, y in zip(e1, e2))
                acc = out.get(exp, Fraction(0)) + c1 * c2
                if acc:
                    out[exp] = acc
                elif exp in out:
                    del out[exp]
        return MultiPoly(variables, out)

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if not isinstance(power, int) or power < 0:
            raise ValidationError("polynomial powers must be non-negative integers")
        result = MultiPoly.constant(1)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        _, a, b = self._aligned(other)
        return a == b

    __hash__ = None  # type: ignore[assignment]

    # -- queries -----------------------------------------------------------

    def coefficient_of(self, variable: str, degree: int) -> "MultiPoly":
        """Exact coefficient of ``variable**degree`` as a polynomial in the rest."""
        if variable not in self.variables:
            raise ValidationError(f"unknown variable {variable!r}")
        i = self.variables.index(variable)
        rest = self.variables[:i] + self.variables[i + 1 :]
        out = {}
        for exp, coeff in self.terms.items():
            if exp[i] == degree:
                out[exp[:i] + exp[i + 1 :]] = coeff
        return MultiPoly(rest, out)

    def evaluate(self, assignment: Mapping[str, Fraction | int]) -> Fraction:
        """Exact substitution; every occurring variable must be assigned."""
        for v in self.occurring_variables():
            if v not in assignment:
                raise ValidationError(f"missing variable {v!r} in assignment")
        values = [Fraction(assignment[v]) if v in assignment else Fraction(0) for v in self.variables]
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            term = coeff
            for val, e in zip(values, exp):
                if e:
                    term *= val**e
            total += term
        return total

    def graded_part(self, weights: Mapping[str, int], degree: int) -> "MultiPoly":
        """Terms whose weighted total degree equals ``degree``.

        Variables absent from ``weights`` count with weight 0.
        """
        w = [weights.get(v, 0) for v in self.variables]
        out = {e: c for e, c in self.terms.items() if sum(wi * ei for wi, ei in zip(w, e)) == degree}
        return MultiPoly(self.variables, out)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for exp in sorted(self.terms):
            coeff = self.terms[exp]
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v for v, e in zip(self.variables, exp) if e
            )
            if mono:
                bits.append(f"{fraction_to_str(coeff)}*{mono}" if coeff != 1 else mono)
            else:
                bits.append(fraction_to_str(coeff))
        return " + ".join(bits)


def coefficient_of(p: MultiPoly, variable: str, degree: int) -> MultiPoly:
    return p.coefficient_of(variable, degree)


def evaluate(p: MultiPoly, assignment: Mapping[str, Fraction | int]) -> Fraction:
    return p.evaluate(assignment)


def generalized_binomial(a: int, k: int) -> Fraction:
    """binomial(a, k) as a polynomial in a, valid for negative a as well."""
    if k < 0:
        return Fraction(0)
    num = 1
    for i in range(k):
        num *= a - i
    den = 1
    for i in range(2, k + 1):
        den *= i
    return Fraction(num, den)


class TruncatedSeries:
    """A MultiPoly with per-variable truncation orders.

    ``orders[v] = N`` keeps exponents of ``v`` strictly below N.  Variables
    without an order are unrestricted.  All products truncate eagerly, so the
    stored polynomial always respects the bounds.
    """

    __slots__ = ("base", "orders")

    def __init__(self, base: MultiPoly, orders: Mapping[str, int]):
        orders = dict(orders)
        for v, o in orders.items():
            if o < 0:
                raise ValidationError(f"negative truncation order for {v!r}")
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "base", _truncate(base, orders))

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    def _merged_orders(self, other) -> dict[str, int]:
        if not isinstance(other, TruncatedSeries):
            return dict(self.orders)
        merged = dict(self.orders)
        for v, o in other.orders.items():
            merged[v] = min(o, merged.get(v, o))
        return merged

    def __add__(self, other):
        base = other.base if isinstance(other, TruncatedSeries) else other
        return TruncatedSeries(self.base + base, self._merged_orders(other))

    def __sub__(self, other):
        base = other.base if isinstance(other, TruncatedSeries) else other
        return TruncatedSeries(self.base - base, self._merged_orders(other))

    def __mul__(self, other):
        base = other.base if isinstance(other, TruncatedSeries) else other
        return TruncatedSeries(self.base * base, self._merged_orders(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.base == other.base and self.orders == other.orders
        return self.base == other

    __hash__ = None  # type: ignore[assignment]

    def invert(self) -> "TruncatedSeries":
        c = self.base.constant_term()
        if c == 0:
            raise SeriesInversionError("series has zero constant term")
        for v in self.base.occurring_variables():
            if v not in self.orders:
                raise ValidationError(f"cannot invert: variable {v!r} has no truncation order")
        # geometric series around the constant term
        eps = _truncate(MultiPoly.constant(1) - self.base * (Fraction(1) / c), self.orders)
        result = MultiPoly.constant(1)
        power = MultiPoly.constant(1)
        while True:
            power = _truncate(power * eps, self.orders)
            if power.is_zero():
                break
            result = result + power
        return TruncatedSeries(result * (Fraction(1) / c), self.orders)

    def __repr__(self):
        return f"TruncatedSeries({self.base!r}, orders={self.orders})"


def _truncate(poly: MultiPoly, orders: Mapping[str, int]) -> MultiPoly:
    if not orders:
        return poly
    caps = [orders.get(v) for v in poly.variables]
    if all(c is None for c in caps):
        return poly
    out = {
        e: c
        for e, c in poly.terms.items()
        if all(cap is None or x < cap for x, cap in zip(e, caps))
    }
    return MultiPoly(poly.variables, out)


def series_invert(s: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse up to the truncation orders of ``s``."""
    return s.invert()
