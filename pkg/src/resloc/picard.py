"""Exterior algebra over H^1 of a surface: wedge invariants and pushforwards.

An H1Model records b1 odd generators together with the pairing tensors of the
curve class, the first Chern class, and the fundamental class:

    M_beta[a][b]  = integral of beta ^ e_a ^ e_b        (antisymmetric)
    M_c1[a][b]    = integral of c1(S) ^ e_a ^ e_b       (antisymmetric)
    T_one[a,b,c,d] = integral of e_a ^ e_b ^ e_c ^ e_d  (alternating)

with e_1 ^ ... ^ e_{b1} declared positive.  These define classes [beta],
[c1] in degree 2 and [1] in degree 4 of the dual exterior algebra; wedging
powers of them up to the top degree yields the integer wedge invariants.

The pushforward from the product of the surface with its Picard variety is
computed in the bigraded exterior algebra on generators e_a (surface side)
and their duals (Picard side), with the identity element id = sum_a e_a (x)
e_a^.  The Koszul convention (x (x) y)(x' (x) y') = (-1)^{|y||x'|} xx' (x) yy'
pins the pushforward coefficients to -2 [beta], -2 [c1] and 24 [1].
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .algebra import fraction_to_str
from .errors import ValidationError

IndexTuple = tuple[int, ...]


def merge_sign(a: IndexTuple, b: IndexTuple):
    """Merge two strictly increasing index tuples; None if they overlap.

    Returns (merged, sign) where sign is the Koszul sign of sorting the
    concatenation a + b.
    """
    if set(a) & set(b):
        return None
    merged = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            merged.append(b[j])
            # b[j] jumps over the remaining entries of a
            if (len(a) - i) % 2:
                sign = -sign
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return tuple(merged), sign


class ExtElem:
    """Element of the exterior algebra on ``ngens`` odd generators."""

    __slots__ = ("ngens", "terms")

    def __init__(self, ngens: int, terms: Mapping[IndexTuple, Fraction | int] | None = None):
        clean: dict[IndexTuple, Fraction] = {}
        for idx, coeff in (terms or {}).items():
            idx = tuple(idx)
            if any(idx[i] >= idx[i + 1] for i in range(len(idx) - 1)):
                raise ValidationError(f"indices {idx} are not strictly increasing")
            if idx and (idx[0] < 0 or idx[-1] >= ngens):
                raise ValidationError(f"index out of range in {idx}")
            coeff = Fraction(coeff)
            if coeff:
                clean[idx] = clean.get(idx, Fraction(0)) + coeff
        self.ngens = ngens
        self.terms = {i: c for i, c in clean.items() if c}

    @classmethod
    def one(cls, ngens: int) -> "ExtElem":
        return cls(ngens, {(): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, factor) -> "ExtElem":
        factor = Fraction(factor)
        return ExtElem(self.ngens, {i: c * factor for i, c in self.terms.items()})

    def __add__(self, other: "ExtElem") -> "ExtElem":
        if self.ngens != other.ngens:
            raise ValidationError("cannot add elements over different generator counts")
        out = dict(self.terms)
        for idx, coeff in other.terms.items():
            out[idx] = out.get(idx, Fraction(0)) + coeff
        return ExtElem(self.ngens, out)

    def __sub__(self, other: "ExtElem") -> "ExtElem":
        return self + other.scale(-1)

    def wedge(self, other: "ExtElem") -> "ExtElem":
        if self.ngens != other.ngens:
            raise ValidationError("cannot wedge elements over different generator counts")
        out: dict[IndexTuple, Fraction] = {}
        for ia, ca in self.terms.items():
            for ib, cb in other.terms.items():
                merged = merge_sign(ia, ib)
                if merged is None:
                    continue
                idx, sign = merged
                out[idx] = out.get(idx, Fraction(0)) + sign * ca * cb
        return ExtElem(self.ngens, out)

    def wedge_power(self, power: int) -> "ExtElem":
        if power < 0:
            raise ValidationError("wedge powers must be non-negative")
        result = ExtElem.one(self.ngens)
        for _ in range(power):
            result = result.wedge(self)
        return result

    def coefficient(self, idx: IndexTuple) -> Fraction:
        return self.terms.get(tuple(idx), Fraction(0))

    def top_coefficient(self) -> Fraction:
        return self.coefficient(tuple(range(self.ngens)))

    def __eq__(self, other):
        return (
            isinstance(other, ExtElem)
            and self.ngens == other.ngens
            and self.terms == other.terms
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for idx in sorted(self.terms, key=lambda t: (len(t), t)):
            name = "^".join(f"e{i}" for i in idx) or "1"
            bits.append(f"{fraction_to_str(self.terms[idx])}*{name}")
        return " + ".join(bits)


def _check_antisymmetric(matrix, b1: int, name: str):
    if len(matrix) != b1 or any(len(row) != b1 for row in matrix):
        raise ValidationError(f"{name} must be a {b1}x{b1} matrix")
    for a in range(b1):
        for b in range(b1):
            if matrix[a][b] != -matrix[b][a]:
                raise ValidationError(f"{name} is not antisymmetric at ({a}, {b})")


@dataclass(frozen=True)
class H1Model:
    """b1 generators of H^1 with the pairing tensors and a fixed orientation."""

    b1: int
    m_beta: tuple[tuple[int, ...], ...]
    m_c1: tuple[tuple[int, ...], ...]
    t_one: Mapping[tuple[int, int, int, int], int]

    def __post_init__(self):
        if self.b1 < 0 or self.b1 % 2:
            raise ValidationError("b1 must be even and non-negative")
        m_beta = tuple(tuple(int(x) for x in row) for row in self.m_beta)
        m_c1 = tuple(tuple(int(x) for x in row) for row in self.m_c1)
        _check_antisymmetric(m_beta, self.b1, "M_beta")
        _check_antisymmetric(m_c1, self.b1, "M_c1")
        t_one = {}
        for idx, value in dict(self.t_one).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != 4 or any(idx[i] >= idx[i + 1] for i in range(3)):
                raise ValidationError(
                    f"T_one key {idx} must be 4 strictly increasing indices"
                )
            if idx[0] < 0 or idx[-1] >= self.b1:
                raise ValidationError(f"T_one index out of range in {idx}")
            if value:
                t_one[idx] = int(value)
        object.__setattr__(self, "m_beta", m_beta)
        object.__setattr__(self, "m_c1", m_c1)
        object.__setattr__(self, "t_one", t_one)

    def _pair_two(self, matrix, a: int, b: int) -> int:
        sign = 1
        if a > b:
            a, b = b, a
            sign = -1
        return sign * matrix[a][b]

    def _pair_four(self, idx: IndexTuple) -> int:
        order = tuple(sorted(idx))
        if len(set(order)) != 4:
            return 0
        sign = _permutation_sign(idx)
        return sign * self.t_one.get(order, 0)

    def beta_form(self) -> ExtElem:
        return ExtElem(
            self.b1,
            {(a, b): self.m_beta[a][b] for a in range(self.b1) for b in range(a + 1, self.b1)},
        )

    def c1_form(self) -> ExtElem:
        return ExtElem(
            self.b1,
            {(a, b): self.m_c1[a][b] for a in range(self.b1) for b in range(a + 1, self.b1)},
        )

    def one_form(self) -> ExtElem:
        return ExtElem(self.b1, {idx: v for idx, v in self.t_one.items()})

    def to_json_dict(self) -> dict:
        return {
            "b1": self.b1,
            "M_beta": [list(row) for row in self.m_beta],
            "M_c1": [list(row) for row in self.m_c1],
            "T_one": {",".join(map(str, idx)): v for idx, v in sorted(self.t_one.items())},
            "oriented_basis": True,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "H1Model":
        required = {"b1", "M_beta", "M_c1", "T_one", "oriented_basis"}
        if not isinstance(data, dict) or set(data) != required:
            raise ValidationError("H1 model schema mismatch")
        if data["oriented_basis"] is not True:
            raise ValidationError("only oriented integral bases are supported")
        t_one = {}
        if not isinstance(data["T_one"], dict):
            raise ValidationError("T_one must be an object")
        for key, value in data["T_one"].items():
            try:
                idx = tuple(int(p) for p in key.split(","))
            except ValueError as exc:
                raise ValidationError(f"bad T_one key {key!r}") from exc
            t_one[idx] = value
        return cls(b1=data["b1"], m_beta=data["M_beta"], m_c1=data["M_c1"], t_one=t_one)


def _permutation_sign(idx: IndexTuple) -> int:
    sign = 1
    idx = list(idx)
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign


def load_h1_model(path) -> H1Model:
    try:
        data = json.loads(open(path).read())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read H1 model {path}: {exc}") from exc
    return H1Model.from_json_dict(data)


def wedge_invariants(model: H1Model) -> dict[tuple[int, int, int], int]:
    """All integers [beta]^i ^ [c1]^j ^ [1]^k with 2i + 2j + 4k = b1."""
    beta = model.beta_form()
    c1 = model.c1_form()
    one = model.one_form()
    out: dict[tuple[int, int, int], int] = {}
    for k in range(model.b1 // 4 + 1):
        for j in range((model.b1 - 4 * k) // 2 + 1):
            rem = model.b1 - 4 * k - 2 * j
            if rem < 0 or rem % 2:
                continue
            i = rem // 2
            product = beta.wedge_power(i).wedge(c1.wedge_power(j)).wedge(one.wedge_power(k))
            value = product.top_coefficient()
            if value.denominator != 1:
                raise ValidationError("wedge invariant must be an integer")
            out[(i, j, k)] = int(value)
    return out


def pic_pushforward(model: H1Model, alpha: str, id_power: int) -> ExtElem:
    """Pushforward of alpha * id^id_power to the Picard side.

    alpha is "beta" or "c1" with id_power 2, or "1" with id_power 4.  The
    surface factor is integrated against the model tensors; the result is an
    element of the exterior algebra on the dual generators, equal to
    -2 [beta], -2 [c1] and 24 [1] respectively.
    """
    if alpha in ("beta", "c1"):
        if id_power != 2:
            raise ValidationError(f"alpha={alpha!r} requires id_power=2")
    elif alpha == "1":
        if id_power != 4:
            raise ValidationError("alpha='1' requires id_power=4")
    else:
        raise ValidationError(f"alpha must be one of '1', 'beta', 'c1', not {alpha!r}")

    # expand id^p in the bigraded algebra: terms (surface indices, pic indices)
    terms: dict[tuple[IndexTuple, IndexTuple], Fraction] = {((), ()): Fraction(1)}
    for _ in range(id_power):
        new_terms: dict[tuple[IndexTuple, IndexTuple], Fraction] = {}
        for (s_idx, p_idx), coeff in terms.items():
            koszul = -1 if len(p_idx) % 2 else 1
            for a in range(model.b1):
                s_merged = merge_sign(s_idx, (a,))
                if s_merged is None:
                    continue
                p_merged = merge_sign(p_idx, (a,))
                s_new, s_sign = s_merged
                p_new, p_sign = p_merged
                key = (s_new, p_new)
                new_terms[key] = (
                    new_terms.get(key, Fraction(0)) + coeff * koszul * s_sign * p_sign
                )
        terms = {key: c for key, c in new_terms.items() if c}

    out: dict[IndexTuple, Fraction] = {}
    for (s_idx, p_idx), coeff in terms.items():
        if alpha == "1":
            paired = model._pair_four(s_idx) if len(s_idx) == 4 else 0
        else:
            matrix = model.m_beta if alpha == "beta" else model.m_c1
            paired = matrix[s_idx[0]][s_idx[1]] if len(s_idx) == 2 else 0
        if paired:
            out[p_idx] = out.get(p_idx, Fraction(0)) + coeff * paired
    return ExtElem(model.b1, out)


def product_curve_p1_model(g: int, beta2: int) -> H1Model:
    """Product of a genus-g curve with a line, in the a/b-cycle basis.

    [beta] = beta2 * omega and [c1] = 2 * omega for the standard symplectic
    form omega; [1] = 0 since every 4-form from the curve factor vanishes.
    """
    if g < 1:
        raise ValidationError("the product model needs genus g >= 1")
    b1 = 2 * g
    m_beta = [[0] * b1 for _ in range(b1)]
    m_c1 = [[0] * b1 for _ in range(b1)]
    for block in range(g):
        a, b = 2 * block, 2 * block + 1
        m_beta[a][b] = beta2
        m_beta[b][a] = -beta2
        m_c1[a][b] = 2
        m_c1[b][a] = -2
    return H1Model(b1=b1, m_beta=m_beta, m_c1=m_c1, t_one={})


def abelian_model(m_beta) -> H1Model:
    """Abelian surface in the standard 4-torus basis: [1] = 1 and [c1] = 0."""
    zero = [[0] * 4 for _ in range(4)]
    return H1Model(b1=4, m_beta=m_beta, m_c1=zero, t_one={(0, 1, 2, 3): 1})


def catalog_h1_model(kind: str, **params) -> H1Model:
    if kind == "product_curve_P1":
        return product_curve_p1_model(params["g"], params["beta2"])
    if kind == "abelian":
        return abelian_model(params["m_beta"])
    raise ValidationError(f"unknown catalog H1 model kind {kind!r}")
