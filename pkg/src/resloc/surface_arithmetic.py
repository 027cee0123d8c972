"""Closed-form numerical identities for surfaces and purity bounds.

Adjunction genus, Euler characteristics, reduced virtual dimension, and the
inequality chain used by the purity criterion: the chi bound, the splitting
lower bound, and the Hodge-index bound.  Very-ampleness and nefness are
caller-asserted hypotheses, never verified here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ValidationError


@dataclass(frozen=True)
class SurfaceTopology:
    """Topological input of an invariant evaluation.

    Invariants: c1_sq + c2 is divisible by 12 and equals 12 * (1 - h01 + h02)
    (chi of the structure sheaf), and beta_sq + beta_c1 is even.
    """

    beta_sq: int
    beta_c1: int
    c1_sq: int
    c2: int
    h01: int = 0
    h02: int = 0

    def __post_init__(self):
        if self.h01 < 0 or self.h02 < 0:
            raise ValidationError("h01 and h02 must be non-negative")
        if (self.c1_sq + self.c2) % 12 != 0:
            raise ValidationError(
                f"c1^2 + c2 = {self.c1_sq + self.c2} is not divisible by 12"
            )
        if (self.c1_sq + self.c2) // 12 != 1 - self.h01 + self.h02:
            raise ValidationError(
                "chi(O) mismatch: (c1^2 + c2)/12 = "
                f"{(self.c1_sq + self.c2) // 12} but 1 - h01 + h02 = "
                f"{1 - self.h01 + self.h02}"
            )
        if (self.beta_sq + self.beta_c1) % 2 != 0:
            raise ValidationError("beta^2 + beta.c1 must be even")

    @property
    def chi_O(self) -> int:
        return 1 - self.h01 + self.h02


def arithmetic_genus(beta_sq: int, beta_c1: int) -> int:
    """Genus from adjunction: 2h - 2 = beta^2 - beta.c1."""
    if (beta_sq - beta_c1) % 2 != 0:
        raise ValidationError("beta^2 - beta.c1 must be even")
    return (beta_sq - beta_c1) // 2 + 1


def euler_char_L(topology: SurfaceTopology) -> int:
    """chi(L) = chi(O) + (beta^2 + beta.c1)/2."""
    return topology.chi_O + (topology.beta_sq + topology.beta_c1) // 2


def reduced_virtual_dim(topology: SurfaceTopology, n: int) -> int:
    """v = h - 1 + n + beta.c1 + h02."""
    h = arithmetic_genus(topology.beta_sq, topology.beta_c1)
    return h - 1 + n + topology.beta_c1 + topology.h02


def purity_chi_bound(h: int, delta: int, chi: int) -> bool:
    """True iff chi <= 1 - h + delta (at most delta free points)."""
    return chi <= 1 - h + delta


@dataclass(frozen=True)
class SplittingData:
    """A splitting of beta into effective classes, recorded by pairings with beta."""

    beta_sq: int
    pairings: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        pairings = tuple(int(p) for p in self.pairings)
        object.__setattr__(self, "pairings", pairings)
        if sum(pairings) != self.beta_sq:
            raise ValidationError(
                f"pairings sum to {sum(pairings)}, expected beta^2 = {self.beta_sq}"
            )
        for p in pairings:
            if p < 0 or self.beta_sq - p < 0:
                raise ValidationError(
                    "each beta.beta_k and beta.(beta - beta_k) must be non-negative"
                )


def splitting_lower_bound(beta_sq: int, splitting: SplittingData) -> Fraction:
    """Sum of min(beta.beta_k, beta.(beta - beta_k))/2 over the splitting."""
    if splitting.beta_sq != beta_sq:
        raise ValidationError("splitting was built for a different beta^2")
    return sum(
        (Fraction(min(p, beta_sq - p), 2) for p in splitting.pairings), Fraction(0)
    )


def hodge_index_max_square(l_sq: int, l_dot_a: int) -> Fraction:
    """Upper bound a^2 <= (L.a)^2 / L^2 for positive L^2."""
    if l_sq <= 0:
        raise ValidationError("Hodge index bound needs L^2 > 0")
    return Fraction(l_dot_a * l_dot_a, l_sq)
