"""Diagonal metrics of arbitrary signature and the Hodge star.

Metrics are orthonormal-frame metrics diag(s_1, ..., s_n) with s_i = +-1, so
sqrt|det g| = 1 and every formula stays rational.  For a covariant blade the
star is

    *(e_I) = orientation * (prod_{i in I} s_i) * sg(I, J) * e_J

with J the ascending complement of I: the factor prod s_i is the index raising
P^I = g^{ii...} P_I and sg(I, J) = epsilon_{I J} with the contracted indices
first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .exterior_algebra import (
    Multivector,
    complement_indices,
    merge_sign,
    permutation_sign,
)

__all__ = [
    "Metric",
    "epsilon",
    "raise_indices",
    "lower_indices",
    "star_blade",
    "hodge_star",
    "double_star_sign",
    "pairing",
    "minkowski_dual",
    "pauli_dual",
]


@dataclass(frozen=True)
class Metric:
    """diag(signature) on the frame e_base, ..., e_{base+n-1}, with an orientation."""

    signature: tuple[int, ...]
    orientation: int = 1
    base: int = 1

    def __post_init__(self):
        object.__setattr__(self, "signature", tuple(int(s) for s in self.signature))
        if not self.signature:
            raise ValueError("a metric needs at least one dimension")
        if any(s not in (1, -1) for s in self.signature):
            raise ValueError(f"signature entries must be +1 or -1, got {self.signature}")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    @classmethod
    def euclidean(cls, n: int, *, orientation: int = 1, base: int = 1) -> "Metric":
        return cls((1,) * n, orientation, base)

    @classmethod
    def minkowski(cls, *, orientation: int = 1) -> "Metric":
        """diag(+1, -1, -1, -1) on (x0, x1, x2, x3), x0 timelike."""
        return cls((1, -1, -1, -1), orientation, 0)

    @classmethod
    def from_string(cls, text: str, *, orientation: int = 1, base: int | None = None) -> "Metric":
        """Parse ``"+---"``-style signature strings.

        Without an explicit ``base``, indefinite signatures are labelled from 0
        (x0 timelike) and definite ones from 1.
        """
        text = text.strip()
        if not text or any(ch not in "+-" for ch in text):
            raise ValueError(f"bad signature string {text!r}: use only '+' and '-'")
        sig = tuple(1 if ch == "+" else -1 for ch in text)
        if base is None:
            base = 0 if len(set(sig)) > 1 else 1
        return cls(sig, orientation, base)

    @property
    def dim(self) -> int:
        return len(self.signature)

    @property
    def det_sign(self) -> int:
        return prod(self.signature)

    @property
    def sqrt_abs_det(self) -> Fraction:
        # orthonormal frame
        return Fraction(1)

    def entry(self, i: int) -> int:
        """g_ii = g^ii for the frame label i."""
        return self.signature[i - self.base]

    def index_sign(self, indices) -> int:
        return prod(self.entry(i) for i in indices)

    def with_orientation(self, orientation: int) -> "Metric":
        return Metric(self.signature, orientation, self.base)

    def __str__(self):
        return "".join("+" if s > 0 else "-" for s in self.signature)


def epsilon(indices, n: int, *, base: int = 1) -> int:
    """Permutation symbol: sg(indices) if they permute base..base+n-1, else 0."""
    indices = tuple(indices)
    for i in indices:
        if not base <= i < base + n:
            raise ValueError(f"index {i} outside {base}..{base + n - 1}")
    if len(indices) != n:
        return 0
    return permutation_sign(indices)


def _check(a: Multivector, g: Metric) -> None:
    if (a.dim, a.base) != (g.dim, g.base):
        raise ValueError(
            f"dimension mismatch: multivector frame ({a.dim}, base {a.base}) "
            f"vs metric ({g.dim}, base {g.base})"
        )


def raise_indices(a: Multivector, g: Metric) -> Multivector:
    """Raise every index with the diagonal metric; only signs change."""
    _check(a, g)
    return Multivector(a.dim, {b: g.index_sign(b) * c for b, c in a.terms.items()}, base=a.base)


# g^{ii} = g_{ii} for a +-1 diagonal metric
lower_indices = raise_indices


def star_blade(indices: tuple[int, ...], g: Metric) -> tuple[int, tuple[int, ...]]:
    """Return (sign, J) with *(e_indices) = sign * e_J."""
    rest = complement_indices(indices, g.dim, g.base)
    return g.orientation * g.index_sign(indices) * merge_sign(indices, rest), rest


def hodge_star(p: Multivector, g: Metric) -> Multivector:
    """Hodge star on a covariant multivector; grade k goes to grade n - k."""
    _check(p, g)
    out = {}
    for b, c in p.terms.items():
        sign, rest = star_blade(b, g)
        out[rest] = sign * c
    return Multivector(p.dim, out, base=p.base)


def double_star_sign(k: int, g: Metric) -> int:
    """sign(det g) * (-1)^{k(n-k)}: the factor of ** on grade k."""
    n = g.dim
    if not 0 <= k <= n:
        raise ValueError(f"grade {k} outside 0..{n}")
    return g.det_sign * (-1 if (k * (n - k)) % 2 else 1)


def pairing(alpha: Multivector, beta: Multivector, g: Metric | None = None) -> Fraction:
    """Volume coefficient of alpha ^ beta (zero unless grades add to n)."""
    if g is not None:
        _check(alpha, g)
        _check(beta, g)
    w = alpha ^ beta
    return w.coefficient(range(w.base, w.base + w.dim))


def _require_grade(f: Multivector, n: int, grades: set[int], what: str) -> None:
    if f.dim != n:
        raise ValueError(f"{what} is defined in dimension {n}, got {f.dim}")
    if f.grades() - grades:
        raise ValueError(f"{what} needs grade {sorted(grades)}, got grades {sorted(f.grades())}")


def minkowski_dual(f: Multivector, g: Metric | None = None) -> Multivector:
    """Minkowski's dual matrix f*_ij = sg(ijkl) f_kl: a pure index swap, no metric."""
    if g is not None:
        _check(f, g)
    _require_grade(f, 4, {2}, "the dual matrix")
    out = {}
    for b, c in f.terms.items():
        rest = complement_indices(b, 4, f.base)
        # sg(rest + b) for the new free indices "rest"
        out[rest] = merge_sign(rest, b) * c
    return Multivector(4, out, base=f.base)


def pauli_dual(xi_upper: Multivector, g: Metric) -> Multivector:
    """Dual tensor from contravariant components, free indices first.

    xi*_{J} = sqrt|det g| * sg(J, I) * xi^{I}; for 2-tensors in dimension 4
    this is xi*_ij = xi^kl with (ijkl) an even permutation of (1234).
    """
    _check(xi_upper, g)
    out = {}
    for b, c in xi_upper.terms.items():
        rest = complement_indices(b, g.dim, g.base)
        out[rest] = g.orientation * g.sqrt_abs_det * merge_sign(rest, b) * c
    return Multivector(g.dim, out, base=g.base)
