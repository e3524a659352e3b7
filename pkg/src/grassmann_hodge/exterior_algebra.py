"""Exact Grassmann algebra over an n-dimensional frame e_base, ..., e_{base+n-1}.

Blades are stored with strictly ascending indices; every sign produced by
reordering lives in the (rational) coefficient.  The unit convention
[e1 ... en] = 1 is applied only inside :func:`interior_product` and
:func:`regressive_product`; :func:`wedge` never lowers the grade.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from ._parsing import parse_terms

__all__ = [
    "Blade",
    "Multivector",
    "permutation_sign",
    "merge_sign",
    "complement_indices",
    "complement_sign",
    "all_blades",
    "wedge",
    "complement",
    "complement_inverse",
    "interior_product",
    "regressive_product",
    "cross_product",
]


def permutation_sign(seq: Iterable[int]) -> int:
    """Sign of the permutation that sorts ``seq``; 0 if ``seq`` has a repeat."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1


def merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Sign of e_a ^ e_b relative to the ascending blade of a + b (0 on overlap).

    Both arguments must already be ascending.
    """
    if set(a) & set(b):
        return 0
    # count pairs (x in a, y in b) with x > y
    inversions = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inversions += j
    return -1 if inversions % 2 else 1


def complement_indices(indices: tuple[int, ...], dim: int, base: int = 1) -> tuple[int, ...]:
    present = set(indices)
    return tuple(i for i in range(base, base + dim) if i not in present)


def complement_sign(indices: tuple[int, ...], dim: int, base: int = 1) -> int:
    """sg(i1..ik, j1..j_{n-k}) with j the ascending remaining indices."""
    return merge_sign(indices, complement_indices(indices, dim, base))


def all_blades(dim: int, base: int = 1, grade: int | None = None) -> Iterator[tuple[int, ...]]:
    """Every ascending blade, ordered by grade then lexicographically."""
    grades = range(dim + 1) if grade is None else [grade]
    for k in grades:
        yield from combinations(range(base, base + dim), k)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (Rational, int)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"coefficients must be exact rationals, got {type(value).__name__}")


@dataclass(frozen=True)
class Blade:
    """A unit [e_i1 ... e_ik] of a frame of dimension ``dim``."""

    indices: tuple[int, ...]
    dim: int
    base: int = 1

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        for a, b in zip(self.indices, self.indices[1:]):
            if a >= b:
                raise ValueError(f"blade indices must be strictly ascending: {self.indices}")
        for i in self.indices:
            if not self.base <= i < self.base + self.dim:
                raise ValueError(f"index {i} outside the frame of dimension {self.dim}")

    @property
    def grade(self) -> int:
        return len(self.indices)


class Multivector:
    """Sparse exact element of the Grassmann algebra of a ``dim``-dimensional frame.

    Immutable.  ``terms`` maps ascending index tuples to nonzero Fractions.
    ``^`` is the wedge product.
    """

    __slots__ = ("_dim", "_base", "_terms", "_hash")

    def __init__(self, dim: int, terms: Mapping | None = None, *, base: int = 1):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self._dim = dim
        self._base = base
        clean: dict[tuple[int, ...], Fraction] = {}
        for key, value in (terms or {}).items():
            if isinstance(key, Blade):
                if (key.dim, key.base) != (dim, base):
                    raise ValueError("blade belongs to a different frame")
                key = key.indices
            key = Blade(tuple(key), dim, base).indices
            c = _as_fraction(value)
            if c:
                clean[key] = clean.get(key, Fraction(0)) + c
        self._terms = {k: v for k, v in clean.items() if v}
        self._hash = None

    # construction helpers
    @classmethod
    def scalar(cls, dim: int, value=1, *, base: int = 1) -> "Multivector":
        return cls(dim, {(): value}, base=base)

    @classmethod
    def basis(cls, dim: int, i: int, *, base: int = 1) -> "Multivector":
        return cls(dim, {(i,): 1}, base=base)

    @classmethod
    def blade(cls, dim: int, indices: Iterable[int], coef=1, *, base: int = 1) -> "Multivector":
        """Product e_i1 ^ ... ^ e_ik for indices in any order (0 on repeats)."""
        indices = tuple(indices)
        sign = permutation_sign(indices)
        if sign == 0:
            return cls(dim, base=base)
        return cls(dim, {tuple(sorted(indices)): sign * _as_fraction(coef)}, base=base)

    @classmethod
    def volume(cls, dim: int, *, base: int = 1) -> "Multivector":
        return cls(dim, {tuple(range(base, base + dim)): 1}, base=base)

    @classmethod
    def parse(cls, text: str, dim: int, *, base: int = 1) -> "Multivector":
        """Parse e.g. ``"3/2*e1^e3 - e2^e4"``; rejects repeated or unordered indices."""
        raw = parse_terms(text, dim=dim, base=base, blade_prefix="e")
        return cls(dim, {blade: poly.get((), 0) for blade, poly in raw.items()}, base=base)

    # accessors
    @property
    def dim(self) -> int:
        return self._dim

    @property
    def base(self) -> int:
        return self._base

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return MappingProxyType(self._terms)

    def coefficient(self, indices: Iterable[int]) -> Fraction:
        return self._terms.get(tuple(indices), Fraction(0))

    def grades(self) -> set[int]:
        return {len(k) for k in self._terms}

    def grade(self) -> int:
        """The grade of a homogeneous, nonzero multivector."""
        gs = self.grades()
        if len(gs) != 1:
            raise ValueError(f"not homogeneous (grades {sorted(gs)})")
        return gs.pop()

    def part(self, k: int) -> "Multivector":
        return self._new({b: c for b, c in self._terms.items() if len(b) == k})

    def homogeneous_parts(self) -> dict[int, "Multivector"]:
        return {k: self.part(k) for k in sorted(self.grades())}

    def is_zero(self) -> bool:
        return not self._terms

    def _new(self, terms) -> "Multivector":
        return Multivector(self._dim, terms, base=self._base)

    def _check(self, other: "Multivector") -> None:
        if not isinstance(other, Multivector):
            raise TypeError(f"expected a Multivector, got {type(other).__name__}")
        if (self._dim, self._base) != (other._dim, other._base):
            raise ValueError(
                f"dimension mismatch: frame ({self._dim}, base {self._base}) "
                f"vs ({other._dim}, base {other._base})"
            )

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for b, c in other._terms.items():
            out[b] = out.get(b, Fraction(0)) + c
        return self._new(out)

    def __neg__(self):
        return self._new({b: -c for b, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, Multivector):
            return NotImplemented
        s = _as_fraction(scalar)
        return self._new({b: s * c for b, c in self._terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if isinstance(other, Multivector):
            return (self._dim, self._base, self._terms) == (other._dim, other._base, other._terms)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == ({(): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._dim, self._base, frozenset(self._terms.items())))
        return self._hash

    def __iter__(self):
        return iter(sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0])))

    def format(self, prefix: str = "e") -> str:
        return format_terms(
            ((b, c) for b, c in self), lambda b: "^".join(f"{prefix}{i}" for i in b), str
        )

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Multivector({self._dim}, {self.format()!r}, base={self._base})"


def format_terms(items, blade_name, coef_str) -> str:
    """Render ``[(blade, coef)]`` as ``3/2*e1^e3 - e2^e4``."""
    parts = []
    for blade, c in items:
        negative = c < 0 if isinstance(c, Fraction) else False
        mag = -c if negative else c
        name = blade_name(blade)
        if not name:
            body = coef_str(mag)
        elif mag == 1:
            body = name
        else:
            body = f"{coef_str(mag)}*{name}"
        if not parts:
            parts.append(("-" if negative else "") + body)
        else:
            parts.append(("- " if negative else "+ ") + body)
    return " ".join(parts) if parts else "0"


def wedge(a: Multivector, b: Multivector) -> Multivector:
    """Combinatorial (exterior) product; bilinear and graded-anticommutative."""
    a._check(b)
    out: dict[tuple[int, ...], Fraction] = {}
    for ba, ca in a._terms.items():
        for bb, cb in b._terms.items():
            s = merge_sign(ba, bb)
            if s:
                key = tuple(sorted(ba + bb))
                out[key] = out.get(key, Fraction(0)) + s * ca * cb
    return a._new(out)


def complement(a: Multivector) -> Multivector:
    """Grassmann's complement |A, fixed on units by [E |E] = [e1 ... en]."""
    n, base = a.dim, a.base
    return a._new(
        {complement_indices(b, n, base): complement_sign(b, n, base) * c for b, c in a._terms.items()}
    )


def complement_inverse(a: Multivector) -> Multivector:
    """Inverse of :func:`complement`, using ||A = (-1)^{k(n-k)} A on grade k."""
    n = a.dim
    out = complement(a)
    return out._new(
        {b: (-c if (len(b) * (n - len(b))) % 2 else c) for b, c in out._terms.items()}
    )


def regressive_product(a: Multivector, b: Multivector) -> Multivector:
    """Grassmann's regressive product, defined through |[AB] = [|A |B].

    Nonzero only on homogeneous pieces with grade(a) + grade(b) >= n.
    """
    a._check(b)
    return complement_inverse(wedge(complement(a), complement(b)))


def _reduce_volume(m: Multivector) -> Multivector:
    vol = tuple(range(m.base, m.base + m.dim))
    if vol not in m._terms:
        return m
    out = dict(m._terms)
    c = out.pop(vol)
    out[()] = out.get((), Fraction(0)) + c
    return m._new(out)


def interior_product(a: Multivector, b: Multivector) -> Multivector:
    """Grassmann's interior product [A |B].

    For homogeneous pieces of grades k, l the level of the result is k - l when
    k >= l (a regressive product) and n + k - l when k < l (a progressive
    product).  Equal grades give a number.
    """
    a._check(b)
    n = a.dim
    out = Multivector(n, base=a.base)
    for k, ak in a.homogeneous_parts().items():
        for l, bl in b.homogeneous_parts().items():
            cb = complement(bl)
            if k + (n - l) <= n:
                out = out + _reduce_volume(wedge(ak, cb))
            else:
                out = out + regressive_product(ak, cb)
    return out


def cross_product(u: Multivector, v: Multivector) -> Multivector:
    """Vector product of two vectors of a 3-dimensional frame, |[u v]."""
    u._check(v)
    if u.dim != 3:
        raise ValueError(f"the cross product needs dimension 3, got {u.dim}")
    for w in (u, v):
        if w.grades() - {1}:
            raise ValueError("cross product operands must be pure grade 1")
    return complement(wedge(u, v))
