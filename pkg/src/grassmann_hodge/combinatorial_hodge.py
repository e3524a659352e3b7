"""Combinatorial Hodge theory on finite simplicial complexes.

Canonical k-simplices are ascending vertex tuples.  The boundary of
(v0, ..., vk) is sum_i (-1)^i (v0, ..., v_i omitted, ..., vk); the
coboundary is d_k = transpose(boundary_{k+1}) and the Laplacian on
k-cochains is

    L_k = d_{k-1} d_{k-1}^T + d_k^T d_k

with identity inner products.  Kernel dimensions come from exact rank
elimination; a floating eigenvalue path is kept as a cross-check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from . import _exact
from ._parsing import ParseError
from .exterior_algebra import permutation_sign

__all__ = [
    "SimplicialComplex",
    "Cochain",
    "HodgeDecomposition",
    "FloatKernel",
    "NotClosedError",
    "MeshParseError",
    "FIXTURES",
    "fixture_path",
    "load_fixture",
    "parse_complex",
    "load_complex",
    "parse_cochain",
    "load_cochain",
    "boundary_matrix",
    "coboundary",
    "hodge_laplacian_matrix",
    "weighted_laplacian_matrix",
    "betti_via_harmonic",
    "betti_via_rank",
    "betti_via_eigenvalues",
    "random_weights",
    "harmonic_dim_weighted",
    "hodge_decompose",
    "harmonic_representative",
    "homology_basis",
    "periods",
    "random_complex",
    "ZERO_THRESHOLD",
    "GAP_FACTOR",
]

ZERO_THRESHOLD = 1e-8
GAP_FACTOR = 1e4

FIXTURES = (
    "hollow_triangle",
    "filled_triangle",
    "octahedron",
    "torus",
    "two_triangles",
    "wedge_circles",
)


class MeshParseError(ParseError):
    """Malformed mesh or cochain text; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None, source: str = "<mesh>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


class NotClosedError(ValueError):
    def __init__(self, residual_norm: float):
        self.residual_norm = residual_norm
        super().__init__(f"cochain is not closed: |d c| = {residual_norm:.3e}")


class SimplicialComplex:
    """Finite abstract simplicial complex, closed under faces."""

    def __init__(self, top_simplices: Sequence[Sequence[int]]):
        tops: dict[tuple[int, ...], int] = {}
        for simplex in top_simplices:
            simplex = tuple(int(v) for v in simplex)
            if not simplex:
                raise ValueError("empty simplex")
            if len(set(simplex)) != len(simplex):
                raise ValueError(f"repeated vertex in simplex {simplex}")
            if any(v < 0 for v in simplex):
                raise ValueError(f"negative vertex index in {simplex}")
            canon = tuple(sorted(simplex))
            sign = permutation_sign(simplex)
            if tops.get(canon, sign) != sign:
                raise ValueError(f"simplex {canon} listed with both orientations")
            tops[canon] = sign
        if not tops:
            raise ValueError("a complex needs at least one simplex")
        self._top_orientation = tops
        faces: set[tuple[int, ...]] = set()
        for canon in tops:
            for k in range(1, len(canon) + 1):
                faces.update(combinations(canon, k))
        dim = max(len(s) for s in faces) - 1
        self._simplices = [
            sorted(s for s in faces if len(s) == k + 1) for k in range(dim + 1)
        ]
        self._index = [{s: i for i, s in enumerate(level)} for level in self._simplices]
        self._boundary_cache: dict[int, np.ndarray] = {}

    @property
    def dim(self) -> int:
        return len(self._simplices) - 1

    @property
    def top_orientation(self) -> dict[tuple[int, ...], int]:
        """Sign of each listed top simplex relative to its ascending order."""
        return dict(self._top_orientation)

    def simplices(self, k: int) -> list[tuple[int, ...]]:
        if 0 <= k <= self.dim:
            return list(self._simplices[k])
        return []

    def count(self, k: int) -> int:
        return len(self._simplices[k]) if 0 <= k <= self.dim else 0

    def counts(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self._simplices)

    def index(self, simplex: Sequence[int]) -> int:
        s = tuple(simplex)
        try:
            return self._index[len(s) - 1][s]
        except (IndexError, KeyError):
            raise KeyError(f"{s} is not a simplex of the complex") from None

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts()))

    def __repr__(self):
        return f"SimplicialComplex(dim={self.dim}, counts={self.counts()})"


# ---------------------------------------------------------------- file formats


def parse_complex(text: str, source: str = "<mesh>") -> SimplicialComplex:
    """Mesh grammar: first content line "simplices", then one vertex tuple per line."""
    header_seen = False
    tops: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            if line != "simplices":
                raise MeshParseError(f"expected header 'simplices', got {line!r}", lineno, source)
            header_seen = True
            continue
        try:
            simplex = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise MeshParseError(f"malformed line {line!r}: expected vertex indices", lineno, source) from None
        if any(v < 0 for v in simplex):
            raise MeshParseError("vertex indices must be nonnegative", lineno, source)
        if len(set(simplex)) != len(simplex):
            raise MeshParseError(f"repeated vertex in simplex {simplex}", lineno, source)
        canon = tuple(sorted(simplex))
        sign = permutation_sign(simplex)
        if canon in seen and seen[canon][0] != sign:
            raise MeshParseError(
                f"simplex {canon} conflicts with the orientation given on line {seen[canon][1]}",
                lineno,
                source,
            )
        seen.setdefault(canon, (sign, lineno))
        tops.append(simplex)
    if not header_seen:
        raise MeshParseError("missing header 'simplices'", None, source)
    if not tops:
        raise MeshParseError("no simplices listed", None, source)
    return SimplicialComplex(tops)


def load_complex(path) -> SimplicialComplex:
    path = Path(path)
    return parse_complex(path.read_text(encoding="utf-8"), source=str(path))


def fixture_path(name: str) -> Path:
    """Path of a packaged fixture file; ``name`` may omit the extension."""
    base = resources.files("grassmann_hodge") / "fixtures"
    candidates = [name] if "." in name else [name + ext for ext in (".sc", ".coch", ".cfg")]
    for cand in candidates:
        p = base / cand
        if p.is_file():
            return Path(str(p))
    raise FileNotFoundError(f"no packaged fixture named {name!r}")


def load_fixture(name: str) -> SimplicialComplex:
    return load_complex(fixture_path(name))


@dataclass(frozen=True)
class Cochain:
    """Values on the canonical k-simplices of ``complex``.

    ``values`` is a float array, or an object array of Fractions for the
    exact path.
    """

    complex: SimplicialComplex = field(repr=False)
    degree: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.dtype != object:
            vals = vals.astype(float)
        if vals.shape != (self.complex.count(self.degree),):
            raise ValueError(
                f"a {self.degree}-cochain needs {self.complex.count(self.degree)} values, got shape {vals.shape}"
            )
        object.__setattr__(self, "values", vals)

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    def to_float(self) -> "Cochain":
        return Cochain(self.complex, self.degree, self.values.astype(float))

    def norm(self) -> float:
        return float(np.linalg.norm(self.values.astype(float)))

    def dot(self, other: "Cochain"):
        if other.degree != self.degree or other.complex is not self.complex:
            raise ValueError("cochains live on different spaces")
        if self.exact and other.exact:
            return sum((a * b for a, b in zip(self.values, other.values)), Fraction(0))
        return float(np.dot(self.values.astype(float), other.values.astype(float)))

    def __add__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.complex, self.degree, self.values + other.values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.complex, self.degree, self.values - other.values)

    def coboundary(self) -> "Cochain":
        d = coboundary(self.complex, self.degree)
        return Cochain(self.complex, self.degree + 1, _matvec(d, self.values))


def _matvec(M: np.ndarray, v: np.ndarray) -> np.ndarray:
    if v.dtype == object:
        return M.astype(object) @ v if M.size else np.zeros(M.shape[0], dtype=object) + Fraction(0)
    return M.astype(float) @ v


def parse_cochain(text: str, K: SimplicialComplex, source: str = "<cochain>") -> Cochain:
    """Cochain grammar: "degree k", then "<vertices> <value>" lines.

    Values are read exactly (integers, a/b, decimals).  Vertex tuples in a
    non-ascending order contribute with the permutation sign.  Unlisted
    simplices are zero.
    """
    degree = None
    values: list[Fraction] | None = None
    seen: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if degree is None:
            if len(tokens) != 2 or tokens[0] != "degree":
                raise MeshParseError(f"expected header 'degree k', got {line!r}", lineno, source)
            try:
                degree = int(tokens[1])
            except ValueError:
                raise MeshParseError(f"bad degree {tokens[1]!r}", lineno, source) from None
            if not 0 <= degree <= K.dim:
                raise MeshParseError(f"degree {degree} outside 0..{K.dim}", lineno, source)
            values = [Fraction(0)] * K.count(degree)
            continue
        if len(tokens) != degree + 2:
            raise MeshParseError(
                f"expected {degree + 1} vertices and a value, got {len(tokens)} tokens", lineno, source
            )
        try:
            simplex = tuple(int(t) for t in tokens[:-1])
            value = Fraction(tokens[-1])
        except (ValueError, ZeroDivisionError):
            raise MeshParseError(f"malformed line {line!r}", lineno, source) from None
        sign = permutation_sign(simplex)
        if sign == 0:
            raise MeshParseError(f"repeated vertex in {simplex}", lineno, source)
        canon = tuple(sorted(simplex))
        try:
            idx = K.index(canon)
        except KeyError:
            raise MeshParseError(f"{canon} is not a {degree}-simplex of the complex", lineno, source) from None
        if idx in seen:
            raise MeshParseError(f"{canon} already given on line {seen[idx]}", lineno, source)
        seen[idx] = lineno
        values[idx] = sign * value
    if degree is None:
        raise MeshParseError("missing header 'degree k'", None, source)
    return Cochain(K, degree, np.array(values, dtype=object))


def load_cochain(path, K: SimplicialComplex) -> Cochain:
    path = Path(path)
    return parse_cochain(path.read_text(encoding="utf-8"), K, source=str(path))


# ---------------------------------------------------------------- operators


def boundary_matrix(K: SimplicialComplex, k: int) -> np.ndarray:
    """Integer matrix of the boundary from k-chains to (k-1)-chains, 1 <= k <= dim."""
    if not 1 <= k <= K.dim:
        raise ValueError(f"boundary degree {k} outside 1..{K.dim}")
    cached = K._boundary_cache.get(k)
    if cached is None:
        rows, cols = K.simplices(k - 1), K.simplices(k)
        M = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for j, s in enumerate(cols):
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                M[K.index(face), j] = -1 if i % 2 else 1
        M.setflags(write=False)
        K._boundary_cache[k] = M
        cached = M
    return cached.copy()


def _boundary_or_empty(K: SimplicialComplex, k: int) -> np.ndarray:
    if 1 <= k <= K.dim:
        return boundary_matrix(K, k)
    return np.zeros((K.count(k - 1), K.count(k)), dtype=np.int64)


def coboundary(K: SimplicialComplex, k: int) -> np.ndarray:
    """d_k from k-cochains to (k+1)-cochains; zero-row matrix at the top degree."""
    if not 0 <= k <= K.dim:
        raise ValueError(f"cochain degree {k} outside 0..{K.dim}")
    return _boundary_or_empty(K, k + 1).T.copy()


def hodge_laplacian_matrix(K: SimplicialComplex, k: int) -> np.ndarray:
    """Integer symmetric L_k = d_{k-1} d_{k-1}^T + d_k^T d_k."""
    if not 0 <= k <= K.dim:
        raise ValueError(f"degree {k} outside 0..{K.dim}")
    down = _boundary_or_empty(K, k)  # = d_{k-1}^T
    up = coboundary(K, k)
    return down.T @ down + up.T @ up


def weighted_laplacian_matrix(K: SimplicialComplex, k: int, weights: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """W_k L^W_k = W_k d_{k-1} W_{k-1}^-1 d_{k-1}^T W_k + d_k^T W_{k+1} d_k, exact.

    ``weights[j]`` holds positive diagonal weights for j-cochains.  The
    kernel equals that of the W-adjoint Laplacian.
    """
    n = K.count(k)
    out = [[Fraction(0)] * n for _ in range(n)]
    wk = weights[k]
    if k >= 1:
        dm = coboundary(K, k - 1)  # rows: k-simplices
        inv = [1 / w for w in weights[k - 1]]
        _accumulate(out, dm, inv, row_scale=wk)
    if k < K.dim:
        dk = coboundary(K, k)  # rows: (k+1)-simplices
        _accumulate(out, dk.T, weights[k + 1], row_scale=None)
    return out


def _accumulate(out, A: np.ndarray, mid, row_scale):
    # out += diag(s) A diag(mid) A^T diag(s)
    cols = [np.nonzero(A[:, c])[0] for c in range(A.shape[1])]
    for c, nz in enumerate(cols):
        m = mid[c]
        for i in nz:
            ai = int(A[i, c]) * (row_scale[i] if row_scale is not None else 1)
            for j in nz:
                aj = int(A[j, c]) * (row_scale[j] if row_scale is not None else 1)
                out[i][j] += ai * m * aj


# ---------------------------------------------------------------- Betti numbers


def betti_via_harmonic(K: SimplicialComplex, k: int) -> int:
    """dim ker L_k, by exact rank elimination."""
    L = hodge_laplacian_matrix(K, k)
    return K.count(k) - _exact.rank(L)


def betti_via_rank(K: SimplicialComplex, k: int) -> int:
    """dim ker boundary_k - rank boundary_{k+1}, the homology oracle."""
    if not 0 <= k <= K.dim:
        raise ValueError(f"degree {k} outside 0..{K.dim}")
    rank_k = _exact.rank(boundary_matrix(K, k)) if k >= 1 else 0
    rank_k1 = _exact.rank(boundary_matrix(K, k + 1)) if k + 1 <= K.dim else 0
    return K.count(k) - rank_k - rank_k1


class FloatKernel(NamedTuple):
    dimension: int
    largest_zero: float  # largest eigenvalue counted as zero (0.0 if none)
    smallest_nonzero: float  # inf if every eigenvalue is zero
    gap_ok: bool


def betti_via_eigenvalues(
    K: SimplicialComplex, k: int, *, threshold: float = ZERO_THRESHOLD, gap_factor: float = GAP_FACTOR
) -> FloatKernel:
    """Count eigenvalues of L_k below ``threshold``.

    The gap holds when the smallest eigenvalue above the threshold is at
    least ``gap_factor * threshold``.
    """
    L = hodge_laplacian_matrix(K, k).astype(float)
    ev = np.linalg.eigvalsh(L) if L.size else np.zeros(0)
    zero = ev[np.abs(ev) < threshold]
    nonzero = ev[np.abs(ev) >= threshold]
    smallest = float(nonzero.min()) if nonzero.size else float("inf")
    largest_zero = float(np.abs(zero).max()) if zero.size else 0.0
    return FloatKernel(int(zero.size), largest_zero, smallest, smallest >= gap_factor * threshold)


def random_weights(K: SimplicialComplex, rng: random.Random, max_value: int = 9) -> list[list[Fraction]]:
    """Random positive rational diagonal weights for every degree."""
    return [
        [Fraction(rng.randint(1, max_value), rng.randint(1, max_value)) for _ in range(K.count(j))]
        for j in range(K.dim + 1)
    ]


def harmonic_dim_weighted(K: SimplicialComplex, k: int, weights) -> int:
    return K.count(k) - _exact.rank(weighted_laplacian_matrix(K, k, weights))


# ---------------------------------------------------------------- decomposition


class HodgeDecomposition(NamedTuple):
    exact: Cochain  # in im d_{k-1}
    coexact: Cochain  # in im d_k^T
    harmonic: Cochain  # in ker L_k

    def reconstruction(self) -> Cochain:
        return self.exact + self.coexact + self.harmonic

    def max_inner_product(self) -> float:
        """Largest |<a, b>| over the three pairs of parts."""
        a, b, c = (p.to_float() for p in self)
        return max(abs(a.dot(b)), abs(a.dot(c)), abs(b.dot(c)))


def _lstsq_image(A: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Orthogonal projection of c onto the column space of A, refined once."""
    if A.size == 0:
        return np.zeros(A.shape[0])
    x, *_ = np.linalg.lstsq(A, c, rcond=None)
    r = c - A @ x
    dx, *_ = np.linalg.lstsq(A, r, rcond=None)
    return A @ (x + dx)


def _exact_image(A: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Exact projection onto col(A) via the normal equations A^T A x = A^T c."""
    if A.size == 0:
        return np.array([Fraction(0)] * A.shape[0], dtype=object)
    Ao = A.astype(object)
    x = _exact.solve(Ao.T @ Ao, Ao.T @ c)
    return Ao @ np.array(x, dtype=object)


def hodge_decompose(c: Cochain, *, exact: bool | None = None) -> HodgeDecomposition:
    """Split c into exact + coexact + harmonic parts.

    ``exact`` defaults to the cochain's own representation.
    """
    K, k = c.complex, c.degree
    use_exact = c.exact if exact is None else exact
    down = coboundary(K, k - 1) if k >= 1 else np.zeros((K.count(k), 0), dtype=np.int64)
    up_t = coboundary(K, k).T  # columns span im d_k^T
    if use_exact:
        vals = np.array([Fraction(v) for v in c.values], dtype=object)
        ex = _exact_image(down, vals)
        co = _exact_image(up_t, vals)
    else:
        vals = c.values.astype(float)
        ex = _lstsq_image(down.astype(float), vals)
        co = _lstsq_image(up_t.astype(float), vals)
    harm = vals - ex - co
    return HodgeDecomposition(Cochain(K, k, ex), Cochain(K, k, co), Cochain(K, k, harm))


def harmonic_representative(c: Cochain, *, tol: float = 1e-10) -> Cochain:
    """The harmonic cochain cohomologous to a closed cochain c.

    Raises NotClosedError if |d c| exceeds ``tol`` times max(1, |c|).
    """
    dc = c.coboundary()
    residual = dc.norm()
    if c.exact:
        if any(v != 0 for v in dc.values):
            raise NotClosedError(residual)
    elif residual > tol * max(1.0, c.norm()):
        raise NotClosedError(residual)
    return hodge_decompose(c).harmonic


def homology_basis(K: SimplicialComplex, k: int) -> list[np.ndarray]:
    """Rational k-cycles whose classes form a basis of H_k(K; Q)."""
    n = K.count(k)
    if k >= 1:
        cycles = _exact.nullspace(boundary_matrix(K, k))
    else:
        cycles = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    span = [list(col) for col in _boundary_or_empty(K, k + 1).T.tolist()]
    current = _exact.rank(span) if span else 0
    basis = []
    for z in cycles:
        trial = span + [z]
        r = _exact.rank(trial)
        if r > current:
            span, current = trial, r
            basis.append(np.array(z, dtype=object))
    return basis


def periods(c: Cochain, cycles: Sequence[np.ndarray]) -> list:
    """Pairings <c, z> of a cochain with chains."""
    out = []
    for z in cycles:
        if c.exact:
            out.append(sum((a * b for a, b in zip(c.values, z)), Fraction(0)))
        else:
            out.append(float(np.dot(c.values.astype(float), np.asarray(z, dtype=float))))
    return out


def random_complex(rng: random.Random, max_vertices: int = 12, max_dim: int = 3, max_top: int = 10) -> SimplicialComplex:
    """Random complex on at most ``max_vertices`` vertices (may be disconnected)."""
    nv = rng.randint(1, max_vertices)
    tops = []
    for _ in range(rng.randint(1, max_top)):
        size = rng.randint(1, min(max_dim + 1, nv))
        simplex = rng.sample(range(nv), size)
        tops.append(tuple(simplex))
    # keep vertex labels contiguous isn't required; isolated labels simply don't appear
    return SimplicialComplex(_drop_conflicts(tops))


def _drop_conflicts(tops):
    seen = {}
    out = []
    for s in tops:
        canon = tuple(sorted(s))
        sign = permutation_sign(s)
        if seen.setdefault(canon, sign) == sign:
            out.append(s)
    return out
