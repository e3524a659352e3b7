"""Differential forms with polynomial coefficients on a flat chart of R^n.

Sign conventions, fixed here once:

* ``codifferential`` on p-forms is  delta = (-1)^{n(p+1)+1} * sign(det g) * *d*.
  It is the formal adjoint of d, so on Euclidean scalars
  ``hodge_laplacian(f) = -sum_j d_j^2 f`` (the positive semidefinite
  geometer's Laplacian).
* ``hodge_laplacian`` is d delta + delta d.  On every coefficient it acts as
  ``-beltrami_laplace``.  The Bidal/de Rham operator
  (-1)^{(p+1)n} d*d* + (-1)^{pn} *d*d is available as
  ``bidal_de_rham_laplacian``; for Riemannian metrics it equals
  ``-hodge_laplacian``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from numbers import Rational
from types import MappingProxyType
from typing import Mapping, NamedTuple

from ._parsing import parse_terms
from .exterior_algebra import Multivector, format_terms, merge_sign
from .metric_hodge import Metric, star_blade

__all__ = [
    "Polynomial",
    "PolyForm",
    "HarmonicCheck",
    "d",
    "wedge",
    "star",
    "codifferential",
    "hodge_laplacian",
    "bidal_de_rham_laplacian",
    "beltrami_laplace",
    "divergence",
    "is_harmonic_hodge",
]


class Polynomial:
    """Sparse multivariate polynomial with Fraction coefficients.

    Variables are addressed by position 0..nvars-1; the text form labels them
    x_base, x_{base+1}, ...
    """

    __slots__ = ("_nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], object] | None = None):
        self._nvars = nvars
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent tuple {exp} for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
        self._terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def constant(cls, nvars: int, value=1) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, pos: int, power: int = 1) -> "Polynomial":
        exp = [0] * nvars
        exp[pos] = power
        return cls(nvars, {tuple(exp): 1})

    @classmethod
    def parse(cls, text: str, nvars: int, *, base: int = 1) -> "Polynomial":
        """Parse e.g. ``"3/2*x0^2*x1 - x3"``."""
        raw = parse_terms(text, dim=0, base=base, nvars=nvars, allow_vars=True)
        return cls(nvars, raw.get((), {}))

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._nvars != self._nvars:
                raise ValueError("polynomials live in different numbers of variables")
            return other
        if isinstance(other, Rational):
            return Polynomial.constant(self._nvars, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self._nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self._nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            s = Fraction(other)
            return Polynomial(self._nvars, {e: s * c for e, c in self._terms.items()})
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, Fraction(0)) + ca * cb
        return Polynomial(self._nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Rational):
            other = Polynomial.constant(self._nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._nvars == other._nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    def diff(self, pos: int) -> "Polynomial":
        """Partial derivative along the variable at position ``pos``."""
        out = {}
        for e, c in self._terms.items():
            if e[pos]:
                de = list(e)
                de[pos] -= 1
                out[tuple(de)] = c * e[pos]
        return Polynomial(self._nvars, out)

    def __call__(self, *point) -> Fraction:
        if len(point) != self._nvars:
            raise ValueError(f"expected {self._nvars} coordinates")
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for x, k in zip(point, e):
                term *= Fraction(x) ** k
            total += term
        return total

    def norm1(self) -> Fraction:
        """Sum of absolute coefficient values; zero iff the polynomial is zero."""
        return sum((abs(c) for c in self._terms.values()), Fraction(0))

    def format(self, base: int = 1) -> str:
        def mono(e):
            return "*".join(
                f"x{base + i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )

        items = sorted(self._terms.items(), key=lambda kv: (-sum(kv[0]), [-k for k in kv[0]]))
        return format_terms(items, mono, str)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self._nvars}, {self.format()!r})"


def _as_poly(value, nvars: int) -> Polynomial:
    if isinstance(value, Polynomial):
        if value.nvars != nvars:
            raise ValueError(f"coefficient has {value.nvars} variables, chart has {nvars}")
        return value
    if isinstance(value, str):
        raise TypeError("use Polynomial.parse for text coefficients")
    return Polynomial.constant(nvars, value)


class PolyForm:
    """A differential form sum_I P_I dx^I with polynomial P_I.

    The chart is R^n with the constant diagonal ``metric``; coordinates and
    differentials are labelled from ``metric.base``.
    """

    __slots__ = ("_metric", "_terms")

    def __init__(self, metric: Metric, terms: Mapping | None = None):
        self._metric = metric
        n, base = metric.dim, metric.base
        clean: dict[tuple[int, ...], Polynomial] = {}
        for blade, coef in (terms or {}).items():
            blade = tuple(blade)
            for a, b in zip(blade, blade[1:]):
                if a >= b:
                    raise ValueError(f"form blade indices must be strictly ascending: {blade}")
            if any(not base <= i < base + n for i in blade):
                raise ValueError(f"blade {blade} outside the chart")
            p = _as_poly(coef, n)
            clean[blade] = clean[blade] + p if blade in clean else p
        self._terms = {b: p for b, p in clean.items() if p}

    @classmethod
    def parse(cls, text: str, metric: Metric) -> "PolyForm":
        """Parse e.g. ``"P = (x1)*dx0^dx1 + (2)*dx2^dx3"``."""
        raw = parse_terms(
            text,
            dim=metric.dim,
            base=metric.base,
            nvars=metric.dim,
            blade_prefix="dx",
            allow_vars=True,
        )
        return cls(metric, {b: Polynomial(metric.dim, p) for b, p in raw.items()})

    @classmethod
    def from_multivector(cls, m: Multivector, metric: Metric) -> "PolyForm":
        return cls(metric, dict(m.terms))

    @property
    def metric(self) -> Metric:
        return self._metric

    @property
    def dim(self) -> int:
        return self._metric.dim

    @property
    def base(self) -> int:
        return self._metric.base

    @property
    def terms(self) -> Mapping[tuple[int, ...], Polynomial]:
        return MappingProxyType(self._terms)

    def coefficient(self, blade) -> Polynomial:
        return self._terms.get(tuple(blade), Polynomial(self.dim))

    def grades(self) -> set[int]:
        return {len(b) for b in self._terms}

    def part(self, k: int) -> "PolyForm":
        return self._new({b: p for b, p in self._terms.items() if len(b) == k})

    def is_zero(self) -> bool:
        return not self._terms

    def norm1(self) -> Fraction:
        """Sum of coefficient magnitudes over all components; 0 iff the form is 0."""
        return sum((p.norm1() for p in self._terms.values()), Fraction(0))

    def _new(self, terms) -> "PolyForm":
        return PolyForm(self._metric, terms)

    def _check(self, other: "PolyForm") -> None:
        if not isinstance(other, PolyForm):
            raise TypeError(f"expected a PolyForm, got {type(other).__name__}")
        if other._metric != self._metric:
            raise ValueError("forms live on charts with different metrics")

    def __add__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for b, p in other._terms.items():
            out[b] = out[b] + p if b in out else p
        return self._new(out)

    def __neg__(self):
        return self._new({b: -p for b, p in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        """Multiply by a scalar or a polynomial function."""
        if isinstance(other, PolyForm):
            return NotImplemented
        if isinstance(other, Rational):
            other = Fraction(other)
        return self._new({b: p * other for b, p in self._terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if isinstance(other, PolyForm):
            return self._metric == other._metric and self._terms == other._terms
        if isinstance(other, int) and other == 0:
            return not self._terms
        return NotImplemented

    __hash__ = None

    def __iter__(self):
        return iter(sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0])))

    def format(self) -> str:
        parts = []
        for blade, p in self:
            name = "^".join(f"dx{i}" for i in blade)
            coef = p.format(self.base)
            if not blade:
                parts.append(f"({coef})")
            else:
                parts.append(f"({coef})*{name}")
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"PolyForm({str(self._metric)!r}, {self.format()!r})"


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    a._check(b)
    out: dict[tuple[int, ...], Polynomial] = {}
    for ba, pa in a.terms.items():
        for bb, pb in b.terms.items():
            s = merge_sign(ba, bb)
            if s:
                key = tuple(sorted(ba + bb))
                term = pa * pb * s
                out[key] = out[key] + term if key in out else term
    return a._new(out)


def d(omega: PolyForm) -> PolyForm:
    """Exterior derivative: sum_I sum_j (d_j P_I) dx^j ^ dx^I."""
    base = omega.base
    out: dict[tuple[int, ...], Polynomial] = {}
    for blade, p in omega.terms.items():
        for pos in range(omega.dim):
            j = base + pos
            s = merge_sign((j,), blade)
            if not s:
                continue
            dp = p.diff(pos)
            if dp:
                key = tuple(sorted((j,) + blade))
                term = dp * s
                out[key] = out[key] + term if key in out else term
    return omega._new(out)


def star(omega: PolyForm) -> PolyForm:
    """Hodge star of the attached constant metric, applied coefficientwise."""
    out = {}
    for blade, p in omega.terms.items():
        sign, rest = star_blade(blade, omega.metric)
        out[rest] = p * sign
    return omega._new(out)


def codifferential(omega: PolyForm) -> PolyForm:
    """delta = (-1)^{n(p+1)+1} sign(det g) *d* on each grade-p part."""
    n = omega.dim
    g = omega.metric
    out = PolyForm(g)
    for p in sorted(omega.grades()):
        if p == 0:
            continue
        sign = (-1 if (n * (p + 1) + 1) % 2 else 1) * g.det_sign
        out = out + star(d(star(omega.part(p)))) * sign
    return out


def hodge_laplacian(omega: PolyForm) -> PolyForm:
    """d delta + delta d (grade preserving)."""
    return d(codifferential(omega)) + codifferential(d(omega))


def bidal_de_rham_laplacian(omega: PolyForm) -> PolyForm:
    """(-1)^{(p+1)n} d*d* + (-1)^{pn} *d*d, with *d* taken without extra signs."""
    n = omega.dim
    out = PolyForm(omega.metric)
    for p in sorted(omega.grades()):
        part = omega.part(p)
        first = d(star(d(star(part)))) if p > 0 else PolyForm(omega.metric)
        second = star(d(star(d(part))))
        out = out + first * (-1) ** ((p + 1) * n) + second * (-1) ** (p * n)
    return out


def beltrami_laplace(f: Polynomial, g: Metric) -> Polynomial:
    """sum_i g^ii d_i^2 f; the sqrt(det g) factors are 1 in an orthonormal frame."""
    if f.nvars != g.dim:
        raise ValueError(f"polynomial has {f.nvars} variables, metric has dimension {g.dim}")
    out = Polynomial(f.nvars)
    for pos, s in enumerate(g.signature):
        out = out + f.diff(pos).diff(pos) * s
    return out


def divergence(omega: PolyForm) -> PolyForm:
    """Contraction on the last slot: (div P)_{i1..i(p-1)} = sum_j g^jj d_j P_{i1..i(p-1) j}.

    On a flat chart covariant derivatives reduce to partial ones, so
    d(*P) = 0 exactly when this contraction vanishes.
    """
    g = omega.metric
    base = omega.base
    out: dict[tuple[int, ...], Polynomial] = {}
    for blade, p in omega.terms.items():
        for t, j in enumerate(blade):
            rest = blade[:t] + blade[t + 1:]
            # moving j from slot t to the last slot
            sign = -1 if (len(blade) - 1 - t) % 2 else 1
            term = p.diff(j - base) * (sign * g.entry(j))
            if term:
                out[rest] = out[rest] + term if rest in out else term
    return omega._new(out)


class HarmonicCheck(NamedTuple):
    harmonic: bool
    closed_residual: PolyForm  # dP
    coclosed_residual: PolyForm  # d(*P)


def is_harmonic_hodge(p: PolyForm) -> HarmonicCheck:
    """Harmonic in Hodge's sense: dP = 0 and d(*P) = 0."""
    dp = d(p)
    dsp = d(star(p))
    return HarmonicCheck(dp.is_zero() and dsp.is_zero(), dp, dsp)


def random_polynomial(rng, nvars: int, max_degree: int = 3, max_terms: int = 4) -> Polynomial:
    """Random polynomial with small integer-over-small-integer coefficients."""
    exps = [e for e in product(range(max_degree + 1), repeat=nvars) if sum(e) <= max_degree]
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        terms[rng.choice(exps)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return Polynomial(nvars, terms)


def random_form(rng, metric: Metric, max_degree: int = 3, density: float = 0.5) -> PolyForm:
    """Random grade-mixed form; ``rng`` is a ``random.Random``."""
    from .exterior_algebra import all_blades

    terms = {}
    for blade in all_blades(metric.dim, metric.base):
        if rng.random() < density:
            terms[blade] = random_polynomial(rng, metric.dim, max_degree)
    return PolyForm(metric, terms)
