"""Maxwell's equations in four formulations, checked exactly on polynomial fields.

Chart and signs
---------------
Coordinates are (x0, x1, x2, x3) with x0 = c*t timelike, so (1/c) d/dt is
d/dx0 and the constant c never multiplies a derivative.  The metric is
diag(+1, -1, -1, -1).  In ascending components:

    F = sum_cyc B_i dx_j^dx_k + sum_i E_i dx_i^dx0
      F_23 = B1, F_13 = -B2, F_12 = B3, F_0i = -E_i

    G = sum_cyc D_i dx_j^dx_k + sum_i H_i dx0^dx_i
      G_23 = D1, G_13 = -D2, G_12 = D3, G_0i = +H_i

    S = rho dx1^dx2^dx3 - sum_cyc J_i dx0^dx_j^dx_k

F keeps the time differential last, [dx_i dx0].  G reverses it (dx0 first), which is the one sign absorbed so
that dG = S is Gauss plus Ampere-Maxwell with the usual signs.  With these
choices *F = G(D=E, H=B) and S = *j for the covariant current
j = rho dx0 - sum_i J_i dx_i.

    dF = sum_cyc (curl E + d0 B)_i dx0^dx_j^dx_k + (div B) dx123
    dG - S = sum_cyc (d0 D - curl H + J)_i dx0^dx_j^dx_k + (div D - rho) dx123

Units
-----
Heaviside-Lorentz by default: dG = S.  With ``gaussian_4pi`` the source
side becomes 4*pi*S.  Since pi is irrational, residuals are kept as exact
elements of Q[pi, 1/pi] (see ``Residual``), and sources may carry their own
rational scale and power of pi so that e.g. rho = 1/(2*pi) stays exact.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from ._parsing import ParseError
from .exterior_algebra import Multivector, complement_indices, merge_sign, permutation_sign
from .metric_hodge import Metric
from .poly_forms import PolyForm, Polynomial, d, star

__all__ = [
    "MINKOWSKI",
    "Constants",
    "FieldConfig",
    "CurrentForms",
    "Residual",
    "MaxwellCheck",
    "ClassicalReport",
    "MinkowskiCheck",
    "load_field_config",
    "parse_field_config",
    "assemble_faraday",
    "assemble_excitation",
    "assemble_current",
    "potential_to_faraday",
    "source_factor",
    "check_maxwell_premetric",
    "check_maxwell_metric",
    "check_maxwell_minkowski",
    "classical_correspondence",
    "kottler_complement",
    "component_matrix",
    "minkowski_divergence",
    "FORMULATIONS",
    "check",
]

MINKOWSKI = Metric.minkowski()
NVARS = 4
_CYCLIC = ((1, 2, 3), (2, 3, 1), (3, 1, 2))


def _zero() -> Polynomial:
    return Polynomial(NVARS)


def _triple(values) -> tuple[Polynomial, Polynomial, Polynomial]:
    if values is None:
        return (_zero(),) * 3
    values = tuple(values)
    if len(values) != 3:
        raise ValueError(f"a spatial vector needs 3 components, got {len(values)}")
    out = []
    for v in values:
        if isinstance(v, str):
            v = Polynomial.parse(v, NVARS, base=0)
        elif not isinstance(v, Polynomial):
            v = Polynomial.constant(NVARS, v)
        if v.nvars != NVARS:
            raise ValueError("field components must be polynomials in x0..x3")
        out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class Constants:
    """Physical constants and unit switches.

    Physical sources are ``source_scale * pi**source_pi_power`` times the
    listed rho and J polynomials.  A negative scale with ``gaussian_4pi``
    gives the alternative source side -4*pi*S.
    """

    c: Fraction = Fraction(1)
    mu0: Fraction = Fraction(1)
    eps0: Fraction = Fraction(1)
    gaussian_4pi: bool = False
    source_scale: Fraction = Fraction(1)
    source_pi_power: int = 0

    def __post_init__(self):
        for name in ("c", "mu0", "eps0", "source_scale"):
            value = getattr(self, name)
            if isinstance(value, float):
                raise TypeError(f"{name} must be exact (int, Fraction or string), not float")
            value = Fraction(value)
            if name == "source_scale" and value == 0:
                raise ValueError("source_scale must be nonzero")
            if value <= 0 and name != "source_scale":
                raise ValueError(f"{name} must be positive")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "source_pi_power", int(self.source_pi_power))


@dataclass(frozen=True)
class FieldConfig:
    """Polynomial fields on the chart (x0, x1, x2, x3)."""

    E: tuple = None
    B: tuple = None
    D: tuple = None
    H: tuple = None
    rho: Polynomial = None
    J: tuple = None
    constants: Constants = field(default_factory=Constants)

    def __post_init__(self):
        for name in ("E", "B", "D", "H", "J"):
            object.__setattr__(self, name, _triple(getattr(self, name)))
        rho = self.rho
        if rho is None:
            rho = _zero()
        elif isinstance(rho, str):
            rho = Polynomial.parse(rho, NVARS, base=0)
        elif not isinstance(rho, Polynomial):
            rho = Polynomial.constant(NVARS, rho)
        object.__setattr__(self, "rho", rho)

    def with_units(self, gaussian: bool) -> "FieldConfig":
        c = self.constants
        consts = Constants(c.c, c.mu0, c.eps0, gaussian, c.source_scale, c.source_pi_power)
        return FieldConfig(self.E, self.B, self.D, self.H, self.rho, self.J, consts)


# ---------------------------------------------------------------- config files

_SECTION_KEYS = {"1": 0, "2": 1, "3": 2, "x": 0, "y": 1, "z": 2, "x1": 0, "x2": 1, "x3": 2}


def parse_field_config(text: str, source: str = "<config>") -> FieldConfig:
    """Parse the INI-style field-config grammar.

    Sections [E] [B] [D] [H] [J] take keys 1/2/3 (or x/y/z); [rho] takes a
    single ``value`` key; [constants] takes c, mu0, eps0, gaussian_4pi,
    source_scale and source_pi_power.  Missing entries are zero.
    """
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str.lower
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ParseError(f"{source}: {exc}") from None

    known = {"e", "b", "d", "h", "j", "rho", "constants"}
    vectors: dict[str, list] = {}
    rho = None
    consts: dict[str, object] = {}
    for section in cp.sections():
        name = section.strip().lower()
        if name not in known:
            raise ParseError(f"{source}: unknown section [{section}]")
        for key, raw in cp.items(section):
            where = f"{source}: [{section}] {key}"
            if name == "constants":
                consts[key] = _parse_constant(key, raw, where)
                continue
            try:
                poly = Polynomial.parse(raw, NVARS, base=0)
            except ParseError as exc:
                raise ParseError(f"{where}: {exc}") from None
            if name == "rho":
                if key not in ("value", "rho", "0"):
                    raise ParseError(f"{where}: [rho] takes a single 'value' entry")
                rho = poly
            else:
                if key not in _SECTION_KEYS:
                    raise ParseError(f"{where}: component key must be 1, 2, 3 or x, y, z")
                slot = vectors.setdefault(name, [_zero(), _zero(), _zero()])
                slot[_SECTION_KEYS[key]] = poly
    return FieldConfig(
        E=vectors.get("e"),
        B=vectors.get("b"),
        D=vectors.get("d"),
        H=vectors.get("h"),
        rho=rho,
        J=vectors.get("j"),
        constants=Constants(**consts),
    )


def _parse_constant(key: str, raw: str, where: str):
    raw = raw.strip()
    if key == "gaussian_4pi":
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ParseError(f"{where}: expected a boolean, got {raw!r}")
    if key == "source_pi_power":
        try:
            return int(raw)
        except ValueError:
            raise ParseError(f"{where}: expected an integer, got {raw!r}") from None
    if key in ("c", "mu0", "eps0", "source_scale"):
        try:
            value = Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{where}: expected an exact rational, got {raw!r}") from None
        if key == "source_scale":
            if value == 0:
                raise ParseError(f"{where}: must be nonzero")
        elif value <= 0:
            raise ParseError(f"{where}: must be positive")
        return value
    raise ParseError(f"{where}: unknown constant")


def load_field_config(path) -> FieldConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_field_config(fh.read(), source=str(path))


# ---------------------------------------------------------------- assembly


def _spatial_two_form(v, terms: dict) -> None:
    for i, j, k in _CYCLIC:
        blade = (j, k) if j < k else (k, j)
        terms[blade] = v[i - 1] if j < k else -v[i - 1]


def assemble_faraday(cfg: FieldConfig) -> PolyForm:
    """F = sum_cyc B_i dx_j^dx_k + sum_i E_i dx_i^dx0."""
    terms: dict = {}
    _spatial_two_form(cfg.B, terms)
    for i in (1, 2, 3):
        terms[(0, i)] = -cfg.E[i - 1]
    return PolyForm(MINKOWSKI, terms)


def assemble_excitation(cfg: FieldConfig) -> PolyForm:
    """G = sum_cyc D_i dx_j^dx_k + sum_i H_i dx0^dx_i."""
    terms: dict = {}
    _spatial_two_form(cfg.D, terms)
    for i in (1, 2, 3):
        terms[(0, i)] = cfg.H[i - 1]
    return PolyForm(MINKOWSKI, terms)


class CurrentForms(NamedTuple):
    j: PolyForm  # rho dx0 - sum J_i dx_i
    S: PolyForm  # rho dx123 - sum_cyc J_i dx0^dx_j^dx_k


def assemble_current(cfg: FieldConfig) -> CurrentForms:
    """Covariant four-current and its 3-form, as listed (no unit factors)."""
    j_terms = {(0,): cfg.rho}
    s_terms = {(1, 2, 3): cfg.rho}
    for i, a, b in _CYCLIC:
        j_terms[(i,)] = -cfg.J[i - 1]
        lo, hi = min(a, b), max(a, b)
        # dx0^dx_a^dx_b with (i, a, b) cyclic
        s_terms[(0, lo, hi)] = -cfg.J[i - 1] * (1 if a < b else -1)
    return CurrentForms(PolyForm(MINKOWSKI, j_terms), PolyForm(MINKOWSKI, s_terms))


def potential_to_faraday(A: PolyForm) -> PolyForm:
    """F = dA for a polynomial 1-form potential."""
    if A.grades() - {1}:
        raise ValueError("the potential must be a 1-form")
    return d(A)


def source_factor(constants: Constants) -> tuple[Fraction, int]:
    """(q, m) with the physical source side equal to q * pi**m * S_listed."""
    q = constants.source_scale
    m = constants.source_pi_power
    if constants.gaussian_4pi:
        q, m = 4 * q, m + 1
    return q, m


# ---------------------------------------------------------------- residuals


class Residual:
    """Exact residual ``field_part - q * pi**m * source_part``.

    With m = 0 both parts merge into one rational object.  Otherwise pi's
    transcendence makes the residual zero iff both parts vanish separately.
    Parts are PolyForms or Polynomials.
    """

    __slots__ = ("field_part", "source_part", "q", "m")

    def __init__(self, field_part, source_part=None, q: Fraction = Fraction(1), m: int = 0):
        if source_part is not None and m == 0:
            field_part = field_part - source_part * q
            source_part = None
        if source_part is not None and source_part.is_zero():
            source_part = None
        self.field_part = field_part
        self.source_part = source_part
        self.q = Fraction(q)
        self.m = m if source_part is not None else 0

    def is_zero(self) -> bool:
        return self.field_part.is_zero() and self.source_part is None

    def norm(self) -> float:
        """l1 norm of coefficients with pi evaluated in floating point; 0.0 iff exact zero."""
        total = float(self.field_part.norm1())
        if self.source_part is not None:
            total += float(abs(self.q) * self.source_part.norm1()) * math.pi ** self.m
        return total

    def __eq__(self, other):
        if not isinstance(other, Residual):
            return NotImplemented
        return (
            self.field_part == other.field_part
            and self.source_part == other.source_part
            and (self.source_part is None or (self.q, self.m) == (other.q, other.m))
        )

    __hash__ = None

    def format(self) -> str:
        if self.source_part is None:
            return _fmt(self.field_part)
        pi = "pi" if self.m == 1 else f"pi^{self.m}"
        return f"[{_fmt(self.field_part)}] - {self.q}*{pi}*[{_fmt(self.source_part)}]"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Residual({self.format()!r})"


def _fmt(x) -> str:
    if isinstance(x, Polynomial):
        return x.format(base=0)
    return x.format()


class MaxwellCheck(NamedTuple):
    homogeneous: Residual  # dF
    inhomogeneous: Residual  # dG - kS
    continuity: Residual  # d(kS)

    @property
    def passed(self) -> bool:
        return self.homogeneous.is_zero() and self.inhomogeneous.is_zero() and self.continuity.is_zero()


def _continuity(S: PolyForm, q: Fraction, m: int) -> Residual:
    zero = PolyForm(S.metric)
    return Residual(zero, d(S), -q, m) if m else Residual(d(S) * q)


def check_maxwell_premetric(
    F: PolyForm, G: PolyForm, S: PolyForm, *, q: Fraction = Fraction(1), m: int = 0
) -> MaxwellCheck:
    """Residuals (dF, dG - q pi^m S) and the continuity defect d(q pi^m S).

    Only d is used: no metric enters.
    """
    for name, form, grade in (("F", F, 2), ("excitation", G, 2), ("S", S, 3)):
        if form.grades() - {grade}:
            raise ValueError(f"{name} must be a pure {grade}-form")
    return MaxwellCheck(Residual(d(F)), Residual(d(G), S, q, m), _continuity(S, q, m))


def constitutive_excitation(F: PolyForm, constants: Constants) -> PolyForm:
    """Vacuum relation: excitation = mu0^-1 * (*F)."""
    return star(F) * (1 / constants.mu0)


def check_maxwell_metric(F: PolyForm, cfg: FieldConfig) -> MaxwellCheck:
    """dF = 0 and d(mu0^-1 *F) = k S on the Minkowski chart."""
    if F.metric != MINKOWSKI:
        raise ValueError("the metric formulation needs the Minkowski chart")
    q, m = source_factor(cfg.constants)
    S = assemble_current(cfg).S
    return check_maxwell_premetric(F, constitutive_excitation(F, cfg.constants), S, q=q, m=m)


# ---------------------------------------------------------------- Minkowski


def component_matrix(X: PolyForm) -> list[list[Polynomial]]:
    """Full antisymmetric 4x4 component matrix of a 2-form (rows x0..x3)."""
    M = [[_zero() for _ in range(4)] for _ in range(4)]
    for (a, b), p in X.terms.items():
        M[a][b] = p
        M[b][a] = -p
    return M


def _swap_dual_matrix(X: PolyForm) -> list[list[Polynomial]]:
    # X*_ij = sum_{k<l} sg(ijkl) X_kl
    M = [[_zero() for _ in range(4)] for _ in range(4)]
    for (k, l), p in X.terms.items():
        for i in range(4):
            for j in range(4):
                if len({i, j, k, l}) == 4:
                    M[i][j] = M[i][j] + p * permutation_sign((i, j, k, l))
    return M


def minkowski_divergence(X: PolyForm) -> tuple[Polynomial, ...]:
    """(div X*)_i = sum_j d_j X*_ij with X* the index-swap dual."""
    M = _swap_dual_matrix(X)
    return tuple(
        sum((M[i][j].diff(j) for j in range(4)), _zero()) for i in range(4)
    )


def _swap_dual_vector(S: PolyForm) -> tuple[Polynomial, ...]:
    # S*_i = sg(i, J) S_J
    out = [_zero() for _ in range(4)]
    for blade, p in S.terms.items():
        (i,) = complement_indices(blade, 4, 0)
        out[i] = out[i] + p * merge_sign((i,), blade)
    return tuple(out)


class MinkowskiCheck(NamedTuple):
    first: tuple[Residual, ...]  # div F*
    second: tuple[Residual, ...]  # div G* - k S*
    continuity: Residual

    @property
    def passed(self) -> bool:
        return all(r.is_zero() for r in self.first + self.second) and self.continuity.is_zero()


def check_maxwell_minkowski(cfg: FieldConfig) -> MinkowskiCheck:
    """Component equations div F* = 0 and div G* = k S* for the dual matrices.

    Here S* = (rho, J1, J2, J3).
    """
    q, m = source_factor(cfg.constants)
    F = assemble_faraday(cfg)
    G = assemble_excitation(cfg)
    S = assemble_current(cfg).S
    first = tuple(Residual(p) for p in minkowski_divergence(F))
    s_dual = _swap_dual_vector(S)
    second = tuple(Residual(p, s, q, m) for p, s in zip(minkowski_divergence(G), s_dual))
    # d_mu S*^mu, the four-divergence of (rho, J)
    div_s = sum((s.diff(i) for i, s in enumerate(s_dual)), _zero())
    cont = Residual(_zero(), div_s, -q, m) if m else Residual(div_s * q)
    return MinkowskiCheck(first, second, cont)


# ---------------------------------------------------------------- classical


def _curl(v) -> tuple[Polynomial, ...]:
    return (
        v[2].diff(2) - v[1].diff(3),
        v[0].diff(3) - v[2].diff(1),
        v[1].diff(1) - v[0].diff(2),
    )


def _div(v) -> Polynomial:
    return v[0].diff(1) + v[1].diff(2) + v[2].diff(3)


class ClassicalReport(NamedTuple):
    faraday: tuple[Residual, ...]  # curl E + d0 B
    div_B: Residual
    ampere: tuple[Residual, ...]  # curl H - d0 D - k J
    gauss: Residual  # div D - k rho
    continuity: Residual  # d0 (k rho) + div (k J)
    agrees_with_forms: bool

    @property
    def passed(self) -> bool:
        parts = self.faraday + self.ampere + (self.div_B, self.gauss, self.continuity)
        return all(r.is_zero() for r in parts)


def classical_correspondence(cfg: FieldConfig) -> ClassicalReport:
    """Vector-calculus Maxwell residuals, cross-checked term by term against dF and dG - kS."""
    q, m = source_factor(cfg.constants)
    curl_e, curl_h = _curl(cfg.E), _curl(cfg.H)
    faraday = tuple(Residual(curl_e[i] + cfg.B[i].diff(0)) for i in range(3))
    div_b = Residual(_div(cfg.B))
    ampere = tuple(
        Residual(curl_h[i] - cfg.D[i].diff(0), cfg.J[i], q, m) for i in range(3)
    )
    gauss = Residual(_div(cfg.D), cfg.rho, q, m)
    cont_poly = cfg.rho.diff(0) + _div(cfg.J)
    continuity = Residual(_zero(), cont_poly, -q, m) if m else Residual(cont_poly * q)

    forms = check_maxwell_premetric(
        assemble_faraday(cfg), assemble_excitation(cfg), assemble_current(cfg).S, q=q, m=m
    )
    agree = _component(forms.inhomogeneous, (1, 2, 3)) == gauss
    agree &= _component(forms.homogeneous, (1, 2, 3)) == div_b
    for i, a, b in _CYCLIC:
        blade = (0, min(a, b), max(a, b))
        orient = 1 if a < b else -1
        agree &= _component(forms.homogeneous, blade, orient) == faraday[i - 1]
        agree &= _component(forms.inhomogeneous, blade, -orient) == ampere[i - 1]
    agree &= forms.continuity.is_zero() == continuity.is_zero()
    return ClassicalReport(faraday, div_b, ampere, gauss, continuity, bool(agree))


def _component(r: Residual, blade, sign: int = 1) -> Residual:
    """One coefficient of a form residual, as a polynomial residual."""
    fp = r.field_part.coefficient(blade) * sign
    if r.source_part is None:
        return Residual(fp)
    return Residual(fp, r.source_part.coefficient(blade) * sign, r.q, r.m)


# ---------------------------------------------------------------- Kottler


def kottler_complement(xi, vol=1):
    """Premetric dual of a covariant 2- or 3-quantity in dimension 4.

    Solves xi_J = vol * e_{J K} xi*^K for the contravariant xi*, i.e.
    xi*^K = e_{J K} xi_J / vol.  Only the volume coefficient enters; with
    vol = 1 this is the Grassmann complement.  Accepts Multivector or PolyForm.
    """
    vol = Fraction(vol)
    if vol == 0:
        raise ValueError("the volume form must be nonzero")
    if xi.dim != 4:
        raise ValueError(f"the Kottler complement lives in dimension 4, got {xi.dim}")
    if xi.grades() - {2, 3}:
        raise ValueError(f"expected grade 2 or 3, got grades {sorted(xi.grades())}")
    out = {}
    for blade, c in xi.terms.items():
        rest = complement_indices(blade, 4, xi.base)
        out[rest] = c * (merge_sign(blade, rest) / vol)
    if isinstance(xi, PolyForm):
        return PolyForm(xi.metric, out)
    return Multivector(4, out, base=xi.base)


# ---------------------------------------------------------------- dispatcher

FORMULATIONS = ("premetric", "metric", "classical", "minkowski")


def check(cfg: FieldConfig, formulation: str):
    """Run one formulation; every result has ``.passed`` and ``.continuity``."""
    if formulation == "premetric":
        q, m = source_factor(cfg.constants)
        return check_maxwell_premetric(
            assemble_faraday(cfg), assemble_excitation(cfg), assemble_current(cfg).S, q=q, m=m
        )
    if formulation == "metric":
        return check_maxwell_metric(assemble_faraday(cfg), cfg)
    if formulation == "classical":
        return classical_correspondence(cfg)
    if formulation == "minkowski":
        return check_maxwell_minkowski(cfg)
    raise ValueError(f"unknown formulation {formulation!r}; choose from {', '.join(FORMULATIONS)}")
