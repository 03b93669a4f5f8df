"""Registry of inequality checks between A-numerical radii and related quantities.

Each check evaluates both sides of one or more relations ("parts") on a
concrete instance. Suprema computed by ``radii`` are lower estimates with a
gap, so every intermediate quantity is carried as an interval ``Est`` that
is known to contain the true value. For a part ``lhs <= rhs`` the slack can
only be understated by how far the computed lhs may exceed the true lhs
plus how far the true rhs may exceed the computed rhs; that amount is the
part's certified gap. Equalities use the full width of both intervals.

A part passes when

    slack >= -(certified_gap + rel_tol * scale)        for "<=" parts
    |lhs - rhs| <= certified_gap + rel_tol * scale     for "=" parts

with scale = max(1, |lhs|, |rhs|). Parts marked "info" are reported but do
not decide the verdict. The report's top-level numbers come from the
binding part, the one with the least margin.
"""

from __future__ import annotations

import cmath
import enum
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from . import numerics as nx
from . import oracle
from . import radii
from . import semihilbert as sh
from .errors import BadParameter

REL_TOL = 1e-7
SELFADJOINT_TOL = 1e-8
ALPHA_GRID: tuple[complex, ...] = (0.5, 1.0, 2.0, 1 + 1j, -2.0, 3 * cmath.exp(1j * math.pi / 4))
TH4_GRID: tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)
BUZANO_SAMPLES = 10_000


class CheckId(str, enum.Enum):
    TH1_LOWER = "TH1_LOWER"
    TH1_UPPER = "TH1_UPPER"
    COR_SELFADJ_LOWER = "COR_SELFADJ_LOWER"
    COR_PCOR = "COR_PCOR"
    COR_COR1 = "COR_COR1"
    TH_PRODUCT = "TH_PRODUCT"
    PROP_RANKONE = "PROP_RANKONE"
    LEM_BUZANO = "LEM_BUZANO"
    TH_THEOREM1 = "TH_THEOREM1"
    COR_THEOREM1_T = "COR_THEOREM1_T"
    TH3 = "TH3"
    TH3_ALPHA2 = "TH3_ALPHA2"
    TH3_SINGLE = "TH3_SINGLE"
    TH2 = "TH2"
    COR2 = "COR2"
    EQ5 = "EQ5"
    TH4_LOWER = "TH4_LOWER"
    TH4_UPPER = "TH4_UPPER"
    REMARK_CHAIN = "REMARK_CHAIN"
    BOHR_SCALAR = "BOHR_SCALAR"
    SANDWICH = "SANDWICH"


# -- interval arithmetic ------------------------------------------------------------

@dataclass(frozen=True)
class Est:
    """A computed value v together with an interval [lo, hi] holding the truth."""

    v: float
    lo: float
    hi: float

    @staticmethod
    def of(x) -> "Est":
        if isinstance(x, Est):
            return x
        x = float(x)
        return Est(x, x, x)

    @staticmethod
    def sup(result: radii.RadiusResult) -> "Est":
        """A supremum estimated from below: truth lies in [value, value + gap]."""
        return Est(result.value, result.value, result.value + result.gap)

    def __add__(self, o):
        o = Est.of(o)
        return Est(self.v + o.v, self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Est(-self.v, -self.hi, -self.lo)

    def __sub__(self, o):
        return self + (-Est.of(o))

    def __rsub__(self, o):
        return Est.of(o) - self

    def __mul__(self, o):
        o = Est.of(o)
        c = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Est(self.v * o.v, min(c), max(c))

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = Est.of(o)
        if o.lo <= 0:
            raise ZeroDivisionError("interval divisor must be positive")
        return self * Est(1 / o.v, 1 / o.hi, 1 / o.lo)

    def __pow__(self, p):
        # only used on nonnegative quantities
        lo = max(self.lo, 0.0)
        return Est(max(self.v, 0.0) ** p, lo ** p, max(self.hi, 0.0) ** p)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Est(abs(self.v), 0.0, max(-self.lo, self.hi))

    def sqrt(self):
        return Est(math.sqrt(max(self.v, 0.0)), math.sqrt(max(self.lo, 0.0)), math.sqrt(max(self.hi, 0.0)))

    @property
    def width(self) -> float:
        return self.hi - self.lo


def emax(*xs) -> Est:
    xs = [Est.of(x) for x in xs]
    return Est(max(x.v for x in xs), max(x.lo for x in xs), max(x.hi for x in xs))


def emin(*xs) -> Est:
    xs = [Est.of(x) for x in xs]
    return Est(min(x.v for x in xs), min(x.lo for x in xs), min(x.hi for x in xs))


# -- reports ------------------------------------------------------------------------

@dataclass
class Part:
    name: str
    relation: str  # "<=", "=" or "info"
    lhs: Est
    rhs: Est
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lhs, self.rhs = Est.of(self.lhs), Est.of(self.rhs)


@dataclass
class PartReport:
    name: str
    relation: str
    params: dict
    lhs: float
    rhs: float
    slack: float
    certified_gap: float
    passed: bool
    margin: float

    def to_dict(self) -> dict:
        return {"name": self.name, "relation": self.relation, "params": _jsonable(self.params),
                "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
                "certified_gap": self.certified_gap, "pass": self.passed}


@dataclass
class BoundReport:
    check: CheckId
    params: dict
    lhs: float
    rhs: float
    slack: float
    certified_gap: float
    passed: bool
    binding: str = ""
    parts: list[PartReport] = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    rel_tol: float = REL_TOL

    def part(self, name: str) -> PartReport:
        for p in self.parts:
            if p.name == name:
                return p
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "check": self.check.value,
            "params": _jsonable(self.params),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "certified_gap": self.certified_gap,
            "pass": self.passed,
            "binding": self.binding,
            "rel_tol": self.rel_tol,
            "flags": _jsonable(self.flags),
            "parts": [p.to_dict() for p in self.parts],
        }


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, np.generic):
        return v.item()
    return v


def _judge(part: Part, rel_tol: float) -> PartReport:
    lhs, rhs = part.lhs, part.rhs
    scale = max(1.0, abs(lhs.v), abs(rhs.v))
    tol = rel_tol * scale
    if part.relation == "=":
        slack = abs(lhs.v - rhs.v)
        gap = lhs.width + rhs.width
        margin = gap + tol - slack
    else:
        slack = rhs.v - lhs.v
        gap = (lhs.v - lhs.lo) + (rhs.hi - rhs.v)
        margin = slack + gap + tol
    return PartReport(part.name, part.relation, dict(part.params), lhs.v, rhs.v, slack, gap, margin >= 0, margin)


def _report(check: CheckId, params: dict, parts: list[Part], rel_tol: float, flags=None) -> BoundReport:
    judged = [_judge(p, rel_tol) for p in parts]
    decisive = [p for p in judged if p.relation != "info"]
    if not decisive:
        raise BadParameter(f"{check.value}: nothing to evaluate for these parameters")
    bind = min(decisive, key=lambda p: p.margin)
    merged = dict(params)
    merged.update(bind.params)
    return BoundReport(check, merged, bind.lhs, bind.rhs, bind.slack, bind.certified_gap,
                       all(p.passed for p in decisive), bind.name, judged, dict(flags or {}), rel_tol)


# -- cached evaluation of A-quantities ------------------------------------------------

class Evaluator:
    """Per-context cache of reductions, adjoints and radii.

    Operators are combined in ambient coordinates (so B^#B means
    a_adjoint(B) @ B) and only then compressed to R(A).
    """

    def __init__(self, ctx: sh.AContext, cfg: radii.RadiiConfig = radii.DEFAULT):
        self.ctx = ctx
        self.cfg = cfg
        self._cache: dict = {}

    def _memo(self, tag, mats, fn):
        key = (tag,) + tuple(np.ascontiguousarray(m).tobytes() for m in mats)
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def op(self, T) -> np.ndarray:
        T = np.asarray(T, dtype=complex)
        nx.as_square(T, "operand")
        if T.shape[0] != self.ctx.n:
            sh.reduce(self.ctx, T)  # raises DimensionMismatch with context
        return T

    def red(self, T):
        return self._memo("red", [T], lambda: sh.reduce(self.ctx, T))

    def sharp(self, T):
        return self._memo("sharp", [T], lambda: sh.a_adjoint(self.ctx, T))

    def w(self, T) -> Est:
        return self._memo("w", [T], lambda: Est.sup(radii.numerical_radius(self.red(T), self.cfg)))

    def c(self, T) -> Est:
        return self._memo("c", [T], lambda: Est.sup(radii.crawford(self.red(T), self.cfg)))

    def norm(self, T) -> Est:
        return self._memo("norm", [T], lambda: Est.of(radii.op_norm(self.red(T)).value))

    def we(self, B, C) -> Est:
        return self._memo("we", [B, C], lambda: Est.sup(
            radii.euclidean_radius(self.red(B), self.red(C), self.cfg)))

    def en(self, B, C) -> Est:
        return self._memo("en", [B, C], lambda: Est.of(
            radii.euclidean_norm_pair(self.red(B), self.red(C))))

    def cart(self, T):
        S = self.sharp(T)
        return (T + S) / 2, (T - S) / 2j


# -- parameter handling ---------------------------------------------------------

def parse_complex(v) -> complex:
    if isinstance(v, str):
        parts = [p for p in v.replace(" ", "").split(",") if p]
        if len(parts) == 1:
            return complex(parts[0].replace("i", "j"))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
        raise BadParameter(f"cannot read complex number from {v!r}")
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise BadParameter(f"complex numbers are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _alphas(params: dict, default) -> list[complex]:
    if "alpha" in params:
        vals = [params["alpha"]]
    else:
        vals = list(params.get("alphas", default))
    out = [parse_complex(a) for a in vals]
    if not out:
        raise BadParameter("empty alpha grid")
    for a in out:
        if not cmath.isfinite(a):
            raise BadParameter(f"alpha must be finite, got {a}")
    return out


def _nonzero_alphas(params) -> list[complex]:
    out = _alphas(params, ALPHA_GRID)
    if any(a == 0 for a in out):
        raise BadParameter("alpha must be non-zero")
    return out


def _unit_alphas(params) -> list[float]:
    out = []
    for a in _alphas(params, TH4_GRID):
        if a.imag != 0 or not 0 <= a.real <= 1:
            raise BadParameter(f"alpha must lie in [0, 1], got {a}")
        out.append(a.real)
    return out


def _alpha_params(a) -> dict:
    return {"alpha": a}


def _kmax(a: complex) -> float:
    return max(1.0, abs(1 - a))


# -- the checks --------------------------------------------------------------------

def _th1_lower(ev, B, C, params):
    w = ev.w
    half_sq = 0.5 * w(B @ B + C @ C)
    lhs = half_sq + 0.5 * emax(w(B), w(C)) * abs(w(B + C) - w(B - C))
    rhs = ev.we(B, C) ** 2
    return [Part("main", "<=", lhs, rhs),
            Part("refines_half_w_of_sum_of_squares", "<=", half_sq, lhs)]


def _th1_upper(ev, B, C, params):
    Bs, Cs = ev.sharp(B), ev.sharp(C)
    P, Q = Bs @ B + Cs @ C, B @ Bs + C @ Cs
    rhs = ev.w(P + 1j * Q) / math.sqrt(2)
    bound = (ev.norm(P) ** 2 + ev.norm(Q) ** 2).sqrt() / math.sqrt(2)
    return [Part("main", "<=", ev.we(B, C) ** 2, rhs),
            Part("refined_by_norms", "<=", rhs, bound)]


def _cor_selfadj_lower(ev, B, C, params):
    for name, T in (("B", B), ("C", C)):
        if not sh.is_a_selfadjoint(ev.ctx, T, SELFADJOINT_TOL):
            raise BadParameter(f"{name} is not A-selfadjoint")
    n = ev.norm
    lhs = 0.5 * n(B @ B + C @ C) + 0.5 * emax(n(B), n(C)) * abs(n(B + C) - n(B - C))
    return [Part("main", "<=", lhs, ev.we(B, C) ** 2)]


def _cor_pcor(ev, T, params):
    R, I = ev.cart(T)
    n = ev.norm
    S = ev.sharp(T)
    a = abs(n(R + I) - n(R - I))
    sym = n(S @ T + T @ S)
    w2 = ev.w(T) ** 2
    return [Part("lower", "<=", 0.25 * sym + 0.5 * a * emax(n(R), n(I)), w2),
            Part("upper", "<=", w2, 0.5 * sym)]


def _cor_cor1(ev, T, params):
    R, I = ev.cart(T)
    T2 = T @ T
    R2 = (T2 + ev.sharp(T2)) / 2
    lhs = 0.5 * ev.norm(R2) + 0.5 * ev.w(T) * abs(ev.norm(R) - ev.norm(I))
    return [Part("main", "<=", lhs, ev.w(T) ** 2)]


def _th_product(ev, B, C, params):
    Bs, Cs = ev.sharp(B), ev.sharp(C)
    lhs = ev.norm(B + C) ** 4 / 8
    rhs = ev.we(Bs @ B, Cs @ C) * ev.we(B @ Bs, C @ Cs)
    return [Part("main", "<=", lhs, rhs)]


def _check_rank_one(ev, T):
    P = ev.red(T)
    scale = max(1.0, float(np.abs(P).max()))
    tol = 1e-8 * scale
    if (np.abs(P @ P - P).max() > tol or np.abs(P - nx.dagger(P)).max() > tol
            or abs(np.trace(P) - 1) > 1e-8 * P.shape[0]):
        raise BadParameter("T is not a rank-one A-projection x (x)_A x with ||x||_A = 1")


def _prop_rankone(ev, T, params):
    _check_rank_one(ev, T)
    I = np.eye(ev.ctx.n, dtype=complex)
    parts = []
    for k, a in enumerate(_nonzero_alphas(params)):
        val = ev.norm(a * T - I)
        p = _alpha_params(a)
        parts.append(Part(f"lower[{k}]", "<=", abs(a - 1), val, p))
        parts.append(Part(f"upper[{k}]", "<=", val, _kmax(a), p))
        if abs(a - 1) >= 1:
            parts.append(Part(f"equality[{k}]", "=", val, abs(a - 1), p))
    return parts


def _lem_buzano(ev, params):
    cfg = oracle.OracleConfig(n_samples=int(params.get("n_samples", BUZANO_SAMPLES)),
                              seed=int(params.get("seed", 0)))
    alphas = _nonzero_alphas(params)
    slacks = oracle.buzano_sample_many(ev.ctx, cfg, alphas)
    # worst sampled triple expressed as lhs - rhs <= 0
    return [Part(f"alpha[{k}]", "<=", -s, 0.0, _alpha_params(a))
            for k, (a, s) in enumerate(zip(alphas, slacks))]


def _th_theorem1(ev, B, C, params):
    lhs = ev.we(B, C) ** 2
    en = ev.en(B, C) * ev.en(ev.sharp(B), ev.sharp(C))
    tail = ev.w(B @ B) + ev.w(C @ C)
    return [Part(f"alpha[{k}]", "<=", lhs, (_kmax(a) * en + tail) / abs(a), _alpha_params(a))
            for k, a in enumerate(_nonzero_alphas(params))]


def _cor_theorem1_t(ev, T, params):
    lhs = ev.w(T) ** 2
    nrm2, tail = ev.norm(T) ** 2, ev.w(T @ T)
    return [Part(f"alpha[{k}]", "<=", lhs, (_kmax(a) * nrm2 + tail) / abs(a), _alpha_params(a))
            for k, a in enumerate(_nonzero_alphas(params))]


def _th3_terms(ev, B, C):
    lhs = ev.we(B, C) ** 2
    head = emin(ev.w(B - C) ** 2, ev.w(B + C) ** 2)
    mixed = ev.norm(ev.sharp(C) @ C + B @ ev.sharp(B))
    return lhs, head, mixed, 2 * ev.w(B @ C)


def _th3(ev, B, C, params):
    lhs, head, mixed, wbc = _th3_terms(ev, B, C)
    return [Part(f"alpha[{k}]", "<=", lhs, head + (_kmax(a) * mixed + wbc) / abs(a), _alpha_params(a))
            for k, a in enumerate(_nonzero_alphas(params))]


def _th3_alpha2(ev, B, C, params):
    lhs, head, mixed, wbc = _th3_terms(ev, B, C)
    return [Part("main", "<=", lhs, head + (mixed + wbc) / 2)]


def _th3_single(ev, T, params):
    lhs = ev.w(T) ** 2
    S = ev.sharp(T)
    sym, tail = ev.norm(S @ T + T @ S), ev.w(T @ T)
    parts = [Part(f"alpha[{k}]", "<=", lhs, (0.5 * _kmax(a) * sym + tail) / abs(a), _alpha_params(a))
             for k, a in enumerate(_nonzero_alphas(params))]
    parts.append(Part("alpha_two", "<=", lhs, 0.25 * sym + 0.5 * tail, _alpha_params(2.0)))
    return parts


def _th2(ev, B, C, params):
    w, c = ev.w, ev.c
    lhs = 0.5 * emax(w(B + C) ** 2 + c(B - C) ** 2, w(B - C) ** 2 + c(B + C) ** 2)
    return [Part("main", "<=", lhs, ev.we(B, C) ** 2)]


def _cor2(ev, B, C, params):
    w, c = ev.w, ev.c
    lhs = emax(w(B) ** 2 + c(C) ** 2, w(C) ** 2 + c(B) ** 2)
    return [Part("main", "<=", lhs, ev.we(B, C) ** 2)]


def _eq5(ev, B, C, params):
    return [Part("main", "=", ev.we(B + C, B - C) ** 2, 2 * ev.we(B, C) ** 2)]


def _th4_mix(a, B, C, sign=1.0):
    return math.sqrt(a) * B + sign * math.sqrt(1 - a) * C


def _th4_lower(ev, B, C, params):
    rhs = ev.we(B, C) ** 2
    parts = []
    for k, a in enumerate(_unit_alphas(params)):
        p = _alpha_params(a)
        parts.append(Part(f"plus[{k}]", "<=", ev.w(_th4_mix(a, B, C)) ** 2, rhs, p))
        parts.append(Part(f"minus[{k}]", "<=", ev.w(_th4_mix(a, B, C, -1.0)) ** 2, rhs, p))
    return parts


def _th4_upper(ev, B, C, params):
    lhs = ev.we(B, C) ** 2
    parts = []
    for k, a in enumerate(_unit_alphas(params)):
        p = _alpha_params(a)
        first = ev.w(_th4_mix(a, B, C)) ** 2
        s, t = math.sqrt(1 - a), math.sqrt(a)
        parts.append(Part(f"TH4_UPPER_MINUS[{k}]", "<=", lhs, first + ev.w(s * B - t * C) ** 2, p))
        parts.append(Part(f"TH4_UPPER_PLUS[{k}]", "info", lhs, first + ev.w(s * B + t * C) ** 2, p))
    return parts


def _remark_chain(ev, B, C, params):
    w = ev.w
    we2 = ev.we(B, C) ** 2
    grid = _unit_alphas(params)
    best = emax(*[w(_th4_mix(a, B, C, s)) ** 2 for a in grid for s in (1.0, -1.0)])
    half_pm = 0.5 * emax(w(B + C) ** 2, w(B - C) ** 2)
    half_sq = 0.5 * w(B @ B + C @ C)
    parts = [Part("we2_vs_interpolation", "<=", best, we2),
             Part("interpolation_vs_half_sum_diff", "<=", half_pm, best),
             Part("half_sum_diff_vs_half_squares", "<=", half_sq, half_pm)]

    # equality in the lower bound forces w(B+C) = w(B-C)
    d = we2 - half_sq
    m = emax(w(B), w(C))
    scale = max(1.0, abs(we2.v))
    if d.v <= (d.width + REL_TOL * scale) and m.lo > 0:
        bound = 2 * Est(max(d.v, 0.0), 0.0, max(d.hi, 0.0)) / m
        parts.append(Part("equality_forces_balance", "<=", abs(w(B + C) - w(B - C)), bound))

    # single-operator chain with B as T
    R, I = ev.cart(B)
    S = ev.sharp(B)
    n = ev.norm
    half_ri = 0.5 * emax(n(R + I) ** 2, n(R - I) ** 2)
    quarter = 0.25 * n(S @ B + B @ S)
    parts += [Part("w2_vs_half_re_pm_im", "<=", half_ri, w(B) ** 2),
              Part("half_re_pm_im_vs_quarter_sym", "<=", quarter, half_ri)]
    a = abs(n(R + I) - n(R - I))
    pcor = quarter + 0.5 * a * emax(n(R), n(I))
    parts.append(Part("pcor_lower_vs_half_re_pm_im", "info", pcor, half_ri))
    return parts


def _bohr(params):
    if "a" not in params or "r" not in params:
        raise BadParameter("BOHR_SCALAR needs parameters a (list) and r")
    a = [float(x) for x in params["a"]]
    r = float(params["r"])
    if not a or any(x < 0 or not math.isfinite(x) for x in a):
        raise BadParameter("a must be a nonempty list of finite nonnegative numbers")
    if not (r >= 1 and math.isfinite(r)):
        raise BadParameter("r must be a finite number >= 1")
    k = len(a)
    lhs = math.fsum(a) ** r
    rhs = k ** (r - 1) * math.fsum(x ** r for x in a)
    parts = [Part("main", "<=", Est.of(lhs), Est.of(rhs))]
    equal = all(x == a[0] for x in a)
    if equal:
        parts.append(Part("equality_case", "=", Est.of(lhs), Est.of(rhs)))
    return parts, {"equality_case": equal}


def _sandwich(ev, T, params):
    w, n = ev.w(T), ev.norm(T)
    return [Part("lower", "<=", w, n), Part("upper", "<=", n, 2 * w)]


# -- catalog --------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckInfo:
    id: CheckId
    description: str
    signature: str
    parameter_domain: str
    kind: str  # "pair", "single", "rank_one", "context", "scalar"


_PAIR, _SINGLE = "(ctx, B, C)", "(ctx, T)"
_ANY_ALPHA = "alpha in C\\{0}"
_CATALOG: tuple[CheckInfo, ...] = (
    CheckInfo(CheckId.TH1_LOWER, "w(B^2+C^2)/2 + max(w(B),w(C))|w(B+C)-w(B-C)|/2 <= w_e^2(B,C)",
              _PAIR, "none", "pair"),
    CheckInfo(CheckId.TH1_UPPER, "w_e^2(B,C) <= w((B#B+C#C) + i(BB#+CC#))/sqrt(2)", _PAIR, "none", "pair"),
    CheckInfo(CheckId.COR_SELFADJ_LOWER,
              "A-selfadjoint B, C: |B^2+C^2|/2 + max(|B|,|C|)||B+C|-|B-C||/2 <= w_e^2(B,C)",
              _PAIR, "none", "selfadjoint_pair"),
    CheckInfo(CheckId.COR_PCOR, "|T#T+TT#|/4 + (a/2)max(|Re T|,|Im T|) <= w^2(T) <= |TT#+T#T|/2, "
              "a = ||Re T+Im T|-|Re T-Im T||", _SINGLE, "none", "single"),
    CheckInfo(CheckId.COR_COR1, "|Re(T^2)|/2 + w(T)||Re T|-|Im T||/2 <= w^2(T)", _SINGLE, "none", "single"),
    CheckInfo(CheckId.TH_PRODUCT, "|B+C|^4/8 <= w_e(B#B, C#C) w_e(BB#, CC#)", _PAIR, "none", "pair"),
    CheckInfo(CheckId.PROP_RANKONE, "|alpha-1| <= |alpha T - I| <= max(1,|alpha-1|) for T = x (x)_A x, "
              "equality when |alpha-1| >= 1", "(ctx, T = x (x)_A x)", _ANY_ALPHA, "rank_one"),
    CheckInfo(CheckId.LEM_BUZANO, "|<x,e><e,y>| <= (|<x,y>| + max(1,|alpha-1|)|x||y|)/|alpha| for A-unit e",
              "(ctx)", _ANY_ALPHA, "context"),
    CheckInfo(CheckId.TH_THEOREM1, "w_e^2(B,C) <= (max(1,|1-alpha|)|(B,C)|_e |(B#,C#)|_e + w(B^2) + w(C^2))"
              "/|alpha|", _PAIR, _ANY_ALPHA, "pair"),
    CheckInfo(CheckId.COR_THEOREM1_T, "w^2(T) <= (max(1,|1-alpha|)|T|^2 + w(T^2))/|alpha|",
              _SINGLE, _ANY_ALPHA, "single"),
    CheckInfo(CheckId.TH3, "w_e^2(B,C) <= min(w^2(B-C), w^2(B+C)) + (max(1,|1-alpha|)|C#C+BB#| + 2w(BC))"
              "/|alpha|", _PAIR, _ANY_ALPHA, "pair"),
    CheckInfo(CheckId.TH3_ALPHA2, "w_e^2(B,C) <= min(w^2(B-C), w^2(B+C)) + (|C#C+BB#| + 2w(BC))/2",
              _PAIR, "none", "pair"),
    CheckInfo(CheckId.TH3_SINGLE, "w^2(T) <= (max(1,|1-alpha|)|T#T+TT#|/2 + w(T^2))/|alpha|",
              _SINGLE, _ANY_ALPHA, "single"),
    CheckInfo(CheckId.TH2, "max(w^2(B+C)+c^2(B-C), w^2(B-C)+c^2(B+C))/2 <= w_e^2(B,C)", _PAIR, "none", "pair"),
    CheckInfo(CheckId.COR2, "max(w^2(B)+c^2(C), w^2(C)+c^2(B)) <= w_e^2(B,C)", _PAIR, "none", "pair"),
    CheckInfo(CheckId.EQ5, "w_e^2(B+C, B-C) = 2 w_e^2(B,C)", _PAIR, "none", "pair"),
    CheckInfo(CheckId.TH4_LOWER, "w^2(sqrt(a)B +- sqrt(1-a)C) <= w_e^2(B,C)", _PAIR, "alpha in [0, 1]", "pair"),
    CheckInfo(CheckId.TH4_UPPER, "w_e^2(B,C) <= w^2(sqrt(a)B + sqrt(1-a)C) + w^2(sqrt(1-a)B -+ sqrt(a)C)",
              _PAIR, "alpha in [0, 1]", "pair"),
    CheckInfo(CheckId.REMARK_CHAIN, "w_e^2 >= max_a w^2(sqrt(a)B +- sqrt(1-a)C) >= max w^2(B+-C)/2 >= "
              "w(B^2+C^2)/2 and w^2(B) >= max|Re B +- Im B|^2/2 >= |B#B+BB#|/4", _PAIR, "alpha in [0, 1]", "pair"),
    CheckInfo(CheckId.BOHR_SCALAR, "(sum a_i)^r <= k^(r-1) sum a_i^r", "(a, r)", "a_i >= 0, r >= 1", "scalar"),
    CheckInfo(CheckId.SANDWICH, "w(T) <= |T| <= 2 w(T)", _SINGLE, "none", "single"),
)

_PAIR_FNS = {
    CheckId.TH1_LOWER: _th1_lower, CheckId.TH1_UPPER: _th1_upper,
    CheckId.COR_SELFADJ_LOWER: _cor_selfadj_lower, CheckId.TH_PRODUCT: _th_product,
    CheckId.TH_THEOREM1: _th_theorem1, CheckId.TH3: _th3, CheckId.TH3_ALPHA2: _th3_alpha2,
    CheckId.TH2: _th2, CheckId.COR2: _cor2, CheckId.EQ5: _eq5, CheckId.TH4_LOWER: _th4_lower,
    CheckId.TH4_UPPER: _th4_upper, CheckId.REMARK_CHAIN: _remark_chain,
}
_SINGLE_FNS = {
    CheckId.COR_PCOR: _cor_pcor, CheckId.COR_COR1: _cor_cor1, CheckId.PROP_RANKONE: _prop_rankone,
    CheckId.COR_THEOREM1_T: _cor_theorem1_t, CheckId.TH3_SINGLE: _th3_single, CheckId.SANDWICH: _sandwich,
}


def list_checks() -> list[CheckInfo]:
    return list(_CATALOG)


def check_info(check) -> CheckInfo:
    check = CheckId(check)
    return next(c for c in _CATALOG if c.id is check)


def evaluate(check, ctx: sh.AContext | None, B=None, C=None, params: dict | None = None, *,
             rel_tol: float = REL_TOL, evaluator: Evaluator | None = None,
             cfg: radii.RadiiConfig = radii.DEFAULT) -> BoundReport:
    """Evaluate one registered check on an instance.

    ``evaluator`` lets several checks on the same context share cached
    radii. BOHR_SCALAR ignores ctx and operands; LEM_BUZANO ignores the
    operands.
    """
    check = CheckId(check)
    params = dict(params or {})
    if check is CheckId.BOHR_SCALAR:
        parts, flags = _bohr(params)
        return _report(check, params, parts, rel_tol, flags)
    if ctx is None:
        raise BadParameter(f"{check.value} needs a context")
    ev = evaluator if evaluator is not None else Evaluator(ctx, cfg)
    if ev.ctx is not ctx:
        raise BadParameter("evaluator belongs to a different context")
    if check is CheckId.LEM_BUZANO:
        return _report(check, params, _lem_buzano(ev, params), rel_tol)
    if B is None:
        raise BadParameter(f"{check.value} needs operand B")
    B = ev.op(B)
    if check in _SINGLE_FNS:
        return _report(check, params, _SINGLE_FNS[check](ev, B, params), rel_tol)
    if C is None:
        raise BadParameter(f"{check.value} needs operands B and C")
    C = ev.op(C)
    return _report(check, params, _PAIR_FNS[check](ev, B, C, params), rel_tol)


def digest(M) -> str:
    return hashlib.sha256(np.ascontiguousarray(M, dtype=complex).tobytes()).hexdigest()[:16]
