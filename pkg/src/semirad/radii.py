"""Numerical radius, Crawford number, operator norm and pair radii.

Single-operator quantities are read off the support function of the
numerical range W(M),

    h(theta) = lambda_max(Re(e^{i theta} M)),    Re(X) = (X + X^*)/2,

so that w(M) = max h and c(M) = max(0, max -h). One Hermitian eigensolve at
theta yields h(theta) and h(theta + pi) = -lambda_min at once. Sampled
support lines bound W from outside (a polygon whose farthest vertex caps
w from above) and the matching boundary points bound it from inside (their
hull caps c from above); the difference to the achieved value is the
reported gap.

When the polygon converges slowly (disk-like ranges need tens of thousands
of lines) w is certified by a level set instead: r > w iff no eigenvalue of
Re(e^{i theta} M) equals r for any theta and h stays below r somewhere. The
angles where r is an eigenvalue are the unit-modulus roots of

    det(z^2 M - 2 r z I + M^*) = 0,

found as eigenvalues of a 2n x 2n pencil.

The Euclidean radius of a pair uses the Hermitian parts K1..K4 of M1, M2:

    w_e(M1, M2) = max over unit a in R^4 of lambda_max(sum_k a_k K_k)

which is maximized by alternating a <- v(x)/|v(x)|, x <- top eigenvector,
where v(x) = (<K_k x, x>)_k, from the best points of a coarse grid on the
3-sphere.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from . import numerics as nx
from . import semihilbert as sh
from .errors import DimensionMismatch

TWO_PI = 2 * math.pi


class ErrorDirection(str, enum.Enum):
    LOWER = "LowerEstimate"
    EXACT = "Exact"
    UPPER = "UpperEstimate"


@dataclass(frozen=True)
class RadiiConfig:
    theta_grid: int = 512
    bracket_tol: float = 1e-12
    rel_gap: float = 1e-9
    max_rounds: int = 10
    max_directions: int = 1 << 15
    min_spacing: float = 1e-5
    level_margin: float = 1e-6
    pair_grid: tuple[int, int, int] = (5, 8, 16)
    pair_starts: int = 8
    pair_maxit: int = 2000
    pair_tol: float = 1e-15


DEFAULT = RadiiConfig()


@dataclass
class RadiusResult:
    value: float
    witness_vector: np.ndarray
    witness_angle: float
    error_direction: ErrorDirection
    gap: float = 0.0
    angles: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "certified_gap": self.gap,
            "error_direction": self.error_direction.value,
            "witness_angle": self.witness_angle,
            "angles": dict(self.angles),
            "witness_vector": [[float(z.real), float(z.imag)] for z in self.witness_vector],
        }


# -- support function sampling -------------------------------------------------

class _Support:
    """Record of evaluated support lines and boundary points of W(M)."""

    def __init__(self, M: np.ndarray):
        self.M = M
        self.re = nx.hermitian_part(M)
        self.im = nx.skew_part(M)
        self.theta = np.empty(0)
        self.h = np.empty(0)
        self.points = np.empty(0, dtype=complex)
        self.point_theta = np.empty(0)
        # eigenvalue round-off allowance
        self.slop = 8 * M.shape[0] * nx.EPS * (np.linalg.norm(self.re, 2) + np.linalg.norm(self.im, 2))

    def rotated(self, thetas):
        thetas = np.atleast_1d(thetas)
        c, s = np.cos(thetas), np.sin(thetas)
        return c[:, None, None] * self.re - s[:, None, None] * self.im

    def sample(self, thetas, vectors: bool = False):
        thetas = np.mod(np.atleast_1d(np.asarray(thetas, dtype=float)), TWO_PI)
        H = self.rotated(thetas)
        if vectors:
            w, V = np.linalg.eigh(H)
            top, bot = V[:, :, -1], V[:, :, 0]
            zt = np.einsum("ki,ij,kj->k", top.conj(), self.M, top)
            zb = np.einsum("ki,ij,kj->k", bot.conj(), self.M, bot)
            self.points = np.concatenate([self.points, zt, zb])
            self.point_theta = np.concatenate([self.point_theta, thetas, np.mod(thetas + math.pi, TWO_PI)])
        else:
            w = np.linalg.eigvalsh(H)
        self.theta = np.concatenate([self.theta, thetas, np.mod(thetas + math.pi, TWO_PI)])
        self.h = np.concatenate([self.h, w[:, -1], -w[:, 0]])
        return w[:, -1], w[:, 0]

    def lam(self, theta: float, which: int) -> float:
        H = self.rotated(theta)[0]
        return float(np.linalg.eigvalsh(H)[which])

    def thinned(self, min_spacing: float = DEFAULT.min_spacing):
        """Sorted support lines with neighbours at least ``min_spacing`` apart.

        Any subset of support lines still bounds W(M) from outside, so lines
        are dropped freely: keep the first line of each spacing-wide bucket,
        then drop those too close to their predecessor. Survivors that were
        not adjacent in the bucket list are two buckets apart.
        """
        order = np.lexsort((-self.h, self.theta))
        th, h = self.theta[order], self.h[order]
        bucket = np.floor(th / min_spacing)
        first = np.concatenate([[True], bucket[1:] != bucket[:-1]])
        th, h = th[first], h[first]
        keep = np.concatenate([[True], np.diff(th) >= min_spacing])
        th, h = th[keep], h[keep]
        if th.size > 1 and th[0] + TWO_PI - th[-1] < min_spacing:
            th, h = th[:-1], h[:-1]
        return th, h + self.slop

    def outer_vertices(self):
        """Vertices of the outer polygon and the angle just after each."""
        th, h = self.thinned()
        th2 = np.roll(th, -1)
        th2[-1] += TWO_PI
        h2 = np.roll(h, -1)
        d = th2 - th
        if np.any(d >= math.pi - 1e-12):
            return None
        s = (h * np.cos(d) - h2) / np.sin(d)
        z = np.exp(-1j * th) * (h + 1j * s)
        return z


def _bracket_max(f, a: float, b: float, tol: float):
    """Maximize f on [a, b] by Brent's method (golden section with parabolic steps)."""
    res = scipy.optimize.minimize_scalar(lambda t: -f(t), bounds=(a, b), method="bounded",
                                         options={"xatol": tol})
    return float(res.x), -float(res.fun)


def _rotation_result(M: np.ndarray, theta: float, which: int):
    H = nx.hermitian_part(np.exp(1j * theta) * M)
    w, V = np.linalg.eigh(H)
    x = nx.unit_phase(V[:, which])
    return x, float(w[which])


def _level_roots(M: np.ndarray, r: float) -> np.ndarray:
    """Finite roots z of det(z^2 M - 2 r z I + M^*), with M scaled to unit norm."""
    n = M.shape[0]
    scale = np.linalg.norm(M, 2)
    Ms, rs = M / scale, r / scale
    I, Z = np.eye(n), np.zeros((n, n))
    lhs = np.block([[Z, I], [-nx.dagger(Ms), 2 * rs * I]])
    rhs = np.block([[I, Z], [Z, Ms]])
    z = scipy.linalg.eigvals(lhs, rhs, check_finite=False)
    return z[np.isfinite(z)]


def numerical_radius(M, cfg: RadiiConfig = DEFAULT) -> RadiusResult:
    """w(M) = max over theta of lambda_max(Re(e^{i theta} M)); lower estimate plus gap."""
    M = nx.as_square(M, "M")
    if not np.any(M):
        return RadiusResult(0.0, nx.unit_phase(np.eye(M.shape[0], dtype=complex)[:, 0]), 0.0,
                            ErrorDirection.EXACT)
    sup = _Support(M)
    half = cfg.theta_grid // 2
    sup.sample(np.arange(half) * math.pi / half)
    step = TWO_PI / cfg.theta_grid

    def refine(theta0):
        f = lambda t: sup.lam(t, -1)
        t, v = _bracket_max(f, theta0 - step, theta0 + step, cfg.bracket_tol)
        sup.sample([t])
        return np.mod(t, TWO_PI)

    def best_direction():
        top = np.flatnonzero(sup.h == sup.h.max())
        k = top[np.argmin(sup.theta[top])]
        return float(sup.theta[k]), float(sup.h[k])

    def level_set(value, hbest):
        """Certified gap from the level r just above value, or the angles where h >= r."""
        r = value + 0.5 * cfg.rel_gap * value
        if hbest + sup.slop >= r:
            return None, np.empty(0)
        z = _level_roots(M, r)
        on_circle = np.abs(np.abs(z) - 1) <= cfg.level_margin
        if not on_circle.any():
            return r - value, np.empty(0)
        return None, np.mod(np.angle(z[on_circle]), TWO_PI)

    theta, _ = best_direction()
    refine(theta)
    gap = math.inf
    for _ in range(cfg.max_rounds + 1):
        theta, hbest = best_direction()
        x, _ = _rotation_result(M, theta, -1)
        value = abs(complex(np.vdot(x, M @ x)))
        verts = sup.outer_vertices()
        if verts is not None:
            rad = np.abs(verts)
            gap = max(0.0, float(rad.max()) - value)
            if gap <= cfg.rel_gap * value:
                break
        level_gap, crossings = level_set(value, hbest)
        if level_gap is not None:
            gap = min(gap, level_gap)
            break
        if sup.theta.size >= cfg.max_directions:
            break
        new = [crossings]
        if verts is not None:
            new.append(np.mod(-np.angle(verts[rad > value * (1 + cfg.rel_gap)]), TWO_PI))
        sup.sample(np.concatenate(new))
        t_new, h_new = best_direction()
        if h_new > hbest:
            refine(t_new)
    return RadiusResult(value, x, theta, ErrorDirection.LOWER, gap)


def _hull_distance(points: np.ndarray, normal_angles: np.ndarray):
    """Distance from 0 to the hull of boundary points ordered by outward normal.

    Returns (distance, inside) where inside means 0 lies in the hull.
    """
    order = np.argsort(np.mod(-normal_angles, TWO_PI), kind="stable")
    p = points[order]
    q = np.roll(p, -1)
    e = q - p
    cross = (e.conj() * (-p)).imag  # e x (0 - p)
    scale = max(np.abs(p).max(), 1e-300)
    inside = bool(np.all(cross >= -1e-13 * scale * np.maximum(np.abs(e), 1e-300)))
    ee = np.maximum(np.abs(e) ** 2, 1e-300)
    tpar = np.clip(np.real(np.conj(e) * (-p)) / ee, 0.0, 1.0)
    d = np.abs(p + tpar * e)
    return float(d.min()), inside, order


def crawford(M, cfg: RadiiConfig = DEFAULT) -> RadiusResult:
    """c(M) = max(0, max over theta of lambda_min(Re(e^{i theta} M)))."""
    M = nx.as_square(M, "M")
    n = M.shape[0]
    if not np.any(M):
        return RadiusResult(0.0, nx.unit_phase(np.eye(n, dtype=complex)[:, 0]), 0.0, ErrorDirection.EXACT)
    sup = _Support(M)
    half = cfg.theta_grid // 2
    sup.sample(np.arange(half) * math.pi / half, vectors=True)
    step = TWO_PI / cfg.theta_grid

    def best():
        # lambda_min at theta equals -h at theta + pi
        lam_min = -sup.h
        ang = np.mod(sup.theta + math.pi, TWO_PI)
        order = np.lexsort((ang, -lam_min))
        return float(ang[order[0]]), float(lam_min[order[0]])

    theta, lmin = best()
    t, _ = _bracket_max(lambda s: sup.lam(s, 0), theta - step, theta + step, cfg.bracket_tol)
    sup.sample([t], vectors=True)
    gap = math.inf
    for _ in range(cfg.max_rounds + 1):
        theta, lmin = best()
        value = max(0.0, lmin)
        dist, inside, order = _hull_distance(sup.points, sup.point_theta)
        if inside and lmin <= sup.slop:
            gap, value = 0.0, 0.0
            break
        gap = max(0.0, dist - value)
        if gap <= cfg.rel_gap * max(value, sup.slop) or sup.theta.size >= cfg.max_directions:
            break
        # bisect the normal-angle intervals of segments that come close to 0
        na = np.mod(-sup.point_theta[order], TWO_PI)
        p = sup.points[order]
        e = np.roll(p, -1) - p
        tpar = np.clip(np.real(np.conj(e) * (-p)) / np.maximum(np.abs(e) ** 2, 1e-300), 0, 1)
        near = np.abs(p + tpar * e) < value + max(gap, sup.slop) * 0.5 + dist * 1e-12
        na2 = np.roll(na, -1)
        na2 = np.where(na2 < na, na2 + TWO_PI, na2)
        mids = (na + na2)[near] / 2
        sup.sample(np.mod(-mids, TWO_PI), vectors=True)
    x, lam = _rotation_result(M, theta, 0)
    direction = ErrorDirection.EXACT if gap == 0.0 and value == 0.0 else ErrorDirection.LOWER
    return RadiusResult(value, x, theta, direction, gap)


def op_norm(M) -> RadiusResult:
    M = nx.as_matrix(M, "M")
    U, s, Vh = np.linalg.svd(M)
    x = nx.unit_phase(Vh[0].conj())
    return RadiusResult(float(s[0]), x, 0.0, ErrorDirection.EXACT)


# -- pairs --------------------------------------------------------------------

def _sphere_grid(nt: int, nth: int, nps: int) -> np.ndarray:
    """Half of a (t, theta, psi) grid on S^3; antipodes come from lambda_min."""
    t = np.linspace(0, math.pi / 2, nt)
    th = np.arange(nth) * math.pi / nth
    ps = np.arange(nps) * TWO_PI / nps
    T, TH, PS = np.meshgrid(t, th, ps, indexing="ij")
    a = np.stack([np.cos(T) * np.cos(TH), -np.cos(T) * np.sin(TH),
                  np.sin(T) * np.cos(PS), -np.sin(T) * np.sin(PS)], -1).reshape(-1, 4)
    return a


def _pair_angles(a: np.ndarray) -> dict:
    theta = math.atan2(-a[1], a[0]) % TWO_PI
    psi = math.atan2(-a[3], a[2]) % TWO_PI
    t = math.atan2(math.hypot(a[2], a[3]), math.hypot(a[0], a[1]))
    return {"theta": theta, "t": t, "phi": (psi - theta) % TWO_PI}


def _diverse_starts(vals: np.ndarray, dirs: np.ndarray, count: int, separation: float) -> np.ndarray:
    """Indices of high grid values, greedily kept at least ``separation`` apart (chordal)."""
    order = np.lexsort((np.arange(vals.size), -vals))
    picked: list[int] = []
    free = np.ones(vals.size, dtype=bool)
    for idx in order:
        if free[idx]:
            picked.append(int(idx))
            if len(picked) == count:
                break
            free &= np.linalg.norm(dirs - dirs[idx], axis=1) >= separation
    return np.array(picked, dtype=int)


def euclidean_radius(M1, M2, cfg: RadiiConfig = DEFAULT) -> RadiusResult:
    """w_e(M1, M2) = sup over unit x of sqrt(|<M1x,x>|^2 + |<M2x,x>|^2)."""
    M1 = nx.as_square(M1, "M1")
    M2 = nx.as_square(M2, "M2")
    if M1.shape != M2.shape:
        raise DimensionMismatch(f"pair shapes differ: {M1.shape} vs {M2.shape}")
    n = M1.shape[0]
    K = np.stack([nx.hermitian_part(M1), nx.skew_part(M1), nx.hermitian_part(M2), nx.skew_part(M2)])
    if not np.any(K):
        return RadiusResult(0.0, nx.unit_phase(np.eye(n, dtype=complex)[:, 0]), 0.0,
                            ErrorDirection.EXACT, 0.0, {"theta": 0.0, "t": 0.0, "phi": 0.0})
    grid = _sphere_grid(*cfg.pair_grid)
    ev = np.linalg.eigvalsh(np.einsum("ak,kij->aij", grid, K))
    vals = np.concatenate([ev[:, -1], -ev[:, 0]])
    dirs = np.concatenate([grid, -grid])
    starts = [dirs[_diverse_starts(vals, dirs, cfg.pair_starts, 0.5)]]
    # the best rotation of each operator alone is always a start
    th = np.arange(cfg.theta_grid // 8) * TWO_PI / (cfg.theta_grid // 8)
    rot = np.stack([np.cos(th), -np.sin(th)], 1)
    for k in (0, 1):
        if np.any(K[2 * k:2 * k + 2]):
            top = np.linalg.eigvalsh(np.einsum("ak,kij->aij", rot, K[2 * k:2 * k + 2]))[:, -1]
            a = np.zeros(4)
            a[2 * k:2 * k + 2] = rot[int(np.argmax(top))]
            starts.append(a[None])
    a = np.concatenate(starts)

    prev = np.full(len(a), -np.inf)
    incr = np.zeros(len(a))
    for _ in range(cfg.pair_maxit):
        _, V = np.linalg.eigh(np.einsum("sk,kij->sij", a, K))
        X = V[:, :, -1]
        v = np.real(np.einsum("si,kij,sj->sk", X.conj(), K, X))
        nv = np.linalg.norm(v, axis=1)
        live = nv > 0
        a = np.where(live[:, None], v / np.where(live, nv, 1.0)[:, None], a)
        incr = nv - prev
        prev = nv
        if np.all(incr <= cfg.pair_tol * nv):
            break
    best = int(np.argmax(nv))
    ai, x = a[best], X[best]
    lam_top = float(np.linalg.eigvalsh(np.einsum("k,kij->ij", ai, K))[-1])
    x = nx.unit_phase(x)
    q1, q2 = np.vdot(x, M1 @ x), np.vdot(x, M2 @ x)
    value = math.sqrt(abs(q1) ** 2 + abs(q2) ** 2)
    step = float(incr[best]) if math.isfinite(incr[best]) else 0.0
    gap = max(step, 0.0) + abs(lam_top - value)
    return RadiusResult(value, x, _pair_angles(ai)["theta"], ErrorDirection.LOWER, gap, _pair_angles(ai))


def euclidean_norm_pair(M1, M2) -> float:
    """sup over unit x of sqrt(|M1 x|^2 + |M2 x|^2)."""
    M1 = nx.as_square(M1, "M1")
    M2 = nx.as_square(M2, "M2")
    if M1.shape != M2.shape:
        raise DimensionMismatch(f"pair shapes differ: {M1.shape} vs {M2.shape}")
    G = nx.dagger(M1) @ M1 + nx.dagger(M2) @ M2
    return float(math.sqrt(max(0.0, np.linalg.eigvalsh(nx.hermitian_part(G))[-1])))


# -- A-weighted wrappers --------------------------------------------------------

def a_numerical_radius(ctx: sh.AContext, T, cfg: RadiiConfig = DEFAULT) -> RadiusResult:
    return numerical_radius(sh.reduce(ctx, T), cfg)


def a_crawford(ctx: sh.AContext, T, cfg: RadiiConfig = DEFAULT) -> RadiusResult:
    return crawford(sh.reduce(ctx, T), cfg)


def a_op_norm(ctx: sh.AContext, T) -> RadiusResult:
    return op_norm(sh.reduce(ctx, T))


def a_euclidean_radius(ctx: sh.AContext, B, C, cfg: RadiiConfig = DEFAULT) -> RadiusResult:
    return euclidean_radius(sh.reduce(ctx, B), sh.reduce(ctx, C), cfg)


def euclidean_seminorm_pair(ctx: sh.AContext, B, C) -> float:
    return euclidean_norm_pair(sh.reduce(ctx, B), sh.reduce(ctx, C))
