"""Brute-force estimators used to validate the optimizers in ``radii``.

Nothing here goes through ``semihilbert.reduce``: the A-sphere estimators
work in ambient coordinates with the A-inner product directly. Every value
is the objective evaluated at an explicit vector, hence a lower estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from .errors import BadParameter, DegenerateVector, DimensionMismatch
from .radii import ErrorDirection, RadiusResult
from .semihilbert import AContext


@dataclass(frozen=True)
class OracleConfig:
    n_restarts: int = 64
    n_samples: int = 100_000
    ascent_steps: int = 500
    step_init: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if min(self.n_restarts, self.n_samples, self.ascent_steps) < 1:
            raise BadParameter("oracle counts must be positive")
        if not 0 < self.step_init <= 1:
            raise BadParameter("step_init must lie in (0, 1]")


def _restart_rngs(seed: int, count: int, salt: int = 0):
    # one stream per restart, so parallel and serial evaluation agree
    return [np.random.default_rng([seed, salt, i]) for i in range(count)]


def _cgauss(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _pair_objective(X, mats):
    qs = [np.einsum("ri,ij,rj->r", X.conj(), M, X) for M in mats]
    return sum(np.abs(q) ** 2 for q in qs), qs


def pair_gradient(X, mats, qs=None):
    """Wirtinger gradient of sum_j |<M_j x, x>|^2, one row per point.

    For q = x^* M x the real directional derivative along dx is
    2 Re <g, dx> with g = conj(q) M x + q M^* x.
    """
    X = np.atleast_2d(X)
    if qs is None:
        qs = _pair_objective(X, mats)[1]
    g = np.zeros_like(X, dtype=complex)
    for M, q in zip(mats, qs):
        g += q.conj()[:, None] * (X @ M.T) + q[:, None] * (X @ M.conj())
    return g


def _ascend(X, mats, steps, step_init, inner=None, metric_inv=None, range_proj=None):
    """Normalized-gradient ascent of sum_j |<M_j x, x>|^2 on a unit sphere.

    ``inner`` is the Gram matrix of the sphere's inner product (identity
    when None) and ``metric_inv`` maps Euclidean gradients to gradients in
    that metric; ``range_proj`` keeps the tangent projection off the kernel
    of a degenerate inner product. Steps are accepted only if they do not
    decrease the objective; rejected restarts halve their step.
    """
    def norms(Y):
        if inner is None:
            return np.linalg.norm(Y, axis=1)
        return np.sqrt(np.maximum(np.real(np.einsum("ri,ij,rj->r", Y.conj(), inner, Y)), 0.0))

    def ip(U, V):
        G = V if inner is None else V @ inner.T
        return np.real(np.einsum("ri,ri->r", G.conj(), U))  # Re <U, V>

    fx, qs = _pair_objective(X, mats)
    step = np.full(X.shape[0], step_init)
    for _ in range(steps):
        g = pair_gradient(X, mats, qs)
        if metric_inv is not None:
            g = g @ metric_inv.T
        raw = norms(g)
        base = X if range_proj is None else X @ range_proj.T
        g -= ip(g, X)[:, None] * base
        gn = norms(g)
        # a tangent part at round-off level means a critical point
        live = gn > 1e-12 * raw
        gn[~live] = 1.0
        Y = X + (step * live)[:, None] * (g / gn[:, None])
        Y /= norms(Y)[:, None]
        fy, qy = _pair_objective(Y, mats)
        ok = fy >= fx
        X = np.where(ok[:, None], Y, X)
        fx = np.where(ok, fy, fx)
        qs = [np.where(ok, b, a) for a, b in zip(qs, qy)]
        step = np.where(ok, np.minimum(step * 1.5, 1.0), step / 2)
    return X, fx


def direct_pair_ascent(M1, M2, cfg: OracleConfig = OracleConfig()) -> RadiusResult:
    """Maximize |<M1x,x>|^2 + |<M2x,x>|^2 over the Euclidean unit sphere."""
    M1 = nx.as_square(M1, "M1")
    M2 = nx.as_square(M2, "M2")
    if M1.shape != M2.shape:
        raise DimensionMismatch(f"pair shapes differ: {M1.shape} vs {M2.shape}")
    n = M1.shape[0]
    X = np.stack([_cgauss(r, n) for r in _restart_rngs(cfg.seed, cfg.n_restarts)])
    X /= np.linalg.norm(X, axis=1)[:, None]
    X, fx = _ascend(X, (M1, M2), cfg.ascent_steps, cfg.step_init)
    k = int(np.argmax(fx))
    return RadiusResult(math.sqrt(fx[k]), nx.unit_phase(X[k]), 0.0, ErrorDirection.LOWER)


def _a_sphere_samples(ctx: AContext, count: int, rng) -> np.ndarray:
    """x = (A^{1/2})^+ u plus kernel noise, rescaled to ||x||_A = 1."""
    n = ctx.n
    X = _cgauss(rng, (count, n)) @ ctx.sqrtA_pinv.T
    kernel = np.eye(n) - ctx.projector
    noise = _cgauss(rng, (count, n)) @ kernel.T
    nn = np.linalg.norm(noise, axis=1)
    nn[nn == 0] = 1.0
    mag = rng.uniform(0, 10, count) * np.linalg.norm(X, axis=1)
    X = X + noise * (mag / nn)[:, None]
    an = np.sqrt(np.maximum(np.real(np.einsum("ri,ij,rj->r", X.conj(), ctx.A, X)), 0.0))
    good = an > 1e-12 * max(1.0, np.abs(X).max())
    if not np.any(good):
        raise DegenerateVector("no A-unit vector found")
    return X[good] / an[good, None]


def _direct_a(ctx: AContext, ops, cfg: OracleConfig, salt: int) -> tuple[float, np.ndarray]:
    mats = []
    for T in ops:
        T = nx.as_square(T, "T")
        if T.shape[0] != ctx.n:
            raise DimensionMismatch(f"T is {T.shape[0]}x{T.shape[0]}, A is {ctx.n}x{ctx.n}")
        mats.append(ctx.A @ T)  # <Tx, x>_A = x^* A T x
    rng = np.random.default_rng([cfg.seed, salt])
    X = _a_sphere_samples(ctx, cfg.n_samples, rng)
    fx, _ = _pair_objective(X, mats)
    top = np.argsort(-fx, kind="stable")[: cfg.n_restarts]
    Xs, fs = _ascend(X[top], mats, cfg.ascent_steps, cfg.step_init, inner=ctx.A, metric_inv=ctx.A_pinv,
                     range_proj=ctx.projector)
    k = int(np.argmax(fs))
    return math.sqrt(max(fs[k], fx[top[0]])), Xs[k]


def direct_a_sphere(ctx: AContext, T, cfg: OracleConfig = OracleConfig()) -> float:
    """Lower estimate of w_A(T) from A-sphere sampling plus ascent."""
    return _direct_a(ctx, [T], cfg, salt=1)[0]


def direct_a_sphere_pair(ctx: AContext, B, C, cfg: OracleConfig = OracleConfig()) -> float:
    """Lower estimate of w_{A,e}(B, C), same procedure as ``direct_a_sphere``."""
    return _direct_a(ctx, [B, C], cfg, salt=2)[0]


def buzano_slack(ctx: AContext, x, e, y, alpha: complex) -> float:
    """rhs - lhs of the generalized Buzano inequality for one triple."""
    A = ctx.A
    ip = lambda u, v: complex(np.vdot(v, A @ u))
    nrm = lambda u: math.sqrt(max(ip(u, u).real, 0.0))
    lhs = abs(ip(x, e) * ip(e, y))
    rhs = (abs(ip(x, y)) + max(1.0, abs(alpha - 1)) * nrm(x) * nrm(y)) / abs(alpha)
    return rhs - lhs


def buzano_sample(ctx: AContext, cfg: OracleConfig, alpha: complex) -> float:
    """Worst slack of the generalized Buzano inequality over sampled (x, e, y).

    e is A-unit; x and y are A-unit vectors with random magnitudes in
    [0, 2). The equality-adjacent triple x = y = e is always included.
    """
    return buzano_sample_many(ctx, cfg, [alpha])[0]


def buzano_sample_many(ctx: AContext, cfg: OracleConfig, alphas) -> list[float]:
    """``buzano_sample`` for several alphas on one shared sample of triples."""
    alphas = [complex(a) for a in alphas]
    if any(a == 0 for a in alphas):
        raise BadParameter("alpha must be non-zero")
    rng = np.random.default_rng([cfg.seed, 3])
    m = cfg.n_samples
    E = _a_sphere_samples(ctx, m, rng)
    X = _a_sphere_samples(ctx, m, rng) * rng.uniform(0, 2, (m, 1))
    Y = _a_sphere_samples(ctx, m, rng) * rng.uniform(0, 2, (m, 1))
    k = min(len(E), len(X), len(Y))
    E, X, Y = E[:k], X[:k], Y[:k]
    X[0] = Y[0] = E[0]
    A = ctx.A
    ip = lambda U, V: np.einsum("ri,ij,rj->r", V.conj(), A, U)
    lhs = np.abs(ip(X, E) * ip(E, Y))
    nxy = np.sqrt(np.maximum(ip(X, X).real, 0)) * np.sqrt(np.maximum(ip(Y, Y).real, 0))
    cross = np.abs(ip(X, Y))
    return [float(np.min((cross + max(1.0, abs(a - 1)) * nxy) / abs(a) - lhs)) for a in alphas]
