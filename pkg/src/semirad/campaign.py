"""Campaign engine: run registered checks over seeded ensembles and aggregate.

A campaign visits every (dim, rank mode, trial) cell, builds one instance per
trial and evaluates every requested check on it. Failures are collected with
their operands inline so that ``replay`` can recompute them bit for bit.
"""

from __future__ import annotations

import csv
import io
import math
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from . import ensembles as en
from . import inequalities as iq
from . import numerics as nx
from . import semihilbert as sh
from .errors import ConfigInvalid, SchemaMismatch, SemiradError

REPORT_SCHEMA = "semirad.campaign/1"
FAILURE_SCHEMA = "semirad.failure/1"
RANK_MODES = ("full", "deficient")
TRIAL_KINDS = ("generic", "generic", "equal", "zero", "nilpotent", "commuting", "selfadjoint", "generic")
SCALES = (1.0, 0.1, 10.0)


@dataclass(frozen=True)
class CampaignConfig:
    dims: tuple[int, ...] = (2, 3, 4, 6)
    ranks: str = "both"
    trials_per_cell: int = 250
    checks: tuple[str, ...] = tuple(c.value for c in iq.CheckId)
    seed: int = 0
    rel_tol: float = iq.REL_TOL
    rank_tol: float | None = None
    residual_tol: float = sh.DEFAULT_RESIDUAL_TOL
    extra_alphas: int = 8
    extra_th4: int = 4
    buzano_samples: int = 1000
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if isinstance(self.checks, str):
            object.__setattr__(self, "checks", (self.checks,))
        checks = tuple(self.checks)
        if checks == ("all",):
            checks = tuple(c.value for c in iq.CheckId)
        try:
            checks = tuple(iq.CheckId(c).value for c in checks)
        except ValueError as exc:
            raise ConfigInvalid(f"unknown check id: {exc}") from None
        object.__setattr__(self, "checks", checks)
        if not self.dims:
            raise ConfigInvalid("dims must be nonempty")
        if any(not 1 <= d <= 64 for d in self.dims):
            raise ConfigInvalid("every dim must lie in [1, 64]")
        if self.ranks not in ("full", "deficient", "both"):
            raise ConfigInvalid("ranks must be full, deficient or both")
        if self.ranks != "full" and min(self.dims) < 2:
            raise ConfigInvalid("deficient-rank cells need dim >= 2")
        if self.trials_per_cell < 1:
            raise ConfigInvalid("trials_per_cell must be >= 1")
        if not checks:
            raise ConfigInvalid("no checks selected")
        if self.workers < 1 or self.buzano_samples < 1 or self.extra_alphas < 0 or self.extra_th4 < 0:
            raise ConfigInvalid("workers and sample counts must be positive")
        if not (math.isfinite(self.rel_tol) and math.isfinite(self.residual_tol)):
            raise ConfigInvalid("tolerances must be finite")

    @property
    def rank_modes(self) -> tuple[str, ...]:
        return RANK_MODES if self.ranks == "both" else (self.ranks,)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["dims"] = list(self.dims)
        d["checks"] = list(self.checks)
        return d


# -- instances ------------------------------------------------------------------------

def trial_seed(seed: int, dim: int, mode: int, trial: int) -> int:
    state = np.random.SeedSequence([seed, dim, mode, trial]).generate_state(2, np.uint32)
    return int(state[0]) << 31 | int(state[1]) >> 1


def cell_rank(dim: int, mode: str, trial: int) -> int:
    return dim if mode == "full" else 1 + trial % (dim - 1)


@dataclass
class Instance:
    dim: int
    mode: str
    trial: int
    rank: int
    seed: int
    kind: str
    A: np.ndarray
    ctx: sh.AContext
    B: np.ndarray
    C: np.ndarray
    Bs: np.ndarray
    Cs: np.ndarray
    R1: np.ndarray
    alphas: list
    th4: list
    bohr: dict
    buzano: dict


def build_instance(cfg: CampaignConfig, dim: int, mode: str, trial: int) -> Instance:
    s = trial_seed(cfg.seed, dim, RANK_MODES.index(mode), trial)
    rank = cell_rank(dim, mode, trial)
    A = en.random_psd(dim, rank, s)
    ctx = sh.make_context(A, cfg.rank_tol, cfg.residual_tol)
    kind = TRIAL_KINDS[trial % len(TRIAL_KINDS)]
    scale = SCALES[(trial // len(TRIAL_KINDS)) % len(SCALES)]
    zero = np.zeros((dim, dim), dtype=complex)
    if kind == "equal":
        B = en.random_compatible(ctx, en.OperandKind.GENERIC_A_COMPATIBLE, s, scale)
        C = B.copy()
    elif kind == "zero":
        B = zero.copy() if (trial // len(TRIAL_KINDS)) % 2 else \
            en.random_compatible(ctx, en.OperandKind.GENERIC_A_COMPATIBLE, s, scale)
        C = zero.copy()
    else:
        B, C = en.random_pair(ctx, {"generic": en.OperandKind.GENERIC_A_COMPATIBLE}.get(kind, kind), s, scale)
    Bs, Cs = sh.cartesian(ctx, B)[0], sh.cartesian(ctx, C)[0]
    rng = en.rng_for(s, 7)
    R1 = sh.rank_one_a(ctx, en.random_a_unit(ctx, rng))
    rho = 10 ** rng.uniform(-1, 1, cfg.extra_alphas)
    phi = rng.uniform(0, 2 * math.pi, cfg.extra_alphas)
    alphas = list(iq.ALPHA_GRID) + [complex(z) for z in rho * np.exp(1j * phi)]
    th4 = list(iq.TH4_GRID) + [float(a) for a in rng.uniform(0, 1, cfg.extra_th4)]
    k = int(rng.integers(1, 7))
    a = [float(rng.uniform(0, 5))] * k if trial % 4 == 0 else [float(x) for x in rng.uniform(0, 5, k)]
    r = 1.0 if trial % 5 == 0 else float(rng.uniform(1, 6))
    return Instance(dim, mode, trial, rank, s, kind, A, ctx, B, C, Bs, Cs, R1, alphas, th4,
                    {"a": a, "r": r}, {"n_samples": cfg.buzano_samples, "seed": s})


def check_inputs(inst: Instance, check: iq.CheckId):
    """(B, C, params) fed to ``check`` for this instance."""
    kind = iq.check_info(check).kind
    if check in (iq.CheckId.TH4_LOWER, iq.CheckId.TH4_UPPER, iq.CheckId.REMARK_CHAIN):
        params = {"alphas": list(inst.th4)}
    elif iq.check_info(check).parameter_domain == iq._ANY_ALPHA and check is not iq.CheckId.LEM_BUZANO:
        params = {"alphas": list(inst.alphas)}
    else:
        params = {}
    if kind == "pair":
        return inst.B, inst.C, params
    if kind == "selfadjoint_pair":
        return inst.Bs, inst.Cs, params
    if kind == "single":
        return inst.B, None, params
    if kind == "rank_one":
        return inst.R1, None, params
    if kind == "context":
        return None, None, dict(inst.buzano, alphas=list(inst.alphas))
    return None, None, dict(inst.bohr)


# -- records ----------------------------------------------------------------------------

_FAILURE_KEYS = {"schema", "check", "seed_path", "trial_seed", "dim", "rank", "A", "B", "C", "params",
                 "tolerances", "lhs", "rhs", "slack", "certified_gap", "binding", "error"}
_TOL_KEYS = {"rel_tol", "rank_tol", "residual_tol"}


def _mat(M):
    return None if M is None else nx.matrix_to_dict(M)


def failure_record(cfg: CampaignConfig, inst: Instance, check: iq.CheckId, B, C, params,
                   report: iq.BoundReport | None, error: str | None) -> dict:
    return {
        "schema": FAILURE_SCHEMA,
        "check": check.value,
        "seed_path": [cfg.seed, inst.dim, RANK_MODES.index(inst.mode), inst.trial],
        "trial_seed": inst.seed,
        "dim": inst.dim,
        "rank": inst.rank,
        "A": nx.matrix_to_dict(inst.A),
        "B": _mat(B),
        "C": _mat(C),
        "params": iq._jsonable(params),
        "tolerances": {"rel_tol": cfg.rel_tol, "rank_tol": cfg.rank_tol, "residual_tol": cfg.residual_tol},
        "lhs": None if report is None else report.lhs,
        "rhs": None if report is None else report.rhs,
        "slack": None if report is None else report.slack,
        "certified_gap": None if report is None else report.certified_gap,
        "binding": None if report is None else report.binding,
        "error": error,
    }


def replay(record: dict) -> iq.BoundReport:
    """Recompute a logged evaluation from its inline operands."""
    if not isinstance(record, dict):
        raise SchemaMismatch("failure record must be a JSON object")
    keys = set(record)
    if keys != _FAILURE_KEYS:
        extra, missing = sorted(keys - _FAILURE_KEYS), sorted(_FAILURE_KEYS - keys)
        raise SchemaMismatch(f"failure record fields differ: unknown {extra}, missing {missing}")
    if record["schema"] != FAILURE_SCHEMA:
        raise SchemaMismatch(f"unsupported record schema {record['schema']!r}")
    tol = record["tolerances"]
    if not isinstance(tol, dict) or set(tol) != _TOL_KEYS:
        raise SchemaMismatch("tolerances must carry exactly rel_tol, rank_tol, residual_tol")
    if not isinstance(record["params"], dict):
        raise SchemaMismatch("params must be an object")
    try:
        check = iq.CheckId(record["check"])
    except ValueError:
        raise SchemaMismatch(f"unknown check {record['check']!r}") from None
    A = nx.matrix_from_dict(record["A"])
    B = None if record["B"] is None else nx.matrix_from_dict(record["B"])
    C = None if record["C"] is None else nx.matrix_from_dict(record["C"])
    ctx = sh.make_context(A, tol["rank_tol"], tol["residual_tol"])
    return iq.evaluate(check, ctx, B, C, record["params"], rel_tol=tol["rel_tol"])


# -- running ------------------------------------------------------------------------------

def _base(name: str) -> str:
    return re.sub(r"\[\d+\]$", "", name)


def run_trial(cfg: CampaignConfig, dim: int, mode: str, trial: int) -> list[dict]:
    """Evaluate every configured check on one instance; returns one row per check."""
    inst = build_instance(cfg, dim, mode, trial)
    ev = iq.Evaluator(inst.ctx)
    rows = []
    for name in cfg.checks:
        check = iq.CheckId(name)
        B, C, params = check_inputs(inst, check)
        report, error = None, None
        try:
            report = iq.evaluate(check, inst.ctx, B, C, params, rel_tol=cfg.rel_tol, evaluator=ev)
        except SemiradError as exc:
            error = f"{type(exc).__name__}: {exc}"
        row = {"dim": dim, "rank_mode": mode, "rank": inst.rank, "trial": trial, "kind": inst.kind,
               "check": check.value, "pass": report is not None and report.passed}
        if report is not None:
            row.update(lhs=report.lhs, rhs=report.rhs, slack=report.slack,
                       certified_gap=report.certified_gap, binding=report.binding,
                       parts=[(_base(p.name), p.relation, p.slack, p.passed) for p in report.parts],
                       flags=report.flags)
        if not row["pass"]:
            row["failure"] = failure_record(cfg, inst, check, B, C, params, report, error)
        rows.append(row)
    return rows


def _run_task(args):
    return run_trial(*args)


@dataclass
class CampaignReport:
    config: CampaignConfig
    aggregates: dict
    parts: dict
    informational: dict
    failures: list
    evaluations: int
    wall_time: float
    rows: list = field(default_factory=list, repr=False)
    version: str = __version__
    rng: str = en.RNG_ALGORITHM

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "version": self.version,
            "rng": self.rng,
            "config": self.config.to_dict(),
            "evaluations": self.evaluations,
            "aggregates": self.aggregates,
            "parts": self.parts,
            "informational": self.informational,
            "failures": self.failures,
            "wall_time": self.wall_time,
        }

    def csv_text(self) -> str:
        cols = ["dim", "rank_mode", "rank", "trial", "kind", "check", "lhs", "rhs", "slack",
                "certified_gap", "pass", "binding"]
        buf = io.StringIO()
        w = csv.DictWriter(buf, cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow(row)
        return buf.getvalue()


def _stats(values):
    return {"count": len(values), "min_slack": min(values) if values else None,
            "mean_slack": math.fsum(values) / len(values) if values else None}


def aggregate(cfg: CampaignConfig, rows: list[dict], wall_time: float) -> CampaignReport:
    order = {c: i for i, c in enumerate(cfg.checks)}
    rows = sorted(rows, key=lambda r: (cfg.dims.index(r["dim"]), RANK_MODES.index(r["rank_mode"]),
                                       r["trial"], order[r["check"]]))
    aggregates, parts, info = {}, {}, {}
    for c in cfg.checks:
        sel = [r for r in rows if r["check"] == c]
        slacks = [r["slack"] for r in sel if "slack" in r]
        gaps = [r["certified_gap"] for r in sel if "certified_gap" in r]
        aggregates[c] = {"count": len(sel), "pass_count": sum(r["pass"] for r in sel),
                         "min_slack": min(slacks) if slacks else None,
                         "mean_slack": math.fsum(slacks) / len(slacks) if slacks else None,
                         "max_certified_gap": max(gaps) if gaps else None}
        per = {}
        for r in sel:
            for name, rel, slack, passed in r.get("parts", ()):
                d = per.setdefault(name, {"relation": rel, "count": 0, "pass_count": 0, "min_slack": math.inf})
                d["count"] += 1
                d["pass_count"] += bool(passed)
                d["min_slack"] = min(d["min_slack"], slack)
        decisive = {k: v for k, v in per.items() if v["relation"] != "info"}
        if decisive:
            parts[c] = decisive
        for k, v in per.items():
            if v["relation"] == "info":
                info[f"{c}.{k}"] = {"count": v["count"], "holds_count": v["pass_count"],
                                    "min_slack": v["min_slack"]}
        if c == iq.CheckId.BOHR_SCALAR.value:
            info["BOHR_SCALAR.equality_cases"] = sum(bool(r.get("flags", {}).get("equality_case")) for r in sel)
    failures = [r["failure"] for r in rows if "failure" in r]
    csv_rows = [{k: v for k, v in r.items() if k not in ("parts", "flags", "failure")} for r in rows]
    return CampaignReport(cfg, aggregates, parts, info, failures, len(rows), wall_time, csv_rows)


def run_campaign(cfg: CampaignConfig) -> CampaignReport:
    start = time.perf_counter()
    tasks = [(cfg, d, m, t) for d in cfg.dims for m in cfg.rank_modes for t in range(cfg.trials_per_cell)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            chunks = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * cfg.workers))))
    else:
        chunks = [_run_task(t) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]
    return aggregate(cfg, rows, time.perf_counter() - start)
