"""Command-line front end.

Every command prints a JSON document with a stable key order. Exit codes:
0 success, 1 a check or campaign failed, 2 usage or schema errors,
3 numerical precondition violations.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import __version__
from . import campaign as cp
from . import ensembles as en
from . import inequalities as iq
from . import numerics as nx
from . import oracle
from . import radii
from . import semihilbert as sh
from .errors import BadParameter, SemiradError


def _default_seed() -> int:
    raw = os.environ.get("SEMIRAD_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise click.UsageError(f"SEMIRAD_SEED must be an integer, got {raw!r}") from None


def _emit(doc, out: Path | None = None) -> None:
    text = json.dumps(doc, indent=2, allow_nan=True)
    if out is None:
        click.echo(text)
    else:
        out.write_text(text + "\n")


def _context(a_path: Path, rank_tol, residual_tol) -> sh.AContext:
    return sh.make_context(nx.load_matrix(a_path), rank_tol, residual_tol)


class _Group(click.Group):
    """Maps library exceptions to exit codes instead of tracebacks."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except SemiradError as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(exc.exit_code)
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)


_in_file = click.Path(exists=True, dir_okay=False, path_type=Path)
_out_file = click.Path(dir_okay=False, path_type=Path)
_tol_options = [
    click.option("--rank-tol", type=float, default=None, help="Relative eigenvalue cutoff for rank(A)."),
    click.option("--residual-tol", type=float, default=sh.DEFAULT_RESIDUAL_TOL, show_default=True,
                 help="Relative residual for adjoint and boundedness tests."),
]


def tol_options(f):
    for opt in reversed(_tol_options):
        f = opt(f)
    return f


@click.group(cls=_Group)
@click.version_option(__version__, prog_name="semirad")
def main():
    """Numerical radii of operators on semi-Hilbertian spaces."""


@main.command()
@click.option("--a", "a_path", type=_in_file, required=True, help="Matrix file holding A.")
@tol_options
def context(a_path, rank_tol, residual_tol):
    """Validate A and summarize its range structure."""
    _emit(_context(a_path, rank_tol, residual_tol).summary())


@main.command()
@click.option("--dim", type=click.IntRange(1, 64), required=True)
@click.option("--rank", "rank", default="full", show_default=True, help="Rank of A, or 'full'.")
@click.option("--kind", type=click.Choice([k.value for k in en.OperandKind]), default="generic",
              show_default=True)
@click.option("--scale", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=None, help="Defaults to $SEMIRAD_SEED or 0.")
@click.option("--out", type=_out_file, required=True, help="Where to write the operand T.")
@click.option("--a-out", type=_out_file, default=None, help="Where to write A (default: <out>_A.json).")
def gen(dim, rank, kind, scale, seed, out, a_out):
    """Draw a PSD weight A and an A-compatible operand."""
    seed = _default_seed() if seed is None else seed
    if rank != "full":
        try:
            rank = int(rank)
        except ValueError:
            raise click.BadParameter("must be an integer or 'full'", param_hint="--rank") from None
    spec = en.EnsembleSpec(dim, rank, en.OperandKind(kind), scale, seed)
    A, T = en.generate(spec)
    a_out = a_out or out.with_name(out.stem + "_A.json")
    nx.save_matrix(out, T)
    nx.save_matrix(a_out, A)
    _emit({"a": str(a_out), "t": str(out), "dim": dim, "rank": spec.rank, "kind": kind,
           "scale": scale, "seed": seed, "rng": en.RNG_ALGORITHM})


@main.command()
@click.option("--a", "a_path", type=_in_file, required=True)
@click.option("--t", "t_path", type=_in_file, required=True)
@click.option("--quantity", type=click.Choice(["w", "c", "norm"]), default="w", show_default=True)
@tol_options
def radius(a_path, t_path, quantity, rank_tol, residual_tol):
    """A-numerical radius, A-Crawford number or A-operator seminorm of T."""
    ctx = _context(a_path, rank_tol, residual_tol)
    T = nx.load_matrix(t_path)
    fn = {"w": radii.a_numerical_radius, "c": radii.a_crawford, "norm": radii.a_op_norm}[quantity]
    _emit(dict({"quantity": quantity}, **fn(ctx, T).to_dict()))


@main.command()
@click.option("--a", "a_path", type=_in_file, required=True)
@click.option("--b", "b_path", type=_in_file, required=True)
@click.option("--c", "c_path", type=_in_file, required=True)
@tol_options
def euclid(a_path, b_path, c_path, rank_tol, residual_tol):
    """A-Euclidean operator radius and seminorm of the pair (B, C)."""
    ctx = _context(a_path, rank_tol, residual_tol)
    B, C = nx.load_matrix(b_path), nx.load_matrix(c_path)
    doc = {"quantity": "euclidean_radius"}
    doc.update(radii.a_euclidean_radius(ctx, B, C).to_dict())
    doc["euclidean_seminorm"] = radii.euclidean_seminorm_pair(ctx, B, C)
    _emit(doc)


@main.command("oracle")
@click.option("--a", "a_path", type=_in_file, required=True)
@click.option("--t", "t_path", type=_in_file, required=True, help="T, or B when --c is given.")
@click.option("--c", "c_path", type=_in_file, default=None)
@click.option("--restarts", type=click.IntRange(1), default=oracle.OracleConfig.n_restarts, show_default=True)
@click.option("--samples", type=click.IntRange(1), default=oracle.OracleConfig.n_samples, show_default=True)
@click.option("--steps", type=click.IntRange(1), default=oracle.OracleConfig.ascent_steps, show_default=True)
@click.option("--seed", type=int, default=None, help="Defaults to $SEMIRAD_SEED or 0.")
@tol_options
def oracle_cmd(a_path, t_path, c_path, restarts, samples, steps, seed, rank_tol, residual_tol):
    """Brute-force lower estimate on the A-unit sphere, next to the optimizer value."""
    seed = _default_seed() if seed is None else seed
    ctx = _context(a_path, rank_tol, residual_tol)
    cfg = oracle.OracleConfig(restarts, samples, steps, seed=seed)
    T = nx.load_matrix(t_path)
    if c_path is None:
        est, ref = oracle.direct_a_sphere(ctx, T, cfg), radii.a_numerical_radius(ctx, T)
        quantity = "w"
    else:
        C = nx.load_matrix(c_path)
        est, ref = oracle.direct_a_sphere_pair(ctx, T, C, cfg), radii.a_euclidean_radius(ctx, T, C)
        quantity = "euclidean_radius"
    _emit({"quantity": quantity, "oracle_estimate": est, "optimizer_value": ref.value,
           "optimizer_gap": ref.gap, "relative_difference": (ref.value - est) / max(ref.value, 1e-300),
           "seed": seed})


def _parse_params(alphas, raw_params) -> dict:
    params = {}
    for item in raw_params:
        key, sep, val = item.partition("=")
        if not sep:
            raise click.BadParameter(f"expected key=value, got {item!r}", param_hint="--param")
        try:
            params[key] = json.loads(val)
        except json.JSONDecodeError:
            params[key] = val
    if len(alphas) == 1:
        params["alpha"] = iq.parse_complex(alphas[0])
    elif alphas:
        params["alphas"] = [iq.parse_complex(a) for a in alphas]
    return params


@main.command()
@click.option("--id", "check_id", type=click.Choice([c.value for c in iq.CheckId]), default=None)
@click.option("--a", "a_path", type=_in_file, default=None)
@click.option("--b", "b_path", type=_in_file, default=None)
@click.option("--c", "c_path", type=_in_file, default=None)
@click.option("--alpha", "alphas", multiple=True, help="re,im; repeat for several values.")
@click.option("--param", "raw_params", multiple=True, help="key=value (value parsed as JSON when possible).")
@click.option("--rel-tol", type=float, default=iq.REL_TOL, show_default=True)
@click.option("--list", "list_only", is_flag=True, help="List the registered checks and exit.")
@tol_options
def check(check_id, a_path, b_path, c_path, alphas, raw_params, rel_tol, list_only, rank_tol, residual_tol):
    """Evaluate one registered check on the given operands."""
    if list_only:
        _emit([{"id": c.id.value, "description": c.description, "signature": c.signature,
                "parameter_domain": c.parameter_domain} for c in iq.list_checks()])
        return
    if check_id is None:
        raise click.UsageError("--id is required unless --list is given")
    params = _parse_params(alphas, raw_params)
    ctx = None if a_path is None else _context(a_path, rank_tol, residual_tol)
    if ctx is None and check_id != iq.CheckId.BOHR_SCALAR.value:
        raise click.UsageError(f"{check_id} needs --a")
    B = None if b_path is None else nx.load_matrix(b_path)
    C = None if c_path is None else nx.load_matrix(c_path)
    report = iq.evaluate(check_id, ctx, B, C, params, rel_tol=rel_tol)
    _emit(report.to_dict())
    sys.exit(0 if report.passed else 1)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter("expected comma-separated integers") from None


@main.command()
@click.option("--dims", default="2,3,4,6", show_default=True, help="Comma-separated dimensions.")
@click.option("--ranks", type=click.Choice(["full", "deficient", "both"]), default="both", show_default=True)
@click.option("--trials", type=int, default=250, show_default=True, help="Trials per (dim, rank) cell.")
@click.option("--checks", default="all", show_default=True, help="'all' or comma-separated check ids.")
@click.option("--seed", type=int, default=None, help="Defaults to $SEMIRAD_SEED or 0.")
@click.option("--rel-tol", type=float, default=iq.REL_TOL, show_default=True)
@click.option("--buzano-samples", type=int, default=cp.CampaignConfig.buzano_samples, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--out", type=_out_file, default=None, help="Write the report here instead of stdout.")
@click.option("--csv", "csv_path", type=_out_file, default=None, help="Also write per-trial slacks as CSV.")
@tol_options
def campaign(dims, ranks, trials, checks, seed, rel_tol, buzano_samples, workers, out, csv_path,
             rank_tol, residual_tol):
    """Run checks over seeded random instances and aggregate slack statistics."""
    seed = _default_seed() if seed is None else seed
    check_list = ("all",) if checks.strip() == "all" else tuple(c.strip() for c in checks.split(",") if c.strip())
    cfg = cp.CampaignConfig(tuple(_int_list(dims)), ranks, trials, check_list, seed, rel_tol, rank_tol,
                            residual_tol, buzano_samples=buzano_samples, workers=workers)
    report = cp.run_campaign(cfg)
    _emit(report.to_dict(), out)
    if csv_path is not None:
        csv_path.write_text(report.csv_text())
    if out is not None:
        bad = sum(a["count"] - a["pass_count"] for a in report.aggregates.values())
        click.echo(f"{report.evaluations} evaluations, {bad} failed, {report.wall_time:.1f} s", err=True)
    sys.exit(report.exit_code)


@main.command()
@click.argument("record_path", type=_in_file)
@click.option("--index", type=int, default=0, show_default=True,
              help="Which failure to replay when given a campaign report.")
def replay(record_path, index):
    """Recompute a logged failure (a failure record or a campaign report)."""
    try:
        doc = json.loads(record_path.read_text())
    except json.JSONDecodeError as exc:
        raise BadParameter(f"{record_path}: not JSON ({exc})") from None
    if isinstance(doc, dict) and doc.get("schema") == cp.REPORT_SCHEMA:
        failures = doc.get("failures", [])
        if not failures:
            raise click.UsageError("the report has no failures to replay")
        if not 0 <= index < len(failures):
            raise click.UsageError(f"--index must lie in [0, {len(failures) - 1}]")
        doc = failures[index]
    report = cp.replay(doc)
    out = report.to_dict()
    out["identical_to_record"] = doc.get("lhs") == report.lhs and doc.get("rhs") == report.rhs
    _emit(out)
    sys.exit(0 if report.passed else 1)


if __name__ == "__main__":  # pragma: no cover
    main()
