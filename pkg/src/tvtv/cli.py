"""Command-line surface: simulate measurements, fuse a baseline, solve,
evaluate, and run the whole pipeline end to end."""

from __future__ import annotations

from pathlib import Path

import click

from .core import SolverConfig, clamp01
from .io import (
    METRICS_HEADER,
    metrics_row,
    read_csr,
    read_hsc,
    write_csr,
    write_hsc,
    write_metrics_table,
)
from .baseline import naive_fuse
from .metrics import evaluate
from .operators import BlockAverage, block_avg_apply, csr_apply
from .projection import consistency_residual
from .solver import SolveReport, solve_tvtv
from .synthetic import add_noise, synthetic_cube, synthetic_response

_ERRORS = (ValueError, OSError, RuntimeError)


def _positive(ctx, param, value):
    if value is not None and value <= 0:
        raise click.BadParameter("must be positive")
    return value


def _nonnegative(ctx, param, value):
    if value is not None and value < 0:
        raise click.BadParameter("must be nonnegative")
    return value


def _report_lines(report: SolveReport) -> list[str]:
    return [
        f"iterations={report.iterations}",
        f"stop_reason={report.stop_reason}",
        f"primal_res={report.primal_res:.6e}",
        f"dual_res={report.dual_res:.6e}",
        f"objective={report.objective:.6e}",
        f"res_A={report.res_spatial:.6e}",
        f"res_R={report.res_spectral:.6e}",
        f"wall_time_s={report.wall_time_s:.3f}",
    ]


def _write_report(report: SolveReport, path: Path) -> list[str]:
    lines = _report_lines(report)
    path.write_text("\n".join(lines) + "\n")
    return lines


@click.group()
def main():
    """Measurement-consistent hyperspectral fusion refinement."""


@main.command()
@click.argument("gt_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("csr_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--block", default=32, callback=_positive, show_default=True,
              help="Downscaling factor.")
@click.option("--out-z", default="z.hsc", show_default=True)
@click.option("--out-y", default="y.hsc", show_default=True)
def simulate(gt_path, csr_path, block, out_z, out_y):
    """Degrade a ground-truth cube into the two measurements."""
    try:
        gt = read_hsc(gt_path)
        response = read_csr(csr_path)
        down = BlockAverage(block=block, in_rows=gt.rows, in_cols=gt.cols)
        low_res = block_avg_apply(gt, down)
        guide = csr_apply(gt, response)
        write_hsc(low_res, out_z)
        write_hsc(guide, out_y)
        gap = consistency_residual(low_res, guide, down, response)
        click.echo(f"consistency_residual={gap:.3e}")
    except _ERRORS as exc:
        raise click.ClickException(str(exc))


@main.command()
@click.argument("z_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("y_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("csr_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--block", default=32, callback=_positive, show_default=True)
@click.option("--out", default="w.hsc", show_default=True)
def fuse(z_path, y_path, csr_path, block, out):
    """Produce the naive fused baseline estimate."""
    try:
        low_res = read_hsc(z_path)
        guide = read_hsc(y_path)
        response = read_csr(csr_path)
        write_hsc(naive_fuse(low_res, guide, response, block), out)
        click.echo(f"wrote {out}")
    except _ERRORS as exc:
        raise click.ClickException(str(exc))


@main.command()
@click.argument("w_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("z_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("y_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("csr_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--beta", default=1.0, callback=_nonnegative, show_default=True)
@click.option("--rho", default=0.2, callback=_positive, show_default=True)
@click.option("--max-iters", default=120, callback=_positive, show_default=True)
@click.option("--tol", default=1e-3, callback=_positive, show_default=True)
@click.option("--block", default=32, callback=_positive, show_default=True)
@click.option("--mode", default="auto", show_default=True,
              type=click.Choice(["auto", "exact", "dykstra"]))
@click.option("--threads", default=1, callback=_positive, show_default=True,
              help="Worker threads for band-parallel updates.")
@click.option("--out", default="xhat.hsc", show_default=True)
@click.option("--report", "report_path", default=None,
              help="Report path (default: derived from --out).")
@click.option("--clamp", is_flag=True,
              help="Clamp the written cube to [0,1] for display use.")
def solve(w_path, z_path, y_path, csr_path, beta, rho, max_iters, tol,
          block, mode, threads, out, report_path, clamp):
    """Refine a fused estimate until both measurements are satisfied."""
    try:
        base = read_hsc(w_path)
        low_res = read_hsc(z_path)
        guide = read_hsc(y_path)
        response = read_csr(csr_path)
        config = SolverConfig(
            beta=beta, rho=rho, max_iters=max_iters, residual_tol=tol,
            block=block, parallel_bands=threads > 1, projection_mode=mode,
        )
        xhat, report = solve_tvtv(base, low_res, guide, response, config,
                                  workers=threads)
        write_hsc(clamp01(xhat) if clamp else xhat, out)
        if report_path is None:
            report_path = str(Path(out).with_suffix("")) + "_report.txt"
        for line in _write_report(report, Path(report_path)):
            click.echo(line)
    except _ERRORS as exc:
        raise click.ClickException(str(exc))


@main.command("eval")
@click.argument("est_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("ref_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--scale", default=32.0, callback=_positive, show_default=True,
              help="Scale ratio used by ERGAS.")
@click.option("--method", default="est", show_default=True,
              help="Row label when appending to a table.")
@click.option("--append", "append_path", default=None,
              help="Append the row to this metrics table.")
def eval_cmd(est_path, ref_path, scale, method, append_path):
    """Score a reconstruction against a reference cube."""
    try:
        est = read_hsc(est_path)
        ref = read_hsc(ref_path)
        record = evaluate(est, ref, scale)
        for key in ("psnr", "ssim", "sam", "ergas", "rmse"):
            click.echo(f"{key}={getattr(record, key):.3f}")
        if append_path is not None:
            path = Path(append_path)
            row = metrics_row(method, record)
            if path.exists():
                with open(path, "a", newline="\n") as f:
                    f.write(row + "\n")
            else:
                with open(path, "w", newline="\n") as f:
                    f.write(METRICS_HEADER + "\n" + row + "\n")
    except _ERRORS as exc:
        raise click.ClickException(str(exc))


@main.command()
@click.argument("gt_path", required=False,
                type=click.Path(exists=True, dir_okay=False))
@click.argument("csr_path", required=False,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--synthetic", is_flag=True,
              help="Generate the ground truth and response instead of reading them.")
@click.option("--seed", default=0, show_default=True)
@click.option("--rows", default=64, callback=_positive, show_default=True)
@click.option("--cols", default=64, callback=_positive, show_default=True)
@click.option("--bands", default=8, callback=_positive, show_default=True)
@click.option("--channels", default=3, callback=_positive, show_default=True)
@click.option("--rects", default=6, callback=_nonnegative, show_default=True)
@click.option("--block", default=4, callback=_positive, show_default=True)
@click.option("--beta", default=1.0, callback=_nonnegative, show_default=True)
@click.option("--rho", default=0.2, callback=_positive, show_default=True)
@click.option("--max-iters", default=120, callback=_positive, show_default=True)
@click.option("--tol", default=1e-3, callback=_positive, show_default=True)
@click.option("--mode", default="auto", show_default=True,
              type=click.Choice(["auto", "exact", "dykstra"]))
@click.option("--threads", default=1, callback=_positive, show_default=True)
@click.option("--noise", default=0.0, callback=_nonnegative, show_default=True,
              help="Gaussian corruption added to the fused baseline.")
@click.option("--outdir", default=".", show_default=True,
              type=click.Path(file_okay=False))
def pipeline(gt_path, csr_path, synthetic, seed, rows, cols, bands, channels,
             rects, block, beta, rho, max_iters, tol, mode, threads, noise,
             outdir):
    """Simulate, fuse, solve, and evaluate in one run."""
    try:
        workdir = Path(outdir)
        workdir.mkdir(parents=True, exist_ok=True)
        if synthetic:
            write_hsc(synthetic_cube(rows, cols, bands, rects, seed),
                      workdir / "gt.hsc")
            write_csr(synthetic_response(bands, channels, seed),
                      workdir / "csr.csv")
            gt_path = workdir / "gt.hsc"
            csr_path = workdir / "csr.csv"
        elif gt_path is None or csr_path is None:
            raise click.UsageError(
                "provide GT_PATH and CSR_PATH or pass --synthetic")
        gt = read_hsc(gt_path)
        response = read_csr(csr_path)

        # Every stage below works from the file it just wrote, so this
        # command is byte-equivalent to chaining simulate/fuse/solve/eval.
        down = BlockAverage(block=block, in_rows=gt.rows, in_cols=gt.cols)
        write_hsc(block_avg_apply(gt, down), workdir / "z.hsc")
        write_hsc(csr_apply(gt, response), workdir / "y.hsc")
        low_res = read_hsc(workdir / "z.hsc")
        guide = read_hsc(workdir / "y.hsc")

        base = naive_fuse(low_res, guide, response, block)
        if noise > 0:
            base = add_noise(base, noise, seed + 1)
        write_hsc(base, workdir / "w.hsc")
        base = read_hsc(workdir / "w.hsc")

        config = SolverConfig(
            beta=beta, rho=rho, max_iters=max_iters, residual_tol=tol,
            block=block, parallel_bands=threads > 1, projection_mode=mode,
        )
        xhat, report = solve_tvtv(base, low_res, guide, response, config,
                                  workers=threads)
        write_hsc(xhat, workdir / "xhat.hsc")
        _write_report(report, workdir / "xhat_report.txt")
        xhat = read_hsc(workdir / "xhat.hsc")

        records = [
            ("baseline", evaluate(base, gt, float(block))),
            ("tvtv", evaluate(xhat, gt, float(block))),
        ]
        write_metrics_table(records, workdir / "metrics.csv")
        click.echo(METRICS_HEADER)
        for name, record in records:
            click.echo(metrics_row(name, record))
    except _ERRORS as exc:
        raise click.ClickException(str(exc))


if __name__ == "__main__":
    main()
