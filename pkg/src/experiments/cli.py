import io
import json
import sys
import logging

from dataclasses import asdict
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional

import click
import pandas as pd
import uvicorn

from src.consts import EXAMPLE_PARAMS_JSON
from src.exceptions import (ConfigError, ConvergenceError, DepthError, DisconnectedError, LawMismatchError,
                            LiftError, PreconditionError, SupportError, WindowError)
from src.graph_params.symbols import Label
from src.params_reader.factory import load_params
from src.doubling_graph.graph_dump import dump_truncation
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import VertexClass
from src.geodesy.balls import BallSpec, ball
from src.geodesy.boxes import Box
from src.geodesy.distance import distance, geodesic_walk
from src.walks.audits import good_walk_constants
from src.walks.good_walks import good_walk
from src.walks.lemma_walks import descend_to_socket, first_of_order
from src.walks.walk import straight_walk
from src.measure.ball_measure import ball_measure
from src.measure.box_measure import box_measure, edge_sum_box_measure
from src.curves.assembly import pi_random_curve
from src.curves.compression import compression_curve
from src.curves.density_audits import audit_compression_density, audit_expansion_density, audit_transport_density
from src.curves.expansion import expansion_curve, minimum_expansion_jcut
from src.curves.transport import transport_curve
from src.modulus.bad_box import DEFAULT_BAD_BOX_C0, bad_box_experiment, build_bad_box
from src.modulus.pi_conditions import pi_condition
from src.result_store.factory import default_result_store
from src.experiments.calibration import CachedCalibrator, Calibrator, ICalibrator
from src.experiments.config import ExperimentConfig, parse_float_list, parse_int_range, parse_point
from src.experiments.scans import doubling_sample, doubling_scan, poincare_scan, to_csv_bytes

logger = logging.getLogger(__name__)

EXIT_CODES = (
    ((ConfigError, ValueError), 2),
    ((WindowError, DepthError), 3),
    ((PreconditionError, LiftError, LawMismatchError, SupportError), 4),
    ((ConvergenceError, DisconnectedError), 5),
)


class Session:
    """Per-invocation state: the config being executed and the lazily loaded truncation."""

    def __init__(self, config: ExperimentConfig, fmt: Optional[str]):
        self.config = config
        self.fmt = fmt
        self._truncation: Optional[GraphTruncation] = None

    @property
    def truncation(self) -> GraphTruncation:
        if self._truncation is None:
            self._truncation = GraphTruncation(load_params(self.config.params_path))
        return self._truncation

    def constant(self, name: str, override: Any) -> Any:
        """Command-line value, or the params file's `constants` entry when the option was not given."""
        return getattr(self.truncation.params.constants, name) if override is None else override

    def vertex(self, text: str) -> VertexClass:
        p = parse_point(self.truncation, text)
        if not isinstance(p, VertexClass):
            raise ConfigError(f"{text!r} is an edge point, this command needs a vertex")
        return p

    def command(self, name: str, **options: Any) -> None:
        self.config.command = name
        self.config.options = {k: v for k, v in sorted(options.items())}
        logger.debug(f"Running {name} with config {self.config.digest()}")

    def emit(self, text: str) -> None:
        if self.config.out is None:
            click.echo(text, nl=not text.endswith("\n"))
            return
        self.config.out.parent.mkdir(parents=True, exist_ok=True)
        self.config.out.write_text(text)
        logger.info(f"Output written to {self.config.out}")

    def emit_json(self, obj: Any) -> None:
        self.emit(json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n")

    def emit_frame(self, frame: pd.DataFrame) -> None:
        if self.fmt == "json":
            self.emit_json(json.loads(frame.to_json(orient="records")))
        else:
            self.emit(to_csv_bytes(frame).decode("utf-8"))


pass_session = click.make_pass_decorator(Session)


@click.group()
@click.option("--params", "params_path", type=click.Path(path_type=Path), default=EXAMPLE_PARAMS_JSON,
              show_default=True, help="JSON or TOML parameter file.")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Write output here instead of stdout.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None,
              help="Output format of tabular commands (csv by default).")
@click.option("--seed", type=int, default=None, help="Seed of the sampling mode.")
@click.option("--verbose", is_flag=True, help="Log at DEBUG level.")
@click.pass_context
def cli(ctx: click.Context, params_path: Path, out: Optional[Path], fmt: Optional[str], seed: Optional[int],
        verbose: bool):
    logging.basicConfig(format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    logging.getLogger().setLevel(logging.DEBUG if verbose else logging.WARNING)
    ctx.obj = Session(ExperimentConfig(command="", params_path=params_path, seed=seed, out=out), fmt)


@cli.command()
@pass_session
def build(session: Session):
    """Expand the whole window and dump the truncation."""
    session.command("build")
    buffer = io.StringIO()
    dump_truncation(session.truncation, buffer)
    session.emit(buffer.getvalue())


@cli.command()
@click.argument("x")
@click.argument("y")
@pass_session
def dist(session: Session, x: str, y: str):
    session.command("dist", x=x, y=y)
    t = session.truncation
    session.emit_json({"x": x, "y": y, "d": distance(t, parse_point(t, x), parse_point(t, y))})


@cli.command(name="ball")
@click.argument("center")
@click.option("--radius", "-r", required=True, help="Radius, an integer or p/q.")
@pass_session
def ball_command(session: Session, center: str, radius: str):
    session.command("ball", center=center, radius=radius)
    t = session.truncation
    spec = BallSpec(parse_point(t, center), Fraction(radius))
    b = ball(t, spec)
    report = ball_measure(t, spec)
    session.emit_json({
        "center": center, "R": spec.radius,
        "members": [v.key() for v in sorted(b.vertices, key=VertexClass.sort_key)],
        "measure": asdict(report),
    })


@cli.command()
@click.argument("x")
@click.argument("y")
@click.option("--kind", type=click.Choice(["good", "geodesic"]), default="good", show_default=True)
@pass_session
def walk(session: Session, x: str, y: str, kind: str):
    """Build a good walk (or a geodesic) between two points."""
    session.command("walk", x=x, y=y, kind=kind)
    t = session.truncation
    px, py = parse_point(t, x), parse_point(t, y)
    if kind == "geodesic":
        session.emit_json({"walk": geodesic_walk(t, px, py).to_dict()})
        return
    w = good_walk(t, px, py)
    session.emit_json({"walk": w.to_dict(), "constants": good_walk_constants(t, w, px, py)})


@cli.command()
@click.argument("centers", nargs=-1)
@click.option("--radii", default="1,2,4", show_default=True, help="Comma-separated radii of the doubling scan.")
@click.option("--box", "box_interval", default=None, help="Box interval lo,hi; switches to a box-mass query.")
@click.option("--box-label", default=None, help="Box label pair lambda|theta.")
@click.option("--box-depth", type=int, default=0, show_default=True)
@pass_session
def measure(session: Session, centers: List[str], radii: str, box_interval: Optional[str],
            box_label: Optional[str], box_depth: int):
    """Doubling scan around CENTERS, or the mass of a box."""
    session.command("measure", centers=list(centers), radii=radii, box=box_interval, box_label=box_label,
                    box_depth=box_depth)
    t = session.truncation
    if box_interval is not None:
        lo, hi = (Fraction(v) for v in box_interval.split(","))
        lam, theta = (Label.parse(part) for part in (box_label or "-|-").split("|"))
        box = Box((lo, hi), frozenset({(lam, theta)}), box_depth)
        session.emit_json({"box": [lo, hi], "label": box_label, "depth": box_depth,
                           "box_measure": box_measure(box, t.params), "edge_sum": edge_sum_box_measure(t, box)})
        return
    if not centers:
        raise ConfigError("measure needs at least one center or a --box")
    sample = doubling_sample([parse_point(t, c) for c in centers], parse_int_range(radii))
    session.emit_frame(doubling_scan(t, sample))


@cli.command()
@click.argument("kind", type=click.Choice(["compression", "transport", "expansion", "pi"]))
@click.argument("x")
@click.argument("y", required=False)
@click.option("--k", "k", type=int, default=2, show_default=True)
@click.option("--j-cut", type=int, default=None, help="Defaults to 1 for compression; expansion uses the params file or the calibrated minimum.")
@click.option("--P", "P", type=float, default=3.0, show_default=True)
@click.option("--C", "C", type=float, default=None, help="Pair-measure constant (params file, else 4).")
@click.option("--direction", type=click.Choice(["1", "-1"]), default="1", show_default=True)
@click.option("--sample", type=int, default=0, help="Also draw this many walks with --seed.")
@pass_session
def curve(session: Session, kind: str, x: str, y: Optional[str], k: int, j_cut: Optional[int], P: float,
          C: float, direction: str, sample: int):
    """Build a random-curve primitive from X, or the full PI curve from X to Y."""
    session.command("curve", kind=kind, x=x, y=y, k=k, j_cut=j_cut, P=P, C=C, direction=direction, sample=sample)
    t = session.truncation
    C = session.constant("pair_measure_c", C)
    scales = t.scales
    step = int(direction)
    out = {"kind": kind}
    if kind == "pi":
        if y is None:
            raise ConfigError("the pi curve needs two points")
        built, report = pi_random_curve(t, parse_point(t, x), parse_point(t, y), P, C=C,
                                        j_cut=session.constant("j_cut", j_cut))
        out["report"] = report.to_dict()
    else:
        p = session.vertex(x)
        if kind == "compression":
            w0 = descend_to_socket(t, p, k, step, p.lam, p.theta)
            built = compression_curve(t, w0, 1 if j_cut is None else j_cut, k=k)
            out["density_range"] = list(audit_compression_density(t, built, w0))
        elif kind == "transport":
            w = straight_walk(t, p, p.lam, p.theta, first_of_order(scales, p.m, step, 0, scales.sigma(k)))
            built = transport_curve(t, w, k)
            out["density_range"] = list(audit_transport_density(t, built, k))
        else:
            target = first_of_order(scales, p.m + step * scales.sigma(k), -step, 0)
            w = straight_walk(t, p, p.lam, p.theta, target)
            j_cut = session.constant("j_cut", j_cut)
            built = expansion_curve(t, w, minimum_expansion_jcut(t, k, w.length) if j_cut is None else j_cut)
            out["density_range"] = {event: list(r) for event, r in audit_expansion_density(t, built, w).items()}
    out["curve"] = built.to_dict()
    if sample:
        out["sampled"] = [w.to_dict() for w in built.sample_walks(sample, seed=session.config.seed)]
    session.emit_json(out)


@cli.command()
@click.argument("x")
@click.argument("y")
@click.option("--P", "P", type=float, required=True)
@click.option("--C", "C", type=float, default=None, help="Pair-measure constant (params file, else 4).")
@click.option("--solver", type=click.Choice(["cutting_plane", "exhaustive"]), default="cutting_plane",
              show_default=True)
@click.option("--tol", type=float, default=None, help="Separation tolerance (params file, else 1e-9).")
@click.option("--max-paths", type=int, default=None, help="Path-set cap (params file, else 10000).")
@pass_session
def modulus(session: Session, x: str, y: str, P: float, C: float, solver: str, tol: float, max_paths: int):
    """d(x, y)^(P-1) Mod_P(x, y) against the pair measure."""
    session.command("modulus", x=x, y=y, P=P, C=C, solver=solver, tol=tol, max_paths=max_paths)
    t = session.truncation
    C = session.constant("pair_measure_c", C)
    tol = session.constant("separation_tol", tol)
    max_paths = session.constant("max_paths", max_paths)
    result = pi_condition(t, parse_point(t, x), parse_point(t, y), P, C, tol=tol, max_paths=max_paths, solver=solver)
    session.emit_json({"x": x, "y": y, **result.to_dict()})


@cli.command(name="poincare-scan")
@click.option("--P-grid", "P_grid", default="2,3.5", show_default=True)
@click.option("--k-range", default="2..4", show_default=True)
@click.option("--c0", type=float, default=DEFAULT_BAD_BOX_C0, show_default=True)
@click.option("--tol", type=float, default=None, help="Separation tolerance (params file, else 1e-9).")
@click.option("--workers", type=int, default=4, show_default=True)
@pass_session
def poincare_scan_command(session: Session, P_grid: str, k_range: str, c0: float, tol: float, workers: int):
    """Bad-box values over a P x k grid, one CSV row per cell."""
    session.command("poincare-scan", P_grid=P_grid, k_range=k_range, c0=c0, tol=tol)
    tol = session.constant("separation_tol", tol)
    frame = poincare_scan(session.truncation, parse_float_list(P_grid), parse_int_range(k_range),
                          C0=c0, tol=tol, max_workers=workers)
    session.emit_frame(frame)


@cli.command(name="bad-box")
@click.option("--k", "k", type=int, required=True)
@click.option("--P", "P", type=float, required=True)
@click.option("--c0", type=float, default=DEFAULT_BAD_BOX_C0, show_default=True)
@click.option("--tol", type=float, default=None, help="Separation tolerance (params file, else 1e-9).")
@pass_session
def bad_box(session: Session, k: int, P: float, c0: float, tol: float):
    session.command("bad-box", k=k, P=P, c0=c0, tol=tol)
    t = session.truncation
    tol = session.constant("separation_tol", tol)
    bad = build_bad_box(t, k, c0)
    report = bad_box_experiment(t, k, P, c0, tol=tol, bad=bad)
    session.emit_json({"p0": bad.p0.key(), "p1": bad.p1.key(), "m": bad.m, "R": bad.R, **report.to_dict()})


@cli.command()
@click.option("--no-cache", is_flag=True, help="Skip the result store.")
@pass_session
def calibrate(session: Session, no_cache: bool):
    """Measure the construction's constants on this parameter set."""
    session.command("calibrate", no_cache=no_cache)
    calibrator: ICalibrator = Calibrator()
    if not no_cache:
        calibrator = CachedCalibrator(store=default_result_store(), inner_calibrator=calibrator)
    session.emit_json(calibrator.calibrate(session.truncation.params))


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int):
    """Run the experiments server."""
    uvicorn.run("src.experiments.experiments_server:app", host=host, port=port)


def run(argv: Optional[List[str]] = None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="doubling-graph", standalone_mode=False)
        return rv if isinstance(rv, int) else 0
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except Exception as e:
        for types, code in EXIT_CODES:
            if isinstance(e, types):
                logger.error(f"{type(e).__name__}: {e}")
                click.echo(f"error: {e}", err=True)
                return code
        raise


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
