"""
Workbench CLI
Command-line front end: triangle generation, positivity checks, root data, oracles and campaigns
"""

import functools
import logging
import sys
from pathlib import Path
from typing import List, Optional

import click

from app.config import get_settings, load_campaign_config
from app.models.campaign import ClaimRecord, ClaimSpec, ExitCode, VerificationReport
from app.models.combinatorics import PhyloFlavor
from app.repos.artifact_repo import ArtifactRepository, dump_json, triangle_csv
from app.services.combinatorial_oracles import check_interpretation
from app.services.exceptions import ConfigurationError, GuardExceededError, UnknownKindError, WorkbenchError
from app.services.poly_analysis import normalized_root_cloud
from app.services.triangle_engine import TriangleService
from app.services.verification_service import hankel_claim, roots_claims, run_claim, tp_claim
from app.tasks.campaign_runner import run_campaign, write_report

logger = logging.getLogger(__name__)


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got '{text}'")


def handle_errors(f):
    """Map domain errors onto the exit-code contract"""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except GuardExceededError as e:
            logger.error(f"{e}")
            click.echo(f"Error: {e}", err=True)
            sys.exit(int(ExitCode.GUARD))
        except (UnknownKindError, ConfigurationError) as e:
            raise click.UsageError(str(e))
        except WorkbenchError as e:
            logger.error(f"{e}")
            click.echo(f"Error: {e}", err=True)
            sys.exit(int(ExitCode.UNEXPECTED))
        except ValueError as e:
            raise click.UsageError(str(e))

    return wrapper


def _emit_records(records: List[ClaimRecord]) -> None:
    payload = [record.model_dump(mode="json", exclude={"elapsed_ms"}) for record in records]
    click.echo(dump_json(payload[0] if len(payload) == 1 else payload), nl=False)


def _run(specs: List[ClaimSpec]) -> List[ClaimRecord]:
    records = [run_claim(spec) for spec in specs]
    _emit_records(records)
    return records


@click.group()
@click.option("--precision-bits", type=int, default=None, help="Working precision for numeric roots.")
@click.option("--jobs", type=int, default=None, help="Worker processes for campaigns.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Directory for written artifacts.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", help="Triangle output format.")
@click.option("--log-level", default=None, help="Logging level (default from STIRLING_LOG_LEVEL).")
@click.option("--quiet", is_flag=True, help="No progress bars.")
@click.pass_context
def cli(ctx, precision_bits, jobs, out_dir, fmt, log_level, quiet):
    """Exact workbench for higher-order Stirling, Eulerian and quasi-Eulerian triangles."""
    try:
        settings = get_settings()
    except ConfigurationError as e:
        raise click.UsageError(str(e))
    level = (log_level or settings.log_level).upper()
    if not isinstance(logging.getLevelName(level), int):
        raise click.UsageError(f"Unknown log level '{level}'")
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    ctx.ensure_object(dict)
    ctx.obj.update(
        precision_bits=precision_bits or settings.precision_bits,
        jobs=jobs or settings.jobs,
        overrides={"precision_bits": precision_bits, "jobs": jobs},
        repo=ArtifactRepository(out_dir or settings.output_dir),
        fmt=fmt,
        quiet=quiet,
        minor_search_limit=settings.minor_search_limit,
    )


@cli.command()
@click.argument("kind")
@click.argument("r", type=int)
@click.argument("n_max", type=int)
@click.option("--reversed", "reversed_", is_flag=True, help="Reverse every row.")
@click.option("--stdout", "to_stdout", is_flag=True, help="Print instead of writing a file.")
@click.pass_context
@handle_errors
def gen(ctx, kind, r, n_max, reversed_, to_stdout):
    """Generate a triangle up to row N_MAX."""
    T = TriangleService().triangle_for(kind, r, n_max, reversed=reversed_)
    fmt = ctx.obj["fmt"]
    if to_stdout:
        click.echo(triangle_csv(T) if fmt == "csv" else dump_json(T.to_json()), nl=False)
        return
    suffix = "-reversed" if reversed_ else ""
    path = ctx.obj["repo"].save_triangle(T, f"{kind}{suffix}_r{r}_n{n_max}.{fmt}", fmt)
    click.echo(str(path))


@cli.command()
@click.argument("kind")
@click.argument("r", type=int)
@click.argument("size", type=int)
@click.option("--reversed", "reversed_", is_flag=True, help="Test the row-reversed triangle.")
@click.pass_context
@handle_errors
def tp(ctx, kind, r, size, reversed_):
    """Total positivity of the leading SIZE x SIZE block."""
    _run([tp_claim(kind, r, size, reversed_, ctx.obj["minor_search_limit"])])


@cli.command()
@click.argument("kind")
@click.argument("r", type=int)
@click.argument("size", type=int)
@click.argument("minor_cap", type=int)
@click.pass_context
@handle_errors
def hankel(ctx, kind, r, size, minor_cap):
    """Coefficientwise Hankel total positivity of the row polynomials."""
    _run([hankel_claim(kind, r, size, minor_cap, ctx.obj["minor_search_limit"])])


@cli.command()
@click.argument("kind")
@click.argument("r", type=int)
@click.argument("n_max", type=int)
@click.pass_context
@handle_errors
def roots(ctx, kind, r, n_max):
    """Real-rootedness certificates, or nonreal-zero evidence from order 3 on."""
    _run(roots_claims(kind, r, n_max, ctx.obj["precision_bits"]))


@cli.command()
@click.argument("kind")
@click.argument("r_list")
@click.argument("n_list")
@click.argument("output", required=False)
@click.pass_context
@handle_errors
def plot(ctx, kind, r_list, n_list, output):
    """Normalized root clouds as CSV for every r in R_LIST and n in N_LIST."""
    records = []
    for r in _int_list(r_list):
        records.extend(normalized_root_cloud(kind, r, _int_list(n_list), ctx.obj["precision_bits"]))
    path = ctx.obj["repo"].save_root_cloud(records, output or f"roots_{kind}.csv")
    click.echo(str(path))


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="key=value campaign config file.")
@click.option("--deterministic/--with-timings", default=True, help="Leave timings out of the JSON report.")
@click.pass_context
@handle_errors
def verify(ctx, config_path, deterministic):
    """Run the verification campaign and write the JSON report."""
    defaults = {"jobs": ctx.obj["jobs"], "precision_bits": ctx.obj["precision_bits"]}
    config = load_campaign_config(config_path, defaults, **ctx.obj["overrides"])
    report: VerificationReport = run_campaign(config, progress=not ctx.obj["quiet"],
                                              minor_search_limit=ctx.obj["minor_search_limit"])
    path = write_report(report, ctx.obj["repo"], config, deterministic)
    counts = ", ".join(f"{status}: {count}" for status, count in sorted(report.counts().items()))
    click.echo(f"{len(report.claims)} claims ({counts}); report at {path}")
    for record in report.unexpected:
        click.echo(f"UNEXPECTED {record.id}: {record.status.value} (expected {record.expected.value})", err=True)
    sys.exit(int(report.exit_code))


@cli.command()
@click.argument("name")
@click.option("--n", "n_max", type=int, default=4, show_default=True, help="Largest row.")
@click.option("--r", type=int, default=2, show_default=True, help="Order for r-general.")
@click.option("--flavor", type=click.Choice([f.value for f in PhyloFlavor]), default=PhyloFlavor.CYCLIC.value,
              show_default=True, help="Phylogenetic tree flavor for V and ward.")
@click.option("--letters", type=int, default=None, help="Largest n+k compared by I; default 2n.")
@click.option("--explicit", is_flag=True, help="Enumerate ordered and cyclic trees one by one for V.")
@handle_errors
def oracle(name, n_max, r, flavor, letters, explicit):
    """Brute-force interpretation NAME, see the README for the list."""
    check = check_interpretation(name, n_max, r, PhyloFlavor(flavor), letters, explicit)
    click.echo(dump_json({**check.model_dump(mode="json"), "passed": check.passed}), nl=False)
    if not check.passed:
        sys.exit(int(ExitCode.UNEXPECTED))


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Serve the read-only HTTP API."""
    import uvicorn

    uvicorn.run("app.main:app", host=host, port=port)


def main(argv: Optional[List[str]] = None) -> None:
    cli.main(args=argv, prog_name="stirling-workbench")


if __name__ == "__main__":
    main()
