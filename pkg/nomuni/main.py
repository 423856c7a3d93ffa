import os
import sys
import json
import time
import logging
import datetime
import typing
from pathlib import Path
from dataclasses import dataclass, field
from concurrent.futures import ProcessPoolExecutor

import click
import humanize
import sentry_sdk

from . import __version__
from .settings import settings
from .log import setup_logging, getLogger
from .error import FreshAtomUnavailable, InputError, NomuniError, sentry_error_handler
from .pipeline import SolveResult, solve
from .syntax import FORMATS, JSON, format_solution, parse_problem
from .utils import deep_recursion, parse_bool

logger = getLogger(__name__)

EXIT_SOLVED = 0
EXIT_UNSOLVABLE = 1
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3


@dataclass
class FileReport:
    path: str
    status: str
    exit_code: int
    output: str = ""
    messages: typing.List[str] = field(default_factory=list)


def _render(result: SolveResult, fmt: str) -> str:
    if result.solved:
        return format_solution(result.solution, fmt)
    failure = result.failure
    if fmt == JSON:
        return json.dumps({
            "status": "unsolvable",
            "reason": failure.reason,
            "equation": failure.equation,
            "path": list(failure.path),
            "message": failure.message,
        }, ensure_ascii=False)
    return f"unsolvable: {failure}"


@deep_recursion
def _solve_file(path: str, fmt: str, emit_pattern: bool, trace: bool, verify: bool,
                atoms: typing.Optional[typing.Sequence[str]]) -> FileReport:
    problem = parse_problem(Path(path).read_text(encoding="utf-8"))
    result = solve(problem, atoms=atoms, verify=verify, trace=trace)
    messages = []
    if emit_pattern:
        messages.append(str(result.pattern_problem))
    if trace:
        messages.extend(str(entry) for entry in result.trace)
    return FileReport(
        path,
        "solved" if result.solved else "unsolvable",
        EXIT_SOLVED if result.solved else EXIT_UNSOLVABLE,
        _render(result, fmt),
        messages,
    )


def run_file(path: str, fmt: str, emit_pattern: bool = False, trace: bool = False, verify: bool = True,
             atoms: typing.Optional[typing.Sequence[str]] = None) -> FileReport:
    """ solves one problem file, never raising for problems in the input """
    try:
        return _solve_file(path, fmt, emit_pattern, trace, verify, atoms)
    except (InputError, FreshAtomUnavailable) as e:
        return FileReport(path, "error", EXIT_INPUT_ERROR, messages=[f"{path}: {e}"])
    except NomuniError as e:
        logger.exception(f"failed to solve {path}")
        return FileReport(path, "internal error", EXIT_INTERNAL_ERROR, messages=[f"{path}: {e}"])


def _run_file_star(args):
    return run_file(*args)


def batch_exit_code(reports: typing.Iterable[FileReport]) -> int:
    codes = {r.exit_code for r in reports}
    for code in (EXIT_INTERNAL_ERROR, EXIT_INPUT_ERROR, EXIT_UNSOLVABLE):
        if code in codes:
            return code
    return EXIT_SOLVED


def _parse_atoms(value: typing.Optional[str]) -> typing.Optional[typing.List[str]]:
    if not value:
        return None
    return [a.strip() for a in value.split(",") if a.strip()]


@click.group()
@click.version_option(__version__, prog_name="nomuni")
@click.option("-v", "--verbose", is_flag=True, help="Log solver stages to stderr.")
def cli(verbose):
    """ Nominal unification by reduction to higher-order pattern unification. """
    if verbose:
        setup_logging("DEBUG", settings.value("log/file"))


@cli.command("solve")
@click.argument("file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(FORMATS), default=None,
              help="Output format, text unless configured otherwise.")
@click.option("--emit-pattern", is_flag=True, help="Print the translated pattern problem to stderr.")
@click.option("--trace", is_flag=True, help="Print one line per pattern unification step to stderr.")
@click.option("--no-verify", is_flag=True, help="Do not check the solution against the problem.")
@click.option("--atoms", default=None, help="Comma separated atom list order, e.g. a,b,c.")
@click.option("--batch", type=click.Path(exists=True, file_okay=False), default=None,
              help="Solve every *.nom file of a directory.")
@click.pass_context
def solve_command(ctx, file, fmt, emit_pattern, trace, no_verify, atoms, batch):
    """ Solve the nominal unification problem in FILE. """
    fmt = fmt or settings.value("output/format")
    verify = not no_verify and parse_bool(settings.value("output/verify"))
    atom_order = _parse_atoms(atoms)
    if (file is None) == (batch is None):
        raise click.UsageError("give either FILE or --batch DIR")

    if file is not None:
        report = run_file(file, fmt, emit_pattern, trace, verify, atom_order)
        for message in report.messages:
            click.echo(message, err=True)
        if report.output:
            click.echo(report.output)
        ctx.exit(report.exit_code)

    paths = sorted(str(p) for p in Path(batch).glob("*.nom"))
    workers = int(settings.value("batch/workers")) or None
    start = time.monotonic()
    jobs = [(p, fmt, emit_pattern, trace, verify, atom_order) for p in paths]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        reports = list(executor.map(_run_file_star, jobs))
    elapsed = datetime.timedelta(seconds=time.monotonic() - start)

    for report in reports:
        for message in report.messages:
            click.echo(message, err=True)
        if fmt == JSON:
            data = json.loads(report.output) if report.output else {"status": report.status}
            click.echo(json.dumps({"file": Path(report.path).name, **data}, ensure_ascii=False))
        else:
            click.echo(f"{Path(report.path).name}: {report.status}")
            for line in report.output.splitlines():
                click.echo(f"  {line}")
    counts = {status: sum(r.status == status for r in reports) for status in ("solved", "unsolvable")}
    counts["error"] = len(reports) - counts["solved"] - counts["unsolvable"]
    click.echo(f"{len(reports)} problems: {counts['solved']} solved, {counts['unsolvable']} unsolvable, "
               f"{counts['error']} with errors in {humanize.precisedelta(elapsed, minimum_unit='milliseconds')}",
               err=True)
    ctx.exit(batch_exit_code(reports))


def exception_hook(exctype, value, traceback):
    logger.exception(f"Caught exception, exiting", exc_info=(exctype, value, traceback))
    # Call the normal Exception hook after
    sys._excepthook(exctype, value, traceback)
    sys.exit(EXIT_INTERNAL_ERROR)


def main():
    setup_logging(log_file=settings.value("log/file"))

    dsn = settings.value("errorReporting/dsn")
    if dsn:
        sentry_sdk.init(
            dsn,
            debug=logger.logger.getEffectiveLevel() <= logging.DEBUG,
            release=os.environ.get("NOMUNI_SENTRY_RELEASE", __version__),
            server_name="nomuni",
            before_send=sentry_error_handler,
        )

    # Back up the reference to the exceptionhook
    sys._excepthook = sys.excepthook
    sys.excepthook = exception_hook

    logger.info(f"nomuni {__version__}")
    cli(prog_name="nomuni")


if __name__ == "__main__":
    main()
