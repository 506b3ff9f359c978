"""Command-line entry point for Frechet Polytope."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, TextIO

from frechet import __app_name__, __version__
from frechet.config import Settings
from frechet.errors import ConfigError, ConsistencyError, DimensionGuardError, ValidationError
from frechet.models.database import VertexStore
from frechet.models.entities import FrechetClass, Pmf, SearchSpec
from frechet.models.polynomial import parse_monomial
from frechet.services import convex_order, ideal, polytope, search
from frechet.services.pdf_reports import ReportGenerator
from frechet.services.reports import build_report
from frechet.utils.formats import (
    dumps,
    format_dense,
    format_pmf,
    format_poly,
    parse_pmf_text,
    parse_poly,
    pmf_to_json,
    search_record,
)
from frechet.utils.linalg import format_rat, parse_rat

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Dense H rows are only listed by class-info up to this dimension.
CLASS_INFO_MAX_D = 10
KERNEL_BASIS_MAX_D = 12


def configure_logging(level: str, stream: Optional[TextIO] = None) -> None:
    """Route the package loggers to stderr; stdout stays machine-readable."""
    root = logging.getLogger("frechet")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)


# ----- Argument parsing -----


def _rational(text: str):
    try:
        return parse_rat(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_class_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, required=True, help="dimension (>= 2)")
    parser.add_argument("--s", type=int, required=True, help="numerator of p")
    parser.add_argument("--t", type=int, required=True, help="denominator of p")


def _add_pmf_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pmf", required=True, help="pmf file, '-' for stdin")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frechet", description=f"{__app_name__}: exact tools for Bernoulli Frechet classes"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("class-info", help="derived constants, vanishing points and H")
    _add_class_args(p)

    for verb, text in (
        ("validate", "check membership in F_d(p)"),
        ("to-poly", "polynomial image of a pmf"),
        ("classify", "Type0, Type1K or Type1"),
        ("extremal-check", "rank certificate of a pmf"),
        ("exclusivity", "order of mutual exclusivity"),
    ):
        p = sub.add_parser(verb, help=text)
        _add_class_args(p)
        _add_pmf_arg(p)

    p = sub.add_parser("from-poly", help="type-0 pmf of a polynomial in the ideal")
    _add_class_args(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--poly", help="polynomial text, e.g. '1*x1*x2 - 1*x1 - 1*x2 + 1'")
    group.add_argument("--poly-file", help="file holding the polynomial text")

    p = sub.add_parser("kernel-basis", help="basis of the kernel of the polynomial map")
    _add_class_args(p)

    p = sub.add_parser("enumerate", help="all vertices by brute force")
    _add_class_args(p)
    p.add_argument("--max-support", type=int, help="largest support size considered")
    p.add_argument("--workers", type=int, help="worker processes")
    p.add_argument("--force-large-d", action="store_true", help="override the dimension guard")
    p.add_argument("--db", help="store vertices in this SQLite file")
    p.add_argument("--pdf", help="write a vertex table to this PDF")

    p = sub.add_parser("search", help="search driven by monomials J and zeroed rows K")
    _add_class_args(p)
    p.add_argument("--J", required=True, help="monomials, e.g. x1x2,x1x3")
    p.add_argument("--K", default="", help="rows in 2..d, e.g. 2,3")
    p.add_argument("--signed", action="store_true", help="also try each generator negated")
    p.add_argument("--db", help="store records in this SQLite file")

    p = sub.add_parser("sweep", help="every (J, K) pair up to a size bound")
    _add_class_args(p)
    p.add_argument("--max-J", type=int, required=True, help="largest #J")
    p.add_argument("--out", default="-", help="output file of JSON lines, '-' for stdout")
    p.add_argument("--start", type=int, default=0, help="first cursor to process")
    p.add_argument("--resume", action="store_true", help="continue from the cursor stored in --db")
    p.add_argument("--db", help="SQLite file for records and the sweep cursor")
    p.add_argument("--workers", type=int, help="worker processes")

    p = sub.add_parser("min-convex", help="Bernoulli pmf with convex-order minimal sum")
    _add_class_args(p)
    p.add_argument("--emit", choices=("poly", "pmf", "both", "json"), default="both")

    p = sub.add_parser("stop-loss", help="E[(S - l)+] for the sum of a pmf")
    _add_class_args(p)
    _add_pmf_arg(p)
    p.add_argument("--l", type=_rational, required=True, help="retention level, e.g. 3/2")

    p = sub.add_parser("moments", help="crossed moments and mean correlation")
    _add_class_args(p)
    _add_pmf_arg(p)
    p.add_argument("--tau", type=int, default=2, help="moment order (2..d)")

    p = sub.add_parser("success-rate", help="share of random (d+1)-supports with a solution")
    _add_class_args(p)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("report", help="structured JSON report of a pmf")
    _add_class_args(p)
    _add_pmf_arg(p)
    p.add_argument("--pdf", help="also render the report to this PDF")

    return parser


# ----- Command handlers -----


class _Context:
    def __init__(self, args, settings: Settings, stdin: TextIO, stdout: TextIO):
        self.args = args
        self.settings = settings
        self.stdin = stdin
        self.stdout = stdout
        self.fclass = FrechetClass(args.d, args.s, args.t)

    def emit(self, text: str) -> None:
        self.stdout.write(text + "\n")

    def read_text(self, source: str) -> str:
        if source == "-":
            return self.stdin.read()
        try:
            return Path(source).read_text()
        except FileNotFoundError:
            raise ValidationError(f"file not found: {source}", constraint="file") from None

    def pmf(self) -> Pmf:
        text = self.read_text(self.args.pmf)
        return polytope.validate_pmf(self.fclass, parse_pmf_text(text, self.fclass))

    def workers(self) -> int:
        return self.args.workers or self.settings.workers


def _cmd_class_info(ctx: _Context) -> None:
    fc = ctx.fclass
    info = {
        "d": fc.d,
        "s": fc.s,
        "t": fc.t,
        "p": fc.p,
        "q": fc.q,
        "c": fc.c,
        "a": fc.a,
        "a1": fc.a1,
        "a2": fc.a2,
        "pd": fc.pd,
        "j_max": fc.j_max,
        "j_min": fc.j_min,
        "vanishing_points": [list(pt) for pt in ideal.vanishing_points(fc).points],
        "upper_frechet": pmf_to_json(polytope.upper_frechet_pmf(fc)),
        "lower_frechet": pmf_to_json(polytope.lower_frechet_pmf(fc)) if fc.pd <= 1 else None,
    }
    if fc.d <= CLASS_INFO_MAX_D:
        info["H"] = polytope.build_H(fc).to_rows()
    ctx.emit(dumps(info, indent=2))


def _cmd_validate(ctx: _Context) -> None:
    pmf = ctx.pmf()
    ctx.emit(dumps({"valid": True, "support_size": pmf.support_size}))


def _cmd_to_poly(ctx: _Context) -> None:
    ctx.emit(format_poly(ideal.pmf_to_poly(ctx.pmf())))


def _cmd_from_poly(ctx: _Context) -> None:
    text = ctx.args.poly if ctx.args.poly is not None else ctx.read_text(ctx.args.poly_file)
    poly = parse_poly(text.strip(), ctx.fclass.num_vars)
    ctx.emit(format_pmf(ideal.type0_pmf(poly, ctx.fclass)))


def _cmd_kernel_basis(ctx: _Context) -> None:
    if ctx.fclass.d > KERNEL_BASIS_MAX_D:
        raise DimensionGuardError(f"kernel basis listing is limited to d <= {KERNEL_BASIS_MAX_D}")
    for vector in ideal.kernel_basis(ctx.fclass):
        ctx.emit(format_dense(vector))


def _cmd_classify(ctx: _Context) -> None:
    ctx.emit(ideal.classify_pmf(ctx.pmf()).value)


def _cmd_extremal_check(ctx: _Context) -> None:
    cert = polytope.is_extremal(ctx.pmf())
    ctx.emit(
        dumps(
            {
                "is_extremal": cert.is_extremal,
                "rank_found": cert.rank_found,
                "rank_required": cert.rank_required,
            }
        )
    )


def _cmd_enumerate(ctx: _Context) -> None:
    args = ctx.args
    vertices = polytope.enumerate_extremals_bruteforce(
        ctx.fclass,
        max_support=args.max_support,
        workers=ctx.workers(),
        force=args.force_large_d,
        settings=ctx.settings,
    )
    for pmf in vertices:
        ctx.emit(dumps({"key": pmf.key, "support_size": pmf.support_size, "pmf": pmf_to_json(pmf)}))
    if args.db:
        with VertexStore(Path(args.db)) as store:
            added = store.save_vertices(ctx.fclass, vertices)
        logger.info("Stored %d new vertices in %s", added, args.db)
    if args.pdf:
        ReportGenerator().generate_vertex_table(Path(args.pdf), ctx.fclass, vertices)


def _parse_search_spec(args) -> SearchSpec:
    J = tuple(parse_monomial(label) for label in args.J.split(",") if label.strip())
    try:
        K = tuple(int(k) for k in args.K.split(",") if k.strip())
    except ValueError:
        raise ValidationError(f"malformed row list {args.K!r}", constraint="search") from None
    return SearchSpec(J, K)


def _cmd_search(ctx: _Context) -> None:
    spec = _parse_search_spec(ctx.args)
    records = [search_record(r) for r in search.search(spec, ctx.fclass, signed=ctx.args.signed)]
    for record in records:
        ctx.emit(dumps(record))
    if ctx.args.db:
        with VertexStore(Path(ctx.args.db)) as store:
            for record in records:
                store.save_search_record(ctx.fclass, record)


def _cmd_sweep(ctx: _Context) -> None:
    args = ctx.args
    if args.resume and not args.db:
        raise ValidationError("--resume needs --db", constraint="sweep")
    store = VertexStore(Path(args.db)) if args.db else None
    start = args.start
    if store and args.resume:
        start = store.get_sweep_cursor(ctx.fclass, args.max_J)
        logger.info("Resuming sweep at cursor %d", start)

    try:
        out = ctx.stdout if args.out == "-" else open(args.out, "a" if args.resume else "w")
    except OSError as exc:
        if store:
            store.close()
        raise ValidationError(
            f"cannot open {args.out}: {exc.strerror}", constraint="file"
        ) from None
    try:
        for cursor, _, results in search.sweep(ctx.fclass, args.max_J, start, ctx.workers()):
            for result in results:
                record = search_record(result, cursor)
                out.write(dumps(record) + "\n")
                if store:
                    store.save_search_record(ctx.fclass, record)
            if store:
                store.save_sweep_cursor(ctx.fclass, args.max_J, cursor + 1)
    finally:
        if out is not ctx.stdout:
            out.close()
        if store:
            store.close()


def _cmd_min_convex(ctx: _Context) -> None:
    construction = convex_order.min_convex_bernoulli(ctx.fclass)
    emit = ctx.args.emit
    if emit == "json":
        ctx.emit(
            dumps(
                {
                    "case": construction.case.value,
                    "h": construction.h,
                    "k": construction.k,
                    "lead_degree": construction.lead_degree,
                    "polynomial": format_poly(construction.polynomial),
                    "pmf": pmf_to_json(construction.pmf),
                    "sum_pmf": list(construction.sum_pmf.probs),
                }
            )
        )
        return
    if emit in ("poly", "both"):
        ctx.emit(format_poly(construction.polynomial))
    if emit in ("pmf", "both"):
        ctx.emit(format_pmf(construction.pmf))


def _cmd_stop_loss(ctx: _Context) -> None:
    s = convex_order.sum_pmf(ctx.pmf())
    ctx.emit(format_rat(convex_order.stop_loss(s, ctx.args.l)))


def _cmd_moments(ctx: _Context) -> None:
    pmf = ctx.pmf()
    ctx.emit(
        dumps(
            {
                "tau": ctx.args.tau,
                "crossed_moment_sum": convex_order.crossed_moment_sum(pmf, ctx.args.tau),
                "mean_second_moment": convex_order.mean_second_moment(convex_order.sum_pmf(pmf)),
                "mean_correlation": convex_order.mean_correlation(pmf),
            }
        )
    )


def _cmd_exclusivity(ctx: _Context) -> None:
    ctx.emit(str(convex_order.exclusivity_order(ctx.pmf())))


def _cmd_success_rate(ctx: _Context) -> None:
    rate = polytope.support_success_experiment(ctx.fclass, ctx.args.trials, ctx.args.seed)
    ctx.emit(format_rat(rate))


def _cmd_report(ctx: _Context) -> None:
    report = build_report(ctx.pmf())
    ctx.emit(dumps(report, indent=2))
    if ctx.args.pdf:
        ReportGenerator().generate_class_report(Path(ctx.args.pdf), report)


COMMANDS = {
    "class-info": _cmd_class_info,
    "validate": _cmd_validate,
    "to-poly": _cmd_to_poly,
    "from-poly": _cmd_from_poly,
    "kernel-basis": _cmd_kernel_basis,
    "classify": _cmd_classify,
    "extremal-check": _cmd_extremal_check,
    "enumerate": _cmd_enumerate,
    "search": _cmd_search,
    "sweep": _cmd_sweep,
    "min-convex": _cmd_min_convex,
    "stop-loss": _cmd_stop_loss,
    "moments": _cmd_moments,
    "exclusivity": _cmd_exclusivity,
    "success-rate": _cmd_success_rate,
    "report": _cmd_report,
}


def run(
    argv: Optional[list] = None,
    stdin: Optional[TextIO] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """Execute one command; returns the exit status."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        settings = Settings.from_env()
        level = {0: settings.log_level, 1: "INFO"}.get(args.verbose, "DEBUG")
        configure_logging(level, stderr)
        COMMANDS[args.verb](_Context(args, settings, stdin, stdout))
    except (ValidationError, ConfigError) as exc:
        constraint = getattr(exc, "constraint", None)
        suffix = f" [{constraint}]" if constraint else ""
        stderr.write(f"error: {exc}{suffix}\n")
        return 2
    except ConsistencyError as exc:
        stderr.write(f"internal consistency failure: {exc}\n")
        return 1
    return 0


def main():
    """Application entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
