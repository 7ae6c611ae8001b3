"""Command-line interface: ``rupert solve|eval|verify|render|list|ingest``.

Exit codes: 0 success, 1 usage or input error, 2 negative result (no
passage found, or a certificate that does not verify).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .errors import RupertError
from .optimize import (
    AngleQuad,
    RupertCertificate,
    SearchConfig,
    evaluate_f,
    grid_search,
    is_rupert,
    verify_certificate,
)
from .render import RenderSpec, render_svg
from .solids import SHIPPED_MANIFESTS, Catalogue, shipped_manifest

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2

log = logging.getLogger("rupert")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; 2 is reserved for negative results here
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------- catalogue setup


def home_dir() -> Path:
    return Path(os.environ.get("RUPERT_HOME") or Path.home() / ".rupert")


def registry_path() -> Path:
    return home_dir() / "manifests"


def registered_manifests() -> list[Path]:
    path = registry_path()
    if not path.exists():
        return []
    return [Path(ln.strip()) for ln in path.read_text().splitlines() if ln.strip()]


def load_catalogue(extra=()) -> Catalogue:
    cat = Catalogue()
    for path in [*registered_manifests(), *map(Path, extra)]:
        cat.ingest_manifest(path)
    return cat


# ---------------------------------------------------------------- commands


def _fmt(x: float) -> str:
    s = f"{x:.7f}"
    # tiny negatives would print as "-0.0000000"
    return s.lstrip("-") if float(s) == 0.0 else s


def _table(header, rows) -> str:
    cells = [header] + rows
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))) for r in cells]
    return "\n".join(line.rstrip() for line in lines)


def certificate_tables(cert: RupertCertificate) -> str:
    a = cert.angles
    top = _table(
        ["solid", "theta_p", "phi_p", "theta_q", "phi_q", "rho"],
        [[cert.solid, *map(_fmt, (a.theta_p, a.phi_p, a.theta_q, a.phi_q, cert.rho))]],
    )
    bottom = _table(["solid", "alpha", "u", "v"], [[cert.solid, *map(_fmt, (cert.alpha, cert.u, cert.v))]])
    return f"{top}\n\n{bottom}"


def cmd_solve(args, cat: Catalogue) -> int:
    rec = cat.lookup(args.solid)
    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
    cfg = SearchConfig(k=args.k, max_evals=args.max_evals, target=args.target, workers=threads)
    total = cfg.k**4

    def progress(done, _total):
        if not args.quiet:
            print(f"\rstarts {done}/{total}", end="" if done < total else "\n", file=sys.stderr, flush=True)

    cert = grid_search(rec.polyhedron, cfg, progress)
    out = Path(args.out or f"{rec.id}.cert")
    cert.save(out)
    print(certificate_tables(cert))
    ok = is_rupert(rec.polyhedron, cert)
    verdict = "passage found" if ok else "no passage found"
    print(f"{verdict}; certificate written to {out}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_eval(args, cat: Catalogue) -> int:
    rec = cat.lookup(args.solid)
    print(_fmt(evaluate_f(rec.polyhedron, AngleQuad(args.theta_p, args.phi_p, args.theta_q, args.phi_q))))
    return EXIT_OK


def _load_cert(args, cat: Catalogue) -> RupertCertificate:
    cert = RupertCertificate.load(args.cert)
    if cert.solid != args.solid:
        raise UsageError(f"certificate is for {cert.solid!r}, not {args.solid!r}")
    cat.lookup(args.solid)
    return cert


def cmd_verify(args, cat: Catalogue) -> int:
    if args.margin < 0:
        raise UsageError("--margin must be nonnegative")
    cert = _load_cert(args, cat)
    rep = verify_certificate(cat, cert, args.margin)
    status = "PASS" if rep.passed else "FAIL"
    print(f"{status} min_slack={rep.min_slack:.10g} binding=vertex {rep.binding[0]}, edge {rep.binding[1]}")
    print(f"claimed rho={cert.rho:.7f} slack_at_rho={rep.claimed_slack:.10g} margin={rep.margin:g}")
    for note in rep.notes:
        print(f"note: {note}")
    return EXIT_OK if rep.passed else EXIT_NEGATIVE


def cmd_render(args, cat: Catalogue) -> int:
    cert = _load_cert(args, cat)
    spec = RenderSpec(width=args.width, height=args.height, margin=args.margin)
    svg = render_svg(cat, cert, spec)
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def cmd_list(args, cat: Catalogue) -> int:
    for rec in cat:
        print(f"{rec.id}\t{rec.family}\t{len(rec.polyhedron)}")
    return EXIT_OK


def cmd_ingest(args, cat: Catalogue) -> int:
    if args.ingest_path:
        paths = [Path(args.ingest_path).resolve()]
    elif args.shipped == "all":
        paths = [shipped_manifest(n) for n in SHIPPED_MANIFESTS]
    else:
        paths = [shipped_manifest(args.shipped)]
    known = registered_manifests()
    for path in paths:
        if not path.is_file():
            raise UsageError(f"no such manifest: {path}")
        added = cat.ingest_manifest(path)  # validates every file before registering
        if path not in known:
            known.append(path)
        print(f"{path}: {len(added)} solids")
    registry_path().parent.mkdir(parents=True, exist_ok=True)
    registry_path().write_text("".join(f"{p}\n" for p in known))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _angle(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if x != x or x in (float("inf"), float("-inf")):
        raise argparse.ArgumentTypeError("angles must be finite")
    return x


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rupert", description="Search for and check Rupert passages of convex polyhedra.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--manifest", action="append", default=[], metavar="PATH",
                   help="load an extra solid manifest for this run (repeatable)")  # fmt: skip
    p.add_argument("-v", "--verbose", action="store_true", help="log warnings from the search")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="grid search with Nelder-Mead from every start")
    s.add_argument("solid")
    s.add_argument("--k", type=_positive_int, default=5, help="grid points per angle (default 5)")
    s.add_argument("--target", type=float, default=float("inf"), help="stop once rho reaches this")
    s.add_argument("--max-evals", type=_positive_int, default=2000)
    s.add_argument("--threads", type=_positive_int, default=None, help="worker processes (default: all cores)")
    s.add_argument("--out", help="certificate path (default <solid>.cert)")
    s.add_argument("-q", "--quiet", action="store_true", help="no progress output")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("eval", help="rho for one angle quadruple")
    e.add_argument("solid")
    for name in ("theta_p", "phi_p", "theta_q", "phi_q"):
        e.add_argument(name, type=_angle)
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="check a certificate")
    v.add_argument("solid")
    v.add_argument("--cert", required=True)
    v.add_argument("--margin", type=float, default=0.0)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="SVG of a certificate")
    r.add_argument("solid")
    r.add_argument("--cert", required=True)
    r.add_argument("--width", type=_positive_int, default=480)
    r.add_argument("--height", type=_positive_int, default=480)
    r.add_argument("--margin", type=float, default=0.05, help="padding as a fraction, 0 to 0.4")
    r.add_argument("--out", help="output file (default standard output)")
    r.set_defaults(func=cmd_render)

    ls = sub.add_parser("list", help="catalogue contents")
    ls.set_defaults(func=cmd_list)

    i = sub.add_parser("ingest", help="register a manifest of OFF files")
    src = i.add_mutually_exclusive_group(required=True)
    src.add_argument("--manifest", dest="ingest_path", metavar="PATH")
    src.add_argument("--shipped", choices=[*SHIPPED_MANIFESTS, "all"],
                     help="register a manifest bundled with the package")  # fmt: skip
    i.set_defaults(func=cmd_ingest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR,
                        format="%(levelname)s: %(message)s")  # fmt: skip
    try:
        cat = load_catalogue(args.manifest)
        return args.func(args, cat)
    except (RupertError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
