"""Command-line front end.

Every subcommand builds the same request models the HTTP service accepts and
either calls the handlers in-process (default) or POSTs them to a running
server (--server).  Exit codes: 0 success, 1 failed verification, 2 usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .service.app import handle_analyze, handle_scan, handle_threshold, handle_verify
from .service.schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    MatrixLiteral,
    ScanRequest,
    ScanResponse,
    ThresholdRequest,
    ThresholdResponse,
    VerifyRequest,
    VerifyResponse,
)

__all__ = ["main"]


class LocalBackend:
    """In-process calls straight into the service handlers."""

    def analyze(self, req: AnalyzeRequest) -> AnalyzeResponse:
        return handle_analyze(req)

    def scan(self, req: ScanRequest) -> ScanResponse:
        return handle_scan(req)

    def threshold(self, req: ThresholdRequest) -> ThresholdResponse:
        return handle_threshold(req)

    def verify(self, req: VerifyRequest) -> VerifyResponse:
        return handle_verify(req)


class HttpBackend:
    """POSTs the same payloads to a running service."""

    def __init__(self, base_url: str):
        self.base_url = base_url.rstrip("/")

    def _post(self, path: str, req, model):
        import httpx

        resp = httpx.post(self.base_url + path, json=req.model_dump(), timeout=600.0)
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise ValueError(f"server returned {resp.status_code}: {detail}")
        return model.model_validate(resp.json())

    def analyze(self, req: AnalyzeRequest) -> AnalyzeResponse:
        return self._post("/analyze", req, AnalyzeResponse)

    def scan(self, req: ScanRequest) -> ScanResponse:
        return self._post("/scan", req, ScanResponse)

    def threshold(self, req: ThresholdRequest) -> ThresholdResponse:
        return self._post("/threshold", req, ThresholdResponse)

    def verify(self, req: VerifyRequest) -> VerifyResponse:
        return self._post("/verify", req, VerifyResponse)


def _backend(args) -> LocalBackend | HttpBackend:
    if getattr(args, "server", None):
        return HttpBackend(args.server)
    return LocalBackend()


def _split_criteria(text: str | None) -> list[str] | None:
    if text is None:
        return None
    names = [c.strip() for c in text.split(",") if c.strip()]
    if not names:
        raise ValueError("empty --criteria list")
    return names


def _parse_ranges(pairs: list[str]) -> dict[str, tuple[float, float]]:
    out: dict[str, tuple[float, float]] = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"range {pair!r} is not of the form NAME=LO:HI")
        name, _, span = pair.partition("=")
        lo, sep, hi = span.partition(":")
        if not sep:
            raise ValueError(f"range {pair!r} is not of the form NAME=LO:HI")
        try:
            out[name.strip()] = (float(lo), float(hi))
        except ValueError:
            raise ValueError(f"range {pair!r} has non-numeric bounds") from None
    return out


def _parse_interval(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ValueError(f"interval {text!r} is not of the form LO:HI")
    try:
        return float(lo), float(hi)
    except ValueError:
        raise ValueError(f"interval {text!r} has non-numeric bounds") from None


def _parse_counts(pairs: list[str]) -> dict[str, int]:
    out: dict[str, int] = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep:
            raise ValueError(f"count {pair!r} is not of the form NAME=N")
        try:
            out[name.strip()] = int(value)
        except ValueError:
            raise ValueError(f"count {pair!r} has a non-integer value") from None
    return out


def read_matrix_literal(path: str) -> MatrixLiteral:
    """Plain-text matrix file: first line d, then d^2 lines of 're im'."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"matrix file {path!r} is empty")
    try:
        dim = int(lines[0])
    except ValueError:
        raise ValueError(f"matrix file {path!r}: first line {lines[0]!r} "
                         f"is not an integer dimension") from None
    if len(lines) - 1 != dim * dim:
        raise ValueError(f"matrix file {path!r}: expected {dim * dim} entry lines "
                         f"after the dimension, found {len(lines) - 1}")
    entries = []
    for k, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"matrix file {path!r} line {k}: expected 're im', "
                             f"got {line!r}")
        try:
            entries.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise ValueError(f"matrix file {path!r} line {k}: non-numeric entry "
                             f"{line!r}") from None
    return MatrixLiteral(dim=dim, entries=entries)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--restarts", type=int, default=20, help="optimizer restarts")
    p.add_argument("--tol", type=float, default=1e-10, help="optimizer tolerance")
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--server", help="base URL of a running service "
                                    "(default: run in-process)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entmaps",
        description="entanglement identifiers, induced positive maps, and scans",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", help="evaluate criteria on a parameter grid")
    p_scan.add_argument("--family", required=True,
                        help="bell_diagonal | weyl | werner | qutrit_werner | w_noise")
    p_scan.add_argument("--criteria", help="comma-separated criteria "
                                           "(default: family-specific)")
    p_scan.add_argument("--resolution", type=int, default=51,
                        help="grid points per axis")
    p_scan.add_argument("--range", action="append", default=[], metavar="NAME=LO:HI",
                        help="override one axis range (repeatable)")
    p_scan.add_argument("--beta", type=float,
                        help="fixed beta for the qutrit family (default pi/4)")
    p_scan.add_argument("--cut", default="12:3", help="bipartition for w_noise")
    p_scan.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_common(p_scan)

    p_an = sub.add_parser("analyze", help="evaluate criteria on one state")
    p_an.add_argument("descriptor", nargs="?",
                      help="state descriptor, e.g. 'werner v=0.5'")
    p_an.add_argument("--matrix-file", help="matrix literal file (first line d, "
                                            "then d^2 lines of 're im')")
    p_an.add_argument("--dims", help="subsystem dimensions, e.g. '2,2' or '2,2,2'")
    p_an.add_argument("--criteria", help="comma-separated criteria "
                                         "(default: all applicable)")
    p_an.add_argument("--cut", default="12:3",
                      help="bipartition for three-qubit states ('all' for every cut)")
    _add_common(p_an)

    p_th = sub.add_parser("threshold", help="bisect a detection threshold")
    p_th.add_argument("--family", required=True, help="werner | w_noise")
    p_th.add_argument("--criteria", required=True, help="one criterion name")
    p_th.add_argument("--range", default="0:1", metavar="LO:HI",
                      help="search interval (default 0:1)")
    p_th.add_argument("--threshold-tol", type=float, default=1e-4,
                      help="bisection tolerance on the parameter")
    p_th.add_argument("--cut", default="12:3", help="bipartition for w_noise")
    _add_common(p_th)

    p_ver = sub.add_parser("verify", help="run the self-check suite")
    p_ver.add_argument("--counts", action="append", default=[], metavar="NAME=N",
                       help="override a check's sample count (repeatable)")
    p_ver.add_argument("--inject-corrupt", action="store_true",
                       help="negative control: corrupt a basis element; "
                            "the suite must fail")
    _add_common(p_ver)

    p_srv = sub.add_parser("serve", help="run the HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)
    return parser


def _cmd_scan(args) -> int:
    req = ScanRequest(
        family=args.family,
        resolution=args.resolution,
        ranges=_parse_ranges(args.range) or None,
        criteria=_split_criteria(args.criteria),
        seed=args.seed,
        restarts=args.restarts,
        tol=args.tol,
        beta=args.beta,
        cut=args.cut,
        format=args.format,
    )
    resp = _backend(args).scan(req)
    _emit(resp.content, args.out)
    return 0


def _cmd_analyze(args) -> int:
    matrix = read_matrix_literal(args.matrix_file) if args.matrix_file else None
    dims = None
    if args.dims:
        try:
            dims = [int(d) for d in args.dims.split(",")]
        except ValueError:
            raise ValueError(f"--dims {args.dims!r} is not a comma-separated "
                             f"list of integers") from None
    req = AnalyzeRequest(
        descriptor=args.descriptor,
        matrix=matrix,
        dims=dims,
        criteria=_split_criteria(args.criteria),
        seed=args.seed,
        restarts=args.restarts,
        tol=args.tol,
        cut=args.cut,
    )
    resp = _backend(args).analyze(req)
    _emit(json.dumps(resp.model_dump(exclude_none=True), indent=2, sort_keys=True),
          args.out)
    return 0


def _cmd_threshold(args) -> int:
    names = _split_criteria(args.criteria)
    if len(names) != 1:
        raise ValueError("threshold takes exactly one criterion")
    lo, hi = _parse_interval(args.range)
    req = ThresholdRequest(
        family=args.family, criterion=names[0], lo=lo, hi=hi,
        tol=args.threshold_tol, seed=args.seed, restarts=args.restarts,
        cut=args.cut,
    )
    resp = _backend(args).threshold(req)
    _emit(json.dumps(resp.model_dump(exclude_none=True), indent=2, sort_keys=True),
          args.out)
    return 0


def _cmd_verify(args) -> int:
    req = VerifyRequest(
        seed=args.seed,
        counts=_parse_counts(args.counts) or None,
        corrupt_basis=args.inject_corrupt,
    )
    resp = _backend(args).verify(req)
    for check in resp.checks:
        tag = "PASS" if check.passed else "FAIL"
        line = (f"{tag} {check.name}: max_error={check.max_error:.3e} "
                f"(tol {check.tolerance:g}, n={check.count})")
        if check.detail:
            line += f" -- {check.detail}"
        print(line)
    print(f"{'OK' if resp.passed else 'FAILED'}: "
          f"{sum(c.passed for c in resp.checks)}/{len(resp.checks)} checks "
          f"passed in {resp.elapsed_s:.1f}s (seed {resp.seed})")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(resp.model_dump(), fh, indent=2, sort_keys=True)
    return 0 if resp.passed else 1


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "scan": _cmd_scan,
        "analyze": _cmd_analyze,
        "threshold": _cmd_threshold,
        "verify": _cmd_verify,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
