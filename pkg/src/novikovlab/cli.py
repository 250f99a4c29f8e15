"""``novikovlab`` command line.

Every command prints one canonical JSON report (sorted keys) to stdout or to
``--out``.  Exit status: 0 ok, 1 law violation or a non-acyclic verdict where
acyclicity was asserted, 2 input error.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .bicomplex import (DoubleComplexWindow, check_tot_sum_is_torus, contract_lt, contract_rt,
                        torus_bicomplex, verify_witness)
from .complexes import ChainMap, CochainComplex, cohomology, cone
from .errors import ContractionError, NovikovLabError, ValidationError
from .fuzz import MODES, fuzz_generate, torus_checks
from .novikov import mapping_torus, novikov_verdict, ranicki_check
from .rings import RingTag, SeriesDir
from .serialize import (canonical_json, chain_map_to_json, cocycle_from_json, complex_to_json, digest,
                        load_json, parse_input, witness_to_json)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 already; keep the message short
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like pLo:pHi, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return lo, hi


def _ring(text: str) -> RingTag:
    try:
        return RingTag.parse(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="novikovlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--timing", action="store_true",
                        help="include wall time (makes the report non-deterministic)")
        return sp

    common(sub.add_parser("validate", help="parse and validate any input file")).add_argument("path")
    common(sub.add_parser("cohomology", help="cohomology of a complex over ZZ, QQ or GF(p)")).add_argument("path")
    common(sub.add_parser("cone", help="mapping cone of a chain map")).add_argument("map_path")

    sp = common(sub.add_parser("torus", help="mapping torus of a self map"))
    sp.add_argument("complex_path")
    sp.add_argument("map_path")
    sp.add_argument("--var", choices=("z", "zinv"), default="z")

    sp = common(sub.add_parser("novikov", help="Novikov cohomology verdict"))
    sp.add_argument("path")
    sp.add_argument("--dir", choices=("lt", "rt"), required=True)
    sp.add_argument("--assert-acyclic", action="store_true",
                    help="exit 1 unless every degree is certified acyclic")

    common(sub.add_parser("ranicki", help="necessary condition for finite domination")).add_argument("path")

    sp = common(sub.add_parser("contract", help="cobounding witness for a total cocycle"))
    sp.add_argument("bicomplex_path", help="a bicomplex file, or a chain_map file (torus window)")
    sp.add_argument("cocycle_path")
    sp.add_argument("--dir", choices=("lt", "rt"), required=True)
    sp.add_argument("--window", type=_window, help="pLo:pHi, needed with a chain_map file")

    sp = common(sub.add_parser("fuzz", help="run the mapping torus property suite on random inputs"))
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--ring", type=_ring, default=RingTag.parse("GF(5)"))
    sp.add_argument("--degrees", type=_window, default=(-2, 2), help="degree window lo:hi")
    sp.add_argument("--window", type=_window, default=(0, 3), help="column window of the double complex")
    sp.add_argument("--max-rank", type=int, default=3)
    sp.add_argument("--mode", choices=MODES, default="quasi_iso")

    sp = common(sub.add_parser("identify", help="compare Tot of the torus double complex with T(h)"))
    sp.add_argument("complex_path")
    sp.add_argument("map_path")
    sp.add_argument("--window", type=_window, required=True)
    return p


# -- commands ------------------------------------------------------------------------

def _self_map(complex_path, map_path) -> tuple[CochainComplex, ChainMap]:
    C = parse_input(complex_path, "complex")
    h = parse_input(map_path, "chain_map")
    if h.source != C or h.target != C:
        raise InputError(f"{map_path} is not a self map of the complex in {complex_path}")
    return C, h


def cmd_validate(a):
    try:
        value = parse_input(a.path)
    except ValidationError as exc:
        where = list(exc.where) if isinstance(exc.where, tuple) else exc.where
        return EXIT_VIOLATION, {"ok": False, "message": str(exc), "where": where}
    kind = type(value).__name__
    return EXIT_OK, {"ok": True, "kind": kind, "ring": str(getattr(value, "ring", "")) or None}


def cmd_cohomology(a):
    C = parse_input(a.path, "complex")
    if C.ring.is_laurent:
        raise InputError("complexes over Laurent rings: use the novikov command")
    return EXIT_OK, cohomology(C).to_json()


def cmd_cone(a):
    f = parse_input(a.map_path, "chain_map")
    return EXIT_OK, {"complex": complex_to_json(cone(f))}


def cmd_torus(a):
    C, h = _self_map(a.complex_path, a.map_path)
    T = mapping_torus(C, h, "z" if a.var == "z" else "z_inv")
    return EXIT_OK, {"complex": complex_to_json(T)}


def cmd_novikov(a):
    B = parse_input(a.path, "complex")
    v = novikov_verdict(B, SeriesDir(a.dir))
    code = EXIT_VIOLATION if a.assert_acyclic and not v.acyclic else EXIT_OK
    return code, v.to_json()


def cmd_ranicki(a):
    B = parse_input(a.path, "complex")
    return EXIT_OK, ranicki_check(B).to_json()


def cmd_contract(a):
    value = parse_input(a.bicomplex_path)
    if isinstance(value, ChainMap):
        if a.window is None:
            raise InputError("--window is required when contracting on a torus window")
        if value.source != value.target:
            raise InputError("the chain map must be a self map")
        D = torus_bicomplex(value.source, value, *a.window)
    elif isinstance(value, DoubleComplexWindow):
        D = value
    else:
        raise InputError(f"{a.bicomplex_path} is neither a bicomplex nor a chain map")
    x = cocycle_from_json(load_json(a.cocycle_path), D.ring, a.cocycle_path)
    try:
        w = (contract_lt if a.dir == "lt" else contract_rt)(D, x)
    except ContractionError as exc:
        return EXIT_VIOLATION, {"ok": False, "message": str(exc), "column": exc.column,
                                "precondition": exc.precondition}
    chk = verify_witness(D, x, w)
    return (EXIT_OK if chk else EXIT_VIOLATION), {"ok": chk.ok, "witness": witness_to_json(w, D.ring),
                                                   "recheck": chk.to_json()}


def cmd_fuzz(a):
    if a.samples < 0:
        raise InputError("--samples must be non-negative")
    rows = []
    failures = 0
    for i in range(a.samples):
        seed = a.seed * 1_000_003 + i
        C, h = fuzz_generate(seed, a.ring, a.degrees, a.max_rank, a.mode)
        checks = torus_checks(C, h, a.window)
        ok = all(checks.values())
        failures += not ok
        rows.append({"index": i, "seed": seed, "ranks": {str(n): r for n, r in C.ranks.items()},
                     "input_digest": digest(canonical_json(chain_map_to_json(h)).encode()),
                     "checks": checks, "pass": ok})
    return (EXIT_VIOLATION if failures else EXIT_OK), {
        "samples": rows, "passed": a.samples - failures, "failed": failures}


def cmd_identify(a):
    C, h = _self_map(a.complex_path, a.map_path)
    chk = check_tot_sum_is_torus(C, h, a.window)
    return (EXIT_OK if chk else EXIT_VIOLATION), chk.to_json()


COMMANDS = {"validate": cmd_validate, "cohomology": cmd_cohomology, "cone": cmd_cone,
            "torus": cmd_torus, "novikov": cmd_novikov, "ranicki": cmd_ranicki,
            "contract": cmd_contract, "fuzz": cmd_fuzz, "identify": cmd_identify}

_PATH_ARGS = ("path", "map_path", "complex_path", "bicomplex_path", "cocycle_path")


def _echo(a) -> dict:
    out = {}
    for k, v in sorted(vars(a).items()):
        if k in ("out", "timing"):
            continue
        if isinstance(v, RingTag):
            v = str(v)
        elif isinstance(v, tuple):
            v = list(v)
        out[k] = v
    return out


def _digests(a) -> dict:
    out = {}
    for k in _PATH_ARGS:
        p = getattr(a, k, None)
        if p is not None:
            try:
                out[p] = digest(Path(p).read_bytes())
            except OSError:
                pass
    return out


def execute(a: argparse.Namespace) -> tuple[int, dict]:
    """Run one parsed command; returns ``(exit_code, report)``."""
    t0 = time.perf_counter()
    report = {"command": _echo(a), "inputs": _digests(a)}
    try:
        code, result = COMMANDS[a.command](a)
        report["result"] = result
    except (InputError, NovikovLabError) as exc:
        code = EXIT_INPUT
        report["error"] = {"type": type(exc).__name__, "message": f"{a.command}: {exc}"}
        where = getattr(exc, "where", None)
        if where is not None:
            report["error"]["where"] = list(where) if isinstance(where, tuple) else where
    report["exit_code"] = code
    if a.timing:
        report["wall_time_s"] = round(time.perf_counter() - t0, 6)
    return code, report


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    code, report = execute(a)
    text = canonical_json(report)
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    if "error" in report:
        sys.stderr.write(report["error"]["message"] + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
