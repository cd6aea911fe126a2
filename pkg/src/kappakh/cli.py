"""Command-line front end.

Exit codes: 0 on success, 2 on a parse error (bad flags, bad braid text,
unreadable batch file), 3 on invalid options.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import invariants as inv
from .braid import BasepointAddress, BraidParseError, BraidWord, parse_basepoint, parse_braid, self_linking
from .diagram import gradings

log = logging.getLogger("kappakh")

CACHE_ENV = "KAPPAKH_CACHE_DIR"
COMMANDS = ("kappa", "kappa-sub", "kappa-quot", "psi", "skh", "ss", "word-problem", "veering", "destab")
REDUCED = {"kappa-sub": "reduced_sub", "kappa-quot": "reduced_quot"}
EXIT_PARSE = 2
EXIT_OPTIONS = 3


class OptionError(ValueError):
    pass


def _inf(v):
    return "infinity" if v == inv.INFINITY else v


def _variant(opts: dict) -> tuple[str, BasepointAddress | None]:
    variant = opts.get("variant") or "unreduced"
    bp = opts.get("basepoint")
    return variant, (BasepointAddress(*bp) if bp else None)


def validate(b: BraidWord, command: str, opts: dict) -> None:
    if command not in COMMANDS:
        raise OptionError(f"unknown command {command!r}")
    bp = opts.get("basepoint")
    if command in REDUCED:
        if bp is None:
            raise OptionError(f"{command} needs --basepoint")
    elif command in ("psi", "skh", "ss"):
        variant = opts.get("variant") or "unreduced"
        if (variant == "unreduced") != (bp is None):
            raise OptionError("--basepoint is required exactly for the reduced variants")
    elif bp is not None:
        raise OptionError(f"{command} takes no basepoint")
    if bp is not None:
        try:
            BasepointAddress(*bp).check(b)
        except ValueError as e:
            raise OptionError(str(e)) from None
    if command == "ss" and (opts.get("page") is None or opts["page"] < 1):
        raise OptionError("ss needs --page r with r >= 1")


def compute(b: BraidWord, command: str, opts: dict) -> dict:
    """Run one job; returns the JSON-ready result (field order is fixed)."""
    validate(b, command, opts)
    t0 = time.perf_counter()
    out: dict = {"word": b.text(), "n": b.n, "command": command}
    if command in ("kappa", "kappa-sub", "kappa-quot"):
        variant = REDUCED.get(command, "unreduced")
        bp = BasepointAddress(*opts["basepoint"]) if opts.get("basepoint") else None
        res = inv.kappa(b, variant, bp)
        out["value"] = _inf(res.value)
        if res.finite:
            out["witness_k"] = res.witness_k
            out["witness_size"] = len(res.witness)
            if opts.get("witness"):
                out["witness"] = [[g.res, g.labels] for g in res.witness_generators()]
    elif command == "psi":
        variant, bp = _variant(opts)
        g = inv.psi(b, variant, bp)
        h, q, k = gradings(b, g)
        out["value"] = {"resolution": g.res, "labels": g.labels, "h": h, "q": q, "k": k}
    elif command == "skh":
        variant, bp = _variant(opts)
        table = inv.skh_dims(b, variant, bp)
        out["value"] = [[h, q, k, d] for (h, q, k), d in sorted(table.items())]
    elif command == "ss":
        variant, bp = _variant(opts)
        h = opts.get("h")
        k = opts.get("k")
        q = opts.get("q")
        out["value"] = inv.ss_page_dim(
            b, opts["page"], 0 if h is None else h, -b.n if k is None else k,
            self_linking(b) if q is None else q, variant, bp,
        )
    elif command == "word-problem":
        out["value"] = inv.word_problem(b)
    elif command == "veering":
        out["value"] = inv.certify_right_veering(b)
    elif command == "destab":
        out["value"] = inv.negative_destab_obstruction(b)
    out["time_ms"] = round(1000 * (time.perf_counter() - t0), 3)
    return out


def format_human(res: dict, opts: dict) -> str:
    command, value = res["command"], res["value"]
    if command.startswith("kappa"):
        lines = [f"{command} = {value}"]
        if "witness" in res:
            lines.append(f"witness k = {res['witness_k']}, {res['witness_size']} generators")
            lines += [f"  resolution={r:#b} labels={l:#b}" for r, l in res["witness"]]
        return "\n".join(lines)
    if command == "psi":
        return "psi: resolution={resolution:#b} labels={labels:#b} h={h} q={q} k={k}".format(**value)
    if command == "skh":
        return "\n".join(["h q k dim"] + [" ".join(map(str, row)) for row in value])
    if command == "ss":
        h = 0 if opts.get("h") is None else opts["h"]
        k = -res["n"] if opts.get("k") is None else opts["k"]
        return f"E^{opts['page']}[h={h}, k={k}] = {value}"
    return str(value)


# result cache ---------------------------------------------------------------

def cache_key(b: BraidWord, command: str, opts: dict) -> str:
    relevant = {k: v for k, v in sorted(opts.items()) if v is not None and k not in ("json", "cache_dir")}
    blob = json.dumps([b.text(), b.n, command, relevant], sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_lookup(cache_dir: Path, key: str) -> dict | None:
    path = cache_dir / f"{key}.json"
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        return None
    except OSError as e:
        log.warning("cache read failed (%s); computing", e)
        return None
    try:
        entry = json.loads(text)
        if entry.get("key") != key or not isinstance(entry.get("result"), dict):
            raise ValueError("malformed entry")
    except (ValueError, AttributeError):
        log.warning("corrupted cache entry %s; recomputing", path.name)
        return None
    return entry["result"]


def cache_store(cache_dir: Path, key: str, result: dict) -> None:
    try:
        cache_dir.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=".tmp-", suffix=".json")
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            json.dump({"key": key, "result": result}, f)
        os.replace(tmp, cache_dir / f"{key}.json")
    except OSError as e:
        log.warning("cache write failed (%s); result not cached", e)


def run_job(b: BraidWord, command: str, opts: dict, cache_dir: Path | None) -> dict:
    if cache_dir is None:
        return compute(b, command, opts)
    key = cache_key(b, command, opts)
    hit = cache_lookup(cache_dir, key)
    if hit is not None:
        return hit
    result = compute(b, command, opts)
    cache_store(cache_dir, key, result)
    return result


# batch ----------------------------------------------------------------------

def parse_batch_line(line: str) -> BraidWord:
    if ":" not in line:
        raise BraidParseError("expected 'n : letters'")
    n_text, word = line.split(":", 1)
    try:
        n = int(n_text.strip())
    except ValueError:
        raise BraidParseError(f"bad strand count {n_text.strip()!r}") from None
    return parse_braid(word, n)


def _batch_one(args) -> dict:
    lineno, line, command, opts, cache_dir = args
    try:
        b = parse_batch_line(line)
        return run_job(b, command, opts, cache_dir)
    except (BraidParseError, OptionError, ValueError) as e:
        return {"line": lineno, "input": line, "error": str(e)}


def batch(lines, command: str, opts: dict, cache_dir: Path | None, jobs: int = 1) -> list[dict]:
    work = [
        (i, line.strip(), command, opts, cache_dir)
        for i, line in enumerate(lines, start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_batch_one, work))
    return [_batch_one(w) for w in work]


# argument parsing -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _basepoint(text: str) -> tuple[int, int]:
    try:
        p = parse_basepoint(text)
    except BraidParseError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
    return (p.position, p.gap)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kappakh", description="kappa and annular Khovanov homology of braid closures over GF(2).")
    parser.add_argument("--cache-dir", type=Path, default=None,
                        help=f"result cache directory (default: ${CACHE_ENV}, unset = no cache)")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def job_options(p, word=True):
        if word:
            p.add_argument("--strands", "-n", type=int, default=None)
            p.add_argument("--word", "-w", required=True, help="letters, e.g. '1,-2,3'")
        p.add_argument("--basepoint", "-p", type=_basepoint, default=None, help="position,gap")
        p.add_argument("--variant", choices=["unreduced", "reduced_sub", "reduced_quot"], default=None)
        p.add_argument("--page", "-r", type=int, default=None)
        p.add_argument("--h", type=int, default=None)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--q", type=int, default=None)
        p.add_argument("--witness", action="store_true", help="print the realizing chain")
        p.add_argument("--json", action="store_true")

    for name in COMMANDS:
        job_options(sub.add_parser(name))
    bp = sub.add_parser("batch", help="one JSON result per line of 'n : letters'")
    bp.add_argument("file", type=Path)
    bp.add_argument("--command", "-c", dest="job_command", choices=COMMANDS, default="kappa")
    bp.add_argument("--jobs", "-j", type=int, default=1)
    job_options(bp, word=False)
    return parser


def _opts(ns: argparse.Namespace) -> dict:
    return {
        "basepoint": ns.basepoint,
        "variant": ns.variant,
        "page": ns.page,
        "h": ns.h,
        "k": ns.k,
        "q": ns.q,
        "witness": ns.witness or None,
    }


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    cache_dir = ns.cache_dir or (Path(os.environ[CACHE_ENV]) if os.environ.get(CACHE_ENV) else None)
    opts = _opts(ns)

    if ns.subcommand == "batch":
        try:
            lines = ns.file.read_text(encoding="utf-8").splitlines()
        except (OSError, UnicodeDecodeError) as e:
            print(f"kappakh: cannot read {ns.file}: {e}", file=sys.stderr)
            return EXIT_PARSE
        if ns.jobs < 1:
            print("kappakh: --jobs must be positive", file=sys.stderr)
            return EXIT_OPTIONS
        for res in batch(lines, ns.job_command, opts, cache_dir, ns.jobs):
            print(json.dumps(res), file=stdout)
        return 0

    try:
        b = parse_braid(ns.word, ns.strands)
    except BraidParseError as e:
        print(f"kappakh: {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        res = run_job(b, ns.subcommand, opts, cache_dir)
    except OptionError as e:
        print(f"kappakh: {e}", file=sys.stderr)
        return EXIT_OPTIONS
    print(json.dumps(res) if ns.json else format_human(res, opts), file=stdout)
    return 0


def main() -> None:
    sys.exit(run())
