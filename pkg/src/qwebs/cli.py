"""Command line front end.

Every subcommand builds a :class:`RunConfig`, runs it, and prints either
canonical text or a JSON report carrying ``"schema": 1``.  Exit status is 0
when nothing failed, 1 on reported failures, 2 on usage errors and 3 when the
oracle refuses a computation over its entry budget.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import identities, relations, reporacle
from .branching import dgt
from .polygons import ZERO_WEB, FlowPair, make_web
from .qalgebra import qbinom

SCHEMA = 1
CACHE_ENV = "QWEBS_CACHE_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    options: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"subcommand": self.subcommand, "options": dict(sorted(self.options.items()))}

    @classmethod
    def from_json(cls, obj: dict) -> RunConfig:
        return cls(obj["subcommand"], dict(obj.get("options", {})))

    def key(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def parse_vector(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad flow vector {text!r}") from exc


def _flows(opts) -> FlowPair:
    a, b = parse_vector(opts.get("a", "")), parse_vector(opts.get("b", ""))
    if len(a) != len(b):
        raise UsageError("--a and --b must have the same length")
    return FlowPair(a, b)


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, report or text)


def _cmd_dgt(opts):
    n, flows = opts["n"], _flows(opts)
    w = make_web(opts.get("family", "P"), n, flows, opts["l"])
    if w is ZERO_WEB:
        raise UsageError("the requested web is not admissible")
    image = dgt(w)
    return EXIT_OK, {"web": w.to_json(), "entries": image.to_json()}


_SPACES = {
    "ss": relations.ss_span,
    "ssprime": relations.ss_prime_span,
    "apr": relations.apr_span,
    "aqr": relations.aqr_span,
}


def _cmd_relations(opts):
    n, flows = opts["n"], _flows(opts)
    space = opts.get("space", "apr")
    if space not in _SPACES:
        raise UsageError(f"unknown space {space!r}")
    try:
        sp = _SPACES[space](n, flows)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    lines = [str(x) for x in sp.elements]
    return EXIT_OK, "\n".join(lines)


def _sweep_flows(n: int, max_k: int, max_entry: int):
    from itertools import product

    yield FlowPair((), ())
    for k in range(1, max_k + 1):
        for a in product(range(max_entry + 1), repeat=k):
            if min(a) != 0:
                continue
            for b in product(range(max_entry + 1), repeat=k):
                f = FlowPair(a, b)
                if f.is_admissible(n):
                    yield f


def _inductive_case(args):
    n, a, b, space = args
    flows = FlowPair(a, b)
    return relations.verify_kernel_inductive(n, flows, space).to_json()


def _cmd_verify(opts):
    if not opts.get("inductive"):
        raise UsageError("verify needs --inductive")
    n = opts["n"]
    if opts.get("a") is not None:
        flows = [_flows(opts)]
    else:
        flows = list(_sweep_flows(n, opts.get("max_k", 3), opts.get("max_entry", 2)))
    jobs = []
    for f in flows:
        spaces = opts.get("space")
        spaces = [spaces] if spaces else (["ss", "apr"] if f.k == 2 else ["apr"])
        for s in spaces:
            jobs.append((n, f.a, f.b, s))
    results = _map(_inductive_case, jobs, opts.get("jobs", 1))
    results.sort(key=lambda r: (r["flows"], r["space"]))
    failed = [r for r in results if not r["passed"]]
    report = {
        "n": n,
        "cases": sum(r["cases"] for r in results),
        "passed": not failed,
        "reports": results,
    }
    return (EXIT_OK if not failed else EXIT_FAIL), report


def _map(fn, items, jobs: int):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _digest(t) -> str:
    return hashlib.sha256(repr(sorted((k, str(v)) for k, v in t.data.nonzero_entries().items())).encode()).hexdigest()[:12]


def _suite_loops(n):
    cases = []
    for l in range(n + 1):
        got = reporacle.circle(n, l)
        cases.append({"case": f"circle l={l}", "passed": got == qbinom(n, l), "value": str(got)})
    return cases


def _suite_ih(n):
    cases = []
    for a in range(n + 1):
        for b in range(n + 1 - a):
            for c in range(n + 1 - a - b):
                i_t, h_t = reporacle.i_tree(n, a, b, c), reporacle.h_tree(n, a, b, c)
                ok = i_t == h_t.scale((-1) ** ((n + 1) * a))
                cases.append({"case": f"a={a} b={b} c={c}", "passed": ok, "hash": _digest(i_t)})
    return cases


def _suite_braid(n):
    r = reporacle.crossing(n)
    return [
        {"case": "braid", "passed": reporacle.braid_relation_holds(n)},
        {"case": "equivariant", "passed": r.is_equivariant()},
    ]


def _suite_square(n, max_entry):
    cases = []
    for k in (1, 2):
        for f in _sweep_flows(n, k, max_entry):
            if f.k != k:
                continue
            for fam in ("P", "Q"):
                from .polygons import admissible_webs

                for w in admissible_webs(fam, n, f):
                    rep = reporacle.commuting_square_check(w)
                    cases.append({"case": str(w), "passed": rep.passed, "entries": rep.entries_checked,
                                  "unit": str(rep.unit)})
    return cases


def _suite_kernel(n, max_entry, max_k):
    cases = []
    for f in _sweep_flows(n, max_k, max_entry):
        sps = [relations.apr_span(n, f), relations.aqr_span(n, f)]
        if f.k == 2:
            sps.append(relations.ss_span(n, f))
        for sp in sps:
            for idx, x in zip(sp.indices, sp.elements):
                if x.is_zero():
                    continue
                ok = reporacle.rep_websum(x).is_zero()
                cases.append({"case": f"{sp.label} {f} index {idx}", "passed": ok})
    return cases


def _cmd_rep_check(opts):
    n, suite = opts["n"], opts.get("suite", "loops")
    if suite == "loops":
        cases = _suite_loops(n)
    elif suite == "ih":
        cases = _suite_ih(n)
    elif suite == "braid":
        if n < 2:
            raise UsageError("braid suite needs n >= 2")
        cases = _suite_braid(n)
    elif suite == "square":
        if n < 1:
            raise UsageError("square suite needs n >= 1")
        cases = _suite_square(n, opts.get("max_entry", 2))
    elif suite == "kernel":
        cases = _suite_kernel(n, opts.get("max_entry", 2), opts.get("max_k", 3))
    else:
        raise UsageError(f"unknown suite {suite!r}")
    failed = [c for c in cases if not c["passed"]]
    report = {"n": n, "suite": suite, "cases": len(cases), "passed": not failed, "results": cases}
    return (EXIT_OK if not failed else EXIT_FAIL), report


def _cmd_identities(opts):
    name = opts.get("name", "ed-zero")
    if name not in identities.IDENTITIES:
        raise UsageError(f"unknown identity {name!r}")
    fn = identities.IDENTITIES[name]
    if name in ("ed-zero", "ssprime-ss"):
        rep = fn(max_n=opts.get("max_n", 5))
    else:
        rep = fn()
    return (EXIT_OK if rep.passed else EXIT_FAIL), rep.to_json()


def _cmd_evaluate(opts):
    what, n = opts.get("what"), opts["n"]
    if what == "circle":
        l = opts["l"]
        if not 0 <= l <= n:
            raise UsageError("need 0 <= l <= n")
        return EXIT_OK, str(reporacle.circle(n, l))
    if what == "bigon":
        k, l = opts["k"], opts["l"]
        if not (0 <= k <= n and k <= l <= n):
            raise UsageError("need 0 <= k <= l <= n")
        t = reporacle.bigon(n, k, l)
        strand = reporacle.strand(n, (k, True))
        coeff = qbinom(n - k, l - k)
        if t != strand.scale(coeff):
            return EXIT_FAIL, f"bigon is not {coeff} times the strand"
        return EXIT_OK, str(coeff)
    raise UsageError("evaluate needs 'circle' or 'bigon'")


COMMANDS = {
    "dgt": _cmd_dgt,
    "relations": _cmd_relations,
    "verify": _cmd_verify,
    "rep-check": _cmd_rep_check,
    "identities": _cmd_identities,
    "evaluate": _cmd_evaluate,
}


def run(config: RunConfig) -> tuple[int, Any]:
    """Execute a config; returns (exit code, text or JSON-ready report)."""
    if config.subcommand not in COMMANDS:
        raise UsageError(f"unknown subcommand {config.subcommand!r}")
    cache = os.environ.get(CACHE_ENV)
    path = Path(cache) / f"{config.subcommand}-{config.key()}.json" if cache else None
    if path is not None and path.exists():
        obj = json.loads(path.read_text())
        return obj["exit"], obj["result"]
    try:
        code, result = COMMANDS[config.subcommand](config.options)
    except reporacle.BudgetExceeded as exc:
        return EXIT_BUDGET, {"schema": SCHEMA, "refused": str(exc)}
    if isinstance(result, dict):
        result = {"schema": SCHEMA, **result}
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps({"exit": code, "result": result}, sort_keys=True))
    return code, result


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qwebs", description="Polygon webs, branching and relation checks.")
    p.add_argument("--config", help="read a RunConfig JSON file instead of flags")
    sub = p.add_subparsers(dest="subcommand")

    def flows(sp, required=True):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--a", default=None if not required else "", help="comma-separated flows")
        sp.add_argument("--b", default=None if not required else "", help="comma-separated flows")

    s = sub.add_parser("dgt", help="branch a polygon web")
    flows(s)
    s.add_argument("--family", choices=["P", "Q"], default="P")
    s.add_argument("--l", type=int, required=True)

    s = sub.add_parser("relations", help="print a relation spanning set")
    flows(s)
    s.add_argument("--space", choices=sorted(_SPACES), default="apr")

    s = sub.add_parser("verify", help="inductive kernel verification")
    flows(s, required=False)
    s.add_argument("--inductive", action="store_true")
    s.add_argument("--space", choices=["ss", "apr", "aqr"], default=None)
    s.add_argument("--max-entry", type=int, default=2)
    s.add_argument("--max-k", type=int, default=3)
    s.add_argument("--jobs", type=int, default=1)

    s = sub.add_parser("rep-check", help="oracle sweeps")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--suite", choices=["kernel", "ih", "loops", "braid", "square"], default="loops")
    s.add_argument("--max-entry", type=int, default=2)
    s.add_argument("--max-k", type=int, default=3)

    s = sub.add_parser("identities", help="q-binomial identity sweeps")
    s.add_argument("--name", choices=sorted(identities.IDENTITIES), default="ed-zero")
    s.add_argument("--max-n", type=int, default=5)

    s = sub.add_parser("evaluate", help="closed values of circles and bigons")
    s.add_argument("what", choices=["circle", "bigon"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--l", type=int, required=True)

    s = sub.add_parser("config", help="print the RunConfig JSON for the remaining arguments")
    s.add_argument("rest", nargs=argparse.REMAINDER)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    opts = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "config") and v is not None}
    return RunConfig(ns.subcommand, opts)


def emit(result) -> str:
    if isinstance(result, str):
        return result
    return json.dumps(result, indent=2, sort_keys=True)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if ns.config:
        config = RunConfig.from_json(json.loads(Path(ns.config).read_text()))
    elif ns.subcommand == "config":
        inner = parser.parse_args(ns.rest)
        print(json.dumps(config_from_args(inner).to_json(), sort_keys=True))
        return EXIT_OK
    elif ns.subcommand is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    else:
        config = config_from_args(ns)
    try:
        code, result = run(config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(emit(result))
    return code


if __name__ == "__main__":
    sys.exit(main())
