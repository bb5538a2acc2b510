"""``condisc`` command line.

Exit status: 0 pass, 1 fail, 2 inconclusive, 64 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .errors import BoundExceeded, CondiscError, InvalidTower, MalformedInput, ProductPreservationFailed
from .finsetcat import enumerate_partitions
from .modules import parse_module_spec, theorem_c_report
from .presheaf import parse_presheaf
from .presheaf.base import DEFAULT_BUDGET
from .presheaf.kan import KAN_TOP_BOUND, kan_comparison
from .presheaf.reports import FAIL, INCONCLUSIVE, PASS, colimit_condition_report, counit_iso_report, jsonable
from .quotients import dq_enumerate, hasse_edges, level_quotients
from .tower import Tower, random_compatible_cone, stabilization, standard_towers, thread_set, verify_limit_cone

EXIT = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
EXIT_MALFORMED = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise MalformedInput(message)


class Resources:
    """Reads JSON files once and remembers them, so a run can be replayed."""

    def __init__(self, preloaded: dict | None = None):
        self.files: dict = dict(preloaded or {})

    def load(self, path: str):
        if path not in self.files:
            try:
                with open(path) as fh:
                    self.files[path] = json.load(fh)
            except (OSError, ValueError) as exc:
                raise MalformedInput(f"cannot read {path}: {exc}") from exc
        return self.files[path]

    def is_file(self, ref: str) -> bool:
        return ref in self.files or os.path.isfile(ref)

    def tower(self, ref: str, depth: int) -> Tower:
        if self.is_file(ref):
            try:
                t = Tower.from_json(self.load(ref))
            except InvalidTower as exc:
                raise MalformedInput(f"{ref}: {exc}") from exc
            return t.truncate(min(depth, t.depth))
        try:
            return standard_towers(ref, depth)
        except (ValueError, KeyError) as exc:
            raise MalformedInput(f"unknown tower {ref!r}") from exc

    def presheaf(self, spec: str, depth: int):
        """Returns ``(presheaf, module presheaf or None)``."""
        if spec.startswith("locconst-mod:"):
            xm = parse_module_spec(spec, loader=self.load)
            return xm.presheaf, xm
        try:
            return parse_presheaf(spec, depth, tower_resolver=self.tower), None
        except ValueError as exc:
            raise MalformedInput(str(exc)) from exc


def _dump(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2)


def _overall(verdicts) -> str:
    if FAIL in verdicts:
        return FAIL
    if INCONCLUSIVE in verdicts:
        return INCONCLUSIVE
    return PASS


# -- check-discrete -------------------------------------------------------------------


def run_check_discrete(tower_ref: str, spec: str, depth: int, budget: int, res: Resources) -> dict:
    t = res.tower(tower_ref, depth)
    X, xm = res.presheaf(spec, depth)
    reports: list[dict] = []
    try:
        reports.append(counit_iso_report(X, t, t.depth, budget).to_json())
    except ProductPreservationFailed as exc:
        reports.append({"oracle": "counit", "presheaf": X.spec(), "tower": t.name, "depth": t.depth,
                        "verdict": FAIL, "witness": {"kind": "product_preservation", "message": str(exc),
                                                     "detail": exc.witness}, "stats": []})
    reports.append(colimit_condition_report(X, t, t.depth, budget).to_json())
    if xm is not None:
        reports.append(theorem_c_report(xm, t, t.depth, budget).module.to_json())
    verdicts = [r["verdict"] for r in reports]
    witness = next((r["witness"] for r in reports if r.get("witness") is not None), None)
    return {
        "command": "check-discrete",
        "tower": t.to_json(),
        "presheaf": spec,
        "depth": t.depth,
        "budget": budget,
        "reports": reports,
        "consistent": len(set(verdicts)) == 1,
        "verdict": _overall(verdicts),
        "witness": witness,
    }


def _text_check(out: dict) -> str:
    lines = [f"tower {out['tower'].get('name') or 'custom'} sizes {out['tower']['levels']}  presheaf {out['presheaf']}"]
    for r in out["reports"]:
        lines.append(f"[{r['oracle']}] verdict {r['verdict']}")
        for st in r["stats"]:
            parts = [f"{k}={st[k]}" for k in sorted(st) if k not in ("depth",)]
            lines.append(f"  depth {st['depth']}: " + " ".join(parts))
        if r.get("witness") is not None:
            lines.append(f"  witness: {json.dumps(jsonable(r['witness']), sort_keys=True)}")
    lines.append(f"consistent: {'yes' if out['consistent'] else 'no'}")
    lines.append(f"verdict: {out['verdict']}")
    return "\n".join(lines)


def cmd_check_discrete(args, res: Resources) -> int:
    out = run_check_discrete(args.tower, args.presheaf, args.depth, args.budget, res)
    print(_dump(out) if args.format == "json" else _text_check(out))
    if args.replay_file and out["verdict"] != PASS:
        replay = {"command": "check-discrete", "tower": args.tower, "presheaf": args.presheaf,
                  "depth": args.depth, "budget": args.budget, "files": res.files,
                  "expected": {"verdict": out["verdict"], "witness": out["witness"]}}
        with open(args.replay_file, "w") as fh:
            fh.write(_dump(replay) + "\n")
    return EXIT[out["verdict"]]


def cmd_replay(args, res: Resources) -> int:
    data = res.load(args.file)
    try:
        if data["command"] != "check-discrete":
            raise MalformedInput(f"cannot replay command {data['command']!r}")
        inner = Resources(data.get("files"))
        out = run_check_discrete(data["tower"], data["presheaf"], data["depth"], data["budget"], inner)
        expected = data["expected"]
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad replay file: {exc}") from exc
    got = {"verdict": out["verdict"], "witness": jsonable(out["witness"])}
    reproduced = got == jsonable(expected)
    result = {"command": "replay", "reproduced": reproduced, "expected": expected, "observed": got}
    print(_dump(result) if args.format == "json" else
          f"{'reproduced' if reproduced else 'NOT reproduced'}: verdict {got['verdict']}")
    return 0 if reproduced else 1


# -- inspect --------------------------------------------------------------------------


def run_inspect(t: Tower, budget: int, seed: int) -> dict:
    out: dict = {"command": "inspect", "tower": t.to_json(), "threads": thread_set(t).finset.size,
                 "stabilization": stabilization(t)}
    try:
        qs = dq_enumerate(t)
        out["index"] = "full"
    except BoundExceeded:
        qs = level_quotients(t)
        out["index"] = "level-chain"
    out["quotients"] = [q.to_json() for q in qs]
    out["quotient_count"] = len(qs)
    out["hasse_edges"] = [list(e) for e in hasse_edges(qs)]
    rng = random.Random(seed)
    pairs = [(q.level, q.partition) for q in qs]
    cones = [random_compatible_cone(t, rng, pairs, apex_size=rng.randint(1, 4)) for _ in range(20)]
    check = verify_limit_cone(t, cones)
    out["limit_cone"] = {"cones": len(cones), "ok": check.ok, "witness": check.witness}
    if t.top_size < KAN_TOP_BOUND:
        from .presheaf import LocConstPresheaf

        rep = kan_comparison(LocConstPresheaf(2), t, budget)
        out["kan_initial"] = rep.initial
    return out


def cmd_inspect(args, res: Resources) -> int:
    t = res.tower(args.tower, args.depth)
    out = run_inspect(t, args.budget, args.seed)
    if args.format == "json":
        print(_dump(out))
    else:
        print(f"tower {out['tower'].get('name') or 'custom'} sizes {out['tower']['levels']}")
        print(f"threads: {out['threads']}  stabilization: {out['stabilization']}")
        print(f"quotients ({out['index']}): {out['quotient_count']}")
        for a, b in out["hasse_edges"]:
            print(f"  {a} -> {b}")
        lc = out["limit_cone"]
        print(f"limit cone: {'ok' if lc['ok'] else 'FAILED'} on {lc['cones']} random cones")
        if "kan_initial" in out:
            print(f"projection to finite-set arrows initial: {out['kan_initial']}")
    return 0 if out["limit_cone"]["ok"] else 1


# -- verify ---------------------------------------------------------------------------


def cmd_verify(args, res: Resources) -> int:
    from .suite import run_suite

    results = run_suite(seed=args.seed, include_broken=args.include_broken, only=args.only)
    out = {"command": "verify", "seed": args.seed, "include_broken": args.include_broken,
           "checks": [r.to_json() for r in results], "ok": all(r.ok for r in results)}
    if args.format == "json":
        print(_dump(out))
    else:
        for r in results:
            print(f"{'PASS' if r.ok else 'FAIL'}  {r.name}  ({r.checked} checked)")
            for f in r.failures[:3]:
                print(f"      {f}")
    return 0 if out["ok"] else 1


# -- partitions -----------------------------------------------------------------------


def cmd_partitions(args, res: Resources) -> int:
    ps = enumerate_partitions(args.n, bound=args.bound)
    out = {"command": "partitions", "n": args.n, "count": len(ps), "partitions": [list(p.block_of) for p in ps]}
    if args.format == "json":
        print(_dump(out))
    else:
        print(f"{len(ps)} partitions of {args.n}")
        if args.list:
            for p in ps:
                print(" ".join(map(str, p.block_of)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="condisc", description="Discreteness checks for presheaves on profinite towers.")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check-discrete", parents=[common], help="run both discreteness oracles")
    c.add_argument("--tower", required=True, help="built-in name or tower JSON file")
    c.add_argument("--presheaf", required=True, help="locconst:k, const:k, towerhom:<tower>, locconst-mod:<ring>:<module>")
    c.add_argument("--depth", type=int, default=3)
    c.add_argument("--replay-file", help="write a reproduction file when the verdict is not pass")
    c.set_defaults(fn=cmd_check_discrete)

    i = sub.add_parser("inspect", parents=[common], help="quotient lattice and limit cone of a tower")
    i.add_argument("--tower", required=True)
    i.add_argument("--depth", type=int, default=2)
    i.set_defaults(fn=cmd_inspect)

    v = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    v.add_argument("--include-broken", action="store_true", help="add a deliberately broken presheaf")
    v.add_argument("--only", nargs="+", help="run only the named checks")
    v.set_defaults(fn=cmd_verify)

    pa = sub.add_parser("partitions", parents=[common], help="enumerate set partitions")
    pa.add_argument("--n", type=int, required=True)
    pa.add_argument("--bound", type=int, default=10)
    pa.add_argument("--list", action="store_true")
    pa.set_defaults(fn=cmd_partitions)

    r = sub.add_parser("replay", parents=[common], help="rerun a reproduction file")
    r.add_argument("file")
    r.set_defaults(fn=cmd_replay)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "depth", 0) < 0 or args.budget <= 0:
            raise MalformedInput("depth must be non-negative and budget positive")
        return args.fn(args, Resources())
    except MalformedInput as exc:
        print(f"condisc: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except BoundExceeded as exc:
        print(f"condisc: {exc}", file=sys.stderr)
        return EXIT[INCONCLUSIVE]
    except CondiscError as exc:
        print(f"condisc: {exc}", file=sys.stderr)
        return EXIT[FAIL]


if __name__ == "__main__":
    sys.exit(main())
