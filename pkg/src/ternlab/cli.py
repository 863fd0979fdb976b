"""Command line front end: ``ternlab <subcommand> ...``.

``--json`` output is the stable surface and is byte-identical across runs
with the same inputs and flags.  Wall time goes to stderr unless
``--timing`` asks for it in the report.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
import warnings
from importlib import resources
from pathlib import Path

from .chains import ChainVector, boundary, boundary_terms, format_chain
from .diagram import enumerate_colorings, extract_cycle, load_diagram, verify_cycle
from .errors import AxiomError, InputError, ResourceLimitError
from .homology import SUBCOMPLEXES, TERN, ComplexSelector, NotACycleError, cycle_class, homology_groups
from .invariants import check_cocycle, load_cochain, pair, state_sum
from .tern import AXIOMS, check_axioms, enumerate_terns, is_ternary_quasigroup, load_table

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class Failed(Exception):
    """The computation ran and found something false; carries the report."""

    def __init__(self, result):
        super().__init__("check failed")
        self.result = result


def resolve(path: str) -> Path:
    """Use ``path`` if it exists, else the bundled data file of the same name."""
    p = Path(path)
    if p.exists():
        return p
    bundled = resources.files("ternlab") / "data" / p.name
    if bundled.is_file():
        return Path(str(bundled))
    raise InputError(f"no such file: {path}")


class Inputs:
    """Resolves input files and hashes what was read."""

    def __init__(self):
        self.files: list[tuple[str, str]] = []

    def path(self, name: str) -> Path:
        p = resolve(name)
        self.files.append((p.name, hashlib.sha256(p.read_bytes()).hexdigest()))
        return p

    def digest(self, args: dict) -> str:
        h = hashlib.sha256()
        h.update(json.dumps({"files": self.files, "args": args}, sort_keys=True).encode())
        return h.hexdigest()


def _parse_tuple(text: str) -> tuple[int, ...]:
    try:
        t = tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise InputError(f"bad tuple {text!r}; expected comma separated integers") from exc
    if len(t) < 2:
        raise InputError("a generator needs at least two coordinates")
    return t


def _coloring_json(c: dict) -> dict:
    return {str(k): v for k, v in c.items()}


def _order_json(k):
    return None if k == math.inf else k


# -- subcommands -------------------------------------------------------------


def cmd_check(args, inputs):
    tbl = load_table(inputs.path(args.table))
    names = tuple(a.strip() for a in args.axioms.split(",")) if args.axioms else AXIOMS
    report = check_axioms(tbl, names)
    qg = is_ternary_quasigroup(tbl)
    result = {
        "order": tbl.order,
        "axioms": report.to_json(),
        "quasigroup": {"status": "pass"} if qg else {"status": "fail", "witness": list(qg.witness)},
    }
    lines = [f"order {tbl.order}"]
    for k, v in result["axioms"].items():
        lines.append(f"  {k:4} {v['status']}" + (f"  witness {tuple(v['witness'])}" if "witness" in v else ""))
    lines.append(f"  quasigroup {'pass' if qg else 'fail'}")
    if not (report and qg):
        raise Failed((result, lines))
    return result, lines


def cmd_enumerate(args, inputs):
    tables = enumerate_terns(args.order, require_quasigroup=args.quasigroup)
    result = {
        "order": args.order,
        "quasigroup_only": args.quasigroup,
        "count": len(tables),
        "tables": [t.to_json()["entries"] for t in tables],
    }
    kind = "ternary quasigroup terns" if args.quasigroup else "terns"
    return result, [f"{len(tables)} {kind} of order {args.order} up to relabeling"]


def cmd_boundary(args, inputs):
    tbl = load_table(inputs.path(args.table))
    t = _parse_tuple(args.tuple)
    for x in t:
        if not 0 <= x < tbl.order:
            raise InputError(f"entry {x} outside 0..{tbl.order - 1}")
    raw = boundary_terms(tbl, args.variant, t)
    total = boundary(tbl, args.variant, t)
    result = {
        "variant": args.variant,
        "tuple": list(t),
        "terms": [{"tuple": list(g), "sign": s} for g, s in raw],
        "boundary": total.to_json(),
    }
    lines = [f"{'+' if s > 0 else '-'} ({','.join(map(str, g))})" for g, s in raw]
    lines.append(f"= {format_chain(total)}")
    return result, lines


def cmd_homology(args, inputs):
    tbl = load_table(inputs.path(args.table))
    sel = ComplexSelector(args.variant, args.subcomplex)
    groups = homology_groups(tbl, args.max_degree, sel)
    result = {
        "variant": args.variant,
        "subcomplex": args.subcomplex,
        "groups": {str(n): g.to_json() for n, g in groups.items()},
    }
    if args.plot:
        from .plotting import plot_homology

        plot_homology(groups, args.plot, title=f"{args.variant}/{args.subcomplex} homology")
    return result, [f"H_{n} = {g}" for n, g in groups.items()]


def cmd_color(args, inputs):
    d = load_diagram(inputs.path(args.diagram))
    tbl = load_table(inputs.path(args.table))
    cols = enumerate_colorings(d, tbl)
    result = {"count": len(cols)}
    lines = [f"{len(cols)} colorings"]
    if args.list:
        result["colorings"] = [_coloring_json(c) for c in cols]
        lines += ["  " + " ".join(f"{k}={v}" for k, v in c.items()) for c in cols]
    return result, lines


def cmd_cycles(args, inputs):
    d = load_diagram(inputs.path(args.diagram))
    tbl = load_table(inputs.path(args.table))
    rows, lines, ok = [], [], True
    for c in enumerate_colorings(d, tbl):
        z = extract_cycle(d, tbl, c)
        check = verify_cycle(d, tbl, z)
        ok &= bool(check)
        row = {"coloring": _coloring_json(c), "cycle": z.to_json(), "is_cycle": bool(check)}
        line = f"{format_chain(z):40} {'cycle' if check else 'NOT a cycle'}"
        if args.class_order and check:
            k = cycle_class(tbl, z, TERN)
            row["class_order"] = _order_json(k)
            line += f"  order {'inf' if k == math.inf else k}"
        rows.append(row)
        lines.append(line)
    result = {"count": len(rows), "cycles": rows}
    if not ok:
        raise Failed((result, lines))
    return result, lines


def cmd_cocycle_check(args, inputs):
    tbl = load_table(inputs.path(args.table))
    f = load_cochain(inputs.path(args.cochain), tbl.order)
    check = check_cocycle(tbl, f)
    result = {"modulus": f.modulus, "arity": f.arity, "cocycle": check.to_json()}
    if check:
        return result, ["cocycle: both conditions hold"]
    raise Failed((result, [f"not a cocycle: {check.condition} condition fails at {check.witness}"]))


def cmd_state_sum(args, inputs):
    d = load_diagram(inputs.path(args.diagram))
    tbl = load_table(inputs.path(args.table))
    f = load_cochain(inputs.path(args.cochain), tbl.order)
    check = check_cocycle(tbl, f)
    if not check:
        result = {"cocycle": check.to_json()}
        raise Failed((result, [f"not a cocycle: {check.condition} condition fails at {check.witness}"]))
    s = state_sum(d, tbl, f, check=False)
    if args.plot:
        from .plotting import plot_state_sum

        plot_state_sum(s, args.plot)
    return {"state_sum": s.to_json()}, [str(s)]


TREFOIL_COLORING = {"a": 0, "b1": 1, "c": 2}


def cmd_reproduce_trefoil(args, inputs):
    """End to end: R_3, the trefoil, its Z_3 class and the cocycle pairing."""
    tbl = load_table(inputs.path("r3.json"))
    d = load_diagram(inputs.path("trefoil.json"))
    f = load_cochain(inputs.path("paper_cocycle.json"), tbl.order)
    steps, lines = {}, []

    def step(name, ok, value, text):
        steps[name] = {"ok": bool(ok), "value": value}
        lines.append(f"[{'ok' if ok else 'FAIL'}] {text}")

    axioms = check_axioms(tbl)
    step("axioms", axioms, axioms.to_json(), "R_3 satisfies all six tern axioms")

    cols = enumerate_colorings(d, tbl)
    step("colorings", len(cols) == 27, len(cols), f"trefoil has {len(cols)} colorings over R_3")

    chosen = next(c for c in cols if all(c[k] == v for k, v in TREFOIL_COLORING.items()))
    z = extract_cycle(d, tbl, chosen)
    expected = ChainVector(1, [((0, 1, 2), 1), ((0, 2, 2), 1), ((0, 0, 2), 1)])
    step("cycle", z == expected and verify_cycle(d, tbl, z), z.to_json(), f"coloring (0,1,2) gives {format_chain(z)}")

    groups = homology_groups(tbl, 1, TERN)
    h1 = groups[1]
    step("homology", 3 in h1.torsion, h1.to_json(), f"H_1 = {h1}")

    k = cycle_class(tbl, z, TERN)
    step("class_order", k == 3, _order_json(k), f"class order {k}")

    check = check_cocycle(tbl, f)
    step("cocycle", check, check.to_json(), "cochain satisfies both cocycle conditions")

    p = pair(f, z)
    step("pairing", p % f.modulus != 0, p, f"pairing with the cycle = {p} mod {f.modulus}")

    s = state_sum(d, tbl, f, check=False)
    step("state_sum", s.total == len(cols), s.to_json(), f"state sum {s}")

    if args.out_dir:
        from .plotting import plot_homology, plot_state_sum

        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        plot_state_sum(s, out / "state_sum.png", title=f"trefoil over R_3: {s}")
        plot_homology(groups, out / "homology.png", title="tern homology of R_3")
        steps["figures"] = {"ok": True, "value": ["homology.png", "state_sum.png"]}

    result = {"steps": steps, "reproduced": all(v["ok"] for v in steps.values())}
    if not result["reproduced"]:
        raise Failed((result, lines))
    return result, lines


# -- plumbing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--threads", type=int, default=1, help="worker cap (computation is single threaded)")
    common.add_argument("--timing", action="store_true", help="include wall time in the JSON report")

    p = argparse.ArgumentParser(prog="ternlab", description="Tern homology and knot invariants.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="check tern axioms and the quasigroup property")
    s.add_argument("table")
    s.add_argument("--axioms", help="comma separated subset, e.g. A1,A3L")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("enumerate", parents=[common], help="list terns of a small order")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--quasigroup", action="store_true")
    s.set_defaults(run=cmd_enumerate)

    s = sub.add_parser("boundary", parents=[common], help="signed faces of one generator")
    s.add_argument("table")
    s.add_argument("--variant", choices=("L", "R", "full"), default="full")
    s.add_argument("--tuple", required=True)
    s.set_defaults(run=cmd_boundary)

    s = sub.add_parser("homology", parents=[common], help="homology groups up to a degree")
    s.add_argument("table")
    s.add_argument("--variant", choices=("L", "R", "full"), default="full")
    s.add_argument("--subcomplex", choices=SUBCOMPLEXES, default="normalized")
    s.add_argument("--max-degree", type=int, default=2)
    s.add_argument("--plot", metavar="FILE", help="write a figure of the groups")
    s.set_defaults(run=cmd_homology)

    s = sub.add_parser("color", parents=[common], help="count or list colorings")
    s.add_argument("diagram")
    s.add_argument("table")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--list", action="store_true")
    g.add_argument("--count", action="store_true")
    s.set_defaults(run=cmd_color)

    s = sub.add_parser("cycles", parents=[common], help="cycles of every coloring")
    s.add_argument("diagram")
    s.add_argument("table")
    s.add_argument("--class-order", action="store_true")
    s.set_defaults(run=cmd_cycles)

    s = sub.add_parser("cocycle-check", parents=[common], help="check both cocycle conditions")
    s.add_argument("table")
    s.add_argument("cochain")
    s.set_defaults(run=cmd_cocycle_check)

    s = sub.add_parser("state-sum", parents=[common], help="group ring state sum over all colorings")
    s.add_argument("diagram")
    s.add_argument("table")
    s.add_argument("cochain")
    s.add_argument("--plot", metavar="FILE", help="write a bar chart of the multiplicities")
    s.set_defaults(run=cmd_state_sum)

    s = sub.add_parser("reproduce-trefoil", parents=[common], help="trefoil class and cocycle over R_3")
    s.add_argument("--out-dir", help="write figures here")
    s.set_defaults(run=cmd_reproduce_trefoil)
    return p


_SKIP_ARGS = {"run", "json", "threads", "timing"}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.threads < 1:
        print("ternlab: --threads must be at least 1", file=sys.stderr)
        return EXIT_INPUT

    inputs = Inputs()
    opts = {k: v for k, v in sorted(vars(args).items()) if k not in _SKIP_ARGS}
    start = time.perf_counter()
    status = EXIT_OK
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            result, lines = args.run(args, inputs)
    except Failed as exc:
        (result, lines), status = exc.result, EXIT_FAILED
    except NotACycleError as exc:
        result, lines, status = {"error": str(exc)}, [str(exc)], EXIT_FAILED
    except (InputError, AxiomError) as exc:
        print(f"ternlab: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"ternlab: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    elapsed = time.perf_counter() - start

    if args.json:
        report = {
            "subcommand": args.command,
            "inputs_digest": inputs.digest(opts),
            "status": "ok" if status == EXIT_OK else "failed",
            "result": result,
        }
        if args.timing:
            report["wall_time_s"] = round(elapsed, 6)
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print("\n".join(lines))
    if not args.timing:
        print(f"wall time {elapsed:.3f}s", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
