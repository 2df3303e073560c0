"""``gyrolab`` command line.

Exit codes: 0 when every check in the emitted report passed, 1 when some
check failed (its witness is printed), 2 for input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import models, subgyro, topology
from .core import EXHAUSTIVE, FiniteGyrogroup, check_axioms, check_identities, is_group, sampled
from .report import PreconditionError


class UsageError(Exception):
    pass


def resolve_model(source: str, tolerance: float | None = None):
    if source.endswith(".gyro") or os.path.isfile(source):
        with open(source, "rb") as fh:
            return models.load_table(fh.read(), name=os.path.basename(source))
    G = models.builtin(source)
    if tolerance is not None:
        for part in getattr(G, "factors", (G,)):
            if not part.is_finite:
                part.tolerance = tolerance
        if hasattr(G, "factors"):
            G.tolerance = max(f.tolerance for f in G.factors)
    return G


def resolve_topology(source: str) -> topology.FiniteTopology:
    if source.endswith(".topo") or os.path.isfile(source):
        with open(source, "rb") as fh:
            return topology.load_topology(fh.read())
    name = source.lower()
    if name == "sierpinski":
        return topology.sierpinski()
    for prefix, make in (("indiscrete", topology.indiscrete), ("discrete", topology.discrete)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            n = int(name[len(prefix):])
            if n > topology.SUBSET_BOUND:
                raise topology.BoundExceeded(f"n = {n} exceeds the cap of {topology.SUBSET_BOUND}")
            return make(n)
    raise UsageError(f"unknown topology {source!r}")


def _mode(args, G):
    if args.seed is None:
        if not G.is_finite:
            raise UsageError(f"{G.name} has a continuous carrier: pass --seed (and --samples)")
        if args.samples is not None:
            raise UsageError("sampled mode needs an explicit --seed")
        return EXHAUSTIVE
    return sampled(args.samples or 1000, args.seed)


def _mode_dict(mode) -> dict:
    if mode.exhaustive:
        return {"kind": "exhaustive"}
    return {"kind": "sampled", "count": mode.count, "seed": mode.seed}


def cmd_verify(args) -> dict:
    G = resolve_model(args.model, args.tolerance)
    mode = _mode(args, G)
    report = check_axioms(G, mode).merge(check_identities(G, mode))
    assoc = is_group(G, mode)
    out = {"command": "verify", "model": G.name, "mode": _mode_dict(mode),
           "tolerance": G.tolerance, **report.to_dict(G.encode)}
    out["associative"] = {"verdict": assoc.ok}
    if assoc.witness is not None:
        out["associative"]["witness"] = [G.encode(w) for w in assoc.witness]
    return out


def cmd_decompose(args) -> dict:
    G = resolve_model(args.model)
    if not isinstance(G, FiniteGyrogroup):
        raise UsageError("decompose needs a finite model")
    enum = None
    if args.enumeration:
        try:
            enum = [int(t) for t in args.enumeration.split(",")]
        except ValueError:
            raise UsageError(f"bad enumeration {args.enumeration!r}") from None
    dec = subgyro.canonical_decomposition(G, enum)
    report = subgyro.verify_decomposition(G, dec)
    return {"command": "decompose", "model": G.name, "decomposition": dec.to_dict(),
            **report.to_dict()}


def cmd_topo(args) -> dict:
    tau = resolve_topology(args.model)
    props = topology.property_report(tau)
    out = {"command": "topo", "n": tau.n, "opens": len(tau.opens),
           "hypotheses": props.hypotheses, "properties": props.entries()}
    if args.gyro:
        G = resolve_model(args.gyro)
        if not isinstance(G, FiniteGyrogroup):
            raise UsageError("--gyro needs a finite model")
        model = topology.TopoGyroModel(G, tau)
        out["gyro"] = G.name
        out["properties"] += topology.classify_continuity(model).entries()
    # Properties are findings, not pass/fail checks; the report is complete.
    out["overall"] = True
    return out


def cmd_witness(args) -> dict:
    G = resolve_model(args.model, args.tolerance)
    w = models.nonassoc_witness(G, budget=args.budget, seed=args.seed)
    out = {"command": "witness", "model": G.name, "budget": args.budget, "overall": True}
    out["witness"] = None if w is None else [G.encode(x) for x in w]
    return out


def cmd_cover(args) -> dict:
    G = resolve_model(args.model)
    if not isinstance(G, FiniteGyrogroup):
        raise UsageError("cover needs a finite model")
    if not args.subset:
        raise UsageError("cover needs --subset")
    U = subgyro.parse_subset(args.subset, G.n)
    cert = subgyro.covering_number(G, U)
    ok = subgyro.oplus_sets(G, cert.A, U) == subgyro.full_mask(G.n)
    return {"command": "cover", "model": G.name, "certificate": cert.to_dict(),
            "overall": ok, "checks": [{"name": "A+U=G", "passed": ok, "samples": G.n}]}


COMMANDS = {"verify": cmd_verify, "decompose": cmd_decompose, "topo": cmd_topo,
            "witness": cmd_witness, "cover": cmd_cover}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gyrolab", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("model", help="builtin name (z4, k16, mobius, product:k16,z2, ...) or a file")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--enumeration")
    p.add_argument("--gyro", help="finite model paired with a topology (topo)")
    p.add_argument("--subset", help="subset literal: 0,1,3 or 0xb (cover)")
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument("--json", action="store_true")
    return p


def render_text(out: dict) -> str:
    lines = [f"{out['command']}: {out.get('model', out.get('n', ''))}"]
    for key, val in out.items():
        if key in ("command", "model", "checks", "properties", "overall"):
            continue
        lines.append(f"{key}: {json.dumps(val, sort_keys=True)}")
    for c in out.get("checks", []):
        mark = "PASS" if c["passed"] else "FAIL"
        extra = f" witness={c['witness']}" if "witness" in c else ""
        lines.append(f"[{mark}] {c['name']} ({c['samples']} cases){extra}")
    for p in out.get("properties", []):
        extra = f" witness={p['witness']}" if "witness" in p else ""
        lines.append(f"{p['property']}: {p['verdict']}{extra}")
    lines.append(f"overall: {'PASS' if out['overall'] else 'FAIL'}")
    return "\n".join(lines)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
    except (UsageError, PreconditionError, ValueError, OSError) as e:
        print(f"gyrolab: error: {e}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(out, sort_keys=True, indent=2))
    else:
        print(render_text(out))
    return 0 if out["overall"] else 1


if __name__ == "__main__":
    sys.exit(main())
