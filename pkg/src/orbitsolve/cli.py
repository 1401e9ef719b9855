"""Command line front end.  Prints one JSON object per run.

Exit codes: 0 answered, 1 bad input, 2 a self-check failed.
"""
from __future__ import annotations

import argparse
import json
import sys

from .basis import Basis, decompose, expand_tight
from .dsl import ParseError, parse
from .finsolve import InternalError, finsolve
from .linvec import SymVector
from .oracle import default_pool, sandwich
from .orbits import check_pattern, var
from .ring import RingError, ring_from_name
from .solve import solve, verify


class InputError(ValueError):
    pass


def tight_json(x: SymVector, ring) -> list:
    """A vector as a list of tight orbits with coefficients."""
    out = []
    for (oid, pat), v in decompose(x).tight_items():
        out.append({"tight_orbit": {"set": oid, "pattern": [e if e > 0 else "_" for e in pat]},
                    "coef": ring.fmt(v)})
    return out


def witness_from_json(data, cols, ring) -> SymVector:
    items = data["witness"] if isinstance(data, dict) else data
    if items is None:
        raise InputError("witness file has no witness")
    x = SymVector.zero(cols)
    for item in items:
        try:
            oid = item["tight_orbit"]["set"]
            raw = item["tight_orbit"]["pattern"]
            coef = ring.parse(str(item["coef"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed witness item {item!r}") from exc
        if oid not in cols:
            raise InputError(f"unknown column set {oid!r}")
        nv = 0
        pat = []
        for e in raw:
            if e == "_":
                pat.append(var(nv))
                nv += 1
            elif isinstance(e, int) and e > 0:
                pat.append(e)
            else:
                raise InputError(f"bad pattern entry {e!r}")
        try:
            check_pattern(pat)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if len(pat) != cols[oid].arity:
            raise InputError(f"pattern {raw} has the wrong arity for {oid}")
        x = x + expand_tight(cols, oid, tuple(pat)).scale(coef)
    return x


def _load(args):
    ring = ring_from_name(args.ring) if args.ring else None
    try:
        with open(args.system) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc
    return parse(text, ring)


def cmd_solve(args, finitary=False):
    system = _load(args)
    ring = system.ring
    if finitary:
        res = finsolve(system.A, system.t, ring, witness=args.witness)
        x = res.witness.to_sym() if res.witness is not None else None
    else:
        res = solve(system.A, system.t, ring, witness=args.witness)
        x = res.witness
    out = {"mode": "finsolve" if finitary else "solve", "ring": str(ring),
           "solvable": res.solvable}
    if args.witness and res.solvable:
        out["witness"] = tight_json(x, ring)
    if args.trace:
        out["trace"] = res.trace
    return out, 0


def cmd_verify(args):
    system = _load(args)
    try:
        with open(args.witness_file) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read witness: {exc}") from exc
    x = witness_from_json(data, system.cols, system.ring)
    ok = verify(system.A, x, system.t)
    return {"mode": "verify", "ring": str(system.ring), "valid": ok}, 0


def cmd_basis(args):
    system = _load(args)
    if args.set_id not in system.sets:
        raise InputError(f"unknown set {args.set_id!r}")
    from .orbits import OrbitSet
    dom = OrbitSet.of(system.sets[args.set_id])
    basis = Basis.of(dom)
    fams = []
    for fid, fam in basis.families.items():
        fams.append({"family": fid, "arity": fam.decl.arity,
                     "concrete_positions": [p + 1 for p in fam.positions],
                     "group_order": len(fam.decl.group)})
    out = {"mode": "basis", "set": args.set_id, "families": fams}
    if args.target:
        if args.set_id not in system.rows or len(system.rows) != 1:
            raise InputError("--target needs the single row set")
        coords = decompose(system.t)
        out["target"] = [{"tight_orbit": {"set": oid, "pattern": [e if e > 0 else "_" for e in p]},
                          "coef": system.ring.fmt(v)} for (oid, p), v in coords.tight_items()]
    return out, 0


def cmd_check(args):
    system = _load(args)
    finitary = args.mode == "finsolve"
    ring = system.ring
    if finitary:
        answer = finsolve(system.A, system.t, ring, witness=True).solvable
    else:
        answer = solve(system.A, system.t, ring, witness=True).solvable
    m = args.oracle_pool or default_pool(system.A, system.t)
    sw = sandwich(system.A, system.t, ring, m, finitary)
    ok = sw.admits(answer)
    out = {"mode": "check", "solver": args.mode, "ring": str(ring), "solvable": answer,
           "pool": m, "sandwich": {"sufficient": sw.sufficient_yes, "necessary": sw.necessary_yes,
                                   "forced": sw.forced},
           "consistent": ok}
    return out, 0 if ok else 2


def build_parser():
    p = argparse.ArgumentParser(prog="orbitsolve",
                                description="Exact solver for orbit-finite linear systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("system", help="system description file")
        sp.add_argument("--ring", help="override the ring: Q, Z or 'Zmod m'")
        sp.add_argument("--trace", action="store_true", help="include the reduction chain")
        sp.add_argument("--oracle-pool", type=int, metavar="M", help="pool size for the oracle")

    for name in ("solve", "finsolve"):
        sp = sub.add_parser(name, help=f"decide {'finitary ' if name == 'finsolve' else ''}solvability")
        common(sp)
        sp.add_argument("--witness", action="store_true", help="include a verified solution")
    sp = sub.add_parser("verify", help="check a witness file against a system")
    common(sp)
    sp.add_argument("witness_file")
    sp = sub.add_parser("basis", help="list the tight-orbit families of a set")
    common(sp)
    sp.add_argument("set_id")
    sp.add_argument("--target", action="store_true", help="also decompose the target")
    sp = sub.add_parser("check", help="compare the solver with the oracle bounds")
    common(sp)
    sp.add_argument("--mode", choices=["solve", "finsolve"], default="solve")
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("solve", "finsolve"):
            out, code = cmd_solve(args, args.command == "finsolve")
        elif args.command == "verify":
            out, code = cmd_verify(args)
        elif args.command == "basis":
            out, code = cmd_basis(args)
        else:
            out, code = cmd_check(args)
    except (ParseError, RingError, InputError) as exc:
        print(json.dumps({"error": str(exc)}))
        return 1
    except (InternalError, AssertionError) as exc:
        print(json.dumps({"error": f"internal check failed: {exc}"}))
        return 2
    print(json.dumps(out, indent=2))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
