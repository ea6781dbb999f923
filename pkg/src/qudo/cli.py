"""Command-line entry point: ``qudo <command> [action] [flags]``.

Exit status: 0 when every check passes, 1 on a verification failure (the
report carries a witness), 2 on usage or resource errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .config import SCHEMA_VERSION, RunConfig
from .lattice import TermCapExceeded

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- commands

def cmd_cocycle(cfg: RunConfig):
    from .cohomology import (
        alpha, beta_closed_form, character_offset, check_normalization, coboundary, is_cocycle,
        nontriviality_witness, restrict, trivial_cocycle, trivialize,
    )
    from .groups import subgroup_generated
    if cfg.action != "verify":
        raise UsageError("cocycle supports: verify")
    N = cfg.N
    a = alpha(N)
    G = a.group
    c = is_cocycle(a)
    norm = check_normalization(a)
    R = subgroup_generated([G.r])
    aR = restrict(a, R)
    beta = beta_closed_form(N)
    db_ok = coboundary(beta).equals(aR)
    trivial_on = {}
    for name, gen in (("<s>", G.s), ("<rs>", G.r * G.s)):
        K = subgroup_generated([gen])
        trivial_on[name] = restrict(a, K).equals(trivial_cocycle(K))
    found = trivialize(aR)
    wit = nontriviality_witness(a)
    res = {
        "N": N,
        "cocycle_ok": c.ok,
        "cocycle_witness": [str(x) for x in c.witness] if c.witness else None,
        "normalization": {"unit_modulus": norm.unit_modulus, "identity": norm.identity,
                          "inverse_pair": norm.inverse_pair, "reversal": norm.reversal,
                          "witness": norm.witness},
        "delta_beta_equals_restriction": db_ok,
        "beta_closed_form": beta.as_dict(),
        "trivial_on": trivial_on,
        "trivialize_found": found is not None,
        "trivialize_character_offset": character_offset(found, beta, G.r).pi_string() if found else None,
        "nontrivial_class_witness": [str(x) for x in wit] if wit else None,
    }
    ok = c.ok and norm.ok and db_ok and all(trivial_on.values()) and found is not None and wit is not None
    return ok, res


def cmd_anyons(cfg: RunConfig):
    from .anyons import anyon_table
    if cfg.action not in (None, "table"):
        raise UsageError("anyons supports: table")
    rows = anyon_table(cfg.N)
    return True, rows


def cmd_codeswitch(cfg: RunConfig):
    from .anyons import codeswitch_z2, codeswitch_z2z2, lagrangians, map_lagrangian
    maps = {"z2z2": codeswitch_z2z2, "z2": codeswitch_z2}
    if cfg.target not in maps:
        raise UsageError("--target must be z2z2 or z2")
    cmap = maps[cfg.target](cfg.N)
    res = cmap.as_dict()
    images = {}
    for L in lagrangians(cfg.N):
        t = map_lagrangian(L, cmap)
        images[L.subgroup] = {"image": str(t), "terms": dict(sorted(t.terms.items())),
                              "confined_dropped": t.confined_count}
    res["lagrangian_images"] = images
    return True, res


def cmd_stabilizers(cfg: RunConfig):
    from .lattice import dihedral_code, logical_representative
    from .stabilizers import syndrome, verify_commutators, verify_stabilization
    if cfg.action == "commute":
        rep = verify_commutators(cfg.N, exhaustive=cfg.exhaustive, samples=cfg.samples, seed=cfg.seed)
        return rep.ok, rep.as_dict()
    if cfg.action == "check-state":
        code = dihedral_code(cfg.N, cfg.width, cfg.height)
        out = {}
        ok = True
        for m in (0, 1):
            c = logical_representative(code, m)
            r = verify_stabilization(code, c)
            ok &= r.ok
            out[f"m={m}"] = {"ok": r.ok, "flat": r.flat, "boundary_ok": r.boundary_ok,
                             "vertex_ok": r.vertex_ok, "mode": r.mode,
                             "config": code.config_string(c)}
        c = logical_representative(code, 0).copy()
        e = code.geometry.h(0, 1)
        c[e] = (code.group.r * code.group.element(int(c[e]))).index
        syn = syndrome(code, c)
        out["single_L^r_error"] = {"edge": code.geometry.edge_name(e), **syn.as_dict(code),
                                   "n_plaquette_syndromes": len(syn.fluxes)}
        ok &= len(syn.fluxes) == 2
        return ok, out
    raise UsageError("stabilizers supports: commute, check-state")


def cmd_gate(cfg: RunConfig):
    from .logical_gate import extract_logical_phase, gate_power
    if cfg.action == "phase":
        rep = extract_logical_phase(cfg.N, cfg.width, cfg.height, trials=cfg.trials, seed=cfg.seed)
        return rep.ok, rep.as_dict()
    if cfg.action == "power":
        p0, p1 = gate_power(cfg.N, cfg.k, cfg.width, cfg.height)
        rel = p1 / p0
        return True, {"N": cfg.N, "k": cfg.k, "phase_m0": p0.pi_string(), "phase_m1": p1.pi_string(),
                      "relative_phase": rel.pi_string(), "is_identity": rel.is_one() and p0.is_one()}
    raise UsageError("gate supports: phase, power")


def cmd_compile(cfg: RunConfig):
    from .qubits import circuit_action, compile_operator, emit_circuit, operator_names, reference_action
    n = cfg.n or 3
    names = [cfg.op] if cfg.op else [x for x in operator_names(n) if not x.startswith(("A^", "S^"))]
    out, ok = {}, True
    for name in names:
        try:
            c = compile_operator(n, name)
        except KeyError as exc:
            raise UsageError(str(exc)) from None
        entry = {"qubits": c.n, "gates": len(c), "counts": c.counts()}
        try:
            entry["matches_reference"] = circuit_action(c).equals(reference_action(n, name))
            ok &= entry["matches_reference"]
        except KeyError:
            entry["matches_reference"] = None
        if cfg.emit:
            entry["listing"] = emit_circuit(c, cfg.emit)
        out[name] = entry
    return ok, {"n": n, "operators": out}


def cmd_hierarchy(cfg: RunConfig):
    from .hierarchy import MAX_DENSE_QUBITS, logical_gate_level, stabilizer_levels
    n = cfg.n or 3
    if n > MAX_DENSE_QUBITS:
        raise UsageError(f"unsupported: dense analyzer capped at n={MAX_DENSE_QUBITS}")
    levels = stabilizer_levels(n, cfg.max_k)
    gate = logical_gate_level(n, cfg.max_k)
    res = levels.as_dict()
    res["logical_gate"] = gate.as_dict()
    ok = levels.maximum == n - 1 and gate.level == n
    return ok, res


def table_rows(ns=(3, 4, 5), general=True) -> tuple[list[dict], list[dict]]:
    from .hierarchy import logical_gate_level, stabilizer_levels
    t1, t2 = [], []
    for n in ns:
        N = 2 ** (n - 3)
        grp = f"D_{4 * N}=Z_{4 * N}:Z_2"
        gate = "T" if N == 1 else f"T^(1/{N})"
        t1.append({"N": N, "n": n, "group": grp, "gate": f"{gate}=P(pi/{4 * N})",
                   "physical_qubits": f"{n} x N_edges"})
        t2.append({"N": N, "n": n, "group": grp, "stabilizer_level": stabilizer_levels(n).maximum,
                   "logical_gate_level": logical_gate_level(n).level, "status": "computed"})
    if general:
        t1.append({"N": "2^(n-3)", "n": "n", "group": "D_2^(n-1)=Z_2^(n-1):Z_2",
                   "gate": "T^(2^(3-n))=P(pi/2^(n-1))", "physical_qubits": "n x N_edges"})
        t2.append({"N": "2^(n-3)", "n": "n", "group": "D_2^(n-1)=Z_2^(n-1):Z_2",
                   "stabilizer_level": "n-1", "logical_gate_level": "n",
                   "status": "conjectured n-1, unverified"})
    return t1, t2


def cmd_report(cfg: RunConfig):
    if cfg.action != "tables":
        raise UsageError("report supports: tables")
    ns = (3, 4, 5) if cfg.n is None else tuple(range(3, cfg.n + 1))
    if max(ns) > 5:
        raise UsageError("unsupported: dense analyzer capped at n=5")
    t1, t2 = table_rows(ns)
    ok = all(r["stabilizer_level"] == r["n"] - 1 and r["logical_gate_level"] == r["n"]
             for r in t2 if r["status"] == "computed")
    return ok, {"table_resources": t1, "table_levels": t2}


COMMANDS = {
    "cocycle": cmd_cocycle,
    "anyons": cmd_anyons,
    "codeswitch": cmd_codeswitch,
    "stabilizers": cmd_stabilizers,
    "gate": cmd_gate,
    "compile": cmd_compile,
    "hierarchy": cmd_hierarchy,
    "report": cmd_report,
}


# ---------------------------------------------------------------- output

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def envelope(cfg: RunConfig, ok: bool, result) -> dict:
    rep = {
        "schema_version": SCHEMA_VERSION,
        "tool": "qudo",
        "version": __version__,
        "command": " ".join(x for x in (cfg.command, cfg.action) if x),
        "config": cfg.echo(),
        "seed": cfg.seed,
        "ok": ok,
        "result": _jsonable(result),
    }
    if cfg.timestamp:
        rep["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return rep


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def render(cfg: RunConfig, ok: bool, result) -> str:
    if cfg.fmt == "csv":
        if isinstance(result, list):
            return _csv(result)
        if isinstance(result, dict) and all(isinstance(v, list) for v in result.values()):
            return "\n".join(f"# {k}\n{_csv(v)}" for k, v in result.items())
        raise UsageError("this command has no tabular output; use --format json")
    if cfg.fmt == "text":
        return ("PASS" if ok else "FAIL") + f" {cfg.command} {cfg.action or ''}\n" + \
            json.dumps(_jsonable(result), indent=2, sort_keys=True) + "\n"
    return json.dumps(envelope(cfg, ok, result), indent=2, sort_keys=True) + "\n"


def run(cfg: RunConfig) -> int:
    try:
        cfg.validate()
        ok, result = COMMANDS[cfg.command](cfg)
        text = render(cfg, ok, result)
    except (UsageError, ValueError, TermCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- argument parsing

ACTIONS = {"cocycle": ["verify"], "anyons": ["table"], "stabilizers": ["commute", "check-state"],
           "gate": ["phase", "power"], "report": ["tables"]}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qudo", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--N", type=int, default=1)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--width", type=int, default=4)
        p.add_argument("--height", type=int, default=4)
        p.add_argument("--seed", type=lambda s: int(s, 0), default=RunConfig.seed)
        p.add_argument("--samples", type=int, default=RunConfig.samples)
        p.add_argument("--exhaustive", action=argparse.BooleanOptionalAction, default=None)
        p.add_argument("--trials", type=int, default=RunConfig.trials)
        p.add_argument("--k", type=int, default=1)
        p.add_argument("--op", default=None)
        p.add_argument("--emit", choices=["qasm", "plain"], default=None)
        p.add_argument("--target", default="z2z2")
        p.add_argument("--max-k", dest="max_k", type=int, default=6)
        p.add_argument("--out", default=None)
        p.add_argument("--format", dest="fmt", choices=["json", "csv", "text"], default=None)
        p.add_argument("--no-timestamp", dest="timestamp", action="store_false")

    for name in COMMANDS:
        p = sub.add_parser(name)
        if name in ACTIONS:
            p.add_argument("action", choices=ACTIONS[name], nargs="?" if name == "anyons" else None)
        common(p)
    return ap


DEFAULT_FORMAT = {"anyons": "csv", "report": "csv"}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    d = vars(args)
    if d["fmt"] is None:
        d["fmt"] = DEFAULT_FORMAT.get(d["command"], "json")
    d.setdefault("action", None)
    cfg = RunConfig(**d)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
