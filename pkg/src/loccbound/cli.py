"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 I/O error.
Every number printed comes straight from a library call.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bounds import (
    build_encoding_ensemble,
    complementarity_check,
    dense_coding_bound,
    locc_bound,
    party_entropies,
    resolve_senders,
)
from .ensembles import load_ensemble, parse_matrix, read_json
from .errors import NumericalError, ParseError, ValidationError
from .measures import average_state_entropy, holevo_chi
from .repro import e2_gap, find_e2_crossings, sweep, sweep_csv
from .sim import load_protocol, run_protocol, tree_depth

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3
DEFAULT_GRID = {"e1": 101, "e2": 1001}


def fmt(v: float) -> str:
    return f"{v:.12g}"


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.report == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def cmd_bound(args) -> int:
    e = load_ensemble(args.path)
    r = locc_bound(e)
    lines = [f"parties: {e.layout.n_parties}  dims: {list(e.layout.dims)}  members: {len(e)}"]
    for n, (s, m) in enumerate(zip(r.party_entropies, r.avg_member_entropy_per_party), start=1):
        lines.append(f"  B{n}: S(reduced average) = {fmt(s)}  avg member entropy = {fmt(m)}")
    lines += [
        f"max member entropy at party: B{r.argmax_party}",
        f"locally accessible information bound: {fmt(r.bound_bits)} bits",
        f"Holevo information: {fmt(r.chi_bits)} bits",
        f"verdict: {r.verdict.value}",
    ]
    _emit(args, r.to_dict(), lines)
    return EXIT_OK


def cmd_info(args) -> int:
    e = load_ensemble(args.path)
    chi = holevo_chi(e)
    s_avg = average_state_entropy(e)
    s_party = party_entropies(e)
    payload = {
        "dims": list(e.layout.dims),
        "members": len(e),
        "average_state_entropy": s_avg,
        "holevo_chi": chi,
        "party_entropies": s_party,
    }
    lines = [
        f"dims: {list(e.layout.dims)}  members: {len(e)}",
        f"entropy of average state: {fmt(s_avg)} bits",
        f"Holevo information: {fmt(chi)} bits",
        "party entropies: " + ", ".join(fmt(s) for s in s_party),
    ]
    if e.all_pure:
        c = complementarity_check(e)
        payload["complementarity"] = c.to_dict()
        lines.append(
            f"complementarity (key surrogate {c.surrogate}): "
            f"{fmt(c.lhs)} <= {fmt(c.capacity_D)} -> {'holds' if c.holds else 'VIOLATED'}"
        )
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_sweep(args) -> int:
    grid = args.grid if args.grid is not None else DEFAULT_GRID[args.example]
    text = sweep_csv(sweep(args.example, grid))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_crossings(args) -> int:
    lo, hi = find_e2_crossings(args.tol)
    payload = {"a_low": lo, "a_high": hi, "gap_at_a_low": e2_gap(lo), "gap_at_a_high": e2_gap(hi)}
    lines = [
        f"a_low  = {fmt(lo)}",
        f"a_high = {fmt(hi)}",
        f"E2 is LOCC-indistinguishable (bound < Holevo information) for {fmt(lo)} < a < {fmt(hi)}",
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_simulate(args) -> int:
    e = load_ensemble(args.ensemble)
    tree = load_protocol(args.protocol)
    res = run_protocol(e, tree)
    r = locc_bound(e)
    payload = {
        "extracted_info": res.extracted_info,
        "chain_rule_info": res.chain_rule_info,
        "bound_bits": r.bound_bits,
        "depth": tree_depth(tree),
        "transcripts": res.transcripts.to_dict(),
    }
    lines = [
        f"protocol depth: {tree_depth(tree)}",
        f"extracted information: {fmt(res.extracted_info)} bits",
        f"sum of per-step gains: {fmt(res.chain_rule_info)} bits",
        f"locally accessible information bound: {fmt(r.bound_bits)} bits",
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def _load_encodings(path):
    doc = read_json(path)
    if not isinstance(doc, dict) or "encodings" not in doc:
        raise ParseError("encodings file needs an 'encodings' list")
    raw = doc["encodings"]
    if not isinstance(raw, list) or not raw:
        raise ParseError("encodings: expected a nonempty list")
    encodings = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict) or "p" not in item or "unitary" not in item:
            raise ParseError(f"encodings[{i}]: expected an object with 'p' and 'unitary'")
        if not isinstance(item["p"], (int, float)) or isinstance(item["p"], bool):
            raise ParseError(f"encodings[{i}].p: expected a number")
        encodings.append((float(item["p"]), parse_matrix(item["unitary"], f"encodings[{i}].unitary")))
    senders = doc.get("senders")
    if senders is not None and (
        not isinstance(senders, list) or not all(isinstance(k, int) and not isinstance(k, bool) for k in senders)
    ):
        raise ParseError("senders: expected a list of party indices")
    return encodings, senders


def _parse_parties(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ValidationError(f"--receivers expects comma-separated party indices, got {text!r}") from None


def cmd_densecode(args) -> int:
    base_ens = load_ensemble(args.state)
    if len(base_ens) != 1:
        raise ValidationError(f"state file must hold exactly one member, found {len(base_ens)}")
    base = base_ens.members[0][1]
    encodings, senders = _load_encodings(args.encodings)
    post = build_encoding_ensemble(base, encodings, senders)
    layout = base.layout
    senders = list(resolve_senders(layout, encodings[0][1].shape[0], senders))
    if args.receivers:
        receivers = _parse_parties(args.receivers)
    else:
        receivers = [k for k in range(1, layout.n_parties + 1) if k not in senders]
    sender_dims = [layout.dims[k - 1] for k in senders]
    value = dense_coding_bound(post, sender_dims, receivers)
    payload = {"senders": senders, "sender_dims": sender_dims, "receivers": receivers, "capacity_bound_bits": value}
    lines = [
        f"senders: {senders} (dims {sender_dims})  receivers: {receivers}",
        f"dense-coding capacity bound: {fmt(value)} bits",
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loccbound",
        description="Upper bounds on locally accessible information for multipartite ensembles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_report(p):
        p.add_argument("--report", choices=("text", "json"), default="text")
        return p

    p = with_report(sub.add_parser("bound", help="LOCC bound, Holevo information and verdict"))
    p.add_argument("path")
    p.set_defaults(func=cmd_bound)

    p = with_report(sub.add_parser("info", help="entropies, Holevo information, complementarity"))
    p.add_argument("path")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("sweep", help="CSV of bound and Holevo information over a parameter grid")
    p.add_argument("example", choices=("e1", "e2"))
    p.add_argument("--grid", type=int, default=None, help="points per axis (default 101 for e1, 1001 for e2)")
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = with_report(sub.add_parser("crossings", help="a-interval on which E2 is provably LOCC-indistinguishable"))
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_crossings)

    p = with_report(sub.add_parser("simulate", help="run an LOCC protocol tree on an ensemble"))
    p.add_argument("ensemble")
    p.add_argument("protocol")
    p.set_defaults(func=cmd_simulate)

    p = with_report(sub.add_parser("densecode", help="distributed dense-coding capacity bound"))
    p.add_argument("state")
    p.add_argument("encodings")
    p.add_argument("--receivers", default=None, help="comma-separated receiver parties (default: non-senders)")
    p.set_defaults(func=cmd_densecode)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
