"""Command-line front end.

Commands:
  certify  -- produce a density certificate for (p, ell)
  graph    -- supersingular locus, field split, and isogeny-graph connectivity
  hopf     -- coproduct / norm-digit / additivity verifications

A saved JSON report can be re-checked with --verify FILE (no re-search).

Exit codes: 0 all checks pass (or a hypothesis is definitively refuted),
1 definite failure or invalid arguments, 2 search exhausted (inconclusive),
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .arith import is_prime
from .density import certify, verify_certificate
from .hopf import verify_cocycles, verify_coproduct, verify_s1_relation
from .quatalg import SearchExhausted
from .ssgraph import field_split, mass_formula_count, supersingular_j, verify_kohel

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_IO = 3


@dataclass
class RunConfig:
    command: str
    p: int = 0
    ell: int = 0
    precision: int = 4
    fmt: str = "json"
    output: str | None = None

    def validate(self) -> str | None:
        """Usage-level validation; returns an error message or None."""
        if not is_prime(self.p):
            return "p must be prime"
        if self.command in ("certify", "graph"):
            if self.ell < 2:
                return "ell must be at least 2"
            if self.ell == self.p:
                return "ell must differ from p"
        if self.command == "graph" and self.ell not in (2, 3):
            return "graph supports ell in {2, 3} only"
        if self.command == "certify":
            if not is_prime(self.ell):
                return "ell must be prime"
            if self.precision < 2:
                return "precision must be at least 2"
        return None


def _emit(doc: dict, config: RunConfig) -> int:
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if config.fmt == "text":
        text = _render_text(doc)
    try:
        if config.output:
            with open(config.output, "w") as handle:
                handle.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _render_text(doc: dict, indent: str = "") -> str:
    lines = []
    for key in sorted(doc):
        value = doc[key]
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_render_text(value, indent + "  "))
        elif isinstance(value, list):
            lines.append(f"{indent}{key}: {json.dumps(value, sort_keys=True)}")
        else:
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(line for line in lines if line) + ("\n" if not indent else "")


def _verdict_exit(verdicts: dict) -> int:
    worst = EXIT_OK
    for value in verdicts.values():
        if value is False:
            return EXIT_FAIL
        if isinstance(value, str) and value.startswith("inconclusive"):
            worst = EXIT_INCONCLUSIVE
        # "hypothesis_failed" is a definitive (correct) outcome: exit 0
    return worst


def cmd_certify(config: RunConfig) -> int:
    try:
        cert = certify(config.p, config.ell, config.precision)
    except SearchExhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    code = _emit(cert, config)
    if code:
        return code
    return _verdict_exit(cert["verdicts"])


def _graph_report(p: int, ell: int) -> dict:
    locus = supersingular_j(p)
    in_fp, pairs = field_split(locus)
    connected, diameter, parity_mix = verify_kohel(p, ell)
    return {
        "report_type": "graph",
        "parameters": {"p": p, "ell": ell},
        "supersingular_count": len(locus),
        "mass_formula_count": mass_formula_count(p),
        "j_invariants": [[j.c0, j.c1] for j in locus.j_invariants],
        "count_in_prime_field": in_fp,
        "conjugate_pairs": pairs,
        "connected": connected,
        "diameter": diameter,
        "parity_mix": parity_mix,
    }


def _hopf_report(p: int) -> dict:
    coproduct = {"t1": verify_coproduct(1, p)}
    if p == 2:
        coproduct["t2"] = verify_coproduct(2, 2)
        coproduct["t3"] = verify_coproduct(3, 2)
    cocycles = verify_cocycles(p)
    doc = {
        "report_type": "hopf",
        "parameters": {"p": p},
        "coproduct": coproduct,
        "cocycles": cocycles,
        "mode": cocycles["mode"],
    }
    if p == 2:
        doc["s1_relation"] = verify_s1_relation(2)
    return doc


def cmd_graph(config: RunConfig) -> int:
    doc = _graph_report(config.p, config.ell)
    code = _emit(doc, config)
    if code:
        return code
    ok = (
        doc["connected"]
        and doc["parity_mix"]
        and doc["supersingular_count"] == doc["mass_formula_count"]
    )
    return EXIT_OK if ok else EXIT_FAIL


def cmd_hopf(config: RunConfig) -> int:
    doc = _hopf_report(config.p)
    code = _emit(doc, config)
    if code:
        return code
    ok = (
        all(doc["coproduct"].values())
        and doc["cocycles"]["all_pass"]
        and doc.get("s1_relation", True)
    )
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(path: str) -> int:
    try:
        with open(path) as handle:
            doc = json.load(handle)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"i/o error: invalid JSON in {path}: {exc}", file=sys.stderr)
        return EXIT_IO
    if "verdicts" in doc:
        ok, problems = verify_certificate(doc)
        for problem in problems:
            print(f"replay failure: {problem}", file=sys.stderr)
        print("certificate verified" if ok else "certificate INVALID")
        return EXIT_OK if ok else EXIT_FAIL
    if doc.get("report_type") in ("graph", "hopf"):
        params = doc["parameters"]
        if doc["report_type"] == "graph":
            fresh = _graph_report(params["p"], params["ell"])
        else:
            fresh = _hopf_report(params["p"])
        match = fresh == doc
        print("report verified" if match else "report MISMATCH")
        return EXIT_OK if match else EXIT_FAIL
    print("unrecognized report format", file=sys.stderr)
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isodensity",
        description="exact certification of density and isogeny-graph facts",
    )
    parser.add_argument("--verify", metavar="FILE", help="re-check a saved JSON report")
    sub = parser.add_subparsers(dest="command")
    for name in ("certify", "graph", "hopf"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--p", type=int, required=True)
        if name != "hopf":
            cmd.add_argument("--ell", type=int, required=True)
        if name == "certify":
            cmd.add_argument("--precision", type=int, default=4)
        cmd.add_argument("--format", choices=("json", "text"), default="json")
        cmd.add_argument("--output", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verify:
        return cmd_verify(args.verify)
    if not args.command:
        print("no command given; see --help", file=sys.stderr)
        return EXIT_FAIL
    config = RunConfig(
        command=args.command,
        p=args.p,
        ell=getattr(args, "ell", 0),
        precision=getattr(args, "precision", 4),
        fmt=args.format,
        output=args.output,
    )
    error = config.validate()
    if error:
        print(error, file=sys.stderr)
        return EXIT_FAIL
    handler = {"certify": cmd_certify, "graph": cmd_graph, "hopf": cmd_hopf}[args.command]
    try:
        return handler(config)
    except SearchExhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
