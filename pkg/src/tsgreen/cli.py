"""Command-line front end: ``tsgreen <subcommand> ...``.

Exit codes: 0 success, 1 domain error (JSON on stderr), 2 theorem violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import classifiers
from .config import RunConfig, __version__, set_config, using_config
from .decompose import decompose, vertex
from .errors import TheoremViolation, TSGreenError
from .fields import FieldSpec, parse_field
from .greenring import induction_matrix, restriction_matrix, ts_basis
from .groups import parse_group
from .modules import perm_module, regular_module, trivial_module
from .primordial import (BUNDLED_CATALOGS, default_catalog, is_primordial, parse_certificate_params, prop35_certificate,
                         read_catalog, verify_theorem)


def _provenance(cfg: RunConfig, k: FieldSpec | None) -> dict:
    out = cfg.provenance()
    if k is not None:
        out["field"] = k.to_json()
    return out


def _parse_modulus(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise TSGreenError(f"modulus must be a list of integer coefficients, got {text!r}") from None


def _field(args) -> FieldSpec:
    return parse_field(args.field, _parse_modulus(args.modulus))


def cmd_classify(args, cfg):
    k = _field(args)
    G = parse_group(args.group)
    return {"verdict": classifiers.classify(G, k).to_json()}, k


def cmd_imset(args, cfg):
    k = _field(args)
    return {"index_set": classifiers.galois_index_set(k, args.m).to_json()}, k


def cmd_ts_basis(args, cfg):
    k = _field(args)
    G = parse_group(args.group)
    B = ts_basis(G, k)
    out = {"basis": B.to_json()}
    if args.emit_matrices:
        mats = []
        for ci, cls in enumerate(G.subgroup_classes()):
            S = cls.rep
            BK = ts_basis(S.group, k)
            mats.append({"subgroup_class": ci, "subgroup_order": S.order(),
                         "induction": induction_matrix(S, BK, B).tolist(),
                         "restriction": restriction_matrix(S, B, BK).tolist()})
        out["matrices"] = mats
    return out, k


def _module(G, k, spec: str):
    if spec == "regular":
        return regular_module(G, k)
    if spec == "trivial":
        return trivial_module(G, k)
    if spec.startswith("perm:"):
        idx = int(spec.split(":", 1)[1])
        classes = G.subgroup_classes()
        if not 0 <= idx < len(classes):
            raise TSGreenError(f"subgroup class index {idx} out of range 0..{len(classes) - 1}")
        return perm_module(G, classes[idx].rep, k)
    raise TSGreenError(f"unknown module spec {spec!r}; use regular, trivial or perm:<class-index>")


def cmd_decompose(args, cfg):
    k = _field(args)
    G = parse_group(args.group)
    M = _module(G, k, args.module)
    D = decompose(M, seed=cfg.seed)
    summands = []
    for ci, (V, mult) in enumerate(D.summands):
        loc = D.local_data(ci)
        entry = {"dim": V.dim, "multiplicity": mult, "end": loc.to_json()}
        if not args.no_vertex:
            entry["vertex"] = vertex(V, loc).to_json()
        summands.append(entry)
    return {"module": {"spec": args.module, "dim": M.dim}, "summands": summands}, k


def cmd_primordial(args, cfg):
    k = _field(args)
    G = parse_group(args.group)
    v = is_primordial(G, k)
    kd, q = classifiers.is_k_dress(G, k)
    out = v.to_json()
    out["k_dress"] = kd
    out["witness_q"] = q
    return {"verdict": out}, k


def cmd_certificate(args, cfg):
    k = _field(args)
    r, q, n, a = parse_certificate_params(args.params)
    return {"certificate": prop35_certificate(r, q, n, a, k).to_json()}, k


def cmd_verify(args, cfg):
    catalog = read_catalog(args.catalog) if args.catalog else default_catalog(args.bundled)
    report = verify_theorem(catalog, raise_on_violation=False, parallelism=cfg.parallelism)
    return {"report": report.to_json(), "_ok": report.ok}, None


class _Parser(argparse.ArgumentParser):
    """Usage errors print the help and exit 1, keeping exit code 2 for theorem violations."""

    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--order-cap", type=int, default=200)
    common.add_argument("--dim-cap", type=int, default=256)
    common.add_argument("--format", choices=["json", "csv", "pretty"], default="json")
    common.add_argument("--parallelism", type=int, default=1)

    fieldopt = _Parser(add_help=False)
    fieldopt.add_argument("--field", required=True, help="GF(q) or GF(p^d)")
    fieldopt.add_argument("--modulus", help="monic modulus coefficients, low to high, e.g. '1 1 1'")

    p = _Parser(prog="tsgreen", description="Trivial-source Green rings and primordial groups")
    p.add_argument("--version", action="version", version=f"tsgreen {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("classify", parents=[common, fieldopt], help="Dress-hierarchy verdict for a group")
    s.add_argument("group")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("imset", parents=[common, fieldopt], help="Galois index set I_m(k)")
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=cmd_imset)

    s = sub.add_parser("ts-basis", parents=[common, fieldopt], help="basis of a(kG, triv)")
    s.add_argument("group")
    s.add_argument("--emit-matrices", action="store_true")
    s.set_defaults(func=cmd_ts_basis)

    s = sub.add_parser("decompose", parents=[common, fieldopt], help="decompose a permutation module")
    s.add_argument("group")
    s.add_argument("--module", default="regular", help="regular | trivial | perm:<subgroup-class-index>")
    s.add_argument("--no-vertex", action="store_true", help="skip vertex reports")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("primordial", parents=[common, fieldopt], help="primordiality verdict")
    s.add_argument("group")
    s.set_defaults(func=cmd_primordial)

    s = sub.add_parser("certificate", parents=[common, fieldopt], help="explicit [k] in T(H) certificate")
    s.add_argument("params", help="r:q^n@a, e.g. 7:2@6 or 13:2^2@5")
    s.set_defaults(func=cmd_certificate)

    s = sub.add_parser("verify-theorem", parents=[common], help="check primordial == k-Dress on a catalog")
    s.add_argument("--catalog", help="file of '<group-spec> <field>' lines; overrides --bundled")
    s.add_argument("--bundled", choices=list(BUNDLED_CATALOGS), default="catalog",
                   help="catalog shipped with the package (default: catalog)")
    s.set_defaults(func=cmd_verify)
    return p


def _render(payload: dict, fmt: str) -> str:
    if fmt == "csv" and "report" in payload:
        buf = io.StringIO()
        rows = payload["report"]["rows"]
        w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()) if rows else ["group"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "pretty" and "report" in payload:
        lines = [f"{'group':<12} {'|G|':>4} {'p':>2} {'field':<6} {'k-Dress':<8} {'primordial':<10} agree"]
        for r in payload["report"]["rows"]:
            lines.append(f"{r['group']:<12} {r['order']:>4} {r['p']:>2} {r['field']:<6} "
                         f"{str(r['k_dress']):<8} {str(r['primordial']):<10} {r['agreement']}")
        return "\n".join(lines) + "\n"
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(order_cap=args.order_cap, dim_cap=args.dim_cap, seed=args.seed,
                        output_format=args.format, parallelism=args.parallelism,
                        catalog_path=getattr(args, "catalog", None))
    except ValueError as exc:
        parser.error(str(exc))
    set_config(cfg)
    try:
        with using_config():
            payload, k = args.func(args, cfg)
    except TheoremViolation as exc:
        sys.stderr.write(json.dumps(exc.to_json(), sort_keys=True) + "\n")
        return 2
    except TSGreenError as exc:
        sys.stderr.write(json.dumps(exc.to_json(), sort_keys=True) + "\n")
        return 1
    ok = payload.pop("_ok", True)
    payload["provenance"] = _provenance(cfg, k)
    payload["command"] = args.command
    sys.stdout.write(_render(payload, cfg.output_format))
    return 0 if ok else 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
