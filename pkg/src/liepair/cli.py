"""Command-line front end.

    liepair validate DOC
    liepair contraction DOC [--truncation N]
    liepair transfer DOC [--truncation N] [--max-arity K]
    liepair stasheff DOC [--truncation N] [--max-arity K] [--parallel T]
    liepair cohomology DOC [--truncation N]
    liepair compare DOC [--truncation N] [--max-arity K]
    liepair catalog [NAME]

DOC is a JSON/TOML pair document or ``catalog:NAME``.  Reports go to
stdout as JSON (or indented text).  Exit codes: 0 every check passed,
1 a check failed, 2 bad input, 3 truncation overflow.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .catalog import catalog
from .ce_complex import TruncationOverflow, check_degree_operator, check_differential_expansion
from .compare import build_structure, cohomology_algebra, compare_structures
from .graded_linear import InvalidInput, LinearOperator, NotAComplex
from .hpl import ConstructionError, LocalNilpotencyError
from .lie_pair import Choices, validate_lie_pair
from .pullback import verify_contraction0
from .transfer import check_inclusion_morphism, stasheff_defect

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_OVERFLOW = 0, 1, 2, 3


def _small_labels(space) -> list:
    return [io.small_label(lab) for lab in space.labels]


def _operator_table(op: LinearOperator, label) -> dict:
    """Nonzero columns of an operator keyed by label strings."""
    cod = op.codomain.labels
    out = {}
    for j, col in enumerate(op.cols):
        if col:
            out[label(op.domain.labels[j])] = {label(cod[i]): c for i, c in sorted(col.items())}
    return out


def _witness_label(w):
    if isinstance(w, tuple) and len(w) == 2 and isinstance(w[0], tuple):
        return io.small_label(w)
    return w


# ---------------------------------------------------------------------------
# commands


def _one_based(entry: dict) -> dict:
    """Shift the 0-based indices of a validation witness to document indices."""
    out = {}
    for k, v in entry.items():
        if k in ("i", "j", "k"):
            out[k] = v + 1
        elif k == "triple":
            out[k] = [a + 1 for a in v]
        elif isinstance(v, dict):
            out[k] = {z + 1: c for z, c in v.items()}
        else:
            out[k] = v
    return out


def cmd_validate(doc: io.PairDocument, opts) -> io.RunReport:
    rep = io.RunReport("validate", doc.digest())
    v = validate_lie_pair(doc.pair)
    for name, found in (("antisymmetry", v.antisymmetry), ("jacobi", v.jacobi),
                        ("subalgebra closure", v.closure)):
        rep.add(name, not found, [_one_based(e) for e in found] or None)
    rep.tables["pair"] = io.pair_to_document(doc.pair)
    return rep


def _require_valid(doc, rep) -> bool:
    v = validate_lie_pair(doc.pair)
    if not v.valid:
        rep.add("valid Lie pair", False, {k: [_one_based(e) for e in getattr(v, k)]
                                          for k in ("antisymmetry", "jacobi", "closure")})
        return False
    return True


def cmd_contraction(doc: io.PairDocument, opts) -> io.RunReport:
    from .hpl import build_main_contraction

    rep = io.RunReport("contraction", doc.digest(), {"truncation": opts.truncation})
    if not _require_valid(doc, rep):
        return rep
    base = verify_contraction0(doc.pair)
    for c in base["checks"]:
        rep.add(f"module contraction: {c['identity']}", c["pass"], _witness_label(c["witness"]))
    for name, res in (("exterior differential expansion", check_differential_expansion(doc.pair)),
                      ("degree operator", check_degree_operator(doc.pair))):
        rep.add(name, res["max_defect"] == 0, res["witness"], {"max_defect": res["max_defect"]})
    mc = build_main_contraction(doc.pair, doc.choices, opts.truncation, verify=False)
    for name, ok, w in mc.contraction.checks():
        rep.add(f"perturbed contraction: {name}", ok, w)
    rep.add("perturbed projection equals P_U", mc.contraction.P == mc.P_U)
    rep.add("perturbed differential equals d_A", mc.contraction.d == mc.d_ULA)
    rep.add("perturbation series length within truncation", mc.report.terms <= opts.truncation,
            detail={"terms": mc.report.terms})
    rep.tables["dimensions"] = {"big": mc.big.dim, "small": mc.small.dim, "module": base["dimension"]}
    rep.tables["small_differential"] = _operator_table(mc.contraction.d, io.small_label)
    return rep


def _structure(doc, opts, rep):
    mc, A = build_structure(doc.pair, doc.choices, opts.truncation, opts.max_arity)
    rep.tables["basis"] = [
        {"label": io.small_label(lab), "degree": d, "weight": w}
        for lab, d, w in zip(mc.small.labels, mc.small.degrees, mc.small.weights)
    ]
    return mc, A


def _m_table(A, n) -> list:
    return [
        {"inputs": [io.small_label(x) for x in inputs], "output": {io.small_label(k): c for k, c in out.items()}}
        for inputs, out in A.table(n)
    ]


def cmd_transfer(doc: io.PairDocument, opts) -> io.RunReport:
    rep = io.RunReport("transfer", doc.digest(), {"truncation": opts.truncation, "max_arity": opts.max_arity})
    if not _require_valid(doc, rep):
        return rep
    mc, A = _structure(doc, opts, rep)
    rep.add("m1 equals d_A", mc.contraction.d == mc.d_ULA)
    tables = {}
    for n in range(1, opts.max_arity + 1):
        tables[str(n)] = _m_table(A, n)
    rep.tables["m"] = tables
    rep.tables["nonzero_counts"] = {str(n): len(t) for n, t in tables.items()}
    for n in range(1, min(opts.max_arity, 3) + 1):
        res = check_inclusion_morphism(A, n)
        wit = [io.small_label(A.V.labels[i]) for i in res["witness"]] if res["witness"] else None
        rep.add(f"inclusion morphism identity, arity {n}", res["max_defect"] == 0, wit,
                {"tuples": res["tuples"]})
    rep.tables["m2_left_exterior_linear"] = _left_linearity(A)
    return rep


def _left_linearity(A) -> bool:
    """Whether m_2(ξ^I ⊗ 1, y) is the left exterior multiple ξ^I·y on every basis pair."""
    from .ce_complex import wedge_mono

    V = A.V
    for a, (mono, word) in enumerate(V.labels):
        if word:
            continue
        for b in range(V.dim):
            if not A.admissible((a, b)):
                continue
            m2, w2 = V.labels[b]
            s, mm = wedge_mono(mono, m2)
            expect = {V.index[(mm, w2)]: s} if s else {}
            if A.m((a, b)) != expect:
                return False
    return True


def cmd_stasheff(doc: io.PairDocument, opts) -> io.RunReport:
    rep = io.RunReport("stasheff", doc.digest(), {"truncation": opts.truncation, "max_arity": opts.max_arity})
    if not _require_valid(doc, rep):
        return rep
    mc, A = _structure(doc, opts, rep)
    rep.tables.pop("basis")
    defects = {}
    for n in range(1, opts.max_arity + 1):
        res = stasheff_defect(A, n, parallel=opts.parallel)
        wit = [io.small_label(A.V.labels[i]) for i in res["witness"]] if res["witness"] else None
        rep.add(f"Stasheff identity, arity {n}", res["max_defect"] == 0, wit, {"tuples": res["tuples"]})
        defects[str(n)] = res["max_defect"]
    rep.tables["max_defect"] = defects
    return rep


def _cohomology_tables(coh) -> dict:
    def key(dk):
        return f"H{dk[0]}[{dk[1] + 1}]"

    return {
        "ranks": {str(d): r for d, r in sorted(coh["ranks"].items())},
        "representatives": {key(dk): {io.small_label(l): c for l, c in rep.items()}
                            for dk, rep in coh["representatives"].items()},
        "products": [
            {"left": key(a), "right": key(b), "product": {key(k): c for k, c in val.items()}}
            for (a, b), val in coh["products"].items()
        ],
    }


def cmd_cohomology(doc: io.PairDocument, opts) -> io.RunReport:
    rep = io.RunReport("cohomology", doc.digest(), {"truncation": opts.truncation})
    if not _require_valid(doc, rep):
        return rep
    mc, A = build_structure(doc.pair, doc.choices, opts.truncation, 2)
    coh = cohomology_algebra(A)
    rep.add("product table associative", coh["associative"], coh["associativity_failures"] or None)
    rep.tables["cohomology"] = _cohomology_tables(coh)
    return rep


def cmd_compare(doc: io.PairDocument, opts) -> io.RunReport:
    rep = io.RunReport("compare", doc.digest(), {"truncation": opts.truncation, "max_arity": opts.max_arity})
    if not _require_valid(doc, rep):
        return rep
    if len(doc.extra_choices) >= 2:
        c1, c2 = doc.extra_choices[:2]
    elif doc.extra_choices:
        c1, c2 = doc.choices, doc.extra_choices[0]
    else:
        c1 = c2 = doc.choices
    res = compare_structures(doc.pair, c1, c2, opts.truncation, opts.max_arity)
    f1 = res["f1_reference"]
    wit = None
    if not res["f1_is_identity"]:
        j = (f1 - LinearOperator.identity(f1.domain)).first_nonzero_column()
        wit = io.small_label(f1.domain.labels[j])
    rep.add("transport is a chain map", res["transport_is_chain_map"])
    rep.add("first Taylor coefficient is the identity", res["f1_is_identity"], wit)
    for r in res["morphism_identities"]:
        w = [io.small_label(f1.domain.labels[i]) for i in r["witness"]] if r["witness"] else None
        rep.add(f"morphism identity, arity {r['arity']}", r["max_defect"] == 0, w, {"tuples": r["tuples"]})
    rep.add("cohomology product tables agree", res["products_agree"])
    rep.tables["f1"] = _operator_table(f1, io.small_label)
    rep.tables["higher_nonzero_tuples"] = {str(n): v for n, v in res["higher_nonzero_tuples"].items()}
    rep.tables["cohomology"] = _cohomology_tables(res["cohomology_1"])
    rep.tables["choices"] = [c1.label or "document", c2.label or "document"]
    return rep


COMMANDS = {
    "validate": cmd_validate,
    "contraction": cmd_contraction,
    "transfer": cmd_transfer,
    "stasheff": cmd_stasheff,
    "cohomology": cmd_cohomology,
    "compare": cmd_compare,
}


def cmd_catalog(name: str | None = None):
    cat = catalog()
    if name is None:
        return {"pairs": [{"name": k, "dim_g": p.dim_g, "dim_h": p.dim_h,
                           "valid": validate_lie_pair(p).valid} for k, p in cat.items()]}
    if name not in cat:
        raise InvalidInput(f"unknown catalog pair {name!r}")
    return io.pair_to_document(cat[name])


# ---------------------------------------------------------------------------
# entry point


def load(source: str) -> io.PairDocument:
    if source.startswith("catalog:"):
        name = source.split(":", 1)[1]
        cat = catalog()
        if name not in cat:
            raise InvalidInput(f"unknown catalog pair {name!r}")
        return io.parse_document(io.pair_to_document(cat[name]))
    return io.load_document(source)


def _override_choices(doc: io.PairDocument, opts) -> None:
    split, aux = doc.choices.splitting, doc.choices.aux
    n = doc.pair.dim_g
    if opts.splitting:
        data = io.read_data(opts.splitting)
        rows = data.get("splitting_matrix") if isinstance(data, dict) else data
        split = io.parse_matrix(rows, n, f"{opts.splitting}")
    if opts.aux_connection:
        data = io.read_data(opts.aux_connection)
        entries = data.get("aux_connection") if isinstance(data, dict) else data
        aux = io.parse_aux(entries, n, f"{opts.aux_connection}")
    if opts.splitting or opts.aux_connection:
        doc.choices = Choices(split, aux, label="command line")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="liepair", description="Exact A-infinity computations for Lie pairs.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("document", help="JSON/TOML pair document or catalog:NAME")
        p.add_argument("--truncation", type=int, default=None, help="filtration weight cap N (default 3)")
        p.add_argument("--max-arity", type=int, default=None, help="highest m_n computed (default 4)")
        p.add_argument("--splitting", help="file with a splitting_matrix")
        p.add_argument("--aux-connection", help="file with aux_connection entries")
        p.add_argument("--output", choices=("json", "text"), default="json")
        p.add_argument("--parallel", type=int, default=1, help="worker threads")
    p = sub.add_parser("catalog")
    p.add_argument("name", nargs="?")
    p.add_argument("--output", choices=("json", "text"), default="json")
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    opts = ap.parse_args(argv)
    if opts.command == "catalog":
        try:
            out.write(io.dumps(cmd_catalog(opts.name), opts.output))
            return EXIT_OK
        except InvalidInput as exc:
            out.write(io.dumps({"error": {"kind": "input", "message": str(exc)}}, opts.output))
            return EXIT_INPUT
    rep = io.RunReport(opts.command)
    code = EXIT_OK
    try:
        doc = load(opts.document)
        rep.digest = doc.digest()
        _override_choices(doc, opts)
        if opts.truncation is None:
            opts.truncation = 3 if doc.truncation is None else doc.truncation
        if opts.max_arity is None:
            opts.max_arity = 4 if doc.max_arity is None else doc.max_arity
        if opts.truncation < 0 or opts.max_arity < 1 or opts.parallel < 1:
            raise InvalidInput("--truncation must be >= 0, --max-arity and --parallel >= 1")
        rep = COMMANDS[opts.command](doc, opts)
        code = EXIT_OK if rep.passed else EXIT_FAIL
    except InvalidInput as exc:
        rep.error = {"kind": "input", "message": str(exc)}
        code = EXIT_INPUT
    except TruncationOverflow as exc:
        rep.error = {"kind": "truncation overflow", "message": str(exc), "weight": exc.weight}
        code = EXIT_OVERFLOW
    except (ConstructionError, NotAComplex) as exc:
        rep.error = {"kind": "construction", "message": str(exc), "witness": _witness_label(exc.witness)}
        code = EXIT_FAIL
    except LocalNilpotencyError as exc:
        rep.error = {"kind": "construction", "message": str(exc)}
        code = EXIT_FAIL
    out.write(io.dumps(rep.to_dict(), opts.output))
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
