"""Command line interface: deterministic JSON on stdout, diagnostics as data.

Exit codes: 0 success, 1 semantic/validation failure, 2 parse failure,
3 internal self-test failure.  Identical inputs and flags produce
byte-identical output (no timestamps, no unordered iteration).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import List, Optional

# let bare negative rationals like -5/2 pass as argument values
_NEGATIVE_SLOPE = re.compile(r"^-\d+(/-?\d+)?$")

from . import dsl
from .bridge import joint_pairs_to_pm1, kirby1_gadget, pair_pm1_diagram
from .core import (
    Basis,
    ContactSurgeryDiagram,
    RoundSurgeryDiagram,
    SlopeQ,
    check_nice,
    is_fillable_sufficient,
)
from .dividing import ArcConfig, ParallelArc, TraversingArc, giroux_overtwisted, glue_annuli
from .errors import (
    DiagramError,
    DslSyntaxError,
    GadgetSelfTestFailed,
    NoJointPartner,
    SemanticError,
)
from .front import OrientedFront, classical_invariants, parse_front_word
from .homology import H1Class, det, h1_dehn, h1_round_diagram, linking_matrix
from .slopes import BoundaryData, enumerate_configurations, honda_count, neg_cf, normalize_slopes

EXIT_OK, EXIT_SEMANTIC, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3


def _emit(payload: dict, pretty: bool) -> None:
    if pretty:
        text = json.dumps(payload, indent=2)
    else:
        text = json.dumps(payload, separators=(",", ":"))
    sys.stdout.write(text + "\n")


def _h1_json(h1: H1Class) -> dict:
    return {"free_rank": h1.free_rank, "torsion": list(h1.torsion)}


def _load(path: str, name: Optional[str]) -> dsl.NamedDiagram:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return dsl.parse_file(text).get(name)


def _parse_arcs(text: str, top_marks: int, bottom_marks: int) -> ArcConfig:
    arcs = []
    for item in text.replace(";", " ").split():
        kind, _, rest = item.partition("(")
        if not rest.endswith(")"):
            raise SemanticError(f"bad arc literal {item!r}")
        args = [a.strip() for a in rest[:-1].split(",")]
        if kind == "T" and len(args) == 3:
            arcs.append(TraversingArc(int(args[0]), int(args[1]), int(args[2])))
        elif kind == "P" and len(args) == 3 and args[0] in ("top", "bottom"):
            arcs.append(ParallelArc(args[0], int(args[1]), int(args[2])))
        else:
            raise SemanticError(f"bad arc literal {item!r}")
    return ArcConfig(top_marks, bottom_marks, tuple(arcs))


def _require_round(nd: dsl.NamedDiagram) -> RoundSurgeryDiagram:
    if nd.kind != "round":
        raise SemanticError(f"diagram {nd.name!r} is not a round surgery diagram")
    return nd.diagram


def _require_contact(nd: dsl.NamedDiagram) -> ContactSurgeryDiagram:
    if nd.kind != "contact":
        raise SemanticError(f"diagram {nd.name!r} is not a contact surgery diagram")
    return nd.diagram


def _tight_count_json(count) -> dict:
    data = {"kind": count.kind}
    if count.value is not None:
        data["value"] = count.value
    if count.reason is not None:
        data["reason"] = count.reason
    return data


def _config_json(cfg: ArcConfig) -> dict:
    arcs = []
    for arc in cfg.arcs:
        if isinstance(arc, TraversingArc):
            arcs.append({"type": "traversing", "top": arc.top, "bottom": arc.bottom,
                         "winding": arc.winding})
        else:
            arcs.append({"type": "parallel", "side": arc.side, "start": arc.start,
                         "end": arc.end})
    return {"top_marks": cfg.top_marks, "bottom_marks": cfg.bottom_marks, "arcs": arcs}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crsdiag",
        description="Contact Dehn / contact round surgery diagram calculator",
    )
    parser.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_file(p):
        p.add_argument("--diagram", help="diagram name inside the file")
        p.add_argument("file", help="diagram file")

    with_file(sub.add_parser("parse", help="parse and print the canonical JSON form"))
    p = sub.add_parser("invariants", help="classical invariants of fronts")
    p.add_argument("--word", help="analyze a bare front word instead of a file")
    p.add_argument("--diagram")
    p.add_argument("file", nargs="?")
    with_file(sub.add_parser("homology", help="first homology of the surgered manifold"))
    p = sub.add_parser("to-round", help="convert a (+-1)-diagram into nice joint pairs")
    p.add_argument("--k", type=int, default=1, help="round 1-surgery coefficient on every pair")
    p.add_argument("--gadget-m", type=int, default=1, help="gadget parameter")
    p.add_argument("--gadget-m2", type=int, default=None, help="second gadget parameter")
    with_file(p)
    with_file(sub.add_parser("to-pm1", help="convert nice joint pairs back to a (+-1)-diagram"))
    with_file(sub.add_parser("check-nice", help="niceness report per joint pair"))
    with_file(sub.add_parser("fillable", help="sufficient fillability condition"))
    p = sub.add_parser("cf", help="negative continued fraction of a slope")
    p._negative_number_matcher = _NEGATIVE_SLOPE
    p.add_argument("slope", help="rational < -1, e.g. -5/2")
    p = sub.add_parser("count-tight", help="count tight structures on a thickened torus")
    p._negative_number_matcher = _NEGATIVE_SLOPE
    p.add_argument("--slope0", required=True)
    p.add_argument("--slope1", required=True)
    p.add_argument("--twisting", type=int, default=0)
    p.add_argument("--ndiv", type=int, default=2, help="dividing curves per boundary torus")
    p = sub.add_parser("normalize-slopes", help="normalize a slope pair via SL(2,Z)")
    p._negative_number_matcher = _NEGATIVE_SLOPE
    p.add_argument("--slope0", required=True)
    p.add_argument("--slope1", required=True)
    p = sub.add_parser("enum-configs", help="enumerate annulus arc configurations")
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--max-winding", type=int, required=True)
    p = sub.add_parser("glue-annuli", help="glue two arc systems into a torus")
    p.add_argument("--top-marks", type=int, required=True)
    p.add_argument("--bottom-marks", type=int, required=True)
    p.add_argument("--a", required=True, help="arcs, e.g. 'T(0,0,0) T(1,1,0)'")
    p.add_argument("--b", required=True, help="arcs, e.g. 'P(top,0,1) P(bottom,0,1)'")
    p.add_argument("--offset-top", type=int, default=0)
    p.add_argument("--offset-bottom", type=int, default=0)
    p = sub.add_parser("gadget", help="cosmetic unknot gadget diagram")
    p.add_argument("--m", type=int, required=True)
    return parser


def _run(args) -> dict:
    if args.command == "parse":
        with open(args.file, "r", encoding="utf-8") as handle:
            df = dsl.parse_file(handle.read())
        if args.diagram is not None:
            return {"diagrams": [dsl.diagram_json(df.get(args.diagram))]}
        return {"diagrams": [dsl.diagram_json(nd) for nd in df.diagrams]}

    if args.command == "invariants":
        if args.word is not None:
            word = parse_front_word(args.word)
            front = OrientedFront.forward(word)
            inv = classical_invariants(front)
            return {
                "word": str(word),
                "components": [
                    {
                        "id": i,
                        "tb": c.tb,
                        "rot": c.rot,
                        "self_writhe": c.self_writhe,
                        "cusps_up": c.cusps_up,
                        "cusps_down": c.cusps_down,
                    }
                    for i, c in enumerate(inv.components)
                ],
                "lk": [[a, b, v] for a, b, v in inv.lk.pairs()],
            }
        if args.file is None:
            raise SemanticError("invariants needs a file or --word")
        nd = _load(args.file, args.diagram)
        return {
            "components": [
                {"label": c.label, "tb": c.tb, "rot": c.rot}
                for c in sorted(nd.diagram.components, key=lambda c: c.label)
            ]
        }

    if args.command == "homology":
        nd = _load(args.file, args.diagram)
        if nd.kind == "contact":
            groups = [h1_dehn(nd.diagram)]
        else:
            groups = h1_round_diagram(nd.diagram)
        return {"components": [_h1_json(g) for g in groups]}

    if args.command == "to-round":
        nd = _load(args.file, args.diagram)
        contact = _require_contact(nd)
        rd, plan = pair_pm1_diagram(contact, k=args.k, gadget_m=args.gadget_m,
                                    gadget_m2=args.gadget_m2)
        named = dsl.named_from_round(nd.name, rd)
        return {
            "diagrams": [dsl.diagram_json(named)],
            "plan": {
                "case_id": plan.case_id,
                "gadgets": [
                    {"m": g.m, "labels": [c.label for c in g.diagram.components]}
                    for g in plan.gadgets
                ],
                "pairs": [
                    {"a": p.label_a, "b": p.label_b, "round1": p.round1_coeff,
                     "round2": str(p.round2_coeff)}
                    for p in plan.pairs
                ],
            },
            "dsl": dsl.print_file(dsl.DiagramFile((named,))),
        }

    if args.command == "to-pm1":
        nd = _load(args.file, args.diagram)
        contact = joint_pairs_to_pm1(_require_round(nd))
        return {"diagrams": [dsl.diagram_json(dsl.named_from_contact(nd.name, contact))]}

    if args.command == "check-nice":
        rd = _require_round(_load(args.file, args.diagram))
        reports = []
        for idx in range(len(rd.round1)):
            entry = {"index": idx, "pair": list(rd.round1[idx].pair)}
            try:
                report = check_nice(rd, idx)
            except NoJointPartner:
                entry.update({"nice": False, "reasons": ["no joint round 2-surgery"]})
            else:
                entry.update({
                    "r1_equal": report.equal_coefficients,
                    "r2_pm1": report.r2_is_pm1,
                    "layer_standard": report.layer_is_standard,
                    "nice": report.nice,
                    "reasons": list(report.reasons),
                })
            reports.append(entry)
        return {"pairs": reports}

    if args.command == "fillable":
        rd = _require_round(_load(args.file, args.diagram))
        return {"fillable": is_fillable_sufficient(rd)}

    if args.command == "cf":
        slope = SlopeQ.parse(args.slope)
        return {"cf": list(neg_cf(slope).coefficients)}

    if args.command == "count-tight":
        s0 = SlopeQ.parse(args.slope0)
        s1 = SlopeQ.parse(args.slope1)
        matrix, image0, image1 = normalize_slopes(s0, s1)
        count = honda_count(
            BoundaryData.of(args.ndiv, image0, Basis.LAYER),
            BoundaryData.of(args.ndiv, image1, Basis.LAYER),
            args.twisting,
        )
        return {
            "matrix": [[matrix.a, matrix.b], [matrix.c, matrix.d]],
            "normalized": [str(image0), str(image1)],
            "count": _tight_count_json(count),
        }

    if args.command == "normalize-slopes":
        s0 = SlopeQ.parse(args.slope0)
        s1 = SlopeQ.parse(args.slope1)
        matrix, image0, image1 = normalize_slopes(s0, s1)
        return {
            "matrix": [[matrix.a, matrix.b], [matrix.c, matrix.d]],
            "images": [str(image0), str(image1)],
        }

    if args.command == "enum-configs":
        configs = enumerate_configurations(args.n0, args.n1, args.max_winding)
        return {"count": len(configs), "configs": [_config_json(c) for c in configs]}

    if args.command == "glue-annuli":
        a = _parse_arcs(args.a, args.top_marks, args.bottom_marks)
        b = _parse_arcs(args.b, args.top_marks, args.bottom_marks)
        glued = glue_annuli(a, b, args.offset_top, args.offset_bottom)
        return {
            "curves": [
                {"h": c.h, "v": c.v,
                 "arcs": [[tag, idx, forward] for tag, idx, forward in c.arcs]}
                for c in glued.curves
            ],
            "overtwisted": giroux_overtwisted(glued),
        }

    if args.command == "gadget":
        gadget = kirby1_gadget(args.m)
        named = dsl.named_from_contact("gadget", gadget)
        return {
            "diagrams": [dsl.diagram_json(named)],
            "selftest": {
                "determinant": det(linking_matrix(gadget)),
                "h1": _h1_json(h1_dehn(gadget)),
            },
        }

    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        payload = _run(args)
    except DslSyntaxError as exc:
        _emit({"error": {"code": EXIT_PARSE, "kind": type(exc).__name__,
                         "message": exc.message, "line": exc.line, "col": exc.col}},
              args.pretty)
        return EXIT_PARSE
    except SemanticError as exc:
        error = {"code": EXIT_SEMANTIC, "kind": type(exc).__name__, "message": str(exc)}
        if exc.line is not None:
            error["line"] = exc.line
            error["col"] = exc.col
        _emit({"error": error}, args.pretty)
        return EXIT_SEMANTIC
    except DiagramError as exc:
        _emit({"error": {"code": EXIT_SEMANTIC, "kind": type(exc).__name__,
                         "message": str(exc)}}, args.pretty)
        return EXIT_SEMANTIC
    except GadgetSelfTestFailed as exc:
        _emit({"error": {"code": EXIT_INTERNAL, "kind": type(exc).__name__,
                         "message": str(exc)}}, args.pretty)
        return EXIT_INTERNAL
    except OSError as exc:
        _emit({"error": {"code": EXIT_SEMANTIC, "kind": "IOError", "message": str(exc)}},
              args.pretty)
        return EXIT_SEMANTIC
    _emit(payload, args.pretty)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
