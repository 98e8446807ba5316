"""Text format for surgery diagrams: parser, semantic checks, canonical printer.

A file holds named blocks::

    diagram hopf {
      component A { tb = -1; rot = 0; }
      component B { front = "U1 C1"; orient = forward; }
      lk(A, B) = 1;
      contact_surgery A = -1;
      contact_surgery B = -1;
    }

    round_diagram pair {
      component A { tb = -1; rot = 0; }
      component B { tb = -1; rot = 0; }
      lk(A, B) = 1;
      joint_pair (A, B) { r1 = 0, 0; r2 = -1; layer = invariant; }
      round1 (C, D) { r1 = 1, 1; layer = nonrotative(2); }
      round2 E { r2 = 5/2; }
    }

Rationals are written p/q with an optional sign, plain integers abbreviate
n/1, and inf is the infinite coefficient.  `#` starts a line comment.
Front-derived tb/rot win over declared values; a disagreement is a semantic
error.  Parsing canonicalizes (components and statements sorted, layers
normalized), so parse -> print -> parse is the identity and printing is
idempotent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .core import (
    ContactSurgeryDiagram,
    LegendrianComponent,
    LinkingData,
    Round1Spec,
    Round2Spec,
    RoundSurgeryDiagram,
    SlopeQ,
    TightLayerSpec,
    validate_diagram,
)
from .errors import DslSyntaxError, SemanticError
from .front import OrientedFront, classical_invariants, parse_front_word, trace_components

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"[0-9]+")
_PUNCT = "{}()=,;/-"


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "int" | "string" | "punct" | "eof"
    value: str
    line: int
    col: int


def _tokenize(text: str) -> List[Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0 or "\n" in text[i + 1:j]:
                raise DslSyntaxError("unterminated string literal", line, col)
            tokens.append(Token("string", text[i + 1:j], line, col))
            col += j - i + 1
            i = j + 1
            continue
        m = _IDENT.match(text, i)
        if m:
            tokens.append(Token("ident", m.group(0), line, col))
            col += len(m.group(0))
            i = m.end()
            continue
        m = _INT.match(text, i)
        if m:
            tokens.append(Token("int", m.group(0), line, col))
            col += len(m.group(0))
            i = m.end()
            continue
        if ch in _PUNCT:
            tokens.append(Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        raise DslSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass(frozen=True)
class ComponentDecl:
    """Source-level component declaration (kept for faithful reprinting)."""

    label: str
    tb: Optional[int] = None
    rot: Optional[int] = None
    front: Optional[str] = None
    orient: Optional[str] = None


@dataclass(frozen=True)
class NamedDiagram:
    name: str
    kind: str  # "contact" | "round"
    decls: tuple
    diagram: object  # ContactSurgeryDiagram | RoundSurgeryDiagram


@dataclass(frozen=True)
class DiagramFile:
    diagrams: tuple

    def get(self, name: Optional[str] = None) -> NamedDiagram:
        if name is None:
            if len(self.diagrams) != 1:
                raise SemanticError(
                    f"file holds {len(self.diagrams)} diagrams; select one by name"
                )
            return self.diagrams[0]
        for nd in self.diagrams:
            if nd.name == name:
                return nd
        raise SemanticError(f"no diagram named {name!r}")


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str):
        tok = self.peek()
        raise DslSyntaxError(message, tok.line, tok.col)

    def expect_punct(self, ch: str) -> Token:
        tok = self.next()
        if tok.kind != "punct" or tok.value != ch:
            raise DslSyntaxError(f"expected {ch!r}, found {tok.value!r}", tok.line, tok.col)
        return tok

    def expect_ident(self, value: Optional[str] = None) -> Token:
        tok = self.next()
        if tok.kind != "ident" or (value is not None and tok.value != value):
            want = value if value is not None else "an identifier"
            raise DslSyntaxError(f"expected {want!r}, found {tok.value!r}", tok.line, tok.col)
        return tok

    def parse_sint(self) -> int:
        tok = self.next()
        negative = False
        if tok.kind == "punct" and tok.value == "-":
            negative = True
            tok = self.next()
        if tok.kind != "int":
            raise DslSyntaxError(f"expected an integer, found {tok.value!r}", tok.line, tok.col)
        value = int(tok.value)
        return -value if negative else value

    def parse_slope(self) -> SlopeQ:
        tok = self.peek()
        if tok.kind == "ident" and tok.value == "inf":
            self.next()
            return SlopeQ.infinity()
        p = self.parse_sint()
        if self.peek().kind == "punct" and self.peek().value == "/":
            self.next()
            q = self.parse_sint()
            if p == 0 and q == 0:
                raise DslSyntaxError("0/0 is not a coefficient", tok.line, tok.col)
            return SlopeQ.of(p, q)
        return SlopeQ.of(p, 1)

    def parse_layer(self) -> TightLayerSpec:
        tok = self.expect_ident()
        if tok.value == "invariant":
            return TightLayerSpec.invariant().normalized()
        if tok.value not in ("nonrotative", "rotative_plus", "rotative_minus"):
            raise DslSyntaxError(f"unknown layer {tok.value!r}", tok.line, tok.col)
        self.expect_punct("(")
        value = self.parse_sint()
        self.expect_punct(")")
        try:
            if tok.value == "nonrotative":
                return TightLayerSpec.nonrotative(value)
            if tok.value == "rotative_plus":
                return TightLayerSpec.rotative_plus(value)
            return TightLayerSpec.rotative_minus(value)
        except AssertionError:
            raise DslSyntaxError(f"bad layer parameter {value}", tok.line, tok.col) from None

    def parse_file(self) -> DiagramFile:
        diagrams = []
        names = set()
        while self.peek().kind != "eof":
            tok = self.expect_ident()
            if tok.value not in ("diagram", "round_diagram"):
                raise DslSyntaxError(
                    f"expected 'diagram' or 'round_diagram', found {tok.value!r}",
                    tok.line, tok.col,
                )
            name = self.expect_ident().value
            if name in names:
                raise SemanticError(f"diagram name {name!r} repeats", tok.line, tok.col)
            names.add(name)
            if tok.value == "diagram":
                diagrams.append(self._parse_contact(name))
            else:
                diagrams.append(self._parse_round(name))
        return DiagramFile(tuple(diagrams))

    # --- block parsers ----------------------------------------------------

    def _parse_component(self) -> ComponentDecl:
        label_tok = self.expect_ident()
        self.expect_punct("{")
        fields = {}
        while not (self.peek().kind == "punct" and self.peek().value == "}"):
            key = self.expect_ident()
            if key.value not in ("tb", "rot", "front", "orient"):
                raise DslSyntaxError(f"unknown component field {key.value!r}", key.line, key.col)
            if key.value in fields:
                raise SemanticError(f"field {key.value!r} repeats", key.line, key.col)
            self.expect_punct("=")
            if key.value in ("tb", "rot"):
                fields[key.value] = self.parse_sint()
            elif key.value == "front":
                tok = self.next()
                if tok.kind != "string":
                    raise DslSyntaxError("front takes a quoted word", tok.line, tok.col)
                fields["front"] = tok.value
            else:
                tok = self.expect_ident()
                if tok.value not in ("forward", "reverse"):
                    raise DslSyntaxError("orient is 'forward' or 'reverse'", tok.line, tok.col)
                fields["orient"] = tok.value
            self.expect_punct(";")
        self.expect_punct("}")
        return ComponentDecl(label_tok.value, fields.get("tb"), fields.get("rot"),
                             fields.get("front"), fields.get("orient"))

    def _parse_pair(self) -> Tuple[str, str]:
        self.expect_punct("(")
        a = self.expect_ident().value
        self.expect_punct(",")
        b = self.expect_ident().value
        self.expect_punct(")")
        return a, b

    def _parse_surgery_block(self, want_r1: bool, want_r2: bool):
        self.expect_punct("{")
        r1 = r2 = layer = None
        while not (self.peek().kind == "punct" and self.peek().value == "}"):
            key = self.expect_ident()
            self.expect_punct("=")
            if key.value == "r1" and want_r1:
                if r1 is not None:
                    raise SemanticError("field 'r1' repeats", key.line, key.col)
                first = self.parse_sint()
                self.expect_punct(",")
                second = self.parse_sint()
                r1 = (first, second)
            elif key.value == "r2" and want_r2:
                if r2 is not None:
                    raise SemanticError("field 'r2' repeats", key.line, key.col)
                r2 = self.parse_slope()
            elif key.value == "layer" and want_r1:
                if layer is not None:
                    raise SemanticError("field 'layer' repeats", key.line, key.col)
                layer = self.parse_layer()
            else:
                raise DslSyntaxError(f"unknown field {key.value!r} here", key.line, key.col)
            self.expect_punct(";")
        self.expect_punct("}")
        if want_r1 and r1 is None:
            self.fail("block needs an 'r1' field")
        if want_r2 and r2 is None:
            self.fail("block needs an 'r2' field")
        return r1, r2, layer if layer is not None else TightLayerSpec.invariant().normalized()

    def _parse_contact(self, name: str) -> NamedDiagram:
        self.expect_punct("{")
        decls: List[ComponentDecl] = []
        linking: List[Tuple[str, str, int]] = []
        surgeries = {}
        while not (self.peek().kind == "punct" and self.peek().value == "}"):
            tok = self.expect_ident()
            if tok.value == "component":
                decls.append(self._parse_component())
            elif tok.value == "lk":
                a, b = self._parse_pair()
                self.expect_punct("=")
                value = self.parse_sint()
                self.expect_punct(";")
                if a == b:
                    raise SemanticError(f"self-linking lk({a}, {a}) is not allowed", tok.line, tok.col)
                linking.append((a, b, value))
            elif tok.value == "contact_surgery":
                label = self.expect_ident().value
                self.expect_punct("=")
                slope = self.parse_slope()
                self.expect_punct(";")
                if label in surgeries:
                    raise SemanticError(f"component {label!r} has two coefficients", tok.line, tok.col)
                surgeries[label] = slope
            else:
                raise DslSyntaxError(f"unknown statement {tok.value!r}", tok.line, tok.col)
        self.expect_punct("}")
        components = _resolve_components(decls)
        diagram = ContactSurgeryDiagram(
            components=tuple(components),
            linking=_build_linking(linking),
            coefficients=surgeries,
        )
        _raise_violations(diagram)
        return NamedDiagram(name, "contact", _sorted_decls(decls), diagram)

    def _parse_round(self, name: str) -> NamedDiagram:
        self.expect_punct("{")
        decls: List[ComponentDecl] = []
        linking: List[Tuple[str, str, int]] = []
        joints = []      # (pair, r1, layer, r2)
        standalone1 = [] # (pair, r1, layer)
        standalone2 = [] # (knot, r2)
        while not (self.peek().kind == "punct" and self.peek().value == "}"):
            tok = self.expect_ident()
            if tok.value == "component":
                decls.append(self._parse_component())
            elif tok.value == "lk":
                a, b = self._parse_pair()
                self.expect_punct("=")
                value = self.parse_sint()
                self.expect_punct(";")
                if a == b:
                    raise SemanticError(f"self-linking lk({a}, {a}) is not allowed", tok.line, tok.col)
                linking.append((a, b, value))
            elif tok.value == "joint_pair":
                pair = self._parse_pair()
                r1, r2, layer = self._parse_surgery_block(want_r1=True, want_r2=True)
                joints.append((pair, r1, layer, r2))
            elif tok.value == "round1":
                pair = self._parse_pair()
                r1, _r2, layer = self._parse_surgery_block(want_r1=True, want_r2=False)
                standalone1.append((pair, r1, layer))
            elif tok.value == "round2":
                knot = self.expect_ident().value
                _r1, r2, _layer = self._parse_surgery_block(want_r1=False, want_r2=True)
                standalone2.append((knot, r2))
            else:
                raise DslSyntaxError(f"unknown statement {tok.value!r}", tok.line, tok.col)
        self.expect_punct("}")
        components = _resolve_components(decls)

        joints.sort(key=lambda item: item[0])
        standalone1.sort(key=lambda item: item[0])
        standalone2.sort(key=lambda item: item[0])
        round1 = []
        round2 = []
        for pair, r1, layer, r2 in joints:
            idx = len(round1)
            round1.append(Round1Spec(pair, r1[0], r1[1], layer))
            round2.append(Round2Spec(pair[1], r2, joint_with=idx))
        for pair, r1, layer in standalone1:
            round1.append(Round1Spec(pair, r1[0], r1[1], layer))
        for knot, r2 in standalone2:
            round2.append(Round2Spec(knot, r2, joint_with=None))

        diagram = RoundSurgeryDiagram(
            components=tuple(components),
            linking=_build_linking(linking),
            round1=tuple(round1),
            round2=tuple(round2),
        )
        _raise_violations(diagram)
        return NamedDiagram(name, "round", _sorted_decls(decls), diagram)


def _sorted_decls(decls: List[ComponentDecl]) -> tuple:
    return tuple(sorted(decls, key=lambda d: d.label))


def _build_linking(entries) -> LinkingData:
    try:
        return LinkingData(entries)
    except ValueError as exc:
        raise SemanticError(str(exc)) from None


def _raise_violations(diagram) -> None:
    problems = validate_diagram(diagram)
    if problems:
        raise SemanticError("; ".join(v.message for v in problems))


def _resolve_components(decls: List[ComponentDecl]) -> List[LegendrianComponent]:
    seen = set()
    for decl in decls:
        if decl.label in seen:
            raise SemanticError(f"component label {decl.label!r} repeats")
        seen.add(decl.label)
    out = []
    for decl in sorted(decls, key=lambda d: d.label):
        if decl.orient is not None and decl.front is None:
            raise SemanticError(f"component {decl.label!r} has an orient but no front")
        if decl.front is not None:
            word = parse_front_word(decl.front)
            if trace_components(word).component_count != 1:
                raise SemanticError(
                    f"front word of component {decl.label!r} must trace one component"
                )
            orient = decl.orient if decl.orient is not None else "forward"
            invariants = classical_invariants(OrientedFront(word, {0: orient})).components[0]
            if decl.tb is not None and decl.tb != invariants.tb:
                raise SemanticError(
                    f"component {decl.label!r}: declared tb {decl.tb} disagrees with "
                    f"front-derived {invariants.tb}"
                )
            if decl.rot is not None and decl.rot != invariants.rot:
                raise SemanticError(
                    f"component {decl.label!r}: declared rot {decl.rot} disagrees with "
                    f"front-derived {invariants.rot}"
                )
            out.append(LegendrianComponent(decl.label, invariants.tb, invariants.rot))
        else:
            if decl.tb is None:
                raise SemanticError(f"component {decl.label!r} needs tb (or a front)")
            out.append(LegendrianComponent(decl.label, decl.tb, decl.rot if decl.rot is not None else 0))
    return out


def parse_file(text: str) -> DiagramFile:
    return _Parser(text).parse_file()


# --- canonical printer --------------------------------------------------------

def _layer_text(layer: TightLayerSpec) -> str:
    spec = layer.normalized()
    if spec.is_zero_layer():
        return "invariant"
    return f"{spec.kind}({spec.param})"


def _component_text(decl: ComponentDecl) -> str:
    fields = []
    if decl.front is not None:
        fields.append(f'front = "{decl.front}";')
        fields.append(f"orient = {decl.orient if decl.orient is not None else 'forward'};")
    if decl.tb is not None:
        fields.append(f"tb = {decl.tb};")
    if decl.rot is not None:
        fields.append(f"rot = {decl.rot};")
    return f"  component {decl.label} {{ {' '.join(fields)} }}"


def print_diagram(nd: NamedDiagram) -> str:
    lines = []
    keyword = "diagram" if nd.kind == "contact" else "round_diagram"
    lines.append(f"{keyword} {nd.name} {{")
    for decl in nd.decls:
        lines.append(_component_text(decl))
    for a, b, value in nd.diagram.linking.pairs():
        lines.append(f"  lk({a}, {b}) = {value};")
    if nd.kind == "contact":
        for label in sorted(nd.diagram.coefficients):
            lines.append(f"  contact_surgery {label} = {nd.diagram.coefficients[label]};")
    else:
        rd = nd.diagram
        joint_indices = {r2.joint_with for r2 in rd.round2 if r2.joint_with is not None}
        for idx, r1 in enumerate(rd.round1):
            a, b = r1.pair
            body = f"r1 = {r1.coeff_a}, {r1.coeff_b};"
            if idx in joint_indices:
                partner = rd.joint_partner(idx)
                lines.append(
                    f"  joint_pair ({a}, {b}) {{ {body} r2 = {partner.coeff}; "
                    f"layer = {_layer_text(r1.layer)}; }}"
                )
            else:
                lines.append(f"  round1 ({a}, {b}) {{ {body} layer = {_layer_text(r1.layer)}; }}")
        for r2 in rd.round2:
            if r2.joint_with is None:
                lines.append(f"  round2 {r2.knot} {{ r2 = {r2.coeff}; }}")
    lines.append("}")
    return "\n".join(lines)


def print_file(df: DiagramFile) -> str:
    return "\n\n".join(print_diagram(nd) for nd in df.diagrams) + "\n"


def named_from_contact(name: str, d: ContactSurgeryDiagram) -> NamedDiagram:
    decls = tuple(
        ComponentDecl(c.label, c.tb, c.rot)
        for c in sorted(d.components, key=lambda c: c.label)
    )
    ordered = ContactSurgeryDiagram(
        components=tuple(sorted(d.components, key=lambda c: c.label)),
        linking=d.linking,
        coefficients=d.coefficients,
        pm1_only=d.pm1_only,
    )
    return NamedDiagram(name, "contact", decls, ordered)


def named_from_round(name: str, rd: RoundSurgeryDiagram) -> NamedDiagram:
    decls = tuple(
        ComponentDecl(c.label, c.tb, c.rot)
        for c in sorted(rd.components, key=lambda c: c.label)
    )
    ordered = RoundSurgeryDiagram(
        components=tuple(sorted(rd.components, key=lambda c: c.label)),
        linking=rd.linking,
        round1=rd.round1,
        round2=rd.round2,
    )
    return NamedDiagram(name, "round", decls, ordered)


# --- JSON form -----------------------------------------------------------------

def _layer_json(layer: TightLayerSpec) -> dict:
    spec = layer.normalized()
    return {"kind": spec.kind, "param": spec.param, "twisting": spec.twisting}


def diagram_json(nd: NamedDiagram) -> dict:
    comps = []
    for decl in nd.decls:
        semantic = nd.diagram.component(decl.label)
        entry = {"label": decl.label, "tb": semantic.tb, "rot": semantic.rot}
        if decl.front is not None:
            entry["front"] = decl.front
            entry["orient"] = decl.orient if decl.orient is not None else "forward"
        comps.append(entry)
    data = {
        "name": nd.name,
        "kind": nd.kind,
        "components": comps,
        "linking": [[a, b, v] for a, b, v in nd.diagram.linking.pairs()],
    }
    if nd.kind == "contact":
        data["surgeries"] = [
            {"component": label, "coefficient": str(nd.diagram.coefficients[label])}
            for label in sorted(nd.diagram.coefficients)
        ]
    else:
        rd = nd.diagram
        data["round1"] = [
            {
                "pair": list(r1.pair),
                "coefficients": [r1.coeff_a, r1.coeff_b],
                "layer": _layer_json(r1.layer),
            }
            for r1 in rd.round1
        ]
        data["round2"] = [
            {"knot": r2.knot, "coefficient": str(r2.coeff), "joint_with": r2.joint_with}
            for r2 in rd.round2
        ]
    return data
