"""Conversion between contact (+-1)-surgery diagrams and round surgery diagrams.

Direction one (pair_pm1_diagram) groups the components of a (+-1)-diagram
into nice joint pairs, two at a time within each coefficient class.  When a
coefficient class has odd size, a cosmetic unknot gadget representing the
standard tight 3-sphere is inserted first; the gadget sizes follow the four
parity cases of the counts (n1, n2) = (#(+1), #(-1)):

1. even/even: no gadget;
2. odd/even: one gadget on 2m components plus its +1 unknot;
3. even/odd: two gadgets, sized 2*m1 + 1 and 2*m2;
4. odd/odd: one gadget sized 2m + 1.

Direction two (joint_pairs_to_pm1) reads a diagram of nice joint pairs back
as the contact (+-1)-diagram where both members of a pair carry the pair's
round-2 coefficient.

The cosmetic gadget for parameter m is a contact (m+1)-surgery on an unknot
with tb = -m presented as one contact (+1)-unknot (tb = -m) plus m contact
(-1)-unknots (tb = -m - 1, one right stabilization each).  The shipped
internal linking pattern is the pushoff chain: the (+1)-unknot links each
stabilized copy tb(K) = -m times and two stabilized copies link -m - 1 times
(each is a contact pushoff of the previous one).  The pattern is
configuration, not hard-code, and every construction re-runs the homology
self-test (trivial first homology, unit determinant); a failure aborts with
GadgetSelfTestFailed rather than returning silently wrong output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

from .core import (
    ContactSurgeryDiagram,
    LegendrianComponent,
    LinkingData,
    Round1Spec,
    Round2Spec,
    RoundSurgeryDiagram,
    SlopeQ,
    TightLayerSpec,
    check_nice,
    is_pm1,
    surgery_meridian_coefficient,
    validate_diagram,
)
from .errors import (
    GadgetSelfTestFailed,
    InvalidParameter,
    NoJointPartner,
    NotNice,
    NotPm1Diagram,
    UnknownComponent,
    UnsupportedComposition,
)
from .homology import H1Class, det, h1_dehn, linking_matrix


def pushoff_chain_linking(m: int, i: int, j: int) -> int:
    """Default gadget linking: component 0 is the (+1)-unknot, 1..m the chain."""
    lo, hi = min(i, j), max(i, j)
    assert 0 <= lo < hi <= m
    return -m if lo == 0 else -m - 1


@dataclass(frozen=True)
class GadgetSpec:
    """A cosmetic-surgery gadget: parameter m and the produced diagram."""

    m: int
    diagram: ContactSurgeryDiagram


def kirby1_gadget(
    m: int,
    label_prefix: str = "",
    linking: Callable[[int, int, int], int] = pushoff_chain_linking,
) -> ContactSurgeryDiagram:
    """Contact (+-1)-presentation of the standard tight 3-sphere, 1 + m unknots.

    Component 0 carries tb = -m and coefficient +1; components 1..m carry
    tb = -m - 1 and coefficient -1 (single right stabilizations, rot one more
    than the +1 unknot's).  The result is validated by the homology oracle
    before being returned.
    """
    if m < 1:
        raise InvalidParameter(f"gadget parameter must be a positive integer, got {m}")
    labels = [f"{label_prefix}K{i}" for i in range(m + 1)]
    components = [LegendrianComponent(labels[0], tb=-m, rot=m - 1)]
    components += [LegendrianComponent(labels[i], tb=-m - 1, rot=m) for i in range(1, m + 1)]
    entries = [
        (labels[i], labels[j], linking(m, i, j))
        for i in range(m + 1)
        for j in range(i + 1, m + 1)
    ]
    coefficients = {labels[0]: SlopeQ.of(1)}
    coefficients.update({labels[i]: SlopeQ.of(-1) for i in range(1, m + 1)})
    diagram = ContactSurgeryDiagram(
        components=tuple(components),
        linking=LinkingData(entries),
        coefficients=coefficients,
        pm1_only=True,
    )
    _gadget_self_test(m, diagram)
    return diagram


def _gadget_self_test(m: int, diagram: ContactSurgeryDiagram) -> None:
    determinant = det(linking_matrix(diagram))
    h1 = h1_dehn(diagram)
    if abs(determinant) != 1 or h1 != H1Class.trivial():
        raise GadgetSelfTestFailed(
            f"gadget m={m}: linking determinant {determinant}, first homology {h1}; "
            "the configured linking pattern does not present the 3-sphere"
        )


@dataclass(frozen=True)
class PlannedPair:
    label_a: str
    label_b: str
    round1_coeff: int
    round2_coeff: SlopeQ


@dataclass(frozen=True)
class PairingPlan:
    """How a (+-1)-diagram was turned into joint pairs."""

    case_id: int
    gadgets: tuple  # GadgetSpec, in insertion order
    pairs: tuple    # PlannedPair

    def __post_init__(self):
        assert self.case_id in (1, 2, 3, 4)


def _fresh_prefix(existing: set, index: int) -> str:
    prefix = f"g{index}_"
    while any(label.startswith(prefix) for label in existing):
        prefix = "g" + prefix
    return prefix


def pair_pm1_diagram(
    d: ContactSurgeryDiagram,
    k: int = 1,
    gadget_m: int = 1,
    gadget_m2: Optional[int] = None,
) -> Tuple[RoundSurgeryDiagram, PairingPlan]:
    """Convert a (+-1)-diagram into a diagram of nice contact joint pairs.

    k is the shared round 1-surgery coefficient on every pair; gadget_m (and
    gadget_m2 for the case needing two gadgets) choose the inserted gadget
    parameters.  Gadgets are inserted split from the input (no linking with
    pre-existing components), components with equal coefficients are paired
    two at a time in label order, and each pair's round-2 coefficient is the
    shared contact coefficient.  Every produced pair passes check_nice.
    """
    problems = validate_diagram(d)
    if problems:
        raise UnsupportedComposition("invalid diagram: " + "; ".join(v.message for v in problems))
    if not is_pm1(d):
        raise NotPm1Diagram("every coefficient must be +1 or -1")
    if gadget_m < 1 or (gadget_m2 is not None and gadget_m2 < 1):
        raise InvalidParameter("gadget parameters must be positive integers")
    m2 = gadget_m if gadget_m2 is None else gadget_m2

    plus = SlopeQ.of(1)
    n1 = sum(1 for c in d.coefficients.values() if c == plus)
    n2 = len(d.components) - n1
    odd1, odd2 = n1 % 2 == 1, n2 % 2 == 1
    if not odd1 and not odd2:
        case_id, sizes = 1, []
    elif odd1 and not odd2:
        case_id, sizes = 2, [2 * gadget_m]
    elif not odd1 and odd2:
        case_id, sizes = 3, [2 * gadget_m + 1, 2 * m2]
    else:
        case_id, sizes = 4, [2 * gadget_m + 1]

    components = list(d.components)
    linking = d.linking
    coefficients = dict(d.coefficients)
    existing = set(d.coefficients)
    gadgets = []
    for i, size in enumerate(sizes, start=1):
        prefix = _fresh_prefix(existing, i)
        gadget = kirby1_gadget(size, label_prefix=prefix)
        gadgets.append(GadgetSpec(size, gadget))
        components.extend(gadget.components)
        linking = linking.merged_with(gadget.linking)  # split insertion: no cross linking
        coefficients.update(gadget.coefficients)
        existing.update(gadget.coefficients)

    total_plus = sum(1 for c in coefficients.values() if c == plus)
    total_minus = len(components) - total_plus
    assert total_plus % 2 == 0 and total_minus % 2 == 0, "gadget insertion must even out both counts"

    pool_plus = sorted(lab for lab, c in coefficients.items() if c == plus)
    pool_minus = sorted(lab for lab, c in coefficients.items() if c != plus)
    round1 = []
    round2 = []
    planned = []
    for pool, coeff in ((pool_plus, plus), (pool_minus, SlopeQ.of(-1))):
        for a, b in zip(pool[::2], pool[1::2]):
            idx = len(round1)
            round1.append(Round1Spec((a, b), k, k, TightLayerSpec.invariant()))
            round2.append(Round2Spec(b, coeff, joint_with=idx))
            planned.append(PlannedPair(a, b, k, coeff))

    rd = RoundSurgeryDiagram(tuple(components), linking, tuple(round1), tuple(round2))
    assert not validate_diagram(rd)
    for idx in range(len(rd.round1)):
        assert check_nice(rd, idx).nice, "constructed pairs must be nice"
    return rd, PairingPlan(case_id, tuple(gadgets), tuple(planned))


def joint_pairs_to_pm1(rd: RoundSurgeryDiagram) -> ContactSurgeryDiagram:
    """Read a diagram of nice joint pairs as a contact (+-1)-surgery diagram.

    Each pair with round-2 coefficient m yields contact coefficient m on both
    of its components; components, invariants and linking carry over verbatim.
    """
    problems = validate_diagram(rd)
    if problems:
        raise UnsupportedComposition("invalid diagram: " + "; ".join(v.message for v in problems))
    for j, r2 in enumerate(rd.round2):
        if r2.joint_with is None:
            raise UnsupportedComposition(f"round2[{j}] is not joint with any round 1-surgery")
    paired = set()
    coefficients = {}
    for idx, r1 in enumerate(rd.round1):
        try:
            report = check_nice(rd, idx)
        except NoJointPartner as exc:
            raise NotNice(idx, "no joint round 2-surgery partner") from exc
        if not report.nice:
            raise NotNice(idx, "; ".join(report.reasons))
        partner = rd.joint_partner(idx)
        a, b = r1.pair
        coefficients[a] = partner.coeff
        coefficients[b] = partner.coeff
        paired.update((a, b))
    for c in rd.components:
        if c.label not in paired:
            raise UnsupportedComposition(f"component {c.label!r} is not in any joint pair")
    return ContactSurgeryDiagram(
        components=rd.components,
        linking=rd.linking,
        coefficients=coefficients,
        pm1_only=False,
    )


def adachi_round1(
    pair: Tuple[str, str],
    components: Sequence[LegendrianComponent],
    coefficient: int = 1,
) -> Round1Spec:
    """Round 1-spec realizing the Legendrian round surgery on the given pair.

    The realization glues the invariant neighborhood of the standard convex
    torus and carries identical coefficients on both components; the proof
    value is +1, any other identical integer is accepted via the parameter.
    """
    a, b = pair
    labels = {c.label for c in components}
    if a == b:
        raise UnknownComponent(f"pair must name two distinct components, got {a!r} twice")
    for lab in (a, b):
        if lab not in labels:
            raise UnknownComponent(f"no component labelled {lab!r}")
    return Round1Spec((a, b), coefficient, coefficient, TightLayerSpec.invariant())


def adachi_round2_realize(knot: str, meridian: Tuple[int, int]) -> Round2Spec:
    """Round 2-spec for a surgery meridian a*mu + b*lambda_c on the knot.

    The meridian intersects each dividing curve once (b = 1), so the contact
    round 2-surgery coefficient is the integer a.
    """
    a, b = meridian
    n = surgery_meridian_coefficient(a, b)
    return Round2Spec(knot, SlopeQ.of(n), joint_with=None)


# the shipped linking configuration must present the standard 3-sphere; fail
# loudly at import time rather than deep inside a conversion
kirby1_gadget(1)
