"""Negative continued fractions, slope normalization and tight-layer counts.

Counting tight structures on a thickened torus needs normalized boundary
data: the back torus carries two dividing curves of slope -1 and the front
torus a slope <= -1.  normalize_slopes produces the SL(2,Z) change of frame;
honda_count then dispatches on the classified boundary shape:

* slope < -1, two dividing curves per side, minimal twisting: the finite
  product |(r0+1)(r1+1)...(r_{k-1}+1) r_k| over the negative continued
  fraction expansion of the slope,
* positive twisting with two dividing curves per side: exactly two structures
  per twisting value,
* slopes -1/-1 with two dividing curves and minimal twisting: an infinite
  family indexed by the holonomy integers (Z),
* more than two dividing curves: counts are configuration lists; use
  enumerate_configurations.

Slopes act as projectivized column vectors (q, p) for slope p/q, so SL(2,Z)
acts by plain matrix multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Tuple

from .core import Basis, SlopeQ, TaggedSlope
from .dividing import ArcConfig, ParallelArc, TraversingArc
from .errors import DomainError, NotNormalized


@dataclass(frozen=True)
class NegCF:
    """Negative continued fraction r0 - 1/(r1 - 1/(... - 1/rk)), all ri <= -2."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(r) for r in self.coefficients))
        assert self.coefficients, "the expansion is never empty"
        assert all(r <= -2 for r in self.coefficients)

    def value(self) -> SlopeQ:
        p, q = self.coefficients[-1], 1
        for r in reversed(self.coefficients[:-1]):
            p, q = r * p - q, p  # r - 1/(p/q) = (r*p - q)/p
        return SlopeQ.of(p, q)


def neg_cf(s: SlopeQ) -> NegCF:
    """Unique all-entries-<=-2 expansion of a rational slope < -1."""
    if s.is_infinite:
        raise DomainError("infinite slope has no negative continued fraction")
    if not s < SlopeQ.of(-1):
        raise DomainError(f"slope {s} is not < -1")
    coeffs = []
    p, q = s.p, s.q
    while True:
        r = p // q  # exact floor for integers
        coeffs.append(r)
        rem = p - r * q  # numerator of p/q - r, lies in [0, q)
        if rem == 0:
            break
        p, q = -q, rem  # next level holds -1/(p/q - r)
    expansion = NegCF(tuple(coeffs))
    assert expansion.value() == s, "reconstruction must reproduce the slope exactly"
    return expansion


@dataclass(frozen=True)
class BoundaryData:
    """Dividing-curve data of one boundary torus: count and tagged slope."""

    num_dividing: int
    slope: TaggedSlope

    def __post_init__(self):
        assert self.num_dividing >= 2 and self.num_dividing % 2 == 0

    @staticmethod
    def of(num_dividing: int, slope: SlopeQ, basis: Basis = Basis.LAYER) -> "BoundaryData":
        return BoundaryData(num_dividing, TaggedSlope(slope, basis))


@dataclass(frozen=True)
class UnimodularMatrix:
    """2x2 integer matrix of determinant +1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        assert self.a * self.d - self.b * self.c == 1, "matrix must lie in SL(2,Z)"

    @staticmethod
    def identity() -> "UnimodularMatrix":
        return UnimodularMatrix(1, 0, 0, 1)

    def mul(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def apply(self, s: SlopeQ) -> SlopeQ:
        """Act on the slope p/q as the column vector (q, p)."""
        q, p = s.q, s.p
        new_q = self.a * q + self.b * p
        new_p = self.c * q + self.d * p
        return SlopeQ.of(new_p, new_q)

    def entries(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class TightCount:
    """Result of counting tight structures on the thickened torus.

    kind is "finite" (value set), "two_per_twisting", "infinite_z_indexed" or
    "unsupported" (reason set).
    """

    kind: str
    value: Optional[int] = None
    reason: Optional[str] = None

    @staticmethod
    def finite(value: int) -> "TightCount":
        return TightCount("finite", value=value)

    @staticmethod
    def two_per_twisting() -> "TightCount":
        return TightCount("two_per_twisting")

    @staticmethod
    def infinite_z_indexed() -> "TightCount":
        return TightCount("infinite_z_indexed")

    @staticmethod
    def unsupported(reason: str) -> "TightCount":
        return TightCount("unsupported", reason=reason)


def honda_count(b0: BoundaryData, b1: BoundaryData, twisting: int) -> TightCount:
    """Count tight structures on a thickened torus with the given boundary data.

    Requires normalized slopes: b0 must be -1 and b1 <= -1 (run
    normalize_slopes first).  twisting is the twisting in the thickness
    direction (0 = minimal).
    """
    minus_one = SlopeQ.of(-1)
    if b0.slope.slope != minus_one:
        raise NotNormalized(f"back torus slope is {b0.slope.slope}, not -1")
    s1 = b1.slope.slope
    if s1.is_infinite or not s1 <= minus_one:
        raise NotNormalized(f"front torus slope {s1} is not <= -1")
    if twisting < 0:
        raise DomainError("twisting is a non-negative integer")

    if b0.num_dividing != 2 or b1.num_dividing != 2:
        if s1 == minus_one and twisting == 0:
            return TightCount.unsupported(
                "more than two dividing curves: counts are arc configurations; "
                "use enumerate_configurations"
            )
        return TightCount.unsupported(
            "more than two dividing curves with twisting or slope < -1: "
            "the layer factorization case is out of scope"
        )

    if s1 == minus_one:
        if twisting == 0:
            return TightCount.infinite_z_indexed()
        return TightCount.two_per_twisting()
    if twisting >= 1:
        return TightCount.two_per_twisting()
    rs = neg_cf(s1).coefficients
    product = rs[-1]
    for r in rs[:-1]:
        product *= r + 1
    return TightCount.finite(abs(product))


def _stabilizer_power(n: int) -> UnimodularMatrix:
    """n-th power of the parabolic stabilizer of slope -1 (column (1,-1))."""
    return UnimodularMatrix(1 + n, n, -n, 1 - n)


def _matrix_to_minus_one(s: SlopeQ) -> UnimodularMatrix:
    """Some SL(2,Z) matrix sending the slope s to -1."""
    q, p = s.q, s.p
    # complete the primitive column (q, p) to an SL(2,Z) basis: x*q + y*p = 1
    g, x, y = _xgcd(q, p)
    assert g == 1
    base = UnimodularMatrix(x, y, -p, q)  # sends (q, p) to (1, 0)
    tilt = UnimodularMatrix(1, 0, -1, 1)  # sends (1, 0) to (1, -1)
    return tilt.mul(base)


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_s, s = s, old_s - quotient * s
        old_t, t = t, old_t - quotient * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _candidate_key(m: UnimodularMatrix):
    e = m.entries()
    absolutes = tuple(abs(x) for x in e)
    return (tuple(sorted(absolutes)), absolutes, tuple(-x for x in e))


def normalize_slopes(s0: SlopeQ, s1: SlopeQ) -> Tuple[UnimodularMatrix, SlopeQ, SlopeQ]:
    """Find A in SL(2,Z) with A*s0 = -1 and A*s1 <= -1; returns (A, A*s0, A*s1).

    Among all valid matrices the deterministic representative minimizes the
    sorted tuple of absolute entries (then the unsorted absolute tuple, then
    preferring positive entries), so already-normalized input returns the
    identity.
    """
    base = _matrix_to_minus_one(s0)
    # every solution is (+-) stabilizer_power(n) * base; the validity
    # condition on s1 is linear in n, so scan a window wide enough to contain
    # the key minimum and the validity threshold
    image1 = base.apply(s1)
    sigma = image1.p + image1.q  # constant along the stabilizer orbit
    spread = 64 + 4 * max(abs(x) for x in base.entries())
    if sigma == 0:
        window: Iterable[int] = range(-spread, spread + 1)
    else:
        center = int(-Fraction(image1.q, sigma))  # validity threshold for n
        window = sorted(set(range(-spread, spread + 1))
                        | set(range(center - spread, center + spread + 1)))

    minus_one = SlopeQ.of(-1)
    best = None
    best_key = None
    for n in window:
        candidate = _stabilizer_power(n).mul(base)
        for m in (candidate, UnimodularMatrix(-candidate.a, -candidate.b, -candidate.c, -candidate.d)):
            img1 = m.apply(s1)
            if img1.is_infinite or not img1 <= minus_one:
                continue
            key = _candidate_key(m)
            if best_key is None or key < best_key:
                best, best_key = m, key
    assert best is not None, "a normalizing matrix always exists"
    img0 = best.apply(s0)
    assert img0 == minus_one
    return best, img0, best.apply(s1)


# --- arc configuration enumeration -------------------------------------------

def _noncrossing_matchings(points: List[int]) -> List[List[Tuple[int, int]]]:
    """Non-crossing perfect matchings of a linearly ordered point list."""
    if not points:
        return [[]]
    if len(points) % 2:
        return []
    out = []
    first = points[0]
    for k in range(1, len(points), 2):
        mate = points[k]
        inside = points[1:k]
        outside = points[k + 1:]
        for m_in in _noncrossing_matchings(inside):
            for m_out in _noncrossing_matchings(outside):
                out.append([(first, mate)] + m_in + m_out)
    return out


def _gaps(marks: int, traversing_points: List[int]) -> List[List[int]]:
    """Cyclic runs of non-traversing points between consecutive traversing ones."""
    t = sorted(traversing_points)
    gaps = []
    for i, start in enumerate(t):
        end = t[(i + 1) % len(t)]
        gap = []
        point = (start + 1) % marks
        while point != end:
            gap.append(point)
            point = (point + 1) % marks
        gaps.append(gap)
    return gaps


def _parallel_choices(marks: int, traversing_points: List[int], side: str) -> List[List[ParallelArc]]:
    free = [p for p in range(marks) if p not in set(traversing_points)]
    if not free:
        return [[]]
    per_gap = []
    for gap in _gaps(marks, traversing_points):
        if len(gap) % 2:
            return []
        per_gap.append(_noncrossing_matchings(gap))
    out = [[]]
    for options in per_gap:
        if not options:
            return []
        out = [prefix + [ParallelArc(side, a, b) for a, b in choice]
               for prefix in out for choice in options]
    return out


def enumerate_configurations(n0: int, n1: int, max_winding: int) -> List[ArcConfig]:
    """All annulus arc systems with 2*n0 top and 2*n1 bottom marked points.

    Configurations satisfy: every marked point is one arc endpoint, at least
    two traversing arcs, no closed curves, pairwise disjoint; the traversing
    family winding ranges over [-max_winding, max_winding].  The full set is
    infinite (windings range over Z), so the bound is the caller's.
    """
    if n0 < 1 or n1 < 1:
        raise DomainError("need at least one pair of dividing curves per side")
    if max_winding < 0:
        raise DomainError("max_winding is a non-negative bound")
    top_marks, bottom_marks = 2 * n0, 2 * n1
    out = []
    for t in range(2, min(top_marks, bottom_marks) + 1, 2):
        for tops in combinations(range(top_marks), t):
            top_options = _parallel_choices(top_marks, list(tops), "top")
            if not top_options:
                continue
            for bottoms in combinations(range(bottom_marks), t):
                bottom_options = _parallel_choices(bottom_marks, list(bottoms), "bottom")
                if not bottom_options:
                    continue
                for rho in range(-max_winding, max_winding + 1):
                    arcs_trav = [
                        TraversingArc(tops[i], bottoms[(i + rho) % t], rho)
                        for i in range(t)
                    ]
                    for top_choice in top_options:
                        for bottom_choice in bottom_options:
                            out.append(ArcConfig(
                                top_marks, bottom_marks,
                                tuple(arcs_trav) + tuple(top_choice) + tuple(bottom_choice),
                            ))
    out.sort(key=lambda cfg: cfg.canonical_key())
    return out
