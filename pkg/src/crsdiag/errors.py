"""Exception types shared across the library.

DiagramError covers everything a caller can provoke with bad input (CLI exit
code 1). DslSyntaxError carries a source position (exit code 2).
GadgetSelfTestFailed signals an internal consistency failure (exit code 3):
a shipped gadget configuration that no longer passes its homology self-test.
"""

from __future__ import annotations


class DiagramError(Exception):
    """Base class for domain-level errors."""


class InvalidMeridian(DiagramError):
    """The curve is not a surgery meridian (its contact-longitude coefficient is not 1)."""


class NoJointPartner(DiagramError):
    """No round 2-surgery spec is joint with the given round 1-surgery spec."""


class UnknownComponent(DiagramError):
    """A referenced component label does not exist (or a pair repeats a label)."""


class InvalidParameter(DiagramError):
    """A numeric argument is outside its allowed range."""


class NotPm1Diagram(DiagramError):
    """The contact surgery diagram has a coefficient outside {+1, -1}."""


class NotNice(DiagramError):
    """A joint pair fails a niceness condition."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"round1[{index}]: {reason}")
        self.index = index
        self.reason = reason


class NotTwoComponent(DiagramError):
    """Standalone round 1-surgery homology requires exactly two components."""


class UnsupportedComposition(DiagramError):
    """The round surgery diagram mixes surgeries outside the supported shapes."""


class DomainError(DiagramError):
    """The argument is outside the mathematical domain of the operation."""


class NotNormalized(DiagramError):
    """Boundary slopes were not normalized (front torus slope must be -1)."""


class MarkMismatch(DiagramError):
    """The two annuli to be glued have different numbers of marked points."""


class EmptyDividingSet(DiagramError):
    """A convex torus with an empty dividing set is not allowed here."""


class UnsupportedLayer(DiagramError):
    """The thickened-torus layer has no combinatorial annulus model in scope."""


class InvalidArcConfig(DiagramError):
    """The arc system violates matching, disjointness or winding consistency."""


class FrontError(DiagramError):
    """Base class for front-word errors."""


class FrontSyntaxError(FrontError):
    """A token of the front word is malformed."""


class PositionError(FrontError):
    """An event addresses a strand position that does not exist."""


class OpenDiagram(FrontError):
    """The front word ends with strands left open."""


class SemanticError(DiagramError):
    """A diagram file violates a semantic rule (unknown label, invariant failure)."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        super().__init__(message)
        self.line = line
        self.col = col


class DslSyntaxError(Exception):
    """A diagram file could not be tokenized/parsed; carries a source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class GadgetSelfTestFailed(Exception):
    """A cosmetic-surgery gadget failed its homology self-test (misconfiguration)."""
