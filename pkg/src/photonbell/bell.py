"""Clauser-Horne statistic and its local-hidden-variable bounds.

    S = P(c1, c2) - P(c1, c2') + P(c1', c2) + P(c1', c2') - P(c1', -) - P(-, c2)

Local hidden variable models require ``-1 <= S <= 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from .amplitude import ProcessKind
from .closed_form import Which, joint, marginal
from .kinematics import check_beta

BOUND_TOL = 1e-12
LOWER_BOUND = -1.0
UPPER_BOUND = 0.0


class Verdict(enum.Enum):
    WITHIN_LHV = "WithinLHV"
    VIOLATES_ABOVE = "ViolatesAbove"
    VIOLATES_BELOW = "ViolatesBelow"


class AngleQuad(NamedTuple):
    """Analyzer angles in radians: ``(chi1, chi2, chi1', chi2')``."""

    chi1: float
    chi2: float
    chi1p: float
    chi2p: float

    @classmethod
    def from_degrees(cls, *angles) -> AngleQuad:
        if len(angles) == 1:
            angles = tuple(angles[0])
        return cls(*(math.radians(float(a)) for a in angles))

    def degrees(self) -> tuple[float, float, float, float]:
        return tuple(math.degrees(a) for a in self)


QUAD_ABOVE = AngleQuad.from_degrees(0, 67, 135, 23)
QUAD_BELOW = AngleQuad.from_degrees(0, 23, 45, 67)

TERM_LABELS = (
    "+P(chi1,chi2)",
    "-P(chi1,chi2')",
    "+P(chi1',chi2)",
    "+P(chi1',chi2')",
    "-P(chi1',-)",
    "-P(-,chi2)",
)


@dataclass(frozen=True)
class SReport:
    s: float
    terms: tuple[float, ...]
    process: ProcessKind
    beta: float
    quad: AngleQuad
    verdict: Verdict

    def labelled_terms(self) -> dict[str, float]:
        return dict(zip(TERM_LABELS, self.terms))


def classify(s: float) -> Verdict:
    """Exact boundary values count as within the bounds."""
    if s > UPPER_BOUND + BOUND_TOL:
        return Verdict.VIOLATES_ABOVE
    if s < LOWER_BOUND - BOUND_TOL:
        return Verdict.VIOLATES_BELOW
    return Verdict.WITHIN_LHV


def s_terms(process, beta: float, chi1, chi2, chi1p, chi2p):
    """The six signed contributions; broadcasts over numpy angle arrays."""
    return (
        joint(process, beta, chi1, chi2),
        -joint(process, beta, chi1, chi2p),
        joint(process, beta, chi1p, chi2),
        joint(process, beta, chi1p, chi2p),
        -marginal(process, beta, chi1p, Which.FIRST),
        -marginal(process, beta, chi2, Which.SECOND),
    )


def s_value(process, beta: float, chi1, chi2, chi1p, chi2p):
    t = s_terms(process, beta, chi1, chi2, chi1p, chi2p)
    return t[0] + t[1] + t[2] + t[3] + t[4] + t[5]


def s_statistic(process, beta: float, q: AngleQuad) -> SReport:
    process = ProcessKind.parse(process)
    beta = check_beta(beta)
    q = AngleQuad(*q)
    terms = tuple(float(t) for t in s_terms(process, beta, *q))
    s = terms[0] + terms[1] + terms[2] + terms[3] + terms[4] + terms[5]
    return SReport(s, terms, process, beta, q, classify(s))


def s_beta_scan(process, q: AngleQuad, betas) -> list[SReport]:
    return [s_statistic(process, b, q) for b in betas]
