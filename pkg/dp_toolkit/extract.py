"""Disjunction-property witness extraction with checkable certificates."""

import logging
import time
from dataclasses import dataclass
from typing import FrozenSet, Optional, Union

from .constants import ExtractionMethod, Rule
from .deduction import NjDerivation, assert_valid, check_derivation, derive_dk, ex_falso, sequents
from .exceptions import BoundednessViolation, ChoiceVectorError, PreconditionError
from .horn import CutDeduction, id_check, validate_cut_deduction
from .logger import get_toolkit_logger
from .oracle import classically_satisfiable
from .syntax import (
    BOTTOM,
    Cedent,
    ChoiceVector,
    Conj,
    Disj,
    Formula,
    Sequent,
    all_strengthenings,
    neg,
    spd_enumerate,
)
from .slash import build_ida_base

logger = logging.getLogger(__name__)

Certificate = Union[CutDeduction, NjDerivation]


@dataclass(frozen=True)
class ExtractionResult:
    index: int
    certificate: Certificate
    base_used: FrozenSet[Sequent]
    method: ExtractionMethod
    target: Sequent
    choices: Optional[ChoiceVector] = None
    derivation: Optional[NjDerivation] = None

    @property
    def disjunct(self) -> Formula:
        return self.target.succedent

    @property
    def certificate_conclusion(self) -> Sequent:
        return self.certificate.conclusion


def _preconditions(d: NjDerivation) -> Disj:
    assert_valid(d)
    goal = d.succedent
    if not isinstance(goal, Disj):
        raise PreconditionError(f"Succedent {goal} is not a disjunction", operation="extract")
    if not d.antecedent.harrop:
        raise PreconditionError(
            "Antecedent is not Harrop", operation="extract", sequent=d.conclusion.text
        )
    return goal


def _extract(d: NjDerivation, base: FrozenSet[Sequent], method: ExtractionMethod) -> ExtractionResult:
    goal = _preconditions(d)
    gamma = d.antecedent
    start = time.perf_counter()

    if BOTTOM in gamma:
        certificate = ex_falso(NjDerivation(Rule.AX, Sequent(gamma, BOTTOM)), goal.left)
        result = ExtractionResult(0, certificate, base, method, Sequent(gamma, goal.left))
    else:
        result = None
        for index, disjunct in enumerate((goal.left, goal.right)):
            target = Sequent(gamma, disjunct)
            cd = id_check(base, target)
            if cd is not None:
                result = ExtractionResult(index, cd, base, method, target)
                break
        if result is None:
            raise BoundednessViolation(
                "Neither disjunct is immediately derivable", sequent=d.conclusion.text, base_size=len(base)
            )

    get_toolkit_logger().log_extraction(
        method.value, result.index, result.target.text, len(base), (time.perf_counter() - start) * 1000.0
    )
    return result


def extract_bm(d: NjDerivation) -> ExtractionResult:
    """Pick i with Γ⇒α_i i.d. from the sequents of d; α0 is tried first."""
    return _extract(d, frozenset(sequents(d)), ExtractionMethod.BM)


def extract_slash(d: NjDerivation) -> ExtractionResult:
    """As extract_bm over the i.d.a. base of d."""
    return _extract(d, frozenset(build_ida_base(d)), ExtractionMethod.SLASH)


def extract_choice(d: NjDerivation, k: ChoiceVector) -> ExtractionResult:
    """Extract from d(k), the derivation of Γ(k)⇒α0∨α1."""
    assert_valid(d)
    e = spd_enumerate(d.antecedent)
    if len(k) != e.count:
        raise ChoiceVectorError(
            f"Choice vector has {len(k)} bits, antecedent has {e.count} disjunctions",
            expected=e.count,
            actual=len(k),
        )
    dk = derive_dk(d, e, k)
    inner = _extract(dk, frozenset(sequents(dk)), ExtractionMethod.CHOICE)
    return ExtractionResult(
        inner.index, inner.certificate, inner.base_used, ExtractionMethod.CHOICE, inner.target, k, dk
    )


def verify_result(result: ExtractionResult) -> bool:
    cert = result.certificate
    if isinstance(cert, CutDeduction):
        return validate_cut_deduction(cert, result.base_used, result.target)
    return check_derivation(cert).ok and cert.conclusion == result.target


def uniqueness_side_condition(g: Cedent, a0: Formula, a1: Formula) -> bool:
    """Every strengthening Γ(k) together with ¬(α0∧α1) is classically satisfiable."""
    exclusion = neg(Conj(a0, a1))
    for _, strengthened in all_strengthenings(g):
        if classically_satisfiable([*strengthened, exclusion]) is None:
            return False
    return True


__all__ = [
    "ExtractionResult", "Certificate", "extract_bm", "extract_slash", "extract_choice",
    "verify_result", "uniqueness_side_condition",
]
