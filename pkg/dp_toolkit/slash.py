"""Feasible slash S:Γ|α over immediately derivable sequents, and i.d.a. base sets."""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Set

from .deduction import NjDerivation, sequents
from .horn import forward_closure
from .syntax import Atom, Bottom, Cedent, Conj, Disj, Formula, Impl, Sequent, analysis_set

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SlashJudgment:
    base: frozenset
    context: Cedent
    formula: Formula
    holds: bool
    immediately_derivable: bool


class SlashEvaluator:
    """Evaluates S:Γ|α for a fixed base S and context Γ.

    The i.d. prerequisite (some subsequent of Γ⇒α is i.d. from S) is read off one forward
    closure of Γ through S; results are memoized per formula.
    """

    def __init__(self, base: Iterable[Sequent], context: Cedent):
        self.base = frozenset(base)
        self.context = context
        self.closure = forward_closure(self.base, context)
        self.memo: Dict[Formula, bool] = {}
        self.order: List[Formula] = []

    def immediately_derivable(self, f: Formula) -> bool:
        return f in self.closure.via_base

    def holds(self, f: Formula) -> bool:
        cached = self.memo.get(f)
        if cached is not None:
            return cached

        result = self.immediately_derivable(f)
        if result:
            if isinstance(f, (Atom, Bottom)):
                pass
            elif isinstance(f, Impl):
                result = (not self.holds(f.left)) or self.holds(f.right)
            elif isinstance(f, Conj):
                result = self.holds(f.left) and self.holds(f.right)
            elif isinstance(f, Disj):
                result = self.holds(f.left) or self.holds(f.right)

        self.memo[f] = result
        self.order.append(f)
        return result

    def holds_cedent(self, cedent: Iterable[Formula]) -> bool:
        return all(self.holds(f) for f in cedent)

    def trace(self) -> List[SlashJudgment]:
        """Judgments in evaluation order (subformulas before the formulas using them)."""
        return [
            SlashJudgment(self.base, self.context, f, self.memo[f], self.immediately_derivable(f))
            for f in self.order
        ]


def slash_eval(base: Iterable[Sequent], context: Cedent, f: Formula) -> bool:
    return SlashEvaluator(base, context).holds(f)


def slash_cedent(base: Iterable[Sequent], context: Cedent, cedent: Iterable[Formula]) -> bool:
    """S:Γ|Δ, i.e. S:Γ|α for every α in Δ."""
    return SlashEvaluator(base, context).holds_cedent(cedent)


def build_ida_base(d: NjDerivation) -> Set[Sequent]:
    """Sequents of d, Γ0⇒γ for γ in Γ0, and the analysis sets of the members of Γ0."""
    gamma0 = d.antecedent
    base = set(sequents(d))
    for gamma in gamma0:
        base.add(Sequent(gamma0, gamma))
        base.update(analysis_set(gamma))
    logger.debug(f"i.d.a. base for {d.conclusion}: {len(base)} sequents")
    return base


__all__ = ["SlashJudgment", "SlashEvaluator", "slash_eval", "slash_cedent", "build_ida_base"]
