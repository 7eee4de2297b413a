"""Formulas-as-atoms Horn engine: unit propagation, i.d. sequent tests and cut deductions."""

import heapq
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple, Union

from .constants import HornOutcome
from .exceptions import HornEncodingError, PreconditionError
from .syntax import Atom, Bottom, Cedent, Conj, Formula, Impl, Sequent

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HornClause:
    """negatives → positive; positive None is a goal clause."""
    negatives: FrozenSet[Formula] = frozenset()
    positive: Optional[Formula] = None
    origin: Optional[Sequent] = field(default=None, compare=False)

    @property
    def is_empty(self) -> bool:
        return not self.negatives and self.positive is None

    @property
    def text(self) -> str:
        literals = [f"-{f.text}" for f in sorted(self.negatives, key=lambda f: f.text)]
        if self.positive is not None:
            literals.append(self.positive.text)
        return " ".join(literals) if literals else "[]"

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class HornClauseSet:
    clauses: Tuple[HornClause, ...] = ()

    @classmethod
    def of(cls, clauses: Iterable[HornClause]) -> "HornClauseSet":
        seen: Set[HornClause] = set()
        ordered: List[HornClause] = []
        for clause in clauses:
            if clause not in seen:
                seen.add(clause)
                ordered.append(clause)
        return cls(tuple(ordered))

    def __iter__(self) -> Iterator[HornClause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def atoms(self) -> Set[Formula]:
        found: Set[Formula] = set()
        for clause in self.clauses:
            found.update(clause.negatives)
            if clause.positive is not None:
                found.add(clause.positive)
        return found

    @property
    def size(self) -> int:
        return sum(len(c.negatives) + (c.positive is not None) for c in self.clauses)


@dataclass(frozen=True)
class TraceStep:
    unit: Formula
    clause: int  # index of the clause that made ``unit`` a positive unit
    snapshot: int


@dataclass(frozen=True)
class RefutationTrace:
    steps: Tuple[TraceStep, ...]
    outcome: HornOutcome
    empty_clause: Optional[int] = None

    @property
    def refuted(self) -> bool:
        return self.outcome is HornOutcome.REFUTED


class _Propagation:
    """Counter-based positive unit resolution; smallest printed unit first."""

    def __init__(self, h: HornClauseSet):
        self.h = h
        self.remaining = [len(c.negatives) for c in h.clauses]
        self.watch: Dict[Formula, List[int]] = {}
        for index, clause in enumerate(h.clauses):
            for literal in clause.negatives:
                self.watch.setdefault(literal, []).append(index)
        self.derived: Dict[Formula, int] = {}
        self.steps: List[TraceStep] = []
        self.heap: List[Tuple[str, int, Formula]] = []
        self.pushed: Dict[Formula, int] = {}
        self.empty_clause: Optional[int] = None

    def _push(self, formula: Formula, clause: int) -> None:
        if formula in self.pushed:
            return
        self.pushed[formula] = clause
        heapq.heappush(self.heap, (formula.text, clause, formula))

    def run(self, stop_on_empty: bool = True) -> "_Propagation":
        for index, clause in enumerate(self.h.clauses):
            if not clause.negatives:
                if clause.positive is None:
                    self.empty_clause = index
                    if stop_on_empty:
                        return self
                else:
                    self._push(clause.positive, index)

        while self.heap:
            _, _, unit = heapq.heappop(self.heap)
            if unit in self.derived:
                continue
            source = self.pushed[unit]
            self.derived[unit] = source
            self.steps.append(TraceStep(unit, source, len(self.steps)))
            for index in self.watch.get(unit, ()):
                self.remaining[index] -= 1
                if self.remaining[index] == 0:
                    positive = self.h.clauses[index].positive
                    if positive is None:
                        if self.empty_clause is None:
                            self.empty_clause = index
                        if stop_on_empty:
                            return self
                    elif positive not in self.derived:
                        self._push(positive, index)
        return self


def horn_satisfiability(h: HornClauseSet) -> Union[HornOutcome, RefutationTrace]:
    """SATISFIABLE, or the refutation trace of positive unit resolution."""
    state = _Propagation(h).run()
    if state.empty_clause is None:
        logger.debug(f"horn: satisfiable after {len(state.steps)} unit steps")
        return HornOutcome.SATISFIABLE
    logger.debug(f"horn: refuted after {len(state.steps)} unit steps")
    return RefutationTrace(tuple(state.steps), HornOutcome.REFUTED, state.empty_clause)


def minimal_model(h: HornClauseSet) -> Set[Formula]:
    """Atoms forced true by unit propagation (the least model when satisfiable)."""
    return set(_Propagation(h).run(stop_on_empty=False).derived)


def replay_trace(h: HornClauseSet, trace: RefutationTrace) -> bool:
    """Re-apply the unit steps literally (C_p) and confirm the empty clause appears."""
    live: Set[Tuple[FrozenSet[Formula], Optional[Formula]]] = {(c.negatives, c.positive) for c in h.clauses}
    empty = (frozenset(), None)
    if empty in live:
        return trace.refuted and not trace.steps
    for step in trace.steps:
        p = step.unit
        if (frozenset(), p) not in live:
            return False
        updated = set()
        for negatives, positive in live:
            if positive == p:
                continue
            updated.add((negatives - {p}, positive))
        live = updated
        if empty in live:
            return trace.refuted
    return not trace.refuted


# ---------------------------------------------------------------------------
# Cut deductions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CutDeduction:
    conclusion: Sequent
    base: Optional[Sequent] = None
    left: Optional["CutDeduction"] = None
    right: Optional["CutDeduction"] = None

    @classmethod
    def leaf(cls, s: Sequent) -> "CutDeduction":
        return cls(conclusion=s, base=s)

    @classmethod
    def cut(cls, left: "CutDeduction", right: "CutDeduction") -> "CutDeduction":
        """Γ⇒β and β,Δ⇒α give Γ,Δ⇒α."""
        beta = left.conclusion.succedent
        if beta not in right.conclusion.antecedent:
            raise PreconditionError(f"Cut formula {beta} not in right antecedent", operation="cut")
        antecedent = left.conclusion.antecedent.union(right.conclusion.antecedent.remove(beta))
        return cls(conclusion=Sequent(antecedent, right.conclusion.succedent), left=left, right=right)

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def leaves(self) -> Iterator[Sequent]:
        stack: List[CutDeduction] = [self]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                yield node.base  # type: ignore[misc]
            else:
                stack.append(node.right)  # type: ignore[arg-type]
                stack.append(node.left)  # type: ignore[arg-type]

    def size(self) -> int:
        return 1 if self.is_leaf else 1 + self.left.size() + self.right.size()  # type: ignore[union-attr]


def validate_cut_deduction(cd: CutDeduction, base: Iterable[Sequent], target: Sequent) -> bool:
    base_set = base if isinstance(base, (set, frozenset)) else set(base)
    stack = [cd]
    while stack:
        node = stack.pop()
        if node.is_leaf:
            if node.base is None or node.base not in base_set or node.conclusion != node.base:
                return False
            continue
        if node.left is None or node.right is None:
            return False
        beta = node.left.conclusion.succedent
        if beta not in node.right.conclusion.antecedent:
            return False
        expected = node.left.conclusion.antecedent.union(node.right.conclusion.antecedent.remove(beta))
        if node.conclusion != Sequent(expected, node.right.conclusion.succedent):
            return False
        stack.append(node.left)
        stack.append(node.right)
    return cd.conclusion.is_subsequent_of(target)


# ---------------------------------------------------------------------------
# Encodings
# ---------------------------------------------------------------------------

def clause_of_sequent(s: Sequent) -> HornClause:
    return HornClause(s.antecedent.formulas, s.succedent, origin=s)


def clauses_from_sequents(base: Iterable[Sequent]) -> HornClauseSet:
    return HornClauseSet.of(clause_of_sequent(s) for s in base)


def clauses_from_formula(f: Formula) -> List[HornClause]:
    """Decompose a conjunction of Horn formulas over atoms into clauses."""
    clauses: List[HornClause] = []

    def premises(g: Formula) -> List[Formula]:
        if isinstance(g, Conj):
            return premises(g.left) + premises(g.right)
        if isinstance(g, Atom):
            return [g]
        raise HornEncodingError(f"Clause body must be a conjunction of atoms: {g}", formula=g.text)

    def emit(g: Formula, negatives: FrozenSet[Formula]) -> None:
        if isinstance(g, Conj):
            emit(g.left, negatives)
            emit(g.right, negatives)
        elif isinstance(g, Impl):
            emit(g.right, negatives | frozenset(premises(g.left)))
        elif isinstance(g, Atom):
            clauses.append(HornClause(negatives, g))
        elif isinstance(g, Bottom):
            clauses.append(HornClause(negatives, None))
        else:
            raise HornEncodingError(f"Not a Horn formula: {g}", formula=g.text)

    emit(f, frozenset())
    return clauses


def _fresh_atom(used: Iterable[Formula], stem: str = "goal") -> Atom:
    """An atom distinct from every formula in ``used``; formulas are opaque Horn atoms."""
    names = {f.name for f in set(used) if isinstance(f, Atom)}
    name = f"_{stem}_"
    while name in names:
        name = "_" + name
    return Atom(name)


# ---------------------------------------------------------------------------
# Immediate derivability
# ---------------------------------------------------------------------------

@dataclass
class ClosureResult:
    """Formulas derivable from hypotheses by chaining base sequents."""
    derived: Set[Formula]
    via_base: Dict[Formula, CutDeduction]
    hypotheses: Cedent

    def id_deduction(self, succedent: Formula) -> Optional[CutDeduction]:
        return self.via_base.get(succedent)


def _reconstruct(
    clause: HornClause, proofs: Dict[Formula, Optional[CutDeduction]]
) -> CutDeduction:
    """Cut the proofs of the clause body into the leaf of its base sequent.

    Hypothesis units have proof None and stay in the antecedent.
    """
    assert clause.origin is not None
    cd = CutDeduction.leaf(clause.origin)
    for premise in sorted(clause.negatives, key=lambda f: f.text):
        proof = proofs[premise]
        if proof is not None:
            cd = CutDeduction.cut(proof, cd)
    return cd


def forward_closure(base: Iterable[Sequent], hypotheses: Cedent) -> ClosureResult:
    """Propagate hypothesis units through base sequents, building a cut deduction per formula."""
    base_clauses = clauses_from_sequents(base)
    hyp_clauses = [HornClause(frozenset(), f) for f in hypotheses.ordered()]
    h = HornClauseSet(tuple(hyp_clauses) + base_clauses.clauses)
    state = _Propagation(h).run(stop_on_empty=False)

    proofs: Dict[Formula, Optional[CutDeduction]] = {}
    via_base: Dict[Formula, CutDeduction] = {}
    for step in state.steps:
        clause = h.clauses[step.clause]
        if clause.origin is None:
            proofs[step.unit] = None
        else:
            cd = _reconstruct(clause, proofs)
            proofs[step.unit] = cd
            via_base[step.unit] = cd

    # a hypothesis that some base sequent also yields is i.d. as well
    for f in hypotheses:
        if f in via_base:
            continue
        for index in _firing_clauses(h, state, f):
            via_base[f] = _reconstruct(h.clauses[index], proofs)
            break

    return ClosureResult(set(state.derived), via_base, hypotheses)


def _firing_clauses(h: HornClauseSet, state: _Propagation, f: Formula) -> Iterator[int]:
    for index, clause in enumerate(h.clauses):
        if clause.origin is not None and clause.positive == f and state.remaining[index] == 0:
            yield index


def id_check(base: Iterable[Sequent], target: Sequent) -> Optional[CutDeduction]:
    """A cut deduction of some subsequent of target from base, or None if there is none."""
    base_list = list(base)
    alpha = target.succedent
    goal = _fresh_atom([alpha, *target.antecedent, *(f for s in base_list for f in (s.succedent, *s.antecedent))])

    clauses: List[HornClause] = [HornClause(frozenset(), f) for f in target.antecedent.ordered()]
    for s in base_list:
        clauses.append(clause_of_sequent(s))
        if s.succedent == alpha:
            clauses.append(HornClause(s.antecedent.formulas, goal, origin=s))
    clauses.append(HornClause(frozenset({goal}), None))
    h = HornClauseSet.of(clauses)

    result = horn_satisfiability(h)
    if not isinstance(result, RefutationTrace):
        return None

    proofs: Dict[Formula, Optional[CutDeduction]] = {}
    for step in result.steps:
        clause = h.clauses[step.clause]
        proofs[step.unit] = None if clause.origin is None else _reconstruct(clause, proofs)

    certificate = proofs.get(goal)
    if certificate is None:
        raise PreconditionError("Refutation did not pass through the goal", operation="id_check")
    logger.debug(f"id_check: {target} via {certificate.conclusion}")
    return certificate


def is_id(base: Iterable[Sequent], target: Sequent) -> bool:
    return id_check(base, target) is not None


__all__ = [
    "HornClause", "HornClauseSet", "TraceStep", "RefutationTrace", "CutDeduction", "ClosureResult",
    "horn_satisfiability", "minimal_model", "replay_trace", "validate_cut_deduction",
    "clause_of_sequent", "clauses_from_sequents", "clauses_from_formula", "forward_closure",
    "id_check", "is_id",
]
