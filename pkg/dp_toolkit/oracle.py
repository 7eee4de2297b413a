"""Validity oracles: contraction-free intuitionistic search and classical truth tables.

The intuitionistic search uses the terminating calculus G4ip; every rule decreases a
well-founded multiset measure, so backward search needs no loop check.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

from .constants import DEFAULT_ORACLE_CAP, DEFAULT_TRUTH_TABLE_ATOMS
from .exceptions import OracleCapExceeded
from .syntax import Atom, Bottom, Conj, Disj, Formula, Impl, Sequent, atoms_of, formula_size

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleVerdict:
    valid: bool
    effort: int

    def __bool__(self) -> bool:
        return self.valid


def sequent_size(s: Sequent) -> int:
    return formula_size(s.succedent) + sum(formula_size(f) for f in s.antecedent)


class _G4ip:
    def __init__(self):
        self.memo: Dict[Tuple[FrozenSet[Formula], Formula], bool] = {}
        self.effort = 0

    def prove(self, gamma: FrozenSet[Formula], goal: Formula) -> bool:
        key = (gamma, goal)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        self.effort += 1
        result = self._prove(gamma, goal)
        self.memo[key] = result
        return result

    def _prove(self, gamma: FrozenSet[Formula], goal: Formula) -> bool:
        if goal in gamma or any(isinstance(f, Bottom) for f in gamma):
            return True

        ordered = sorted(gamma, key=lambda f: f.text)

        # invertible left rules
        for f in ordered:
            rest = gamma - {f}
            if isinstance(f, Conj):
                return self.prove(rest | {f.left, f.right}, goal)
            if isinstance(f, Disj):
                return self.prove(rest | {f.left}, goal) and self.prove(rest | {f.right}, goal)
            if isinstance(f, Impl):
                a, b = f.left, f.right
                if isinstance(a, Bottom):
                    return self.prove(rest, goal)
                if isinstance(a, Atom) and a in gamma:
                    return self.prove(rest | {b}, goal)
                if isinstance(a, Conj):
                    return self.prove(rest | {Impl(a.left, Impl(a.right, b))}, goal)
                if isinstance(a, Disj):
                    return self.prove(rest | {Impl(a.left, b), Impl(a.right, b)}, goal)

        # invertible right rules
        if isinstance(goal, Conj):
            return self.prove(gamma, goal.left) and self.prove(gamma, goal.right)
        if isinstance(goal, Impl):
            return self.prove(gamma | {goal.left}, goal.right)

        # non-invertible choices
        if isinstance(goal, Disj):
            if self.prove(gamma, goal.left) or self.prove(gamma, goal.right):
                return True
        for f in ordered:
            if isinstance(f, Impl) and isinstance(f.left, Impl):
                c, d, b = f.left.left, f.left.right, f.right
                rest = gamma - {f}
                if self.prove(rest | {Impl(d, b)}, Impl(c, d)) and self.prove(rest | {b}, goal):
                    return True
        return False


def ipc_valid(s: Sequent, cap: int = DEFAULT_ORACLE_CAP) -> OracleVerdict:
    """Decide intuitionistic validity of a sequent by G4ip backward search."""
    size = sequent_size(s)
    if size > cap:
        raise OracleCapExceeded(f"Sequent has {size} connectives, cap is {cap}", size=size, cap=cap)
    search = _G4ip()
    valid = search.prove(s.antecedent.formulas, s.succedent)
    logger.debug(f"oracle: {s} -> {valid} ({search.effort} nodes)")
    return OracleVerdict(valid, search.effort)


# ---------------------------------------------------------------------------
# Classical semantics
# ---------------------------------------------------------------------------

def evaluate(f: Formula, assignment: Mapping[Atom, bool]) -> bool:
    """Classical value; atoms missing from the assignment are false."""
    if isinstance(f, Atom):
        return bool(assignment.get(f, False))
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Conj):
        return evaluate(f.left, assignment) and evaluate(f.right, assignment)
    if isinstance(f, Disj):
        return evaluate(f.left, assignment) or evaluate(f.right, assignment)
    if isinstance(f, Impl):
        return (not evaluate(f.left, assignment)) or evaluate(f.right, assignment)
    raise TypeError(f"Not a formula: {f!r}")


def _assignments(formulas: Iterable[Formula], max_atoms: int):
    atoms = sorted(set().union(*(atoms_of(f) for f in formulas)), key=lambda a: a.name)
    if len(atoms) > max_atoms:
        raise OracleCapExceeded(f"{len(atoms)} atoms exceed the truth-table limit", size=len(atoms), cap=max_atoms)
    for values in product((False, True), repeat=len(atoms)):
        yield dict(zip(atoms, values))


def classically_valid(s: Sequent, max_atoms: int = DEFAULT_TRUTH_TABLE_ATOMS) -> bool:
    formulas = [s.succedent, *s.antecedent]
    for assignment in _assignments(formulas, max_atoms):
        if all(evaluate(g, assignment) for g in s.antecedent) and not evaluate(s.succedent, assignment):
            return False
    return True


def classically_satisfiable(formulas: Iterable[Formula], max_atoms: int = DEFAULT_TRUTH_TABLE_ATOMS) -> Optional[Dict[Atom, bool]]:
    """A satisfying assignment, or None."""
    items = list(formulas)
    for assignment in _assignments(items, max_atoms):
        if all(evaluate(g, assignment) for g in items):
            return assignment
    return None


__all__ = [
    "OracleVerdict", "ipc_valid", "sequent_size", "evaluate", "classically_valid",
    "classically_satisfiable",
]
