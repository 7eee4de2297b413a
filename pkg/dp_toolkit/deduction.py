"""NJp derivations: local checking, weakening, grafting and the choice-vector constructions."""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .constants import Direction, Rule
from .exceptions import DerivationCheckError, GraftError, PreconditionError
from .syntax import (
    BOTTOM,
    Atom,
    Bottom,
    Cedent,
    ChoiceVector,
    Conj,
    Disj,
    Formula,
    Impl,
    Sequent,
    SpdEnumeration,
    Steps,
    big_or,
    choice_map,
    strengthen_formula,
)

logger = logging.getLogger(__name__)

NodePath = Tuple[int, ...]


@dataclass(frozen=True)
class NjDerivation:
    rule: Rule
    conclusion: Sequent
    premises: Tuple["NjDerivation", ...] = ()
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_hash", hash((self.rule, self.conclusion, tuple(p._hash for p in self.premises)))
        )

    def __hash__(self) -> int:
        return self._hash

    @property
    def antecedent(self) -> Cedent:
        return self.conclusion.antecedent

    @property
    def succedent(self) -> Formula:
        return self.conclusion.succedent

    def at(self, path: NodePath) -> "NjDerivation":
        node = self
        for index in path:
            node = node.premises[index]
        return node

    def replace_at(self, path: NodePath, replacement: "NjDerivation") -> "NjDerivation":
        if not path:
            return replacement
        head, rest = path[0], path[1:]
        premises = list(self.premises)
        premises[head] = premises[head].replace_at(rest, replacement)
        return NjDerivation(self.rule, self.conclusion, tuple(premises))

    def walk(self) -> Iterator[Tuple[NodePath, "NjDerivation"]]:
        """Pre-order traversal yielding (path, node)."""
        stack: List[Tuple[NodePath, NjDerivation]] = [((), self)]
        while stack:
            path, node = stack.pop()
            yield path, node
            for index in reversed(range(len(node.premises))):
                stack.append((path + (index,), node.premises[index]))


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    path: NodePath = ()
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------

def _local_error(node: NjDerivation) -> Optional[str]:
    rule = node.rule
    if len(node.premises) != rule.arity:
        return f"bad arity: {rule.value} takes {rule.arity} premises, got {len(node.premises)}"

    ant = node.antecedent
    goal = node.succedent
    prem = node.premises

    if rule is Rule.AX:
        if goal in ant:
            return None
        if BOTTOM in ant:
            if isinstance(goal, Atom):
                return None
            return "non-atomic succedent in bottom axiom"
        return "succedent not in antecedent"

    if rule is Rule.IMP_I:
        if not isinstance(goal, Impl):
            return "connective mismatch: impI must conclude an implication"
        if prem[0].antecedent != ant.add(goal.left):
            return "antecedent mismatch: impI premise must add the hypothesis"
        if prem[0].succedent != goal.right:
            return "succedent mismatch in impI"
        return None

    for p in prem[: 1 if rule is Rule.OR_E else len(prem)]:
        if p.antecedent != ant:
            return f"antecedent mismatch in {rule.value}"

    if rule is Rule.OR_E:
        major = prem[0].succedent
        if not isinstance(major, Disj):
            return "connective mismatch: orE major premise is not a disjunction"
        for side, minor in ((major.left, prem[1]), (major.right, prem[2])):
            if minor.antecedent != ant.add(side):
                return "antecedent mismatch: orE minor premise must add its case hypothesis"
            if minor.succedent != goal:
                return "succedent mismatch in orE minor premise"
        return None

    if rule in (Rule.OR_I0, Rule.OR_I1):
        if not isinstance(goal, Disj):
            return "connective mismatch: orI must conclude a disjunction"
        side = goal.left if rule is Rule.OR_I0 else goal.right
        return None if prem[0].succedent == side else "succedent mismatch in orI"

    if rule in (Rule.AND_E0, Rule.AND_E1):
        major = prem[0].succedent
        if not isinstance(major, Conj):
            return "connective mismatch: andE premise is not a conjunction"
        side = major.left if rule is Rule.AND_E0 else major.right
        return None if side == goal else "succedent mismatch in andE"

    if rule is Rule.AND_I:
        if not isinstance(goal, Conj):
            return "connective mismatch: andI must conclude a conjunction"
        if prem[0].succedent != goal.left or prem[1].succedent != goal.right:
            return "succedent mismatch in andI"
        return None

    if rule is Rule.IMP_E:
        major = prem[0].succedent
        if not isinstance(major, Impl):
            return "connective mismatch: impE major premise is not an implication"
        if major.right != goal:
            return "succedent mismatch in impE"
        if prem[1].succedent != major.left:
            return "minor premise of impE does not prove the antecedent of the implication"
        return None

    return f"unknown rule {rule}"


def check_derivation(d: NjDerivation) -> CheckReport:
    """Check every node; report the first failing node in pre-order."""
    seen: Set[int] = set()
    for path, node in d.walk():
        if id(node) in seen:
            continue
        reason = _local_error(node)
        if reason is not None:
            logger.debug(f"check failed at {path}: {reason}")
            return CheckReport(False, path, reason)
        seen.add(id(node))
    return CheckReport(True)


def assert_valid(d: NjDerivation) -> NjDerivation:
    report = check_derivation(d)
    if not report.ok:
        raise DerivationCheckError(
            f"Invalid derivation at node {list(report.path)}: {report.reason}",
            path=report.path,
            reason=report.reason,
        )
    return d


def sequents(d: NjDerivation) -> Set[Sequent]:
    return {node.conclusion for _, node in d.walk()}


def node_count(d: NjDerivation) -> int:
    return sum(1 for _ in d.walk())


def depth(d: NjDerivation) -> int:
    deepest = 0
    for path, _ in d.walk():
        deepest = max(deepest, len(path) + 1)
    return deepest


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def axiom(antecedent: Cedent, f: Formula) -> NjDerivation:
    if f not in antecedent and not (BOTTOM in antecedent and isinstance(f, Atom)):
        raise PreconditionError(f"No axiom concludes {f} from {antecedent}", operation="axiom")
    return NjDerivation(Rule.AX, Sequent(antecedent, f))


def hypothesis(antecedent: Cedent, f: Formula) -> NjDerivation:
    """Axiom for f with f added to the antecedent."""
    return NjDerivation(Rule.AX, Sequent(antecedent.add(f), f))


def and_elim(d: NjDerivation, direction: Direction) -> NjDerivation:
    conj = d.succedent
    if not isinstance(conj, Conj):
        raise PreconditionError(f"andE on non-conjunction {conj}", operation="and_elim")
    rule = Rule.AND_E0 if direction is Direction.LEFT else Rule.AND_E1
    return NjDerivation(rule, Sequent(d.antecedent, conj.child(direction)), (d,))


def project(d: NjDerivation, steps: Steps) -> NjDerivation:
    for step in steps:
        d = and_elim(d, step)
    return d


def project_conjunct(d: NjDerivation, index: int, count: int) -> NjDerivation:
    """andE chain selecting item ``index`` of a right-nested conjunction of ``count`` items."""
    if not 0 <= index < count:
        raise PreconditionError(f"Conjunct {index} out of range {count}", operation="project_conjunct")
    steps = (Direction.RIGHT,) * index
    if index < count - 1:
        steps += (Direction.LEFT,)
    return project(d, steps)


def or_intro(d: NjDerivation, target: Disj) -> NjDerivation:
    if d.succedent == target.left:
        rule = Rule.OR_I0
    elif d.succedent == target.right:
        rule = Rule.OR_I1
    else:
        raise PreconditionError(f"{d.succedent} is not a disjunct of {target}", operation="or_intro")
    return NjDerivation(rule, Sequent(d.antecedent, target), (d,))


def inject_disjunct(d: NjDerivation, items: Sequence[Formula], index: int) -> NjDerivation:
    """orI chain from item ``index`` into the right-nested disjunction of items."""
    suffixes = _suffixes(items, Disj)
    if index < len(items) - 1:
        d = NjDerivation(Rule.OR_I0, Sequent(d.antecedent, suffixes[index]), (d,))
    for m in range(index - 1, -1, -1):
        d = NjDerivation(Rule.OR_I1, Sequent(d.antecedent, suffixes[m]), (d,))
    return d


def and_intro(left: NjDerivation, right: NjDerivation) -> NjDerivation:
    if left.antecedent != right.antecedent:
        raise PreconditionError("andI premises have different antecedents", operation="and_intro")
    return NjDerivation(Rule.AND_I, Sequent(left.antecedent, Conj(left.succedent, right.succedent)), (left, right))


def and_intro_all(derivations: Sequence[NjDerivation]) -> NjDerivation:
    if not derivations:
        raise PreconditionError("andI over no derivations", operation="and_intro_all")
    result = derivations[-1]
    for d in reversed(derivations[:-1]):
        result = and_intro(d, result)
    return result


def imp_intro(d: NjDerivation, hypothesis_formula: Formula, context: Cedent) -> NjDerivation:
    """Discharge ``hypothesis_formula``; ``context`` is the conclusion antecedent."""
    return NjDerivation(Rule.IMP_I, Sequent(context, Impl(hypothesis_formula, d.succedent)), (d,))


def imp_elim(major: NjDerivation, minor: NjDerivation) -> NjDerivation:
    impl = major.succedent
    if not isinstance(impl, Impl):
        raise PreconditionError(f"impE on non-implication {impl}", operation="imp_elim")
    return NjDerivation(Rule.IMP_E, Sequent(major.antecedent, impl.right), (major, minor))


def or_elim(major: NjDerivation, left: NjDerivation, right: NjDerivation) -> NjDerivation:
    return NjDerivation(Rule.OR_E, Sequent(major.antecedent, left.succedent), (major, left, right))


def split_cases(
    major: NjDerivation,
    items: Sequence[Formula],
    case: Callable[[int, Cedent], NjDerivation],
) -> NjDerivation:
    """Nested orE over a right-nested disjunction of ``items``.

    ``case(m, ant)`` must derive the common goal from ``ant``, which contains ``items[m]``.
    """
    context = major.antecedent
    count = len(items)
    if count == 1:
        only = case(0, context.add(items[0]))
        return only if items[0] in context else graft(major, only)

    suffixes = _suffixes(items, Disj)

    def level(m: int, ant: Cedent, current: NjDerivation) -> NjDerivation:
        left = case(m, ant.add(items[m]))
        if m + 1 == count - 1:
            right = case(count - 1, ant.add(items[count - 1]))
        else:
            rest_ant = ant.add(suffixes[m + 1])
            right = level(m + 1, rest_ant, hypothesis(rest_ant, suffixes[m + 1]))
        return or_elim(current, left, right)

    return level(0, context, major)


def _suffixes(items: Sequence[Formula], kind) -> List[Formula]:
    if not items:
        raise PreconditionError("empty item list", operation="suffixes")
    suffixes: List[Formula] = [items[-1]]
    for item in reversed(items[:-1]):
        suffixes.append(kind(item, suffixes[-1]))
    suffixes.reverse()
    return suffixes


# ---------------------------------------------------------------------------
# Surgery
# ---------------------------------------------------------------------------

def weaken(d: NjDerivation, extra: Cedent) -> NjDerivation:
    """Add ``extra`` to every antecedent; unchanged subtrees are shared."""
    if len(extra) == 0:
        return d
    memo: Dict[int, NjDerivation] = {}

    def walk(node: NjDerivation) -> NjDerivation:
        cached = memo.get(id(node))
        if cached is not None:
            return cached
        premises = tuple(walk(p) for p in node.premises)
        antecedent = node.antecedent.union(extra)
        if antecedent is node.antecedent and all(a is b for a, b in zip(premises, node.premises)):
            result = node
        else:
            result = NjDerivation(node.rule, Sequent(antecedent, node.succedent), premises)
        memo[id(node)] = result
        return result

    return walk(d)


def ex_falso(d0: NjDerivation, target: Formula) -> NjDerivation:
    """Turn a derivation of Γ⇒⊥ into one of Γ⇒target."""
    if d0.succedent != BOTTOM:
        raise PreconditionError(f"ex_falso needs a derivation of _|_, got {d0.succedent}", operation="ex_falso")
    context = d0.antecedent
    if isinstance(target, Bottom):
        return d0
    if isinstance(target, Atom):
        inner = NjDerivation(Rule.AX, Sequent(context.add(BOTTOM), target))
        return imp_elim(imp_intro(inner, BOTTOM, context), d0)
    if isinstance(target, Conj):
        return and_intro(ex_falso(d0, target.left), ex_falso(d0, target.right))
    if isinstance(target, Disj):
        return NjDerivation(Rule.OR_I0, Sequent(context, target), (ex_falso(d0, target.left),))
    if isinstance(target, Impl):
        body = ex_falso(weaken(d0, Cedent.of(target.left)), target.right)
        return imp_intro(body, target.left, context)
    raise TypeError(f"Not a formula: {target!r}")


def is_ex_falso_idiom(node: NjDerivation) -> bool:
    """impE(impI(ax ⊥,Γ⇒p), d0): the primitive ⊥-elimination built by ex_falso."""
    if node.rule is not Rule.IMP_E:
        return False
    intro = node.premises[0]
    if intro.rule is not Rule.IMP_I:
        return False
    impl = intro.succedent
    leaf = intro.premises[0]
    return (
        isinstance(impl, Impl)
        and isinstance(impl.left, Bottom)
        and isinstance(impl.right, Atom)
        and leaf.rule is Rule.AX
        and impl.right not in leaf.antecedent
    )


def _discharges(node: NjDerivation, index: int, alpha: Formula) -> bool:
    """Whether premise ``index`` of node has ``alpha`` as its own discharged hypothesis."""
    if node.rule is Rule.IMP_I:
        impl = node.succedent
        return isinstance(impl, Impl) and impl.left == alpha
    if node.rule is Rule.OR_E and index > 0:
        disj = node.premises[0].succedent
        if isinstance(disj, Disj):
            return disj.child(Direction(index - 1)) == alpha
    return False


def graft(d0: NjDerivation, d1: NjDerivation, expected: Optional[Formula] = None, retain: bool = False) -> NjDerivation:
    """Plant d0 (Γ⇒α) on every α-axiom of d1 (α,Δ⇒β), giving Γ,Δ⇒β.

    α is removed from the antecedents of d1 except inside sub-derivations that discharge α
    themselves; those are only weakened by Γ. With ``retain`` α is kept everywhere.
    """
    alpha = d0.succedent
    if expected is not None and expected != alpha:
        raise GraftError(
            f"Grafted derivation proves {alpha}, hypothesis is {expected}", hypothesis=expected.text
        )
    gamma = d0.antecedent
    if retain:
        return weaken(d1, gamma)
    memo: Dict[int, NjDerivation] = {}

    def plant(antecedent: Cedent, node: NjDerivation) -> NjDerivation:
        if node.succedent == alpha:
            return weaken(d0, antecedent)
        if isinstance(alpha, Bottom) and isinstance(node.succedent, Atom) and node.succedent not in antecedent:
            return ex_falso(weaken(d0, antecedent), node.succedent)
        return NjDerivation(Rule.AX, Sequent(antecedent, node.succedent))

    def walk(node: NjDerivation) -> NjDerivation:
        cached = memo.get(id(node))
        if cached is not None:
            return cached
        old = node.antecedent
        if alpha not in old:
            antecedent = old.union(gamma)
        else:
            antecedent = old.remove(alpha).union(gamma)

        if node.rule is Rule.AX:
            result = plant(antecedent, node) if alpha in old else NjDerivation(
                Rule.AX, Sequent(antecedent, node.succedent)
            )
        else:
            premises = []
            for index, premise in enumerate(node.premises):
                if _discharges(node, index, alpha):
                    premises.append(weaken(premise, gamma))
                else:
                    premises.append(walk(premise))
            result = NjDerivation(node.rule, Sequent(antecedent, node.succedent), tuple(premises))
        memo[id(node)] = result
        return result

    result = walk(d1)
    logger.debug(f"grafted {alpha} into derivation of {d1.conclusion}")
    return result


# ---------------------------------------------------------------------------
# Choice vectors
# ---------------------------------------------------------------------------

def strengthening_derivation(f: Formula, choices: Dict[Steps, int], steps: Steps = ()) -> NjDerivation:
    """Derivation of {f(k)} ⇒ f for the choices restricted to f."""
    strong = strengthen_formula(f, choices, steps)
    own = Cedent.of(strong)
    if strong is f or strong == f:
        return NjDerivation(Rule.AX, Sequent(own, f))

    if isinstance(f, Disj):
        direction = Direction(choices[steps])
        inner = strengthening_derivation(f.child(direction), choices, steps + (direction,))
        rule = Rule.OR_I0 if direction is Direction.LEFT else Rule.OR_I1
        return NjDerivation(rule, Sequent(own, f), (inner,))

    if isinstance(f, Conj):
        assert isinstance(strong, Conj)
        parts = []
        for direction in (Direction.LEFT, Direction.RIGHT):
            inner = strengthening_derivation(f.child(direction), choices, steps + (direction,))
            projection = and_elim(NjDerivation(Rule.AX, Sequent(own, strong)), direction)
            parts.append(graft(projection, inner))
        return and_intro(parts[0], parts[1])

    if isinstance(f, Impl):
        assert isinstance(strong, Impl)
        local = own.add(f.left)
        applied = imp_elim(
            NjDerivation(Rule.AX, Sequent(local, strong)),
            NjDerivation(Rule.AX, Sequent(local, f.left)),
        )
        inner = strengthening_derivation(f.right, choices, steps + (Direction.RIGHT,))
        return imp_intro(graft(applied, inner), f.left, own)

    raise PreconditionError(f"Cannot strengthen {f}", operation="strengthening_derivation")


def derive_dk(d: NjDerivation, e: SpdEnumeration, k: ChoiceVector) -> NjDerivation:
    """d(k): replace each hypothesis γ of d by γ(k) by grafting {γ(k)}⇒γ."""
    formulas = tuple(d.antecedent.ordered())
    if formulas != e.formulas:
        raise PreconditionError("Enumeration does not belong to the derivation's antecedent", operation="derive_dk")
    result = d
    for index, gamma in enumerate(formulas):
        if gamma.harrop:
            continue
        bridge = strengthening_derivation(gamma, choice_map(e, k, index))
        result = graft(bridge, result)
    logger.debug(f"d(k) for k={k.text}: {result.conclusion}")
    return result


__all__ = [
    "NjDerivation", "CheckReport", "NodePath", "check_derivation", "assert_valid", "sequents",
    "node_count", "depth", "axiom", "hypothesis", "and_elim", "project", "project_conjunct",
    "or_intro", "inject_disjunct", "and_intro", "and_intro_all", "imp_intro", "imp_elim", "or_elim",
    "split_cases", "weaken", "ex_falso", "is_ex_falso_idiom", "graft", "strengthening_derivation",
    "derive_dk", "big_or",
]
