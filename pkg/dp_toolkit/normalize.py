"""Harrop normalization: redex search, contracta and a fuel-bounded normalizer."""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Set

from .constants import RedexKind, Rule
from .deduction import NjDerivation, NodePath, graft, is_ex_falso_idiom, node_count
from .exceptions import FuelExhaustedError, PreconditionError
from .horn import id_check
from .syntax import BOTTOM, Sequent

logger = logging.getLogger(__name__)

_REDEX_SHAPES = {
    Rule.OR_E: ((Rule.OR_I0, Rule.OR_I1), RedexKind.DISJ),
    Rule.AND_E0: ((Rule.AND_I,), RedexKind.CONJ),
    Rule.AND_E1: ((Rule.AND_I,), RedexKind.CONJ),
    Rule.IMP_E: ((Rule.IMP_I,), RedexKind.IMPL),
}


@dataclass(frozen=True)
class RedexSite:
    path: NodePath
    kind: RedexKind


@dataclass
class NormalizationResult:
    derivation: NjDerivation
    steps: int
    sites: List[RedexSite] = field(default_factory=list)


def redex_kind(node: NjDerivation) -> Optional[RedexKind]:
    """Kind of Harrop maximal formula whose elimination is ``node``, if any."""
    shape = _REDEX_SHAPES.get(node.rule)
    if shape is None or not node.premises:
        return None
    intros, kind = shape
    if node.premises[0].rule not in intros:
        return None
    if not node.antecedent.harrop:
        return None
    if is_ex_falso_idiom(node):
        return None
    return kind


def find_harrop_maximal(d: NjDerivation) -> Optional[RedexSite]:
    """Leftmost-topmost site: premises are searched left to right before their conclusion."""
    stack = [((), d, False)]
    while stack:
        path, node, expanded = stack.pop()
        if expanded:
            kind = redex_kind(node)
            if kind is not None:
                return RedexSite(path, kind)
            continue
        stack.append((path, node, True))
        for index in reversed(range(len(node.premises))):
            stack.append((path + (index,), node.premises[index], False))
    return None


def contract(d: NjDerivation, site: RedexSite) -> NjDerivation:
    try:
        node = d.at(site.path)
    except IndexError:
        raise PreconditionError(f"No node at {list(site.path)}", operation="contract") from None
    if redex_kind(node) is not site.kind:
        raise PreconditionError(f"No {site.kind.value} redex at {list(site.path)}", operation="contract")

    intro = node.premises[0]
    if site.kind is RedexKind.CONJ:
        contractum = intro.premises[0 if node.rule is Rule.AND_E0 else 1]
    elif site.kind is RedexKind.DISJ:
        chosen = 0 if intro.rule is Rule.OR_I0 else 1
        contractum = graft(intro.premises[0], node.premises[1 + chosen])
    else:
        contractum = graft(node.premises[1], intro.premises[0])

    logger.debug(f"contracted {site.kind.value} redex at {list(site.path)}")
    return d.replace_at(site.path, contractum)


def harrop_normalize(d: NjDerivation, fuel: Optional[int] = None, fuel_factor: int = 10) -> NormalizationResult:
    """Contract Harrop maximal formulas until none is left or fuel runs out.

    Fuel defaults to fuel_factor * |d|^2.
    """
    if fuel is None:
        fuel = fuel_factor * node_count(d) ** 2
    current = d
    sites: List[RedexSite] = []
    while True:
        site = find_harrop_maximal(current)
        if site is None:
            return NormalizationResult(current, len(sites), sites)
        if len(sites) >= fuel:
            raise FuelExhaustedError(
                f"Normalization exhausted fuel {fuel} after {len(sites)} contractions",
                steps=len(sites),
                partial=current,
                fuel=fuel,
            )
        current = contract(current, site)
        sites.append(site)


def is_harrop_normal(d: NjDerivation) -> bool:
    return find_harrop_maximal(d) is None


def check_intro_ending(d: NjDerivation) -> bool:
    """Whether a Harrop normal derivation with the stated preconditions ends with an introduction."""
    conclusion = d.conclusion
    problems = []
    if not is_harrop_normal(d):
        problems.append("derivation is not Harrop normal")
    if not conclusion.antecedent.harrop:
        problems.append("antecedent is not Harrop")
    if BOTTOM in conclusion.antecedent:
        problems.append("antecedent contains _|_")
    if conclusion.succedent.harrop:
        problems.append("succedent is Harrop")
    if problems:
        raise PreconditionError("; ".join(problems), operation="check_intro_ending", sequent=conclusion.text)
    return d.rule.is_introduction


def ex_falso_bridges(d: NjDerivation) -> Set[Sequent]:
    """Conclusions Γ⇒⊥⊃p of the impI inside ex-falso idioms."""
    return {node.premises[0].conclusion for _, node in d.walk() if is_ex_falso_idiom(node)}


def unexplained_sequents(original: Iterable[Sequent], d: NjDerivation) -> List[Sequent]:
    """Sequents of d with no i.d. subsequent over ``original`` (ex-falso bridges excepted)."""
    base = set(original)
    bridges = ex_falso_bridges(d)
    missing = []
    for s in {node.conclusion for _, node in d.walk()}:
        if s in base or s in bridges:
            continue
        if id_check(base, s) is None:
            missing.append(s)
    return sorted(missing, key=lambda s: s.text)


__all__ = [
    "RedexSite", "NormalizationResult", "redex_kind", "find_harrop_maximal", "contract",
    "harrop_normalize", "is_harrop_normal", "check_intro_ending", "ex_falso_bridges",
    "unexplained_sequents",
]
