"""Derivation corpus: hand-written files, a seeded generator and the corpus runner."""

import logging
import random
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

from .config_manager import RunConfig
from .constants import DEFAULT_GENERATED, DEFAULT_SEED, Direction, Rule
from .deduction import (
    NjDerivation,
    and_elim,
    and_intro,
    assert_valid,
    axiom,
    ex_falso,
    imp_elim,
    imp_intro,
    or_elim,
    or_intro,
    sequents,
    weaken,
)
from .exceptions import BoundednessViolation, OracleCapExceeded, ToolkitError
from .extract import extract_bm, extract_choice, extract_slash, verify_result
from .logger import get_toolkit_logger
from .normalize import harrop_normalize, is_harrop_normal, unexplained_sequents
from .oracle import ipc_valid
from .parsers import parse_derivation
from .syntax import BOTTOM, Atom, Cedent, ChoiceVector, Conj, Disj, Formula, Impl, Sequent, spd_enumerate

logger = logging.getLogger(__name__)


class InstanceKind(Enum):
    HARROP = "harrop"  # Harrop antecedent, extracted directly
    CHOICE = "choice"  # antecedent with strictly positive disjunctions


HAND_WRITTEN: Dict[str, str] = {
    "or-intro": '(orI0 "p => p | q" (ax "p => p"))',
    "conj-redex": """
(orI1 "p & q => r | q"
  (andE1 "p & q => q"
    (andI "p & q => p & q"
      (andE0 "p & q => p" (ax "p & q => p & q"))
      (andE1 "p & q => q" (ax "p & q => p & q")))))
""",
    "impl-redex": """
(orI0 "p => p | q"
  (impE "p => p"
    (impI "p => p -> p" (ax "p => p"))
    (ax "p => p")))
""",
    "disj-redex": """
(orI0 "p, p -> r => r | s"
  (orE "p, p -> r => r"
    (orI0 "p, p -> r => p | q" (ax "p, p -> r => p"))
    (impE "p, p -> r => r" (ax "p, p -> r => p -> r") (ax "p, p -> r => p"))
    (impE "p, p -> r, q => r" (ax "p, p -> r, q => p -> r") (ax "p, p -> r, q => p"))))
""",
    "ex-falso": """
(orI0 "p, ~p => q | r"
  (impE "p, ~p => q"
    (impI "p, ~p => _|_ -> q" (ax "_|_, p, ~p => q"))
    (impE "p, ~p => _|_" (ax "p, ~p => ~p") (ax "p, ~p => p"))))
""",
    "case-split": """
(orE "p | q, p -> r, q -> s => r | s"
  (ax "p | q, p -> r, q -> s => p | q")
  (orI0 "p, p | q, p -> r, q -> s => r | s"
    (impE "p, p | q, p -> r, q -> s => r"
      (ax "p, p | q, p -> r, q -> s => p -> r")
      (ax "p, p | q, p -> r, q -> s => p")))
  (orI1 "q, p | q, p -> r, q -> s => r | s"
    (impE "q, p | q, p -> r, q -> s => s"
      (ax "q, p | q, p -> r, q -> s => q -> s")
      (ax "q, p | q, p -> r, q -> s => q"))))
""",
}

# fails the checker: the bottom axiom needs an atomic succedent
BAD_DERIVATIONS: Dict[str, str] = {
    "bottom-compound": '(ax "_|_ => p & q")',
    "wrong-disjunct": '(orI0 "p => q | p" (ax "p => p"))',
}


@dataclass(frozen=True)
class CorpusInstance:
    name: str
    derivation: NjDerivation
    kind: InstanceKind


def hand_written() -> List[CorpusInstance]:
    instances = []
    for name, text in HAND_WRITTEN.items():
        d = parse_derivation(text, source=name)
        kind = InstanceKind.HARROP if d.antecedent.harrop else InstanceKind.CHOICE
        instances.append(CorpusInstance(name, d, kind))
    return instances


class DerivationGenerator:
    """Seeded generator of checked derivations ending in a disjunction."""

    def __init__(self, rng: random.Random, atoms: Sequence[str] = ("p", "q", "r", "s"), max_depth: int = 3):
        self.rng = rng
        self.atoms = [Atom(a) for a in atoms]
        self.max_depth = max_depth

    def atom(self) -> Atom:
        return self.rng.choice(self.atoms)

    def formula(self, depth: int) -> Formula:
        if depth <= 0 or self.rng.random() < 0.3:
            return self.atom()
        kind = self.rng.choice((Conj, Disj, Impl))
        return kind(self.formula(depth - 1), self.formula(depth - 1))

    def harrop_formula(self, depth: int) -> Formula:
        roll = self.rng.random()
        if depth <= 0 or roll < 0.35:
            return self.atom()
        if roll < 0.45:
            return Impl(self.atom(), BOTTOM)
        if roll < 0.7:
            return Conj(self.harrop_formula(depth - 1), self.harrop_formula(depth - 1))
        return Impl(self.formula(depth - 1), self.harrop_formula(depth - 1))

    def harrop_context(self) -> Cedent:
        members = [self.atom()]
        members += [self.harrop_formula(self.max_depth - 1) for _ in range(self.rng.randint(1, 3))]
        return Cedent.of(*members)

    def facts(self, gamma: Cedent) -> Dict[Formula, NjDerivation]:
        """Formulas reachable from gamma by eliminations, each with a derivation."""
        known: Dict[Formula, NjDerivation] = {f: axiom(gamma, f) for f in gamma.ordered()}
        for _ in range(self.max_depth):
            fresh: Dict[Formula, NjDerivation] = {}
            for f, d in sorted(known.items(), key=lambda item: item[0].text):
                if isinstance(f, Conj):
                    fresh.setdefault(f.left, and_elim(d, Direction.LEFT))
                    fresh.setdefault(f.right, and_elim(d, Direction.RIGHT))
                elif isinstance(f, Impl) and f.left in known:
                    fresh.setdefault(f.right, imp_elim(d, known[f.left]))
            added = {f: d for f, d in fresh.items() if f not in known}
            if not added:
                break
            known.update(added)
        return known

    def with_redex(self, d: NjDerivation, gamma: Cedent, facts: Dict[Formula, NjDerivation]) -> NjDerivation:
        """Wrap d: Γ⇒φ in a maximal formula of a random kind (or leave it)."""
        kind = self.rng.choice(("none", "conj", "impl", "disj"))
        other = facts[self.rng.choice(sorted(facts, key=lambda f: f.text))]
        phi = d.succedent
        if kind == "conj":
            if self.rng.random() < 0.5:
                return and_elim(and_intro(d, other), Direction.LEFT)
            return and_elim(and_intro(other, d), Direction.RIGHT)
        if kind == "impl":
            psi = other.succedent
            body = weaken(d, Cedent.of(psi))
            return imp_elim(imp_intro(body, psi, gamma), other)
        if kind == "disj":
            chi = self.formula(1)
            major = or_intro(d, Disj(phi, chi))
            return or_elim(major, axiom(gamma.add(phi), phi), weaken(d, Cedent.of(chi)))
        return d

    def harrop_instance(self) -> NjDerivation:
        gamma = self.harrop_context()
        facts = self.facts(gamma)
        if BOTTOM in facts and self.rng.random() < 0.5:
            chosen = ex_falso(facts[BOTTOM], self.formula(1))
        else:
            chosen = facts[self.rng.choice(sorted(facts, key=lambda f: f.text))]
        chosen = self.with_redex(chosen, gamma, facts)
        other = self.formula(self.max_depth - 1)
        goal = Disj(chosen.succedent, other) if self.rng.random() < 0.5 else Disj(other, chosen.succedent)
        return assert_valid(or_intro(chosen, goal))

    def choice_instance(self) -> NjDerivation:
        """Case split on a disjunction of the antecedent, one disjunct of the goal per case."""
        a, b = self.harrop_formula(1), self.harrop_formula(1)
        c, e = self.atom(), self.atom()
        gamma = self.harrop_context().union([Disj(a, b), Impl(a, c), Impl(b, e)])
        goal = Disj(c, e)

        left_ant = gamma.add(a)
        left = _into_disjunct(imp_elim(axiom(left_ant, Impl(a, c)), axiom(left_ant, a)), goal, 0)
        right_ant = gamma.add(b)
        right = _into_disjunct(imp_elim(axiom(right_ant, Impl(b, e)), axiom(right_ant, b)), goal, 1)
        return assert_valid(or_elim(axiom(gamma, Disj(a, b)), left, right))


def _into_disjunct(d: NjDerivation, goal: Disj, index: int) -> NjDerivation:
    """orI into the given side even when both disjuncts are equal."""
    rule = Rule.OR_I0 if index == 0 else Rule.OR_I1
    return NjDerivation(rule, Sequent(d.antecedent, goal), (d,))


def build_corpus(
    seed: int = DEFAULT_SEED,
    generated: int = DEFAULT_GENERATED,
    atoms: Sequence[str] = ("p", "q", "r", "s"),
    max_depth: int = 3,
) -> List[CorpusInstance]:
    """Hand-written instances followed by ``generated`` seeded ones (one in four uses the choice route)."""
    rng = random.Random(seed)
    generator = DerivationGenerator(rng, atoms, max_depth)
    instances = hand_written()
    for k in range(generated):
        if k % 4 == 3:
            instances.append(CorpusInstance(f"gen-{k}", generator.choice_instance(), InstanceKind.CHOICE))
        else:
            instances.append(CorpusInstance(f"gen-{k}", generator.harrop_instance(), InstanceKind.HARROP))
    return instances


def _oracle_confirms(target, cap: int, summary: Dict[str, Any]) -> bool:
    try:
        verdict = ipc_valid(target, cap)
    except OracleCapExceeded:
        summary["oracle_skipped"] += 1
        return True
    summary["oracle_confirmed"] += int(verdict.valid)
    return verdict.valid


def _run_harrop(instance: CorpusInstance, config: RunConfig, summary: Dict[str, Any]) -> Optional[str]:
    d = instance.derivation
    bm = extract_bm(d)
    if not verify_result(bm):
        return "bm certificate failed to validate"
    summary["bm"] += 1
    try:
        slash = extract_slash(d)
    except BoundednessViolation:
        return "slash extraction failed where bm succeeded"
    if not verify_result(slash):
        return "slash certificate failed to validate"
    summary["slash"] += 1
    summary["agreements"] += int(bm.index == slash.index)
    if not _oracle_confirms(bm.target, config.engine.oracle_cap, summary):
        return f"oracle rejects {bm.target}"

    normalized = harrop_normalize(d, fuel=config.engine.fuel, fuel_factor=config.engine.fuel_factor)
    nd = normalized.derivation
    if nd.conclusion != d.conclusion or not is_harrop_normal(nd):
        return "normalization changed the conclusion or left a redex"
    assert_valid(nd)
    if unexplained_sequents(sequents(d), nd):
        return "normalized sequent not immediately derivable from the original"
    summary["normalized"] += 1
    summary["max_normalization_steps"] = max(summary["max_normalization_steps"], normalized.steps)
    return None


def _run_choice(instance: CorpusInstance, config: RunConfig, summary: Dict[str, Any]) -> Optional[str]:
    d = instance.derivation
    count = spd_enumerate(d.antecedent).count
    for k in ChoiceVector.all_vectors(count):
        result = extract_choice(d, k)
        if not verify_result(result):
            return f"certificate for k={k.text} failed to validate"
        if not _oracle_confirms(result.target, config.engine.oracle_cap, summary):
            return f"oracle rejects {result.target}"
        summary["choice"] += 1
    return None


def run_corpus(config: RunConfig) -> Dict[str, Any]:
    """Extraction, normalization and oracle cross-checks over the whole corpus."""
    instances = build_corpus(config.seed, config.corpus.generated, config.corpus.atoms, config.corpus.max_depth)
    summary: Dict[str, Any] = {
        "seed": config.seed,
        "instances": len(instances),
        "bm": 0,
        "slash": 0,
        "agreements": 0,
        "choice": 0,
        "normalized": 0,
        "max_normalization_steps": 0,
        "oracle_confirmed": 0,
        "oracle_skipped": 0,
        "failures": [],
    }
    log = get_toolkit_logger()
    for instance in instances:
        runner = _run_harrop if instance.kind is InstanceKind.HARROP else _run_choice
        try:
            problem = runner(instance, config, summary)
        except ToolkitError as e:
            log.log_error("corpus", e, {"instance": instance.name})
            summary["failures"].append({"instance": instance.name, **e.to_dict()})
            continue
        if problem is not None:
            logger.warning(f"{instance.name}: {problem}")
            summary["failures"].append({"instance": instance.name, "message": problem})
    logger.info(f"corpus: {len(instances)} instances, {len(summary['failures'])} failures")
    return summary


__all__ = [
    "InstanceKind", "HAND_WRITTEN", "BAD_DERIVATIONS", "CorpusInstance", "hand_written",
    "DerivationGenerator", "build_corpus", "run_corpus",
]
