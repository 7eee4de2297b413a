"""Tests for the feasible slash and i.d.a. base sets."""

import random

from dp_toolkit.corpus import DerivationGenerator
from dp_toolkit.deduction import sequents
from dp_toolkit.horn import is_id
from dp_toolkit.slash import SlashEvaluator, build_ida_base, slash_cedent, slash_eval
from dp_toolkit.syntax import Atom, Cedent, Conj, Sequent, analysis_set, parse_formula, parse_sequent, sequent

p, q, r = Atom("p"), Atom("q"), Atom("r")


def base_of(*texts):
    return [parse_sequent(text) for text in texts]


class TestSlash:
    """S:Γ|α evaluation."""

    def test_disjunction_needs_an_immediately_derivable_disjunct(self):
        with_witness = base_of("p => q | r", "p => q")
        without = base_of("p => q | r")
        assert slash_eval(with_witness, Cedent.of(p), parse_formula("q | r"))
        assert not slash_eval(without, Cedent.of(p), parse_formula("q | r"))

    def test_formula_itself_must_be_immediately_derivable(self):
        """Hypotheses alone are not enough: some base sequent has to conclude the formula."""
        assert not slash_eval([], Cedent.of(p), p)
        assert slash_eval(base_of("p => p"), Cedent.of(p), p)

    def test_implication_with_failing_antecedent(self):
        base = base_of("p => q -> r")
        assert slash_eval(base, Cedent.of(p), parse_formula("q -> r"))

    def test_implication_with_holding_antecedent(self):
        base = base_of("p => q -> r", "p => q")
        assert not slash_eval(base, Cedent.of(p), parse_formula("q -> r"))
        assert slash_eval(base + base_of("p => r"), Cedent.of(p), parse_formula("q -> r"))

    def test_conjunction(self):
        base = base_of("p => q & r", "p => q")
        assert not slash_eval(base, Cedent.of(p), Conj(q, r))
        assert slash_eval(base + base_of("q => r"), Cedent.of(p), Conj(q, r))

    def test_cedent(self):
        base = base_of("p => q", "q => r")
        assert slash_cedent(base, Cedent.of(p), [q, r])
        assert not slash_cedent(base, Cedent.of(p), [q, p])

    def test_trace_lists_subformulas_first(self):
        evaluator = SlashEvaluator(base_of("p => q | r", "p => q"), Cedent.of(p))
        assert evaluator.holds(parse_formula("q | r"))
        formulas = [judgment.formula for judgment in evaluator.trace()]
        assert formulas == [q, parse_formula("q | r")]
        assert all(judgment.immediately_derivable for judgment in evaluator.trace())


class TestIdaBase:
    """Base sets built from derivations."""

    def test_contains_reflexive_and_analysis_sequents(self, hand):
        d = hand("conj-redex")
        base = build_ida_base(d)
        assert parse_sequent("p & q => p & q") in base
        assert parse_sequent("p & q => p") in base
        assert parse_sequent("p & q => q") in base
        assert set(base) >= {node.conclusion for _, node in d.walk()}

    def test_implication_analysis(self, hand):
        base = build_ida_base(hand("disj-redex"))
        assert parse_sequent("p, p -> r => r") in base
        assert parse_sequent("p, p -> r => p -> r") in base


def noise(generator, gamma, count):
    """Random sequents over the generator's formulas, some with gamma as antecedent."""
    found = []
    for _ in range(count):
        succedent = generator.formula(2)
        if generator.rng.random() < 0.5:
            found.append(Sequent(gamma, succedent))
        else:
            found.append(sequent([generator.formula(1)], succedent))
    return found


class TestSlashProperties:
    """Seeded checks of the slash against immediate derivability and derivations."""

    def test_harrop_formulas_are_complete(self):
        """An i.d. Harrop formula whose analysis set is in the base is slashed."""
        generator = DerivationGenerator(random.Random(40))
        derivable = 0
        for trial in range(150):
            alpha = generator.harrop_formula(3)
            gamma = generator.harrop_context()
            base = set(analysis_set(alpha)) | set(noise(generator, gamma, 4))
            if generator.rng.random() < 0.6:
                base.add(Sequent(gamma, alpha))
            if is_id(base, Sequent(gamma, alpha)):
                derivable += 1
                assert slash_eval(base, gamma, alpha), (trial, alpha.text)
        assert derivable >= 60

    def test_derivation_nodes_preserve_the_slash(self):
        """Along every node of d, a slashed antecedent gives a slashed succedent."""
        generator = DerivationGenerator(random.Random(41))
        checked = 0
        for trial in range(120):
            d = generator.choice_instance() if trial % 3 == 2 else generator.harrop_instance()
            gamma = d.antecedent
            base = sequents(d) | set(noise(generator, gamma, 3))
            if trial % 2:
                base |= build_ida_base(d)
            evaluator = SlashEvaluator(base, gamma)
            for path, node in d.walk():
                if evaluator.holds_cedent(node.antecedent):
                    checked += 1
                    assert evaluator.holds(node.succedent), (trial, str(path), node.conclusion.text)
        assert checked > 0

    def test_slash_implies_immediately_derivable(self):
        generator = DerivationGenerator(random.Random(42))
        for trial in range(150):
            gamma = generator.harrop_context()
            base = noise(generator, gamma, 6) + [Sequent(gamma, f) for f in gamma]
            for f in [generator.formula(2) for _ in range(4)] + [s.succedent for s in base]:
                if slash_eval(base, gamma, f):
                    assert is_id(base, Sequent(gamma, f)), (trial, f.text)
