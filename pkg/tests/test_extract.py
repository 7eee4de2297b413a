"""Tests for disjunction-property extraction."""

import pytest

from dp_toolkit.constants import ExtractionMethod
from dp_toolkit.corpus import HAND_WRITTEN
from dp_toolkit.deduction import NjDerivation
from dp_toolkit.exceptions import ChoiceVectorError, DerivationCheckError, PreconditionError
from dp_toolkit.extract import (
    extract_bm,
    extract_choice,
    extract_slash,
    uniqueness_side_condition,
    verify_result,
)
from dp_toolkit.horn import CutDeduction
from dp_toolkit.parsers import parse_derivation
from dp_toolkit.syntax import Atom, Cedent, ChoiceVector, Conj, parse_formula, parse_sequent

HARROP_NAMES = sorted(name for name in HAND_WRITTEN if name != "case-split")


class TestHarropExtraction:
    """Extraction from derivations with Harrop antecedents."""

    def test_or_intro_left(self, hand):
        result = extract_bm(hand("or-intro"))
        assert result.index == 0
        assert result.disjunct == Atom("p")
        assert result.method is ExtractionMethod.BM
        assert isinstance(result.certificate, CutDeduction)
        assert result.certificate_conclusion == parse_sequent("p => p")
        assert verify_result(result)

    def test_right_disjunct(self, hand):
        result = extract_bm(hand("conj-redex"))
        assert result.index == 1
        assert result.disjunct == Atom("q")
        assert verify_result(result)

    @pytest.mark.parametrize("name", HARROP_NAMES)
    def test_bm_and_slash_certificates_validate(self, hand, name):
        d = hand(name)
        bm = extract_bm(d)
        slash = extract_slash(d)
        assert verify_result(bm)
        assert verify_result(slash)
        assert slash.method is ExtractionMethod.SLASH
        assert bm.base_used <= slash.base_used

    def test_bottom_in_antecedent(self):
        d = parse_derivation('(orI1 "_|_ => q | p" (ax "_|_ => p"))')
        result = extract_bm(d)
        assert result.index == 0
        assert isinstance(result.certificate, NjDerivation)
        assert result.target == parse_sequent("_|_ => q")
        assert verify_result(result)

    def test_tampered_target_fails_verification(self, hand):
        result = extract_bm(hand("or-intro"))
        forged = type(result)(
            index=1,
            certificate=result.certificate,
            base_used=result.base_used,
            method=result.method,
            target=parse_sequent("p => q"),
        )
        assert not verify_result(forged)


class TestPreconditions:
    """Inputs outside the extraction domain."""

    def test_non_harrop_antecedent(self, hand):
        with pytest.raises(PreconditionError):
            extract_bm(hand("case-split"))

    def test_succedent_not_a_disjunction(self):
        with pytest.raises(PreconditionError):
            extract_bm(parse_derivation('(ax "p => p")'))

    def test_invalid_derivation(self):
        with pytest.raises(DerivationCheckError):
            extract_slash(parse_derivation('(orI0 "p => q | p" (ax "p => p"))'))


class TestChoiceExtraction:
    """Extraction through a choice vector."""

    def test_each_choice_picks_its_case(self, hand):
        d = hand("case-split")
        left = extract_choice(d, ChoiceVector((0,)))
        right = extract_choice(d, ChoiceVector((1,)))

        assert left.index == 0
        assert left.target == parse_sequent("p, p -> r, q -> s => r")
        assert right.index == 1
        assert right.target == parse_sequent("q, p -> r, q -> s => s")
        for result in (left, right):
            assert result.method is ExtractionMethod.CHOICE
            assert result.derivation is not None
            assert verify_result(result)

    def test_choice_length_must_match(self, hand):
        with pytest.raises(ChoiceVectorError) as excinfo:
            extract_choice(hand("case-split"), ChoiceVector((0, 1)))
        assert excinfo.value.context == {"expected": 1, "actual": 2}

    def test_harrop_derivation_takes_empty_vector(self, hand):
        result = extract_choice(hand("or-intro"), ChoiceVector(()))
        assert result.index == 0


class TestUniqueness:
    """Classical side condition on strengthenings."""

    def test_holds_when_every_strengthening_allows_exclusion(self):
        g = Cedent.of(parse_formula("p | q"), parse_formula("p -> r"), parse_formula("q -> s"))
        assert uniqueness_side_condition(g, Atom("r"), Atom("s"))

    def test_fails_when_both_disjuncts_are_forced(self):
        g = Cedent.of(Conj(Atom("r"), Atom("s")))
        assert not uniqueness_side_condition(g, Atom("r"), Atom("s"))
