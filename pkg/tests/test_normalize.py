"""Tests for Harrop normalization."""

import pytest

from dp_toolkit.constants import RedexKind
from dp_toolkit.corpus import build_corpus, InstanceKind
from dp_toolkit.deduction import check_derivation, sequents
from dp_toolkit.exceptions import FuelExhaustedError, PreconditionError
from dp_toolkit.normalize import (
    RedexSite,
    check_intro_ending,
    contract,
    ex_falso_bridges,
    find_harrop_maximal,
    harrop_normalize,
    is_harrop_normal,
    unexplained_sequents,
)
from dp_toolkit.parsers import parse_derivation


class TestRedexSearch:
    """Locating Harrop maximal formulas."""

    @pytest.mark.parametrize("name,kind", [
        ("conj-redex", RedexKind.CONJ),
        ("impl-redex", RedexKind.IMPL),
        ("disj-redex", RedexKind.DISJ),
    ])
    def test_finds_redex(self, hand, name, kind):
        assert find_harrop_maximal(hand(name)) == RedexSite((0,), kind)

    def test_ex_falso_idiom_is_not_a_redex(self, hand):
        d = hand("ex-falso")
        assert is_harrop_normal(d)
        assert len(ex_falso_bridges(d)) == 1

    def test_non_harrop_antecedent_has_no_redex(self, hand):
        assert find_harrop_maximal(hand("case-split")) is None

    def test_contract_checks_site(self, hand):
        with pytest.raises(PreconditionError):
            contract(hand("conj-redex"), RedexSite((), RedexKind.CONJ))
        with pytest.raises(PreconditionError):
            contract(hand("conj-redex"), RedexSite((0, 0, 0, 0, 0), RedexKind.CONJ))


class TestHarropNormalize:
    """Normalizer results."""

    @pytest.mark.parametrize("name", ["conj-redex", "impl-redex", "disj-redex"])
    def test_single_contraction(self, hand, name):
        d = hand(name)
        result = harrop_normalize(d)
        assert result.steps == 1
        nd = result.derivation
        assert nd.conclusion == d.conclusion
        assert check_derivation(nd).ok
        assert is_harrop_normal(nd)
        assert unexplained_sequents(sequents(d), nd) == []

    def test_impl_redex_contractum(self, hand):
        expected = parse_derivation('(orI0 "p => p | q" (ax "p => p"))')
        assert harrop_normalize(hand("impl-redex")).derivation == expected

    def test_normal_input_is_unchanged(self, hand):
        d = hand("or-intro")
        result = harrop_normalize(d)
        assert result.steps == 0
        assert result.derivation is d

    def test_fuel_exhaustion_keeps_partial(self, hand):
        d = hand("conj-redex")
        with pytest.raises(FuelExhaustedError) as excinfo:
            harrop_normalize(d, fuel=0)
        assert excinfo.value.steps == 0
        assert excinfo.value.partial is d

    def test_intro_ending(self, hand):
        nd = harrop_normalize(hand("disj-redex")).derivation
        assert check_intro_ending(nd)

    def test_intro_ending_preconditions(self, hand):
        with pytest.raises(PreconditionError):
            check_intro_ending(hand("case-split"))
        with pytest.raises(PreconditionError):
            check_intro_ending(hand("conj-redex"))


def test_generated_corpus_normalizes():
    """Every generated Harrop instance normalizes to an introduction with explained sequents."""
    for instance in build_corpus(seed=11, generated=12):
        if instance.kind is not InstanceKind.HARROP:
            continue
        d = instance.derivation
        nd = harrop_normalize(d).derivation
        assert nd.conclusion == d.conclusion, instance.name
        assert check_derivation(nd).ok, instance.name
        assert is_harrop_normal(nd), instance.name
        assert unexplained_sequents(sequents(d), nd) == [], instance.name
