"""Tests for formulas, sequents and choice vectors."""

import random

import pytest

from dp_toolkit.constants import Direction
from dp_toolkit.corpus import DerivationGenerator
from dp_toolkit.exceptions import ChoiceVectorError, FormulaSyntaxError
from dp_toolkit.syntax import (
    BOTTOM,
    Atom,
    Cedent,
    ChoiceVector,
    Conj,
    Disj,
    Impl,
    OccurrencePath,
    all_strengthenings,
    analysis_set,
    atoms_of,
    big_and,
    big_or,
    exclusive_or,
    formula_size,
    is_harrop,
    neg,
    parse_formula,
    parse_sequent,
    sequent,
    spd_enumerate,
    strengthen,
    strictly_positive_occurrences,
)

p, q, r, s, t, u, a = (Atom(name) for name in "pqrstua")


class TestFormulaText:
    """Parsing and printing of formulas."""

    def test_precedence(self):
        """& binds tighter than |, which binds tighter than ->."""
        assert parse_formula("p & q -> r") == Impl(Conj(p, q), r)
        assert parse_formula("p | q & r") == Disj(p, Conj(q, r))
        assert parse_formula("p -> q -> r") == Impl(p, Impl(q, r))

    def test_negation_is_implication_to_bottom(self):
        """~p is p -> _|_."""
        assert parse_formula("~p") == Impl(p, BOTTOM)
        assert parse_formula("p -> _|_").text == "~p"
        assert neg(Conj(p, q)).text == "~(p & q)"

    def test_printer_adds_needed_parentheses(self):
        assert Impl(Impl(p, q), r).text == "(p -> q) -> r"
        assert Disj(Disj(p, q), r).text == "(p | q) | r"
        assert Impl(Conj(p, q), r).text == "p & q -> r"
        assert BOTTOM.text == "_|_"

    def test_printed_text_parses_back(self):
        for text in ("(p -> q) -> r", "~~(p | ~p)", "p & (q | r) -> s", "(p | q) | r"):
            f = parse_formula(text)
            assert parse_formula(f.text) == f

    def test_syntax_errors(self):
        for text in ("p &", "p q", "p $ q", "(p", ""):
            with pytest.raises(FormulaSyntaxError):
                parse_formula(text)

    def test_invalid_atom_name(self):
        with pytest.raises(FormulaSyntaxError):
            Atom("1p")

    def test_structural_equality_and_hashing(self):
        """Equal formulas collapse in sets."""
        assert len({parse_formula("p & q"), Conj(p, q), parse_formula("(p & q)")}) == 1
        assert Conj(p, q) != Conj(q, p)
        assert Conj(p, q) != Disj(p, q)


class TestSequents:
    """Sequent parsing and cedent operations."""

    def test_parse_sequent(self):
        s1 = parse_sequent("p, q -> r => r")
        assert s1.antecedent == Cedent.of(p, Impl(q, r))
        assert s1.succedent == r
        assert s1.text == "p, q -> r => r"

    def test_empty_antecedent(self):
        s1 = parse_sequent("=> p | ~p")
        assert len(s1.antecedent) == 0
        assert s1.text == "=> p | ~p"

    def test_subsequent(self):
        small = sequent([p], r)
        big = sequent([p, q], r)
        assert small.is_subsequent_of(big)
        assert not big.is_subsequent_of(small)
        assert not sequent([p], q).is_subsequent_of(big)

    def test_cedent_add_and_remove(self):
        g = Cedent.of(p)
        assert g.add(p) is g
        assert g.remove(q) is g
        assert g.add(q).remove(p) == Cedent.of(q)
        assert g.union([p]) is g


class TestHarropAndSize:
    """Harrop test, sizes and atoms."""

    def test_is_harrop(self):
        assert is_harrop(parse_formula("p & ~q"))
        assert is_harrop(parse_formula("(p | q) -> r"))
        assert not is_harrop(parse_formula("p | q"))
        assert not is_harrop(parse_formula("p -> q | r"))
        assert not is_harrop(parse_formula("s & (p -> q | r)"))

    def test_formula_size_counts_connectives(self):
        assert formula_size(p) == 0
        assert formula_size(parse_formula("p & (q -> r)")) == 2
        assert formula_size(parse_formula("~p")) == 1

    def test_atoms_of(self):
        assert atoms_of(parse_formula("p & (q -> r) | ~p")) == {p, q, r}

    def test_nested_helpers(self):
        assert big_and([p]) == p
        assert big_and([p, q, r]) == Conj(p, Conj(q, r))
        assert big_or([p, q, r]) == Disj(p, Disj(q, r))
        assert exclusive_or([p, q]) == Disj(Conj(p, neg(q)), Conj(q, neg(p)))
        with pytest.raises(ValueError):
            big_or([])


class TestStrictlyPositiveDisjunctions:
    """Enumeration and strengthening."""

    def setup_method(self):
        self.g = Cedent.of(parse_formula("p | (q | r)"), parse_formula("s -> t | u"), a)
        self.e = spd_enumerate(self.g)

    def test_enumeration_order(self):
        """Canonical formula order, outer occurrences before inner ones."""
        assert [f.text for f in self.e.formulas] == ["a", "p | q | r", "s -> t | u"]
        assert self.e.count == 3
        assert self.e.occurrences == (
            OccurrencePath(1, ()),
            OccurrencePath(1, (Direction.RIGHT,)),
            OccurrencePath(2, (Direction.RIGHT,)),
        )
        assert str(self.e.occurrences[0]) == "1:root"
        assert str(self.e.occurrences[2]) == "2:R"

    def test_strengthen_follows_choices(self):
        assert strengthen(self.g, self.e, ChoiceVector((1, 0, 1))) == Cedent.of(q, Impl(s, u), a)
        assert strengthen(self.g, self.e, ChoiceVector((1, 1, 0))) == Cedent.of(r, Impl(s, t), a)

    def test_outer_choice_hides_inner_bit(self):
        """Once the outer disjunction picks p, the inner bit is irrelevant."""
        first = strengthen(self.g, self.e, ChoiceVector((0, 0, 0)))
        second = strengthen(self.g, self.e, ChoiceVector((0, 1, 0)))
        assert first == second == Cedent.of(p, Impl(s, t), a)

    def test_strengthening_is_harrop(self):
        for _, strengthened in all_strengthenings(self.g):
            assert strengthened.harrop

    def test_wrong_length_rejected(self):
        with pytest.raises(ChoiceVectorError):
            strengthen(self.g, self.e, ChoiceVector((0, 1)))

    def test_positive_occurrence_paths(self):
        """Both sides of & and |, only the consequent of ->."""
        f = parse_formula("(p -> q) & (r | s -> t)")
        assert [str(o) for o in strictly_positive_occurrences(f, 4)] == ["4:root", "4:L", "4:LR", "4:R", "4:RR"]

    def test_harrop_cedent_has_no_choices(self):
        g = Cedent.of(parse_formula("(p | q) -> r"), p)
        assert spd_enumerate(g).count == 0
        assert list(all_strengthenings(g)) == [(ChoiceVector(()), g)]


class TestChoiceVector:
    """Choice vector construction."""

    def test_from_int_is_little_endian(self):
        k = ChoiceVector.from_int(5, 3)
        assert k.bits == (1, 0, 1)
        assert k.to_int() == 5
        assert ChoiceVector.from_int(4, 3).text == "001"

    def test_from_bits(self):
        assert ChoiceVector.from_bits(" 011 ").bits == (0, 1, 1)
        with pytest.raises(ChoiceVectorError):
            ChoiceVector.from_bits("012")

    def test_range_checks(self):
        with pytest.raises(ChoiceVectorError):
            ChoiceVector.from_int(8, 3)
        with pytest.raises(ChoiceVectorError):
            ChoiceVector((2,))

    def test_all_vectors(self):
        assert [k.text for k in ChoiceVector.all_vectors(2)] == ["00", "10", "01", "11"]


def test_analysis_set():
    """& and -> are unpacked along strictly positive positions only."""
    f = Impl(p, Conj(q, r))
    assert analysis_set(f) == {
        sequent([p, f], Conj(q, r)),
        sequent([Conj(q, r)], q),
        sequent([Conj(q, r)], r),
    }
    assert analysis_set(p) == frozenset()


class TestRandomFormulas:
    """Seeded checks over generated formulas and cedents."""

    def setup_method(self):
        self.generator = DerivationGenerator(random.Random(50), max_depth=4)

    def variants(self, f):
        return [f, neg(f), Impl(f, BOTTOM), Conj(f, BOTTOM), Disj(BOTTOM, f), Impl(BOTTOM, neg(neg(f)))]

    def test_printed_text_parses_back(self):
        for _ in range(200):
            for f in self.variants(self.generator.formula(4)):
                assert parse_formula(f.text) == f, f.text
                assert parse_formula(f"({f.text})") == f

    def test_strengthenings_are_harrop(self):
        seen = 0
        while seen < 100:
            g = Cedent.of(*(self.generator.formula(3) for _ in range(self.generator.rng.randint(1, 4))))
            e = spd_enumerate(g)
            if e.count > 4:
                continue
            seen += 1
            vectors = list(all_strengthenings(g))
            assert len(vectors) == 2 ** e.count
            for k, strengthened in vectors:
                assert strengthened.harrop, (g.text, k.text)
                assert len(strengthened) <= len(g)
