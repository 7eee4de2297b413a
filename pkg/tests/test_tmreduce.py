"""Tests for the Turing machine reduction."""

from dataclasses import replace
from itertools import product

import pytest

from dp_toolkit.constants import EncodingScope, Rule, Verdict
from dp_toolkit.deduction import check_derivation, node_count
from dp_toolkit.exceptions import PreconditionError, TmInputError, TmInvariantError, TmSpecError
from dp_toolkit.extract import verify_result
from dp_toolkit.machines import PARITY_MACHINE, UNIT_MACHINE, load_machine
from dp_toolkit.parsers import parse_tm_spec
from dp_toolkit.syntax import ChoiceVector, Sequent, spd_enumerate
from dp_toolkit.tmreduce import (
    DecisionPipeline,
    P,
    atom_name,
    build_dp_derivation,
    check_jl7,
    decide,
    decide_by_propagation,
    derive_exclusion,
    encode,
    encode_input,
    encoding_size,
    head,
    input_to_choices,
    measure_growth,
    run_assignment,
    side_condition_holds,
    simulate,
    split_head,
)


def words(n):
    return ["".join(bits) for bits in product("01", repeat=n)]


def parity_verdict(word):
    return Verdict.ACCEPT if word.count("1") % 2 == 0 else Verdict.REJECT


SHORT_LENGTHS = [1, 2, pytest.param(3, marks=pytest.mark.slow), pytest.param(4, marks=pytest.mark.slow)]


class TestMachines:
    """Machine descriptions and the local rule."""

    def test_head_symbols(self):
        assert head("s0", "1") == "s0/1"
        assert split_head("sa/B") == ("sa", "B")

    def test_unit_local_rule(self, unit):
        assert unit.local_rule("B", "s0/1", "B") == "sa/B"
        assert unit.local_rule("B", "s0/0", "B") == "sr/B"
        assert unit.local_rule("B", "sa/B", "B") == "sa/B"
        assert unit.local_rule("sa/B", "B", "B") == "B"

    def test_moves_carry_the_head(self, parity):
        assert parity.local_rule("s0/1", "0", "B") == "o/0"
        assert parity.local_rule("B", "M", "e/B") == "ra/M"
        assert parity.local_rule("B", "s0/1", "0") == "M"

    def test_validation(self, unit):
        with pytest.raises(TmSpecError):
            replace(unit, reject="sa")
        with pytest.raises(TmSpecError):
            replace(unit, input_alphabet=("0", "B"))
        with pytest.raises(TmSpecError):
            replace(unit, start="q9")

    def test_parse_input(self, unit):
        assert unit.parse_input("10") == ("1", "0")
        assert unit.parse_input("1 0") == ("1", "0")
        assert unit.parse_input(["1"]) == ("1",)
        with pytest.raises(TmInputError):
            unit.parse_input("2")
        with pytest.raises(TmInputError):
            unit.parse_input("")

    def test_load_machine(self, tmp_path):
        assert load_machine("unit").name == "unit"
        path = tmp_path / "parity.tm"
        path.write_text(PARITY_MACHINE)
        assert load_machine(str(path)) == parse_tm_spec(PARITY_MACHINE)
        with pytest.raises(TmSpecError):
            load_machine("no-such-machine")


class TestSimulation:
    """Runs of the sample machines."""

    def test_unit_machine(self, unit):
        run = simulate(unit, "1")
        assert run.ell == 2
        assert run.render(0) == "B s0/1 B B"
        assert run.render(2) == "B sa/B B B"
        assert run.verdict is Verdict.ACCEPT
        assert simulate(unit, "0").verdict is Verdict.REJECT

    def test_parity_run(self, parity):
        run = simulate(parity, "11")
        assert run.ell == 5
        assert run.render(1) == "B M o/1 B B B B"
        assert run.final_symbol == "sa/B"

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_parity_verdicts(self, parity, n):
        for word in words(n):
            assert simulate(parity, word).verdict is parity_verdict(word), word

    def test_two_heads_rejected(self):
        m = parse_tm_spec(UNIT_MACHINE + "s0/1 B B -> sa/B\n")
        with pytest.raises(TmInvariantError) as excinfo:
            simulate(m, "1")
        assert excinfo.value.context["time"] == 0

    def test_bound_too_small(self):
        m = parse_tm_spec(PARITY_MACHINE.replace("bound: 1 2 0", "bound: 0 1 0"))
        with pytest.raises(TmInvariantError):
            simulate(m, "0")
        short = parse_tm_spec(UNIT_MACHINE.replace("bound: 1 1 0", "bound: 0 0 0"))
        with pytest.raises(TmSpecError):
            simulate(short, "1")


class TestEncoding:
    """The formulas β, δ_t, γ and α."""

    def test_atom_names(self):
        assert atom_name("s0/1", 1, 0) == "P_s0_1_1_0"
        assert P("B", 0, 3).name == "P_B_0_3"

    def test_unit_encoding_shape(self, unit):
        enc = encode(unit, 1)
        assert enc.ell == 2
        assert len(enc.delta) == 3
        assert len(enc.big_gamma) == 4
        assert len(enc.delta_big) == 6
        assert enc.acc == P("sa/B", 1, 2)
        assert enc.rej == P("sr/B", 1, 2)
        assert enc.domain(1, 0) == ("s0/0", "s0/1")
        assert enc.domain(1, 1) == ("sa/B", "sr/B")
        assert enc.domain(0, 1) == ("B",)

    def test_full_scope_domains(self, unit):
        enc = encode(unit, 1, EncodingScope.FULL)
        assert enc.domain(1, 0) == unit.symbols
        assert enc.domain(0, 2) == unit.symbols

    def test_gamma_excludes_final_symbols(self, unit):
        enc = encode(unit, 1)
        assert len(enc.gamma_symbols) == len(unit.symbols) - 2
        assert unit.accept_symbol not in enc.gamma_symbols

    def test_only_input_blocks_are_disjunctive(self, parity):
        for n in (1, 2, 3):
            enc = encode(parity, n)
            assert spd_enumerate(enc.delta_big).count == n
            assert not enc.delta[0].harrop
            assert all(f.harrop for f in enc.delta_big if f != enc.delta[0])

    def test_encode_input(self, unit):
        enc = encode(unit, 1)
        assert len(encode_input(unit, "1", 0, enc)) == 2
        assert len(encode_input(unit, "1", 2, enc)) == 4
        with pytest.raises(PreconditionError):
            encode_input(unit, "1", 3, enc)

    def test_length_must_be_positive(self, unit):
        with pytest.raises(PreconditionError):
            encode(unit, 0)


class TestChoices:
    """Input words as choice vectors."""

    def test_unit_choices(self, unit):
        assert input_to_choices(unit, 1, "1") == ChoiceVector((1,))
        assert input_to_choices(unit, 1, "0") == ChoiceVector((0,))

    def test_parity_choices(self, parity):
        enc = encode(parity, 2)
        assert input_to_choices(parity, 2, "10", enc) == ChoiceVector((1, 0))
        assert input_to_choices(parity, 2, "01", enc) == ChoiceVector((0, 1))

    def test_length_mismatch(self, parity):
        with pytest.raises(PreconditionError):
            input_to_choices(parity, 2, "1")

    def test_run_assignment(self, unit):
        assignment = run_assignment(unit, "1")
        assert len(assignment) == 3 * 4
        assert assignment[P("sa/B", 1, 2)]
        assert P("sr/B", 1, 2) not in assignment

    def test_full_scope_is_larger(self, unit):
        assert 0 < encoding_size(encode(unit, 1)) < encoding_size(encode(unit, 1, EncodingScope.FULL))

    @pytest.mark.parametrize("n", [1, 2])
    def test_side_condition(self, parity, n):
        enc = encode(parity, n)
        for word in words(n):
            assert side_condition_holds(parity, word, enc), word


class TestPropagation:
    """Unit propagation tracks the run exactly."""

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_jl7_parity(self, parity, n):
        enc = encode(parity, n)
        for word in words(n):
            assert check_jl7(parity, word, enc), word
            assert decide_by_propagation(parity, word, enc) is parity_verdict(word)

    def test_jl7_full_scope(self, unit):
        enc = encode(unit, 1, EncodingScope.FULL)
        assert check_jl7(unit, "1", enc)
        assert check_jl7(unit, "0", enc)


class TestDerivation:
    """The polynomial-size derivation of Δ ⇒ acc ∨ rej."""

    def test_unit_derivation_checks(self, unit):
        enc = encode(unit, 1)
        d = build_dp_derivation(unit, 1, enc)
        assert check_derivation(d).ok
        assert d.conclusion == Sequent(enc.delta_big, enc.goal)

    def test_exclusion_hypothesis_unused(self, unit):
        enc = encode(unit, 1)
        d = build_dp_derivation(unit, 1, enc)
        assert not any(node.rule is Rule.AX and node.succedent == enc.alpha_neg for _, node in d.walk())
        assert check_derivation(derive_exclusion(unit, 1, enc)).ok

    @pytest.mark.parametrize("n", [1, 2])
    def test_parity_derivation_checks(self, parity, n):
        d = DecisionPipeline(parity).derivation(n)
        assert check_derivation(d).ok

    def test_full_scope_derivation(self, unit):
        enc = encode(unit, 1, EncodingScope.FULL)
        d = build_dp_derivation(unit, 1, enc)
        assert check_derivation(d).ok
        assert d.succedent == enc.goal

    @pytest.mark.slow
    def test_growth_is_polynomial(self, parity):
        report = measure_growth(parity, range(1, 7))
        assert list(report.node_counts) == sorted(report.node_counts)
        assert 0.5 < report.encoding_slope <= 3.0
        assert 0.5 < report.derivation_slope <= 3.0


class TestDecision:
    """Deciding the machine by extraction."""

    def test_unit_machine(self, unit):
        assert decide(unit, "1") is Verdict.ACCEPT
        assert decide(unit, "0") is Verdict.REJECT

    @pytest.mark.parametrize("n", [1, 2])
    def test_parity_agrees_with_simulation(self, parity, n):
        pipeline = DecisionPipeline(parity)
        for word in words(n):
            verdict, result = pipeline.decide_with_certificate(word)
            assert verdict is parity_verdict(word), word
            assert verify_result(result), word

    @pytest.mark.slow
    def test_parity_length_three(self, parity):
        pipeline = DecisionPipeline(parity)
        for word in words(3):
            assert pipeline.decide(word) is simulate(parity, word).verdict, word

    def test_pipeline_caches_per_length(self, parity):
        pipeline = DecisionPipeline(parity)
        pipeline.decide("1")
        pipeline.decide("0")
        assert list(pipeline._derivations) == [1]
        assert node_count(pipeline.derivation(1)) > 0


class TestShortInputs:
    """Every input up to length four on both sample machines."""

    @pytest.mark.parametrize("machine", ["unit", "parity"])
    @pytest.mark.parametrize("n", SHORT_LENGTHS)
    def test_reduction_matches_simulation(self, request, machine, n):
        m = request.getfixturevalue(machine)
        pipeline = DecisionPipeline(m)
        enc = pipeline.encoding(n)
        d = pipeline.derivation(n)
        assert check_derivation(d).ok
        assert d.conclusion == Sequent(enc.delta_big, enc.goal)
        for word in words(n):
            expected = simulate(m, word).verdict
            assert check_jl7(m, word, enc), word
            assert side_condition_holds(m, word, enc), word
            assert decide_by_propagation(m, word, enc) is expected, word
            verdict, result = pipeline.decide_with_certificate(word)
            assert verdict is expected, word
            assert verify_result(result), word

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_unit_machine_reads_the_first_symbol(self, unit, n):
        for word in words(n):
            expected = Verdict.ACCEPT if word[0] == "1" else Verdict.REJECT
            assert simulate(unit, word).verdict is expected, word
