"""Turing machine reduction: simulator, propositional encoding and polynomial-size derivations.

A machine run on inputs of length n is encoded with atoms P(a,i,t) ("symbol a at position i at
time t") for positions 0..ℓ+1 and times 0..ℓ. Head cells are written ``state/symbol``.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .constants import BLANK, HEAD_SEPARATOR, Direction, EncodingScope, Move, Verdict
from .deduction import (
    NjDerivation,
    and_elim,
    and_intro,
    and_intro_all,
    axiom,
    ex_falso,
    imp_elim,
    imp_intro,
    inject_disjunct,
    node_count,
    or_intro,
    project_conjunct,
    split_cases,
)
from .extract import ExtractionResult, extract_choice
from .exceptions import PreconditionError, TmInputError, TmInvariantError, TmSpecError
from .horn import HornClause, HornClauseSet, clauses_from_formula, minimal_model
from .logger import get_toolkit_logger
from .oracle import evaluate
from .syntax import (
    Atom,
    Cedent,
    ChoiceVector,
    Conj,
    Disj,
    Formula,
    Impl,
    big_and,
    big_or,
    exclusive_or,
    formula_size,
    neg,
    spd_enumerate,
    strengthen,
)
from .utils import loglog_slope, timed

logger = logging.getLogger(__name__)

Symbol = str


def head(state: str, symbol: Symbol) -> Symbol:
    return f"{state}{HEAD_SEPARATOR}{symbol}"


def is_head(symbol: Symbol) -> bool:
    return HEAD_SEPARATOR in symbol


def split_head(symbol: Symbol) -> Tuple[str, Symbol]:
    state, _, tape = symbol.partition(HEAD_SEPARATOR)
    return state, tape


# ---------------------------------------------------------------------------
# Machines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Transition:
    state: str
    read: Symbol
    next_state: str
    write: Symbol
    move: Move


@dataclass
class TmSpec:
    """Deterministic one-tape machine; the step is the local rule f on symbol triples."""
    name: str
    states: Tuple[str, ...]
    input_alphabet: Tuple[Symbol, ...]
    tape_alphabet: Tuple[Symbol, ...]
    start: str
    accept: str
    reject: str
    bound: Tuple[int, int, int]
    transitions: Dict[Tuple[str, Symbol], Transition] = field(default_factory=dict)
    overrides: Dict[Tuple[Symbol, Symbol, Symbol], Symbol] = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def alnum(name: str) -> bool:
            return name.isalnum() and name.isascii()

        for name in (*self.states, *self.tape_alphabet):
            if not alnum(name):
                raise TmSpecError(f"State and symbol names must be alphanumeric: {name!r}")
        if BLANK not in self.tape_alphabet:
            raise TmSpecError(f"Tape alphabet must contain the blank {BLANK}")
        if BLANK in self.input_alphabet or not set(self.input_alphabet) <= set(self.tape_alphabet):
            raise TmSpecError("Input alphabet must be a blank-free subset of the tape alphabet")
        if not self.input_alphabet:
            raise TmSpecError("Input alphabet is empty")
        for state in (self.start, self.accept, self.reject):
            if state not in self.states:
                raise TmSpecError(f"Unknown state {state!r}")
        if self.accept == self.reject:
            raise TmSpecError("Accepting and rejecting states must differ")
        if len(self.bound) != 3 or any(c < 0 for c in self.bound):
            raise TmSpecError(f"Bound needs three non-negative coefficients: {self.bound}")
        for (state, read), tr in self.transitions.items():
            if state in (self.accept, self.reject):
                raise TmSpecError(f"Halting state {state} must not have transitions")
            if state not in self.states or tr.next_state not in self.states:
                raise TmSpecError(f"Transition {state} {read} uses an unknown state")
            if read not in self.tape_alphabet or tr.write not in self.tape_alphabet:
                raise TmSpecError(f"Transition {state} {read} uses an unknown symbol")
        known = set(self.symbols)
        for triple, result in self.overrides.items():
            if not set(triple) <= known or result not in known:
                raise TmSpecError(f"Rule {' '.join(triple)} -> {result} uses an unknown symbol")

    @cached_property
    def symbols(self) -> Tuple[Symbol, ...]:
        """T ∪ (Q×T) in a fixed order."""
        return tuple(self.tape_alphabet) + tuple(head(q, a) for q in self.states for a in self.tape_alphabet)

    @property
    def accept_symbol(self) -> Symbol:
        return head(self.accept, BLANK)

    @property
    def reject_symbol(self) -> Symbol:
        return head(self.reject, BLANK)

    def step_bound(self, n: int) -> int:
        c0, c1, c2 = self.bound
        return c0 + c1 * n + c2 * n * n

    def local_rule(self, a: Symbol, b: Symbol, c: Symbol) -> Symbol:
        """f(a, b, c): the symbol at a cell after one step, given its neighbourhood."""
        override = self.overrides.get((a, b, c))
        if override is not None:
            return override
        if is_head(b):
            tr = self.transitions.get(split_head(b))
            if tr is None:
                return b
            return head(tr.next_state, tr.write) if tr.move is Move.STAY else tr.write
        if is_head(a):
            tr = self.transitions.get(split_head(a))
            if tr is not None and tr.move is Move.RIGHT:
                return head(tr.next_state, b)
        if is_head(c):
            tr = self.transitions.get(split_head(c))
            if tr is not None and tr.move is Move.LEFT:
                return head(tr.next_state, b)
        return b

    def parse_input(self, text: Union[str, Sequence[str]]) -> Tuple[Symbol, ...]:
        """Input word: whitespace/comma separated symbols, or one character per symbol."""
        if isinstance(text, str):
            cleaned = text.replace(",", " ")
            word = tuple(cleaned.split()) if " " in cleaned.strip() else tuple(cleaned.strip())
        else:
            word = tuple(text)
        for symbol in word:
            if symbol not in self.input_alphabet:
                raise TmInputError(f"Symbol {symbol!r} is not in the input alphabet", symbol=symbol)
        if not word:
            raise TmInputError("Input must be non-empty")
        return word

    def ell(self, n: int) -> int:
        ell = self.step_bound(n)
        if ell < n:
            raise TmSpecError(f"Step bound {ell} is shorter than the input length {n}")
        return ell


@dataclass(frozen=True)
class TmComputation:
    machine: TmSpec
    word: Tuple[Symbol, ...]
    ids: Tuple[Tuple[Symbol, ...], ...]

    @property
    def ell(self) -> int:
        return len(self.ids) - 1

    def symbol(self, i: int, t: int) -> Symbol:
        return self.ids[t][i]

    @property
    def final_symbol(self) -> Symbol:
        return self.ids[-1][1]

    @property
    def verdict(self) -> Verdict:
        return Verdict.ACCEPT if self.final_symbol == self.machine.accept_symbol else Verdict.REJECT

    def render(self, t: int) -> str:
        return " ".join(self.ids[t])


def initial_id(m: TmSpec, word: Sequence[Symbol], ell: int) -> Tuple[Symbol, ...]:
    cells = [BLANK] * (ell + 2)
    cells[1] = head(m.start, word[0])
    for i, symbol in enumerate(word[1:], start=2):
        cells[i] = symbol
    return tuple(cells)


def simulate(m: TmSpec, x: Union[str, Sequence[str]]) -> TmComputation:
    word = m.parse_input(x)
    ell = m.ell(len(word))
    sigma = initial_id(m, word, ell)
    ids = [sigma]
    for t in range(ell):
        nxt = [BLANK] * (ell + 2)
        for i in range(1, ell + 1):
            nxt[i] = m.local_rule(sigma[i - 1], sigma[i], sigma[i + 1])
        heads = [i for i, s in enumerate(nxt) if is_head(s)]
        if len(heads) != 1:
            old = next(i for i, s in enumerate(sigma) if is_head(s))
            triple = (sigma[old - 1], sigma[old], sigma[old + 1]) if 0 < old <= ell else None
            raise TmInvariantError(
                f"Step {t}->{t + 1} leaves {len(heads)} head symbols", triple=triple, time=t, position=old
            )
        sigma = tuple(nxt)
        ids.append(sigma)
    if sigma[1] not in (m.accept_symbol, m.reject_symbol):
        raise TmInvariantError(
            f"Machine is not halted over a blank at position 1 after {ell} steps: {sigma[1]}",
            time=ell,
            position=1,
        )
    return TmComputation(m, word, tuple(ids))


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

def atom_name(a: Symbol, i: int, t: int) -> str:
    return f"P_{a.replace(HEAD_SEPARATOR, '_')}_{i}_{t}"


def P(a: Symbol, i: int, t: int) -> Atom:
    return Atom(atom_name(a, i, t))


def _direction_steps(index: int, count: int) -> Tuple[Direction, ...]:
    steps = (Direction.RIGHT,) * index
    return steps + ((Direction.LEFT,) if index < count - 1 else ())


def symbol_domains(m: TmSpec, n: int, ell: int, scope: EncodingScope) -> Dict[Tuple[int, int], Tuple[Symbol, ...]]:
    """Symbols the encoding allows at (position, time)."""
    order = {s: k for k, s in enumerate(m.symbols)}
    domains: Dict[Tuple[int, int], Tuple[Symbol, ...]] = {}

    if scope is EncodingScope.FULL:
        for t in range(ell + 1):
            for i in range(ell + 2):
                domains[(i, t)] = m.symbols
        return domains

    for t in range(ell + 1):
        domains[(0, t)] = (BLANK,)
        domains[(ell + 1, t)] = (BLANK,)
    domains[(1, 0)] = tuple(head(m.start, a) for a in m.input_alphabet)
    for i in range(2, ell + 1):
        domains[(i, 0)] = tuple(m.input_alphabet) if i <= n else (BLANK,)

    for t in range(ell):
        for i in range(1, ell + 1):
            produced = {
                m.local_rule(a, b, c)
                for a in domains[(i - 1, t)]
                for b in domains[(i, t)]
                for c in domains[(i + 1, t)]
            }
            domains[(i, t + 1)] = tuple(sorted(produced, key=order.__getitem__))
    return domains


@dataclass
class TmEncoding:
    machine: TmSpec
    n: int
    ell: int
    scope: EncodingScope
    domains: Dict[Tuple[int, int], Tuple[Symbol, ...]]
    beta: Formula
    delta: Tuple[Formula, ...]
    gamma_excl: Formula
    alpha_neg: Formula
    big_gamma: Cedent
    delta_big: Cedent
    acc: Atom
    rej: Atom
    blocks: Tuple[Tuple[Atom, ...], ...]
    _alpha: Dict[int, Formula] = field(default_factory=dict, repr=False)

    def domain(self, i: int, t: int) -> Tuple[Symbol, ...]:
        return self.domains[(i, t)]

    def position_items(self, i: int, t: int) -> List[Atom]:
        return [P(a, i, t) for a in self.domains[(i, t)]]

    def alpha_t(self, t: int) -> Formula:
        """⋀_{1≤i≤ℓ} ⋁_{a} P(a,i,t) over the domains of time t."""
        cached = self._alpha.get(t)
        if cached is None:
            cached = big_and([big_or(self.position_items(i, t)) for i in range(1, self.ell + 1)])
            self._alpha[t] = cached
        return cached

    @property
    def goal(self) -> Disj:
        return Disj(self.acc, self.rej)

    @property
    def gamma_symbols(self) -> List[Symbol]:
        excluded = (self.machine.accept_symbol, self.machine.reject_symbol)
        return [a for a in self.machine.symbols if a not in excluded]

    def delta0_of(self, word: Sequence[Symbol]) -> Formula:
        items = [P(head(self.machine.start, word[0]), 1, 0)]
        items += [P(a, i, 0) for i, a in enumerate(word[1:], start=2)]
        items += [P(BLANK, i, 0) for i in range(self.n + 1, self.ell + 1)]
        return big_and(items)

    def block_disjuncts(self, position: int) -> List[Formula]:
        atoms = self.blocks[position - 1]
        return [
            big_and([p] + [neg(q) for j, q in enumerate(atoms) if j != s]) for s, p in enumerate(atoms)
        ]


def encode(m: TmSpec, n: int, scope: EncodingScope = EncodingScope.REACHABLE) -> TmEncoding:
    if n < 1:
        raise PreconditionError("Input length must be at least 1", operation="encode", n=n)
    ell = m.ell(n)
    domains = symbol_domains(m, n, ell, scope)

    beta = big_and([Conj(P(BLANK, 0, t), P(BLANK, ell + 1, t)) for t in range(ell + 1)])

    blocks: List[Tuple[Atom, ...]] = [tuple(P(head(m.start, a), 1, 0) for a in m.input_alphabet)]
    for i in range(2, n + 1):
        blocks.append(tuple(P(a, i, 0) for a in m.input_alphabet))
    delta0_items: List[Formula] = [exclusive_or(list(block)) for block in blocks]
    delta0_items += [P(BLANK, i, 0) for i in range(n + 1, ell + 1)]
    deltas: List[Formula] = [big_and(delta0_items)]

    for t in range(ell):
        per_position = []
        for i in range(1, ell + 1):
            per_a = []
            for a in domains[(i - 1, t)]:
                per_b = []
                for b in domains[(i, t)]:
                    per_c = [
                        Impl(
                            Conj(P(a, i - 1, t), Conj(P(b, i, t), P(c, i + 1, t))),
                            P(m.local_rule(a, b, c), i, t + 1),
                        )
                        for c in domains[(i + 1, t)]
                    ]
                    per_b.append(big_and(per_c))
                per_a.append(big_and(per_b))
            per_position.append(big_and(per_a))
        deltas.append(big_and(per_position))

    acc = P(m.accept_symbol, 1, ell)
    rej = P(m.reject_symbol, 1, ell)
    excluded = (m.accept_symbol, m.reject_symbol)
    gamma_excl = big_and([neg(P(a, 1, ell)) for a in m.symbols if a not in excluded])
    alpha_neg = neg(Conj(acc, rej))

    big_gamma = Cedent(frozenset([beta, *deltas]))
    delta_big = big_gamma.union([gamma_excl, alpha_neg])

    enc = TmEncoding(
        machine=m,
        n=n,
        ell=ell,
        scope=scope,
        domains=domains,
        beta=beta,
        delta=tuple(deltas),
        gamma_excl=gamma_excl,
        alpha_neg=alpha_neg,
        big_gamma=big_gamma,
        delta_big=delta_big,
        acc=acc,
        rej=rej,
        blocks=tuple(blocks),
    )
    logger.debug(f"encoded {m.name} n={n} ell={ell}: size {encoding_size(enc)}")
    return enc


def encoding_size(enc: TmEncoding) -> int:
    return sum(formula_size(f) for f in enc.delta_big)


def encode_input(m: TmSpec, x: Union[str, Sequence[str]], t: int, enc: Optional[TmEncoding] = None) -> Cedent:
    """Γ(x,t) as the cedent {β, δ0(x)} ∪ {δ_s : 0<s≤t}."""
    word = m.parse_input(x)
    enc = enc or encode(m, len(word))
    if not 0 <= t <= enc.ell:
        raise PreconditionError(f"Time {t} outside 0..{enc.ell}", operation="encode_input")
    return Cedent(frozenset([enc.beta, enc.delta0_of(word), *enc.delta[1 : t + 1]]))


def input_to_choices(m: TmSpec, n: int, x: Union[str, Sequence[str]], enc: Optional[TmEncoding] = None) -> ChoiceVector:
    """Choice vector over spd_enumerate(Δ) selecting, in each exclusive-or block, the input symbol."""
    word = m.parse_input(x)
    if len(word) != n:
        raise PreconditionError(f"Input has length {len(word)}, expected {n}", operation="input_to_choices")
    enc = enc or encode(m, n)

    # bit of every nested disjunction of each block: 1 walks right past it, 0 stops there
    bits_of: Dict[Formula, int] = {}
    for position, symbol in enumerate(word, start=1):
        chosen = m.input_alphabet.index(symbol)
        disjuncts = enc.block_disjuncts(position)
        nested = disjuncts[-1]
        suffixes = [nested]
        for item in reversed(disjuncts[:-1]):
            nested = Disj(item, nested)
            suffixes.append(nested)
        suffixes.reverse()
        for level in range(len(disjuncts) - 1):
            bits_of[suffixes[level]] = 1 if level < chosen else 0

    e = spd_enumerate(enc.delta_big)
    bits = []
    for occ in e.occurrences:
        disjunction = occ.resolve(e.formulas[occ.formula_index])
        if disjunction not in bits_of:
            raise PreconditionError(f"Unexpected disjunction {disjunction}", operation="input_to_choices")
        bits.append(bits_of[disjunction])
    return ChoiceVector(tuple(bits))


def strengthened_delta(m: TmSpec, x: Union[str, Sequence[str]], enc: Optional[TmEncoding] = None) -> Cedent:
    """Δ(x): Δ strengthened by the choices naming x."""
    word = m.parse_input(x)
    enc = enc or encode(m, len(word))
    e = spd_enumerate(enc.delta_big)
    return strengthen(enc.delta_big, e, input_to_choices(m, len(word), word, enc))


# ---------------------------------------------------------------------------
# Polynomial-size derivation
# ---------------------------------------------------------------------------

class _DerivationBuilder:
    """Builds Δ⇒acc∨rej via Δ⇒α_t for t = 0..ℓ."""

    def __init__(self, enc: TmEncoding):
        self.enc = enc
        self.ell = enc.ell

    def is_direct(self, j: int, t: int) -> bool:
        return j in (0, self.ell + 1) or len(self.enc.domain(j, t)) == 1

    def boundary(self, ant: Cedent, j: int, t: int) -> NjDerivation:
        d = project_conjunct(axiom(ant, self.enc.beta), t, self.ell + 1)
        return and_elim(d, Direction.LEFT if j == 0 else Direction.RIGHT)

    def alpha_component(self, ant: Cedent, j: int, t: int) -> NjDerivation:
        return project_conjunct(axiom(ant, self.enc.alpha_t(t)), j - 1, self.ell)

    def direct_symbol_index(self, j: int, t: int) -> int:
        return self.enc.domain(j, t).index(BLANK) if j in (0, self.ell + 1) else 0

    def atom_derivation(self, ant: Cedent, j: int, t: int, symbol_index: int) -> NjDerivation:
        if j in (0, self.ell + 1):
            return self.boundary(ant, j, t)
        if len(self.enc.domain(j, t)) == 1:
            return self.alpha_component(ant, j, t)
        return axiom(ant, P(self.enc.domain(j, t)[symbol_index], j, t))

    def initial(self) -> NjDerivation:
        """Δ ⇒ α_0 by case analysis on every exclusive-or block of δ0."""
        enc = self.enc
        ant = enc.delta_big
        parts = []
        for i in range(1, self.ell + 1):
            goal_items = enc.position_items(i, 0)
            component = project_conjunct(axiom(ant, enc.delta[0]), i - 1, self.ell)
            if i <= enc.n:
                atoms = enc.blocks[i - 1]
                disjuncts = enc.block_disjuncts(i)

                def case(s: int, case_ant: Cedent, atoms=atoms, disjuncts=disjuncts, goal_items=goal_items):
                    d = axiom(case_ant, disjuncts[s])
                    if isinstance(disjuncts[s], Conj):
                        d = and_elim(d, Direction.LEFT)
                    return inject_disjunct(d, goal_items, goal_items.index(atoms[s]))

                parts.append(split_cases(component, disjuncts, case))
            else:
                parts.append(inject_disjunct(component, goal_items, goal_items.index(P(BLANK, i, 0))))
        return and_intro_all(parts)

    def fire(self, ant: Cedent, i: int, t: int, chosen: Sequence[int]) -> NjDerivation:
        enc = self.enc
        positions = (i - 1, i, i + 1)
        symbols = [enc.domain(j, t)[k] for j, k in zip(positions, chosen)]
        premises = [self.atom_derivation(ant, j, t, k) for j, k in zip(positions, chosen)]
        body = and_intro(premises[0], and_intro(premises[1], premises[2]))

        clause = axiom(ant, enc.delta[t + 1])
        clause = project_conjunct(clause, i - 1, self.ell)
        for j, k in zip(positions, chosen):
            clause = project_conjunct(clause, k, len(enc.domain(j, t)))
        fired = imp_elim(clause, body)

        produced = P(enc.machine.local_rule(*symbols), i, t + 1)
        goal_items = enc.position_items(i, t + 1)
        return inject_disjunct(fired, goal_items, goal_items.index(produced))

    def position_step(self, ant: Cedent, i: int, t: int) -> NjDerivation:
        """ant ⇒ ⋁_a P(a,i,t+1), conditioning on the symbols at i-1, i, i+1."""

        def choose(level: int, local: Cedent, chosen: Tuple[int, ...]) -> NjDerivation:
            if level == 3:
                return self.fire(local, i, t, chosen)
            j = i - 1 + level
            if self.is_direct(j, t):
                return choose(level + 1, local, chosen + (self.direct_symbol_index(j, t),))
            major = self.alpha_component(local, j, t)
            items = self.enc.position_items(j, t)
            return split_cases(major, items, lambda k, case_ant: choose(level + 1, case_ant, chosen + (k,)))

        return choose(0, ant, ())

    def step(self, t: int) -> NjDerivation:
        """Δ, α_t ⇒ α_{t+1}."""
        ant = self.enc.delta_big.add(self.enc.alpha_t(t))
        return and_intro_all([self.position_step(ant, i, t) for i in range(1, self.ell + 1)])

    def final(self, alpha_ell: NjDerivation) -> NjDerivation:
        """From Δ ⇒ α_ℓ to Δ ⇒ acc ∨ rej, ruling out other symbols with γ."""
        enc = self.enc
        goal = enc.goal
        gamma_symbols = enc.gamma_symbols
        items = enc.position_items(1, self.ell)
        symbols = enc.domain(1, self.ell)
        major = project_conjunct(alpha_ell, 0, self.ell)

        def case(s: int, ant: Cedent) -> NjDerivation:
            atom = items[s]
            if atom == enc.acc or atom == enc.rej:
                return or_intro(axiom(ant, atom), goal)
            negation = project_conjunct(
                axiom(ant, enc.gamma_excl), gamma_symbols.index(symbols[s]), len(gamma_symbols)
            )
            return ex_falso(imp_elim(negation, axiom(ant, atom)), goal)

        return split_cases(major, items, case)

    def build(self) -> NjDerivation:
        d = self.initial()
        for t in range(self.ell):
            step = self.step(t)
            d = imp_elim(imp_intro(step, self.enc.alpha_t(t), self.enc.delta_big), d)
        return self.final(d)


def build_dp_derivation(m: TmSpec, n: int, enc: Optional[TmEncoding] = None) -> NjDerivation:
    """Polynomial-size derivation of Δ ⇒ P((s_a,B),1,ℓ) ∨ P((s_r,B),1,ℓ); α is never used."""
    enc = enc or encode(m, n)
    d = _DerivationBuilder(enc).build()
    get_toolkit_logger().log_tm_step("derive", m.name, n, nodes=node_count(d), ell=enc.ell)
    return d


def derive_exclusion(m: TmSpec, n: int, enc: Optional[TmEncoding] = None) -> NjDerivation:
    """Δ ⇒ ¬(acc ∧ rej), an axiom since α ∈ Δ."""
    enc = enc or encode(m, n)
    return axiom(enc.delta_big, enc.alpha_neg)


# ---------------------------------------------------------------------------
# Decisions and checks
# ---------------------------------------------------------------------------

class DecisionPipeline:
    """Caches the encoding and derivation per input length."""

    def __init__(self, m: TmSpec, scope: EncodingScope = EncodingScope.REACHABLE):
        self.machine = m
        self.scope = scope
        self._encodings: Dict[int, TmEncoding] = {}
        self._derivations: Dict[int, NjDerivation] = {}

    def encoding(self, n: int) -> TmEncoding:
        if n not in self._encodings:
            self._encodings[n] = encode(self.machine, n, self.scope)
        return self._encodings[n]

    def derivation(self, n: int) -> NjDerivation:
        if n not in self._derivations:
            self._derivations[n] = build_dp_derivation(self.machine, n, self.encoding(n))
        return self._derivations[n]

    def extract(self, x: Union[str, Sequence[str]]) -> ExtractionResult:
        word = self.machine.parse_input(x)
        n = len(word)
        k = input_to_choices(self.machine, n, word, self.encoding(n))
        return extract_choice(self.derivation(n), k)

    def decide_with_certificate(self, x: Union[str, Sequence[str]]) -> Tuple[Verdict, ExtractionResult]:
        """Verdict read off the extracted disjunct, with the extraction result."""
        result = self.extract(x)
        enc = self.encoding(len(self.machine.parse_input(x)))
        verdict = Verdict.ACCEPT if result.disjunct == enc.acc else Verdict.REJECT
        get_toolkit_logger().log_tm_step("decide", self.machine.name, enc.n, verdict=verdict.value)
        return verdict, result

    def decide(self, x: Union[str, Sequence[str]]) -> Verdict:
        return self.decide_with_certificate(x)[0]


def decide(m: TmSpec, x: Union[str, Sequence[str]], scope: EncodingScope = EncodingScope.REACHABLE) -> Verdict:
    return DecisionPipeline(m, scope).decide(x)


def horn_clauses(cedent: Cedent) -> HornClauseSet:
    clauses: List[HornClause] = []
    for f in cedent.ordered():
        clauses.extend(clauses_from_formula(f))
    return HornClauseSet.of(clauses)


def decide_by_propagation(m: TmSpec, x: Union[str, Sequence[str]], enc: Optional[TmEncoding] = None) -> Verdict:
    """Unit propagation over Γ(x,ℓ): acc is derived iff M accepts x."""
    word = m.parse_input(x)
    enc = enc or encode(m, len(word))
    model = minimal_model(horn_clauses(encode_input(m, word, enc.ell, enc)))
    if enc.acc in model and enc.rej not in model:
        return Verdict.ACCEPT
    if enc.rej in model and enc.acc not in model:
        return Verdict.REJECT
    raise TmInvariantError("Propagation derives neither or both final atoms", time=enc.ell, position=1)


@dataclass(frozen=True)
class Jl7Mismatch:
    symbol: Symbol
    position: int
    time: int
    derivable: bool
    actual: Symbol


def jl7_mismatches(m: TmSpec, x: Union[str, Sequence[str]], enc: Optional[TmEncoding] = None) -> List[Jl7Mismatch]:
    """Positions where derivability of P(a,i,t) from Γ(x,t) disagrees with the run."""
    word = m.parse_input(x)
    enc = enc or encode(m, len(word))
    run = simulate(m, word)
    mismatches = []
    for t in range(enc.ell + 1):
        model = minimal_model(horn_clauses(encode_input(m, word, t, enc)))
        for i in range(enc.ell + 2):
            actual = run.symbol(i, t)
            for a in m.symbols:
                derivable = P(a, i, t) in model
                if derivable != (a == actual):
                    mismatches.append(Jl7Mismatch(a, i, t, derivable, actual))
    return mismatches


def check_jl7(m: TmSpec, x: Union[str, Sequence[str]], enc: Optional[TmEncoding] = None) -> bool:
    """P(a,i,t) follows from Γ(x,t) by unit propagation iff a is the i-th symbol of σ_t."""
    return not jl7_mismatches(m, x, enc)


def run_assignment(m: TmSpec, x: Union[str, Sequence[str]]) -> Dict[Atom, bool]:
    run = simulate(m, x)
    return {P(run.symbol(i, t), i, t): True for t in range(run.ell + 1) for i in range(run.ell + 2)}


def side_condition_holds(m: TmSpec, x: Union[str, Sequence[str]], enc: Optional[TmEncoding] = None) -> bool:
    """Δ(x) ∪ {¬(acc∧rej)} is true under the run's assignment."""
    word = m.parse_input(x)
    enc = enc or encode(m, len(word))
    assignment = run_assignment(m, word)
    formulas = list(strengthened_delta(m, word, enc)) + [enc.alpha_neg]
    return all(evaluate(f, assignment) for f in formulas)


@dataclass(frozen=True)
class GrowthReport:
    lengths: Tuple[int, ...]
    encoding_sizes: Tuple[int, ...]
    node_counts: Tuple[int, ...]

    @property
    def encoding_slope(self) -> float:
        return loglog_slope(self.lengths, self.encoding_sizes)

    @property
    def derivation_slope(self) -> float:
        return loglog_slope(self.lengths, self.node_counts)


@timed("measure_growth")
def measure_growth(
    m: TmSpec, lengths: Sequence[int], scope: EncodingScope = EncodingScope.REACHABLE
) -> GrowthReport:
    pipeline = DecisionPipeline(m, scope)
    sizes = []
    nodes = []
    for n in lengths:
        sizes.append(encoding_size(pipeline.encoding(n)))
        nodes.append(node_count(pipeline.derivation(n)))
    return GrowthReport(tuple(lengths), tuple(sizes), tuple(nodes))


__all__ = [
    "Symbol", "head", "is_head", "split_head", "Transition", "TmSpec", "TmComputation", "initial_id",
    "simulate", "atom_name", "P", "symbol_domains", "TmEncoding", "encode", "encoding_size",
    "encode_input", "input_to_choices", "strengthened_delta", "build_dp_derivation",
    "derive_exclusion", "DecisionPipeline", "decide", "horn_clauses", "decide_by_propagation",
    "Jl7Mismatch", "jl7_mismatches", "check_jl7", "run_assignment", "side_condition_holds",
    "GrowthReport", "measure_growth",
]
