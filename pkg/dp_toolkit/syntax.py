"""Propositional syntax: formulas, cedents, sequents and strictly positive disjunctions.

Formulas are immutable trees compared structurally. Hashes are computed once at construction,
so large formulas (the machine encodings) can be used freely as set members and dict keys.
"""

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple, Union

from .constants import BOTTOM_TEXT, Direction
from .exceptions import ChoiceVectorError, FormulaSyntaxError, PreconditionError

logger = logging.getLogger(__name__)

ATOM_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

Steps = Tuple[Direction, ...]

# Binding strength used by the printer; higher binds tighter.
_PREC_IMPL = 1
_PREC_DISJ = 2
_PREC_CONJ = 3
_PREC_UNARY = 4


class Formula:
    """Base class of the five formula constructors."""

    _hash: int

    def _key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other):
            return False
        return self._hash == other._hash and self._key() == other._key()  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Formula") -> bool:
        return self.text < other.text

    def __str__(self) -> str:
        return self.text

    @cached_property
    def text(self) -> str:
        return _render(self)

    @cached_property
    def harrop(self) -> bool:
        return True

    @property
    def precedence(self) -> int:
        return _PREC_UNARY

    def children(self) -> Tuple["Formula", ...]:
        return ()


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    name: str
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not ATOM_PATTERN.fullmatch(self.name):
            raise FormulaSyntaxError(f"Invalid atom name: {self.name!r}", text=self.name)
        object.__setattr__(self, "_hash", hash(("atom", self.name)))

    def _key(self) -> tuple:
        return (self.name,)


@dataclass(frozen=True, eq=False)
class Bottom(Formula):
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash("bottom"))

    def _key(self) -> tuple:
        return ()


@dataclass(frozen=True, eq=False)
class _Binary(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((type(self).__name__, self.left._hash, self.right._hash)))

    def _key(self) -> tuple:
        return (self.left, self.right)

    def children(self) -> Tuple[Formula, ...]:
        return (self.left, self.right)

    def child(self, direction: Direction) -> Formula:
        return self.left if direction is Direction.LEFT else self.right


@dataclass(frozen=True, eq=False)
class Conj(_Binary):
    @cached_property
    def harrop(self) -> bool:
        return self.left.harrop and self.right.harrop

    @property
    def precedence(self) -> int:
        return _PREC_CONJ


@dataclass(frozen=True, eq=False)
class Disj(_Binary):
    @cached_property
    def harrop(self) -> bool:
        return False

    @property
    def precedence(self) -> int:
        return _PREC_DISJ


@dataclass(frozen=True, eq=False)
class Impl(_Binary):
    @cached_property
    def harrop(self) -> bool:
        return self.right.harrop

    @property
    def is_negation(self) -> bool:
        return isinstance(self.right, Bottom)

    @property
    def precedence(self) -> int:
        return _PREC_UNARY if self.is_negation else _PREC_IMPL


BOTTOM = Bottom()


def neg(f: Formula) -> Impl:
    """¬f, represented as f -> _|_."""
    return Impl(f, BOTTOM)


def big_and(items: Sequence[Formula]) -> Formula:
    """Right-nested conjunction; a single item is returned as is."""
    return _right_nested(Conj, items)


def big_or(items: Sequence[Formula]) -> Formula:
    """Right-nested disjunction; a single item is returned as is."""
    return _right_nested(Disj, items)


def exclusive_or(items: Sequence[Formula]) -> Formula:
    """Exactly-one disjunction: the i-th disjunct is p_i & ~p_j for every j != i."""
    if not items:
        raise ValueError("exclusive_or of no formulas")
    disjuncts = []
    for i, item in enumerate(items):
        others = [neg(other) for j, other in enumerate(items) if j != i]
        disjuncts.append(big_and([item] + others))
    return big_or(disjuncts)


def _right_nested(kind, items: Sequence[Formula]) -> Formula:
    if not items:
        raise ValueError(f"{kind.__name__} of no formulas")
    result = items[-1]
    for item in reversed(items[:-1]):
        result = kind(item, result)
    return result


# ---------------------------------------------------------------------------
# Printing and parsing
# ---------------------------------------------------------------------------

def _wrap(f: Formula, minimum: int) -> str:
    text = f.text
    return f"({text})" if f.precedence < minimum else text


def _render(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Bottom):
        return BOTTOM_TEXT
    if isinstance(f, Impl):
        if f.is_negation:
            return "~" + _wrap(f.left, _PREC_UNARY)
        return f"{_wrap(f.left, _PREC_DISJ)} -> {_wrap(f.right, _PREC_IMPL)}"
    if isinstance(f, Disj):
        return f"{_wrap(f.left, _PREC_CONJ)} | {_wrap(f.right, _PREC_DISJ)}"
    if isinstance(f, Conj):
        return f"{_wrap(f.left, _PREC_UNARY)} & {_wrap(f.right, _PREC_CONJ)}"
    raise TypeError(f"Not a formula: {f!r}")


def print_formula(f: Formula) -> str:
    return f.text


_TOKEN = re.compile(r"\s*(?:(_\|_)|(->)|(=>)|([~&|(),])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise FormulaSyntaxError(f"Unexpected character at {pos}", text=text, position=pos)
        start = match.start(match.lastindex)
        bottom, arrow, turnstile, punct, name = match.groups()
        if bottom:
            tokens.append(("bottom", bottom, start))
        elif arrow:
            tokens.append(("op", arrow, start))
        elif turnstile:
            tokens.append(("op", turnstile, start))
        elif punct:
            tokens.append(("op", punct, start))
        else:
            tokens.append(("atom", name, start))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over: impl := disj ['->' impl]; disj := conj ['|' disj];
    conj := unary ['&' conj]; unary := '~' unary | atom | '_|_' | '(' impl ')'."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.index]

    def take(self) -> Tuple[str, str, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, value: str) -> None:
        kind, got, pos = self.take()
        if got != value or kind == "atom":
            raise FormulaSyntaxError(
                f"Expected {value!r} at {pos}, found {got or 'end of input'!r}",
                text=self.text,
                position=pos,
            )

    def at(self, value: str) -> bool:
        kind, got, _ = self.peek()
        return kind == "op" and got == value

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.take()
            return Impl(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        if self.at("|"):
            self.take()
            return Disj(left, self.disjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        if self.at("&"):
            self.take()
            return Conj(left, self.conjunction())
        return left

    def unary(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "atom":
            return Atom(value)
        if kind == "bottom":
            return BOTTOM
        if kind == "op" and value == "~":
            return neg(self.unary())
        if kind == "op" and value == "(":
            inner = self.implication()
            self.expect(")")
            return inner
        raise FormulaSyntaxError(
            f"Unexpected {value or 'end of input'!r} at {pos}", text=self.text, position=pos
        )

    def finish(self) -> None:
        kind, value, pos = self.peek()
        if kind != "end":
            raise FormulaSyntaxError(f"Trailing input {value!r} at {pos}", text=self.text, position=pos)


def parse_formula(text: str) -> Formula:
    """Parse formula text.

    Examples:
        >>> parse_formula("p & q -> r") == Impl(Conj(Atom("p"), Atom("q")), Atom("r"))
        True
    """
    parser = _Parser(text)
    result = parser.implication()
    parser.finish()
    return result


def parse_sequent(text: str) -> "Sequent":
    """Parse ``g1, g2, ... => f``; the antecedent may be empty."""
    parser = _Parser(text)
    antecedent: List[Formula] = []
    if not parser.at("=>"):
        antecedent.append(parser.implication())
        while parser.at(","):
            parser.take()
            antecedent.append(parser.implication())
    parser.expect("=>")
    succedent = parser.implication()
    parser.finish()
    return Sequent(Cedent.of(*antecedent), succedent)


# ---------------------------------------------------------------------------
# Cedents and sequents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cedent:
    """Finite set of formulas."""
    formulas: FrozenSet[Formula] = frozenset()

    @classmethod
    def of(cls, *formulas: Formula) -> "Cedent":
        return cls(frozenset(formulas))

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.formulas)

    def __len__(self) -> int:
        return len(self.formulas)

    def __contains__(self, f: object) -> bool:
        return f in self.formulas

    def union(self, other: Union["Cedent", Iterable[Formula]]) -> "Cedent":
        extra = other.formulas if isinstance(other, Cedent) else frozenset(other)
        if extra <= self.formulas:
            return self
        return Cedent(self.formulas | extra)

    def add(self, f: Formula) -> "Cedent":
        if f in self.formulas:
            return self
        return Cedent(self.formulas | {f})

    def remove(self, f: Formula) -> "Cedent":
        if f not in self.formulas:
            return self
        return Cedent(self.formulas - {f})

    def issubset(self, other: "Cedent") -> bool:
        return self.formulas <= other.formulas

    def ordered(self) -> List[Formula]:
        """Canonical listing: lexicographic order of printed formulas."""
        return sorted(self.formulas, key=lambda f: f.text)

    @property
    def harrop(self) -> bool:
        return all(f.harrop for f in self.formulas)

    @property
    def text(self) -> str:
        return ", ".join(f.text for f in self.ordered())

    def __str__(self) -> str:
        return "{" + self.text + "}"


EMPTY = Cedent()


@dataclass(frozen=True)
class Sequent:
    antecedent: Cedent
    succedent: Formula

    @property
    def text(self) -> str:
        if len(self.antecedent) == 0:
            return f"=> {self.succedent.text}"
        return f"{self.antecedent.text} => {self.succedent.text}"

    def __str__(self) -> str:
        return self.text

    def is_subsequent_of(self, other: "Sequent") -> bool:
        return self.succedent == other.succedent and self.antecedent.issubset(other.antecedent)


def sequent(antecedent: Iterable[Formula], succedent: Formula) -> Sequent:
    return Sequent(Cedent(frozenset(antecedent)), succedent)


# ---------------------------------------------------------------------------
# Occurrences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OccurrencePath:
    formula_index: int
    steps: Steps = ()

    def resolve(self, f: Formula) -> Formula:
        node = f
        for step in self.steps:
            if not isinstance(node, _Binary):
                raise PreconditionError(f"Path {self} leaves the formula", operation="resolve")
            node = node.child(step)
        return node

    def within(self, other: "OccurrencePath") -> bool:
        """True when this occurrence lies inside (or equals) ``other``."""
        return (
            self.formula_index == other.formula_index
            and self.steps[: len(other.steps)] == other.steps
        )

    def __str__(self) -> str:
        return f"{self.formula_index}:" + ("".join(str(s) for s in self.steps) or "root")


def strictly_positive_occurrences(f: Formula, formula_index: int = 0) -> List[OccurrencePath]:
    """Pre-order listing: self, both sides of & and |, right side of ->."""
    found: List[OccurrencePath] = []

    def walk(node: Formula, steps: Steps) -> None:
        found.append(OccurrencePath(formula_index, steps))
        if isinstance(node, (Conj, Disj)):
            walk(node.left, steps + (Direction.LEFT,))
            walk(node.right, steps + (Direction.RIGHT,))
        elif isinstance(node, Impl):
            walk(node.right, steps + (Direction.RIGHT,))

    walk(f, ())
    return found


def subformula_occurrences(f: Formula) -> List[Formula]:
    found: List[Formula] = []
    stack = [f]
    while stack:
        node = stack.pop()
        found.append(node)
        stack.extend(reversed(node.children()))
    return found


def formula_size(f: Formula) -> int:
    """Number of binary connectives."""
    return sum(1 for node in subformula_occurrences(f) if isinstance(node, _Binary))


def atoms_of(f: Formula) -> FrozenSet[Atom]:
    return frozenset(node for node in subformula_occurrences(f) if isinstance(node, Atom))


def is_harrop(f: Formula) -> bool:
    """True iff no strictly positive occurrence in f is a disjunction."""
    return f.harrop


# ---------------------------------------------------------------------------
# Strictly positive disjunctions and choice vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpdEnumeration:
    formulas: Tuple[Formula, ...]
    occurrences: Tuple[OccurrencePath, ...]

    @property
    def count(self) -> int:
        return len(self.occurrences)

    def __len__(self) -> int:
        return len(self.occurrences)

    def indices_for(self, formula_index: int) -> List[int]:
        return [j for j, occ in enumerate(self.occurrences) if occ.formula_index == formula_index]


@dataclass(frozen=True)
class ChoiceVector:
    bits: Tuple[int, ...] = ()

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ChoiceVectorError(f"Choice bits must be 0 or 1: {self.bits}")

    @classmethod
    def from_int(cls, k: int, n: int) -> "ChoiceVector":
        if k < 0 or k >= 2 ** n:
            raise ChoiceVectorError(f"Choice number {k} out of range for {n} bits", expected=n)
        return cls(tuple((k >> j) & 1 for j in range(n)))

    @classmethod
    def from_bits(cls, text: str) -> "ChoiceVector":
        """Bit j is the j-th character."""
        text = text.strip()
        if any(c not in "01" for c in text):
            raise ChoiceVectorError(f"Choice string must be binary: {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def all_vectors(cls, n: int) -> Iterator["ChoiceVector"]:
        for k in range(2 ** n):
            yield cls.from_int(k, n)

    def to_int(self) -> int:
        return sum(bit << j for j, bit in enumerate(self.bits))

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, j: int) -> int:
        return self.bits[j]

    @property
    def text(self) -> str:
        return "".join(str(b) for b in self.bits)


def spd_enumerate(g: Cedent) -> SpdEnumeration:
    """Enumerate strictly positive disjunction occurrences, outer occurrences first.

    Formulas are taken in canonical order and each formula is walked in pre-order, so an
    occurrence always precedes the occurrences nested inside it.
    """
    formulas = tuple(g.ordered())
    occurrences: List[OccurrencePath] = []
    for index, f in enumerate(formulas):
        if f.harrop:
            continue
        for occ in strictly_positive_occurrences(f, index):
            if isinstance(occ.resolve(f), Disj):
                occurrences.append(occ)
    return SpdEnumeration(formulas, tuple(occurrences))


def _check_choices(e: SpdEnumeration, k: ChoiceVector) -> None:
    if len(k) != e.count:
        raise ChoiceVectorError(
            f"Choice vector has {len(k)} bits, enumeration has {e.count}",
            expected=e.count,
            actual=len(k),
        )


def choice_map(e: SpdEnumeration, k: ChoiceVector, formula_index: int) -> Dict[Steps, int]:
    """Bits of k that concern one formula, keyed by occurrence steps."""
    _check_choices(e, k)
    return {e.occurrences[j].steps: k[j] for j in e.indices_for(formula_index)}


def strengthen_formula(f: Formula, choices: Dict[Steps, int], steps: Steps = ()) -> Formula:
    """f(k): replace chosen disjunctions by their selected disjunct, outermost first."""
    if isinstance(f, Disj):
        if steps not in choices:
            raise PreconditionError(f"No choice for disjunction at {steps}", operation="strengthen")
        direction = Direction(choices[steps])
        return strengthen_formula(f.child(direction), choices, steps + (direction,))
    if isinstance(f, Conj):
        left = strengthen_formula(f.left, choices, steps + (Direction.LEFT,))
        right = strengthen_formula(f.right, choices, steps + (Direction.RIGHT,))
        if left is f.left and right is f.right:
            return f
        return Conj(left, right)
    if isinstance(f, Impl):
        right = strengthen_formula(f.right, choices, steps + (Direction.RIGHT,))
        return f if right is f.right else Impl(f.left, right)
    return f


def strengthen(g: Cedent, e: SpdEnumeration, k: ChoiceVector) -> Cedent:
    """Γ(k), the Harrop strengthening of g selected by k."""
    _check_choices(e, k)
    formulas = tuple(g.ordered())
    if formulas != e.formulas:
        raise PreconditionError("Enumeration does not belong to this cedent", operation="strengthen")
    strengthened = []
    for index, f in enumerate(formulas):
        if f.harrop:
            strengthened.append(f)
        else:
            strengthened.append(strengthen_formula(f, choice_map(e, k, index)))
    return Cedent(frozenset(strengthened))


def analysis_set(f: Formula) -> FrozenSet[Sequent]:
    """C(f): sequents unpacking & and -> along strictly positive positions."""
    found = set()

    def walk(node: Formula) -> None:
        if isinstance(node, Impl):
            found.add(sequent([node.left, node], node.right))
            walk(node.right)
        elif isinstance(node, Conj):
            found.add(sequent([node], node.left))
            found.add(sequent([node], node.right))
            walk(node.left)
            walk(node.right)

    walk(f)
    return frozenset(found)


def all_strengthenings(g: Cedent) -> Iterator[Tuple[ChoiceVector, Cedent]]:
    e = spd_enumerate(g)
    for k in ChoiceVector.all_vectors(e.count):
        yield k, strengthen(g, e, k)


__all__ = [
    "Formula", "Atom", "Bottom", "Conj", "Disj", "Impl", "BOTTOM", "neg",
    "big_and", "big_or", "exclusive_or", "parse_formula", "parse_sequent", "print_formula",
    "Cedent", "EMPTY", "Sequent", "sequent", "OccurrencePath", "SpdEnumeration", "ChoiceVector",
    "strictly_positive_occurrences", "subformula_occurrences", "formula_size", "atoms_of",
    "is_harrop", "spd_enumerate", "choice_map", "strengthen_formula", "strengthen",
    "analysis_set", "all_strengthenings",
]
