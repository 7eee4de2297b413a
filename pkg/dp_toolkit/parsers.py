"""
File format parsers
Derivation s-expressions, sequent-set files, clause files and machine descriptions
"""

import re
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional, Tuple, TypeVar, Union

from .constants import BLANK, Move, Rule
from .deduction import NjDerivation
from .exceptions import DerivationFormatError, FormulaSyntaxError, TmSpecError
from .horn import CutDeduction, HornClause, HornClauseSet
from .syntax import Formula, Sequent, parse_formula, parse_sequent


class LineKind(Enum):
    """Kinds of lines in a machine description"""
    HEADER = "HEADER"
    TRANSITION = "TRANSITION"
    RULE = "RULE"
    COMMENT = "COMMENT"
    UNKNOWN = "UNKNOWN"


@dataclass
class ParsedTransition:
    state: str
    read: str
    next_state: str
    write: str
    move: Move
    line: int


@dataclass
class ParsedRule:
    """f-triple line ``a b c -> d``"""
    triple: Tuple[str, str, str]
    result: str
    line: int


_SEXPR_TOKEN = re.compile(r'\s*(?:(\()|(\))|"((?:[^"\\]|\\.)*)"|([A-Za-z][A-Za-z0-9]*))')
_RULES = {rule.value: rule for rule in Rule}

T = TypeVar("T")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _numbered(text: str) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if line:
            yield number, line


class DerivationParser:
    """Parser for derivation, sequent-set and clause files"""

    @classmethod
    def parse_derivation(cls, text: str, source: Optional[str] = None) -> NjDerivation:
        """
        Parse a derivation
        Format: (RULE "<sequent text>" <premise>*), e.g. (orI0 "p => p | q" (ax "p => p"))
        """

        def build(head: str, conclusion: Sequent, children: List[NjDerivation], line: int) -> NjDerivation:
            rule = _RULES.get(head)
            if rule is None:
                raise DerivationFormatError(f"Unknown rule {head}", line=line, source=source)
            if len(children) != rule.arity:
                raise DerivationFormatError(
                    f"Rule {rule.value} takes {rule.arity} premises, got {len(children)}", line=line, source=source
                )
            return NjDerivation(rule, conclusion, tuple(children))

        return cls._read_tree(text, source, build)

    @classmethod
    def parse_cut_deduction(cls, text: str, source: Optional[str] = None) -> CutDeduction:
        """
        Parse a cut-deduction certificate
        Format: (base "<sequent>") for base sequents, (cut "<sequent>" <left> <right>) for cuts
        """

        def build(head: str, conclusion: Sequent, children: List[CutDeduction], line: int) -> CutDeduction:
            if head == "base" and not children:
                return CutDeduction.leaf(conclusion)
            if head == "cut" and len(children) == 2:
                return CutDeduction(conclusion=conclusion, left=children[0], right=children[1])
            raise DerivationFormatError(f"Bad certificate node {head} with {len(children)} children", line=line, source=source)

        return cls._read_tree(text, source, build)

    @classmethod
    def parse_certificate(cls, text: str, source: Optional[str] = None) -> Union[CutDeduction, NjDerivation]:
        tokens = cls._tokens(text, source)
        if len(tokens) > 1 and tokens[1][1] in ("base", "cut"):
            return cls.parse_cut_deduction(text, source)
        return cls.parse_derivation(text, source)

    @classmethod
    def _read_tree(cls, text: str, source: Optional[str], build: Callable[[str, Sequent, list, int], T]) -> T:
        tokens = cls._tokens(text, source)
        stack: List[Tuple[str, Sequent, List[T], int]] = []
        result: Optional[T] = None
        k = 0
        while k < len(tokens):
            kind, value, line = tokens[k]
            if result is not None:
                raise DerivationFormatError("Trailing input after the tree", line=line, source=source)
            if kind == "(":
                if k + 2 >= len(tokens) or tokens[k + 1][0] != "rule" or tokens[k + 2][0] != "string":
                    raise DerivationFormatError('Expected (NAME "sequent" ...)', line=line, source=source)
                try:
                    conclusion = parse_sequent(tokens[k + 2][1])
                except FormulaSyntaxError as e:
                    raise DerivationFormatError(f"Bad sequent: {e.message}", line=tokens[k + 2][2], source=source) from e
                stack.append((tokens[k + 1][1], conclusion, [], line))
                k += 3
            elif kind == ")":
                if not stack:
                    raise DerivationFormatError("Unbalanced ')'", line=line, source=source)
                head, conclusion, children, opened = stack.pop()
                node = build(head, conclusion, children, opened)
                if stack:
                    stack[-1][2].append(node)
                else:
                    result = node
                k += 1
            else:
                raise DerivationFormatError(f"Unexpected token {value!r}", line=line, source=source)

        if stack or result is None:
            raise DerivationFormatError("Unexpected end of input", source=source)
        return result


    @staticmethod
    def _tokens(text: str, source: Optional[str]) -> List[Tuple[str, str, int]]:
        tokens = []
        for number, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.strip()
            if not stripped or stripped[0] in "#;":
                continue
            pos = 0
            while pos < len(raw) and raw[pos:].strip():
                match = _SEXPR_TOKEN.match(raw, pos)
                if not match:
                    raise DerivationFormatError(
                        f"Unexpected character {raw[pos:].lstrip()[:1]!r}", line=number, source=source
                    )
                if match.group(1):
                    tokens.append(("(", "(", number))
                elif match.group(2):
                    tokens.append((")", ")", number))
                elif match.group(3) is not None:
                    tokens.append(("string", re.sub(r"\\(.)", r"\1", match.group(3)), number))
                else:
                    tokens.append(("rule", match.group(4), number))
                pos = match.end()
        return tokens

    @classmethod
    def format_derivation(cls, d: NjDerivation) -> str:
        """Indented s-expression, one node per line."""
        return cls._write_tree(d, lambda node: node.rule.value, lambda node: node.premises)

    @classmethod
    def format_cut_deduction(cls, cd: CutDeduction) -> str:
        return cls._write_tree(
            cd,
            lambda node: "base" if node.is_leaf else "cut",
            lambda node: () if node.is_leaf else (node.left, node.right),
        )

    @staticmethod
    def _write_tree(root, head: Callable, children: Callable) -> str:
        out: List[str] = []
        stack = [(root, 0, False)]
        while stack:
            node, indent, closing = stack.pop()
            if closing:
                out[-1] += ")"
                continue
            escaped = node.conclusion.text.replace("\\", "\\\\").replace('"', '\\"')
            out.append(f'{"  " * indent}({head(node)} "{escaped}"')
            stack.append((node, indent, True))
            for child in reversed(children(node)):
                stack.append((child, indent + 1, False))
        return "\n".join(out) + "\n"

    @classmethod
    def parse_sequent_set(cls, text: str, source: Optional[str] = None) -> List[Sequent]:
        """One sequent per line; '#' starts a comment."""
        result = []
        for number, line in _numbered(text):
            try:
                result.append(parse_sequent(line))
            except FormulaSyntaxError as e:
                raise DerivationFormatError(f"Bad sequent: {e.message}", line=number, source=source) from e
        return result

    @classmethod
    def parse_clause_file(cls, text: str, source: Optional[str] = None) -> HornClauseSet:
        """
        One clause per line, literals separated by spaces, '-' marks a negative literal
        Example: -p -q r   (the clause p, q => r)
        """
        clauses = []
        for number, line in _numbered(text):
            negatives: List[Formula] = []
            positives: List[Formula] = []
            for literal in line.split():
                target = negatives if literal.startswith("-") else positives
                body = literal[1:] if literal.startswith("-") else literal
                try:
                    target.append(parse_formula(body))
                except FormulaSyntaxError as e:
                    raise DerivationFormatError(f"Bad literal {literal!r}: {e.message}", line=number, source=source) from e
            if len(positives) > 1:
                raise DerivationFormatError("Horn clauses have at most one positive literal", line=number, source=source)
            clauses.append(HornClause(frozenset(negatives), positives[0] if positives else None))
        return HornClauseSet.of(clauses)


class TmSpecParser:
    """Parser for machine description files"""

    HEADERS = ("name", "states", "input", "tape", "start", "accept", "reject", "bound")

    PATTERNS = {
        "HEADER": re.compile(r"^(?P<key>[a-z]+)\s*:\s*(?P<value>.*)$"),
        "TRANSITION": re.compile(r"^(?P<state>\w+)\s+(?P<read>\w+)\s*->\s*(?P<next>\w+)\s+(?P<write>\w+)\s+(?P<move>[LRS])$"),
        "RULE": re.compile(r"^(?P<a>[\w/]+)\s+(?P<b>[\w/]+)\s+(?P<c>[\w/]+)\s*->\s*(?P<d>[\w/]+)$"),
    }

    @classmethod
    def identify_line(cls, line: str) -> LineKind:
        line = line.strip()
        if not line or line.startswith("#"):
            return LineKind.COMMENT
        for kind, pattern in cls.PATTERNS.items():
            if pattern.match(line):
                return LineKind[kind]
        return LineKind.UNKNOWN

    @classmethod
    def parse(cls, text: str):
        """Parse a machine description into a TmSpec."""
        from .tmreduce import TmSpec, Transition

        headers: Dict[str, str] = {}
        transitions: List[ParsedTransition] = []
        rules: List[ParsedRule] = []
        for number, line in _numbered(text):
            kind = cls.identify_line(line)
            if kind is LineKind.HEADER:
                match = cls.PATTERNS["HEADER"].match(line)
                key = match.group("key")
                if key not in cls.HEADERS:
                    raise TmSpecError(f"Unknown header {key!r}", line=number)
                if key in headers:
                    raise TmSpecError(f"Duplicate header {key!r}", line=number)
                headers[key] = match.group("value").strip()
            elif kind is LineKind.TRANSITION:
                match = cls.PATTERNS["TRANSITION"].match(line)
                transitions.append(ParsedTransition(
                    match.group("state"), match.group("read"), match.group("next"),
                    match.group("write"), Move(match.group("move")), number,
                ))
            elif kind is LineKind.RULE:
                match = cls.PATTERNS["RULE"].match(line)
                rules.append(ParsedRule((match.group("a"), match.group("b"), match.group("c")), match.group("d"), number))
            else:
                raise TmSpecError(f"Cannot parse line: {line}", line=number)

        missing = [key for key in cls.HEADERS if key != "name" and key not in headers]
        if missing:
            raise TmSpecError(f"Missing headers: {', '.join(missing)}")
        try:
            bound = tuple(int(c) for c in headers["bound"].split())
        except ValueError:
            raise TmSpecError(f"Bound must be three integers: {headers['bound']!r}") from None

        table = {}
        for tr in transitions:
            key = (tr.state, tr.read)
            if key in table:
                raise TmSpecError(f"Duplicate transition for {tr.state} {tr.read}", line=tr.line)
            table[key] = Transition(tr.state, tr.read, tr.next_state, tr.write, tr.move)
        overrides = {}
        for rule in rules:
            if rule.triple in overrides:
                raise TmSpecError(f"Duplicate rule for {' '.join(rule.triple)}", line=rule.line)
            overrides[rule.triple] = rule.result

        tape = tuple(headers["tape"].split())
        if BLANK not in tape:
            tape = tape + (BLANK,)
        return TmSpec(
            name=headers.get("name", "machine"),
            states=tuple(headers["states"].split()),
            input_alphabet=tuple(headers["input"].split()),
            tape_alphabet=tape,
            start=headers["start"],
            accept=headers["accept"],
            reject=headers["reject"],
            bound=bound,  # type: ignore[arg-type]
            transitions=table,
            overrides=overrides,
        )

    @classmethod
    def format(cls, m) -> str:
        lines = [
            f"name: {m.name}",
            f"states: {' '.join(m.states)}",
            f"input: {' '.join(m.input_alphabet)}",
            f"tape: {' '.join(m.tape_alphabet)}",
            f"start: {m.start}",
            f"accept: {m.accept}",
            f"reject: {m.reject}",
            f"bound: {' '.join(str(c) for c in m.bound)}",
        ]
        for tr in m.transitions.values():
            lines.append(f"{tr.state} {tr.read} -> {tr.next_state} {tr.write} {tr.move.value}")
        for (a, b, c), d in m.overrides.items():
            lines.append(f"{a} {b} {c} -> {d}")
        return "\n".join(lines) + "\n"


def parse_derivation(text: str, source: Optional[str] = None) -> NjDerivation:
    return DerivationParser.parse_derivation(text, source)


def format_derivation(d: NjDerivation) -> str:
    return DerivationParser.format_derivation(d)


def parse_certificate(text: str, source: Optional[str] = None) -> Union[CutDeduction, NjDerivation]:
    return DerivationParser.parse_certificate(text, source)


def format_certificate(cert: Union[CutDeduction, NjDerivation]) -> str:
    if isinstance(cert, CutDeduction):
        return DerivationParser.format_cut_deduction(cert)
    return DerivationParser.format_derivation(cert)


def parse_sequent_set(text: str, source: Optional[str] = None) -> List[Sequent]:
    return DerivationParser.parse_sequent_set(text, source)


def parse_clause_file(text: str, source: Optional[str] = None) -> HornClauseSet:
    return DerivationParser.parse_clause_file(text, source)


def parse_tm_spec(text: str):
    return TmSpecParser.parse(text)


def format_tm_spec(m) -> str:
    return TmSpecParser.format(m)


__all__ = [
    "LineKind", "ParsedTransition", "ParsedRule", "DerivationParser", "TmSpecParser",
    "parse_derivation", "format_derivation", "parse_certificate", "format_certificate",
    "parse_sequent_set", "parse_clause_file",
    "parse_tm_spec", "format_tm_spec",
]
