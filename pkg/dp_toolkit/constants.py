"""Constants and enumerations for the DP toolkit."""

from enum import Enum, IntEnum


class Rule(Enum):
    """NJp rule names as they appear in derivation files."""
    AX = "ax"
    OR_E = "orE"
    OR_I0 = "orI0"
    OR_I1 = "orI1"
    AND_E0 = "andE0"
    AND_E1 = "andE1"
    AND_I = "andI"
    IMP_E = "impE"
    IMP_I = "impI"

    @property
    def arity(self) -> int:
        return RULE_ARITY[self]

    @property
    def is_introduction(self) -> bool:
        return self in (Rule.OR_I0, Rule.OR_I1, Rule.AND_I, Rule.IMP_I)

    @property
    def is_elimination(self) -> bool:
        return self in (Rule.OR_E, Rule.AND_E0, Rule.AND_E1, Rule.IMP_E)


RULE_ARITY = {
    Rule.AX: 0,
    Rule.OR_E: 3,
    Rule.OR_I0: 1,
    Rule.OR_I1: 1,
    Rule.AND_E0: 1,
    Rule.AND_E1: 1,
    Rule.AND_I: 2,
    Rule.IMP_E: 2,
    Rule.IMP_I: 1,
}


class Direction(Enum):
    """Step directions inside a formula tree."""
    LEFT = 0
    RIGHT = 1

    def __str__(self) -> str:
        return "L" if self is Direction.LEFT else "R"


class RedexKind(Enum):
    DISJ = "disj"
    CONJ = "conj"
    IMPL = "impl"


class ExtractionMethod(Enum):
    BM = "bm"        # sequents of the derivation
    SLASH = "slash"  # sequents plus reflexive and analysis sequents
    CHOICE = "choice"


class HornOutcome(Enum):
    SATISFIABLE = "SATISFIABLE"
    REFUTED = "REFUTED"


class Verdict(Enum):
    ACCEPT = "accept"
    REJECT = "reject"


class Move(Enum):
    LEFT = "L"
    RIGHT = "R"
    STAY = "S"


class EncodingScope(Enum):
    """Symbol domains used by the machine encoding."""
    REACHABLE = "reachable"  # symbols some run of length n can place at (i, t)
    FULL = "full"            # every tape symbol and head pair


class ExitCode(IntEnum):
    OK = 0
    USAGE = 1
    PRECONDITION = 2
    BOUNDEDNESS = 3
    FUEL_EXHAUSTED = 4


# Formula syntax
BOTTOM_TEXT = "_|_"
BLANK = "B"
HEAD_SEPARATOR = "/"

# Engine defaults
DEFAULT_FUEL_FACTOR = 10
DEFAULT_ORACLE_CAP = 200
DEFAULT_TRUTH_TABLE_ATOMS = 12
DEFAULT_SEED = 0
DEFAULT_GENERATED = 40

# Environment variables
ENV_PREFIX = "DP_TOOLKIT_"
ENV_FUEL = ENV_PREFIX + "FUEL"
ENV_FUEL_FACTOR = ENV_PREFIX + "FUEL_FACTOR"
ENV_ORACLE_CAP = ENV_PREFIX + "ORACLE_CAP"
ENV_SEED = ENV_PREFIX + "SEED"
ENV_OUTPUT_DIR = ENV_PREFIX + "OUTPUT_DIR"
ENV_LOG_LEVEL = ENV_PREFIX + "LOG_LEVEL"
ENV_LOG_DIR = ENV_PREFIX + "LOG_DIR"

DEFAULT_CONFIG_FILE = "dp_toolkit.json"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
