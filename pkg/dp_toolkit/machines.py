"""Sample machines for the reduction."""

from pathlib import Path
from typing import Dict

from .exceptions import TmSpecError
from .parsers import parse_tm_spec
from .tmreduce import TmSpec

# Accepts exactly the inputs starting with 1; halts after one step.
UNIT_MACHINE = """\
name: unit
states: s0 sa sr
input: 0 1
tape: 0 1 B
start: s0
accept: sa
reject: sr
bound: 1 1 0
s0 1 -> sa B S
s0 0 -> sr B S
"""

# Accepts inputs with an even number of 1s. Marks the first cell with M, scans right erasing
# the input while tracking parity in e/o, then walks back to the marker.
PARITY_MACHINE = """\
name: parity
states: s0 e o ra rr sa sr
input: 0 1
tape: 0 1 M B
start: s0
accept: sa
reject: sr
bound: 1 2 0
s0 0 -> e M R
s0 1 -> o M R
e 0 -> e B R
e 1 -> o B R
o 0 -> o B R
o 1 -> e B R
e B -> ra B L
o B -> rr B L
ra B -> ra B L
rr B -> rr B L
ra M -> sa B S
rr M -> sr B S
"""

BUILTIN: Dict[str, str] = {"unit": UNIT_MACHINE, "parity": PARITY_MACHINE}


def unit_machine() -> TmSpec:
    return parse_tm_spec(UNIT_MACHINE)


def parity_machine() -> TmSpec:
    return parse_tm_spec(PARITY_MACHINE)


def load_machine(name_or_path: str) -> TmSpec:
    """A built-in machine by name, or a machine description file."""
    text = BUILTIN.get(name_or_path)
    if text is None:
        path = Path(name_or_path)
        if not path.is_file():
            raise TmSpecError(f"No built-in machine or file named {name_or_path!r}")
        text = path.read_text(encoding="utf-8")
    return parse_tm_spec(text)


__all__ = ["UNIT_MACHINE", "PARITY_MACHINE", "BUILTIN", "unit_machine", "parity_machine", "load_machine"]
