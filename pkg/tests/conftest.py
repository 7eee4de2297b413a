"""Shared fixtures for the toolkit tests."""

import pytest

from dp_toolkit.corpus import HAND_WRITTEN
from dp_toolkit.logger import setup_logging
from dp_toolkit.machines import parity_machine, unit_machine
from dp_toolkit.parsers import parse_derivation


@pytest.fixture(autouse=True)
def fresh_logger():
    """Rebind the package logger to the stderr of the running test."""
    yield setup_logging()


@pytest.fixture(scope="session")
def unit():
    return unit_machine()


@pytest.fixture(scope="session")
def parity():
    return parity_machine()


@pytest.fixture
def hand():
    """Parsed hand-written derivation by corpus name."""
    return lambda name: parse_derivation(HAND_WRITTEN[name], source=name)
