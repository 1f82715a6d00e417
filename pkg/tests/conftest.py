"""
Pytest configuration and fixtures for rootmult tests.
"""

import os

import pytest

from rootmult.lattice import Shape
from rootmult.peterson import MultTable


@pytest.fixture(autouse=True)
def auto_reset_settings(tmp_path, monkeypatch):
    """
    Give every test fresh settings.

    Runs each test inside its own temporary directory with no ROOTMULT_*
    variables set, so no rootmult.yaml from the surrounding tree is found.
    """
    from rootmult.config import reset_settings

    for name in list(os.environ):
        if name.startswith("ROOTMULT_"):
            monkeypatch.delenv(name)
    monkeypatch.chdir(tmp_path)

    reset_settings()
    yield
    reset_settings()


@pytest.fixture(scope="session")
def sh21() -> Shape:
    return Shape(2, 1)


@pytest.fixture(scope="session")
def sh22() -> Shape:
    return Shape(2, 2)


@pytest.fixture(scope="session")
def table21(sh21) -> MultTable:
    """Multiplicity table for s=2, t=1, shared across the session and filled on demand."""
    return MultTable(shape=sh21)


@pytest.fixture(scope="session")
def table22(sh22) -> MultTable:
    """Multiplicity table for s=t=2, shared across the session and filled on demand."""
    return MultTable(shape=sh22)
