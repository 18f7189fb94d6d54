from __future__ import annotations

import pytest

from helpers import FIXTURES
from wordlength import parse_design


@pytest.fixture(scope="session")
def paper_design():
    """The 16-run, 3-factor, 4-level strength-2 array shipped in fixtures/."""
    return parse_design((FIXTURES / "paper_oa.txt").read_text(encoding="utf-8"))
