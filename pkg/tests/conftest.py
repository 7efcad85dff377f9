import os
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[1]

# config.settings reads CONFIG_PATH at import time
os.environ.setdefault("CONFIG_PATH", str(REPO_ROOT / "config.yaml"))

from mpmath import mp  # noqa: E402

from eisenstein_mmv.shared_libraries.precision import TruncationBudget, configure_precision  # noqa: E402


@pytest.fixture(autouse=True)
def working_precision():
    configure_precision(40)
    yield
    mp.dps = 40


@pytest.fixture
def budget():
    return TruncationBudget(eps=1e-45, n_max=20000)
