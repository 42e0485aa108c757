import subprocess
import sys
from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"


def run_cli(*args: str, env: dict | None = None) -> subprocess.CompletedProcess:
    import os

    full_env = {k: v for k, v in os.environ.items() if not k.startswith("WALKLAB_")}
    full_env.update(env or {})
    return subprocess.run([sys.executable, "-m", "walklab", *args], capture_output=True, text=True, env=full_env)


@pytest.fixture
def cli():
    return run_cli
