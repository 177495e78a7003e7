import os
from pathlib import Path

import pytest

# keep spectrum caches local to the repo so repeated test runs are fast and
# nothing leaks into the user's home directory
_CACHE = Path(__file__).resolve().parent.parent / ".cache-tests"
os.environ.setdefault("ZETAFORGE_CACHE_DIR", str(_CACHE))


@pytest.fixture(scope="session")
def cache_dir():
    return Path(os.environ["ZETAFORGE_CACHE_DIR"])
