import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from revnet.text_metrics import load_lexicon  # noqa: E402


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()
