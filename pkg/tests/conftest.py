import sys
from pathlib import Path

import pytest

from padkit.store import mini3_corpus

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def mini3():
    return mini3_corpus()
