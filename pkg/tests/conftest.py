import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # expose oracles.py / make_fixtures.py

from byolkit.tensorfile import TensorCheckpoint

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def make_checkpoint(values, dtype=np.float32, metadata=None):
    """Checkpoint from {name: scalar-or-array}; scalars become shape (1,)."""
    arrays = {}
    for name, value in values.items():
        array = np.asarray(value, dtype=dtype)
        if array.ndim == 0:
            array = array.reshape(1)
        arrays[name] = array
    return TensorCheckpoint.from_arrays(arrays, metadata=metadata)


@pytest.fixture
def scalar_checkpoints():
    """The scalar triple used across the merge tests."""
    return (
        make_checkpoint({"w": 1.0}),
        make_checkpoint({"w": 3.0}),
        make_checkpoint({"w": -1.0}),
    )
