from pathlib import Path

import numpy as np
import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def iris_path() -> Path:
    return DATA_DIR / "iris.data"


@pytest.fixture(scope="session")
def iris(iris_path):
    from volsplit import load_iris

    return load_iris(iris_path)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
