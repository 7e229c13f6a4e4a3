import numpy as np
import pytest

from eitqhe.atomdata import builtin_provider
from eitqhe.datagen import GenerationSpec, generate_dataset


@pytest.fixture(scope="session")
def hydrogen():
    return builtin_provider(1, 1)


@pytest.fixture(scope="session")
def rubidium85():
    return builtin_provider(37, 85)


@pytest.fixture(scope="session")
def small_dataset():
    """600 generated records shared by datagen/mlp/analysis tests."""
    spec = GenerationSpec(count=600, seed=777)
    records, report = generate_dataset(spec)
    return records, report


@pytest.fixture()
def rng():
    return np.random.default_rng(123)
