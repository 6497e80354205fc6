"""Shared CLI fixtures."""

import numpy as np
import pandas as pd
import pytest

from tests.conftest import linear_surface_data, write_csv


@pytest.fixture(autouse=True)
def _isolated(isolated_env):
    """Every CLI test runs with a private environment."""


@pytest.fixture
def unflagged_csv(tmp_path):
    """Same records as data_csv without the treatment column."""
    data = linear_surface_data(2000, seed=7)
    return write_csv(tmp_path / "plain.csv", data, with_flags=False)


@pytest.fixture
def bad_row_csv(tmp_path):
    """20 data rows with a non-numeric r1 in data row 17."""
    rng = np.random.default_rng(0)
    frame = pd.DataFrame(
        {
            "y": rng.normal(size=20),
            "r1": rng.uniform(size=20).astype(str),
            "r2": rng.uniform(size=20),
            "d": 1,
        }
    )
    frame.loc[16, "r1"] = "abc"
    path = tmp_path / "bad.csv"
    frame.to_csv(path, index=False)
    return path
