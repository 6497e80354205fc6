"""Pytest configuration and fixtures."""

import os

import numpy as np
import pandas as pd
import pytest

from src.geometry.dataset import Dataset
from src.geometry.frames import ORIGIN_FRAME, BoundaryFrame
from src.kernels.families import KernelFamily, KernelSpec
from src.simulation.designs import make_design
from src.simulation.sampling import sample


def linear_surface_data(n: int, seed: int, jump: float = 1.0, noise: float = 0.1):
    """Uniform records on [-1, 1]^2, treated above r2 = 0, with a linear mean."""
    rng = np.random.default_rng(seed)
    r = rng.uniform(-1.0, 1.0, size=(n, 2))
    d = r[:, 1] >= 0.0
    y = 0.5 + 0.3 * r[:, 0] - 0.2 * r[:, 1] + jump * d + noise * rng.normal(size=n)
    return Dataset(y=y, r=r, d=d)


@pytest.fixture
def uniform_data():
    """2000 uniform records with a unit jump across r2 = 0."""
    return linear_surface_data(2000, seed=7)


@pytest.fixture
def origin_frame():
    """Boundary frame at the origin with the normal along +r2."""
    return ORIGIN_FRAME


@pytest.fixture
def diagonal_frame():
    """Frame at (1, 1) whose normal points along (1, 1)."""
    return BoundaryFrame.from_normal((1.0, 1.0), (1.0, 1.0))


@pytest.fixture
def triangular_spec():
    """Product-triangular kernel on the treated side."""
    return KernelSpec(KernelFamily.PRODUCT_TRIANGULAR)


@pytest.fixture
def design2():
    """Second simulation design with the default support and noise."""
    return make_design(2)


@pytest.fixture
def design2_sample(design2):
    """Seeded 5000-record draw from design 2."""
    return sample(design2, 5000, seed=11)


def write_csv(path, data, with_flags=True):
    """Write a dataset as y, r1, r2[, d]."""
    frame = pd.DataFrame({"y": data.y, "r1": data.r[:, 0], "r2": data.r[:, 1]})
    if with_flags:
        frame["d"] = data.d.astype(int)
    frame.to_csv(path, index=False)
    return path


@pytest.fixture
def isolated_env(monkeypatch, tmp_path):
    """Empty working directory and no MRD_* variables.

    load_dotenv writes to os.environ directly, so each test gets its own copy.
    """
    monkeypatch.chdir(tmp_path)
    private = {k: v for k, v in os.environ.items() if not k.startswith("MRD_")}
    monkeypatch.setattr(os, "environ", private)


@pytest.fixture
def data_csv(tmp_path):
    """CSV of 2000 uniform records with a unit jump across r2 = 0."""
    return write_csv(tmp_path / "data.csv", linear_surface_data(2000, seed=7))
