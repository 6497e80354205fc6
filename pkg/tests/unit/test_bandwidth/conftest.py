"""Shared bandwidth fixtures."""

import numpy as np
import pytest

from src.bandwidth.terms import BiasTerms


def build_bias(cov_plus=None, cov_minus=None, **partials):
    """BiasTerms with product-triangular weights and a curved treated side."""
    values = {"d11plus": 2.0, "d22plus": 1.0, "d11minus": 0.0, "d22minus": 0.0}
    values.update(partials)
    return BiasTerms(
        sTilde11=1 / 6,
        sTilde22=-0.1,
        covPlus=np.zeros((2, 2)) if cov_plus is None else cov_plus,
        covMinus=np.zeros((2, 2)) if cov_minus is None else cov_minus,
        **values,
    )


@pytest.fixture
def make_bias():
    """Factory for BiasTerms."""
    return build_bias
