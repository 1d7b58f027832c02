import numpy as np
import pytest

from soliton_obstruction.spherepoly import KernelVector
from soliton_obstruction.varengine import LaplacianMatrices, Pipeline, default_pipeline, laplacian_matrices


@pytest.fixture(scope="session")
def pipeline() -> Pipeline:
    return default_pipeline()


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def corrupted_lap() -> LaplacianMatrices:
    """M with its v² → v² entry moved from -4 to -3."""
    lap = laplacian_matrices()
    return LaplacianMatrices(lap.M.with_entry(0, 0, -3), lap.M_b)


@pytest.fixture(params=[(1, 1), (2, 3)], ids=["alpha=1,1", "alpha=2,3"])
def kernel_vector(request) -> KernelVector:
    return KernelVector(request.param)
