import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from loosmooth import GraphonModel, sample_adjacency, sample_latent, substream  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def make_graph():
    """(sample, A) for a named graphon, reproducible from ``seed``."""

    def _make(family="smooth", n=40, seed=0, **params):
        model = GraphonModel(family, **params)
        sample = sample_latent(model, n, substream(seed, "latent"))
        A = sample_adjacency(sample, substream(seed, "edges"))
        return sample, A

    return _make


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
