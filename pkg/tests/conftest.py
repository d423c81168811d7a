import numpy as np
import pytest

from ratenet.panel import Panel
from ratenet.synth import make_chain
from ratenet.var import simulate_var


def white_noise_panel(n, T, seed, labels=None):
    rng = np.random.default_rng(seed)
    labels = labels or tuple(f"W{i}" for i in range(n))
    dates = np.datetime64("2008-01-01", "D") + np.arange(T)
    return Panel(tuple(labels), dates, rng.standard_normal((T, n)))


@pytest.fixture(scope="session")
def chain_model():
    model, truth = make_chain(3, coupling=0.4)
    return model, truth


@pytest.fixture(scope="session")
def chain_panel(chain_model):
    model, _ = chain_model
    return simulate_var(model, T=5000, seed=42, burn_in=200)
