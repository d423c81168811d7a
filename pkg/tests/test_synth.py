import json

import numpy as np
import pytest

from ratenet.causality import conditional_gc, pairwise_gc
from ratenet.synth import (
    default_hub_groups,
    make_chain,
    make_hub_model,
    make_hub_panel,
    oracle_gc,
    parse_label_meta,
    truth_to_json,
)
from ratenet.var import is_stable, simulate_var


class TestMakeChain:
    def test_three_node_chain(self):
        model, truth = make_chain(3, coupling=0.4)
        assert is_stable(model)
        assert truth == {("X1", "X2"), ("X2", "X3")}

    def test_zero_coupling_empty_truth(self):
        _, truth = make_chain(4, coupling=0.0)
        assert truth == set()

    def test_bivariate_specialization(self):
        model, truth = make_chain(2, coupling=0.4)
        np.testing.assert_allclose(model.coeffs[0], [[0.5, 0.0], [0.4, 0.5]])
        assert truth == {("X1", "X2")}

    def test_no_self_loops(self):
        _, truth = make_chain(6, coupling=0.3)
        assert all(s != t for s, t in truth)


class TestHubPanel:
    def test_truth_has_twelve_edges(self):
        _, truth = make_hub_panel(T=200, seed=0)
        assert len(truth) == 12
        groups, hubs = default_hub_groups()
        assert {s for s, _ in truth} == set(hubs.values())

    def test_metadata_parsed(self):
        panel, _ = make_hub_panel(T=200, seed=0)
        assert panel.meta["CBB2y"] == {"category": "CBB", "term": "2y"}

    def test_cross_group_independence(self):
        # groups are block-diagonal: causality across blocks vanishes
        panel, _ = make_hub_panel(T=30_000, seed=1)
        stat = conditional_gc(panel, "R1d", "TB7y", cond=("TB1y",), order=1)
        assert stat.statistic < 0.001

    def test_deterministic(self):
        p1, _ = make_hub_panel(T=300, seed=5)
        p2, _ = make_hub_panel(T=300, seed=5)
        np.testing.assert_array_equal(p1.values, p2.values)

    def test_bad_hub_rejected(self):
        groups, hubs = default_hub_groups()
        hubs = dict(hubs, short="not-there")
        with pytest.raises(ValueError):
            make_hub_model(groups, hubs)


class TestOracle:
    def test_null_direction_near_zero(self):
        model, _ = make_chain(2, coupling=0.4)
        # X2 -> X1 is absent by construction
        assert oracle_gc(model, x="X1", y="X2", T=200_000) < 0.001

    def test_agrees_with_main_path(self):
        model, _ = make_chain(3, coupling=0.4)
        T, seed = 200_000, 77
        ref = oracle_gc(model, x="X3", y="X2", cond=("X1",), T=T, seed=seed)
        panel = simulate_var(model, T=T, seed=seed)
        stat = conditional_gc(panel, "X3", "X2", cond=("X1",), order=1)
        assert stat.statistic == pytest.approx(ref, rel=0.02)

    def test_decoupled_model_all_null(self):
        model, _ = make_chain(3, coupling=0.0)
        for x, y in [("X1", "X2"), ("X2", "X3"), ("X1", "X3")]:
            assert oracle_gc(model, x=x, y=y, T=100_000) < 0.001


def test_parse_label_meta():
    assert parse_label_meta("SHIBOR3m") == {"category": "SHIBOR", "term": "3m"}
    assert parse_label_meta("weird") == {}


def test_truth_json(tmp_path):
    model, truth = make_chain(3, coupling=0.4)
    path = tmp_path / "truth.json"
    truth_to_json(truth, model, path)
    doc = json.loads(path.read_text())
    assert doc["edges"] == [["X1", "X2"], ["X2", "X3"]]
    assert doc["model"]["order"] == 1
