import numpy as np
import pytest

import dcsp


def test_generate_shapes():
    inst = dcsp.generate(N=60, M=20, K=4, L=3, seed=7)
    assert len(inst.dictionaries) == 3
    assert inst.dictionaries[0].shape == (20, 60)
    assert inst.signals[1].shape == (60,)
    assert len(inst.true_support) == 4
    support = np.flatnonzero(inst.signals[0]) + 1
    assert list(support) == inst.true_support
    for a, x, y in zip(inst.dictionaries, inst.signals, inst.measurements):
        np.testing.assert_allclose(a @ x, y, atol=1e-12)


def test_generate_is_deterministic():
    a = dcsp.generate(N=40, M=15, K=3, L=2, seed=11)
    b = dcsp.generate(N=40, M=15, K=3, L=2, seed=11)
    np.testing.assert_array_equal(a.dictionaries[0], b.dictionaries[0])


def test_ssp_and_dcsp_recover_easy_instance():
    inst = dcsp.generate(N=100, M=40, K=5, L=6, seed=3)
    ssp = dcsp.ssp_run(inst)
    dist = dcsp.dcsp_run(inst, dcsp.ring_topology(6, 3))
    assert ssp.support == inst.true_support
    assert dist.support == inst.true_support
    assert inst.success(dist.support)


@pytest.mark.parametrize("g", [2, 3, 6])
def test_wire_count_matches_closed_form(g):
    inst = dcsp.generate(N=80, M=30, K=4, L=6, seed=5)
    r = dcsp.dcsp_run(inst, dcsp.ring_topology(6, g))
    assert r.wire["charged"] == dcsp.cost_dcsp(N=80, K=4, L=6, g=g, T=r.iterations)
    s = dcsp.ssp_run(inst)
    assert s.wire["charged"] == dcsp.cost_ssp(N=80, K=4, L=6, T=s.iterations)


def test_ring_topology():
    t = dcsp.ring_topology(6, 3)
    assert t.neighborhood(1) == [1, 3, 4]
    assert dcsp.ring_topology(4, 4).is_full_mesh


def test_max_ind_breaks_ties_by_lowest_index():
    v = np.array([1.0, -3.0, 3.0, 2.0, 3.0])
    assert dcsp.max_ind(v, 2) == [2, 3]
    assert dcsp.max_occ([5, 2, 2, 5, 7], 2) == [2, 5]


def test_lstsq_and_resid():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((10, 3))
    y = rng.standard_normal(10)
    x = dcsp.lstsq(a, y)
    np.testing.assert_allclose(x, np.linalg.lstsq(a, y, rcond=None)[0], atol=1e-10)
    r = dcsp.resid(y, a)
    np.testing.assert_allclose(a.T @ r, 0.0, atol=1e-10)
    with pytest.raises(dcsp.RankDeficient):
        dcsp.lstsq(np.ones((4, 2)), np.ones(4))


def test_cost_values():
    assert dcsp.cost_ssp(N=200, K=10, L=6, T=1) == 12630
    assert dcsp.cost_dcsp(N=200, K=10, L=6, g=3, T=3) == 11610
    assert dcsp.message_cost("ssp", N=200, K=10, L=6, g=3, T=3) == 25890
    with pytest.raises(dcsp.DcspError):
        dcsp.message_cost("nope", N=200, K=10, L=6, g=3, T=1)


def test_run_sweep_small():
    rows = dcsp.run_sweep("fig2", {"trials": "2", "range": "5,10", "N": "60", "K": "3", "M": "20"})
    assert [row["L"] for row in rows] == [5, 10]
    assert rows[0]["trials"] == 2
    assert "dcomp_analytic_messages" in rows[0]
    with pytest.raises(dcsp.ConfigError):
        dcsp.run_sweep("fig1", {"K": "0"})
