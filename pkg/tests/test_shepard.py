import numpy as np
import pytest

from shepard_cv.errors import UncoveredPointError
from shepard_cv.kernels import KernelFamily, hat_kernel
from shepard_cv.shepard import (
    SampleSet,
    ShepardModel,
    fit,
    nearest_node_indices,
)
from shepard_cv.shepard import test_function_preset as function_preset
from shepard_cv.torus import NodeSet, torus_distance


def dense_oracle(nodes, values, xs, kernel):
    """Direct weighted average with an explicit double loop over pairs."""
    out = np.full(len(xs), np.nan)
    for j, x in enumerate(xs):
        den = num = 0.0
        for xi, fi in zip(nodes, values):
            w = float(kernel.profile(torus_distance(x, xi)))
            den += w
            num += w * fi
        if den > 0.0:
            out[j] = num / den
    return out


def random_samples(rng, n, fn):
    nodes = NodeSet(rng.random(n))
    return SampleSet(nodes, fn(nodes.nodes))


def test_sample_set_validation():
    nodes = NodeSet([0.1, 0.5])
    with pytest.raises(ValueError):
        SampleSet(nodes, [1.0])
    with pytest.raises(ValueError):
        SampleSet(nodes, [1.0, np.nan])
    ss = SampleSet.from_function(nodes, lambda x: 2.0 * x)
    assert np.allclose(ss.values, [0.2, 1.0])


def test_presets():
    f = function_preset("sine")
    x = np.array([0.0, 0.25])
    assert np.allclose(f(x), [0.0, np.sqrt(2.0)])
    assert f.lipschitz_L == pytest.approx(np.sqrt(2.0))
    assert f.sup_norm == pytest.approx(np.sqrt(2.0))
    g = function_preset("sine-analytic")
    assert np.allclose(g(x), f(x))
    assert g.lipschitz_L == pytest.approx(2.0 * np.sqrt(2.0) * np.pi)
    c = function_preset("constant")
    assert np.allclose(c(x), 1.0)
    assert c.lipschitz_L == 0.0
    with pytest.raises(ValueError):
        function_preset("nope")


def test_constant_samples_reproduced_exactly():
    rng = np.random.default_rng(1)
    samples = random_samples(rng, 40, lambda x: np.full_like(x, 3.25))
    model = fit(samples, hat_kernel(30.0), policy="nearest_node")
    xs = rng.random(500)
    assert np.allclose(model.evaluate_many(xs), 3.25, rtol=0, atol=1e-14)


def test_single_node_and_node_hit():
    samples = SampleSet(NodeSet([0.4]), [7.0])
    model = fit(samples, hat_kernel(3.0))
    assert model.evaluate(0.45) == pytest.approx(7.0)
    # query exactly on a node of a crowded set still works
    rng = np.random.default_rng(2)
    samples = random_samples(rng, 20, np.sin)
    model = fit(samples, hat_kernel(5.0))
    vals = model.evaluate_many(samples.nodes.nodes)
    assert np.all(np.isfinite(vals))


def test_two_equidistant_nodes_average():
    samples = SampleSet(NodeSet([0.2, 0.4]), [1.0, 3.0])
    model = fit(samples, hat_kernel(4.0))
    assert model.evaluate(0.3) == pytest.approx(2.0)


@pytest.mark.parametrize("n,h", [(30, 4.0), (100, 20.0), (500, 120.0)])
def test_matches_dense_oracle_hat(n, h):
    rng = np.random.default_rng(n)
    samples = random_samples(rng, n, lambda x: np.sin(7.0 * x) + x)
    model = fit(samples, hat_kernel(h), policy="nearest_node")
    xs = rng.random(300)
    got = model.evaluate_many(xs)
    want = dense_oracle(samples.nodes.nodes, samples.values, xs, hat_kernel(h))
    covered = np.isfinite(want)
    assert np.allclose(got[covered], want[covered], rtol=1e-12, atol=1e-13)


def test_matches_dense_oracle_custom_profile():
    h = 15.0
    kernel = KernelFamily(
        "bump", h, lambda t: np.maximum(0.0, 1.0 - (h * np.asarray(t)) ** 2)
    )
    rng = np.random.default_rng(9)
    samples = random_samples(rng, 200, np.cos)
    model = fit(samples, kernel, policy="nearest_node")
    xs = rng.random(200)
    got = model.evaluate_many(xs)
    want = dense_oracle(samples.nodes.nodes, samples.values, xs, kernel)
    covered = np.isfinite(want)
    assert np.all(covered)
    assert np.allclose(got, want, rtol=1e-12, atol=1e-13)


def test_uncovered_point_policies():
    samples = SampleSet(NodeSet([0.1, 0.2]), [5.0, 9.0])
    kernel = hat_kernel(100.0)  # support radius 0.01
    with pytest.raises(UncoveredPointError) as exc:
        fit(samples, kernel, policy="error").evaluate(0.6)
    assert exc.value.point == pytest.approx(0.6)
    model = fit(samples, kernel, policy="nearest_node")
    assert model.evaluate(0.17) == pytest.approx(9.0)
    assert model.evaluate(0.95) == pytest.approx(5.0)
    with pytest.raises(ValueError):
        fit(samples, kernel, policy="bogus")


def test_nearest_node_indices():
    nodes = np.array([0.1, 0.4, 0.9])
    xs = np.array([0.05, 0.3, 0.99, 0.65])
    assert list(nearest_node_indices(nodes, xs)) == [0, 1, 2, 1]


def test_predictions_stay_in_value_hull():
    rng = np.random.default_rng(4)
    for _ in range(50):
        samples = random_samples(rng, int(rng.integers(2, 80)), np.sin)
        model = fit(samples, hat_kernel(float(rng.uniform(1, 100))), "nearest_node")
        vals = model.evaluate_many(rng.random(50))
        lo, hi = samples.values.min(), samples.values.max()
        assert np.all(vals >= lo - 1e-12)
        assert np.all(vals <= hi + 1e-12)


def test_node_order_does_not_matter():
    rng = np.random.default_rng(6)
    pts = rng.random(50)
    fn = function_preset("sine")
    perm = rng.permutation(50)
    a = fit(SampleSet(NodeSet(pts), fn(np.sort(pts))), hat_kernel(20.0), "nearest_node")
    b = fit(SampleSet(NodeSet(pts[perm]), fn(np.sort(pts))), hat_kernel(20.0), "nearest_node")
    xs = rng.random(100)
    assert np.array_equal(a.evaluate_many(xs), b.evaluate_many(xs))


def test_sup_error_and_risk():
    fn = function_preset("constant")
    rng = np.random.default_rng(8)
    samples = random_samples(rng, 50, fn)
    model = fit(samples, hat_kernel(10.0), "nearest_node")
    assert model.sup_error(fn, 1000) == pytest.approx(0.0, abs=1e-14)
    assert model.risk_estimate(fn, 1000) == pytest.approx(0.0, abs=1e-14)
    # model identically zero against target identically one has unit risk
    zero = SampleSet(samples.nodes, np.zeros(50))
    zmodel = fit(zero, hat_kernel(10.0), "nearest_node")
    assert zmodel.risk_estimate(fn, 1000) == pytest.approx(1.0)
    assert zmodel.sup_error(fn, 1000) == pytest.approx(1.0)
    # risk is bounded by the squared sup error
    fn2 = function_preset("sine")
    samples2 = random_samples(rng, 200, fn2)
    m2 = fit(samples2, hat_kernel(40.0), "nearest_node")
    assert m2.risk_estimate(fn2, 2000) <= m2.sup_error(fn2, 2000) ** 2 + 1e-15
    with pytest.raises(ValueError):
        m2.risk_estimate(fn2, 0)


def test_sup_error_matches_finer_grid():
    fn = function_preset("sine")
    rng = np.random.default_rng(12)
    samples = random_samples(rng, 300, fn)
    model = fit(samples, hat_kernel(60.0), "nearest_node")
    coarse = model.sup_error(fn, 3000)
    fine = model.sup_error(fn, 30_000)
    assert coarse <= fine + 1e-15
    assert fine <= coarse + fn.lipschitz_L / 1500.0
