"""Certified sign polynomials."""

import numpy as np
import pytest

from gapkit import CapacityError, ParameterError, dump_chebpoly, load_chebpoly, sign_poly
from gapkit.rng import substream
from gapkit.signpoly import DEGREE_BOUND_K, quantize_gap_down


def test_zero_at_origin_and_odd_coeffs():
    p = sign_poly(0.3, 1e-3)
    assert p.evaluate(0.0)[0] == 0.0
    full = p.full_coeffs()
    assert np.all(full[0::2] == 0.0)
    assert p.degree % 2 == 1


def test_odd_symmetry():
    p = sign_poly(0.15, 1e-4)
    g = substream(11, 0)
    xs = g.uniform(-1, 1, 50)
    assert np.allclose(p.evaluate(-xs), -p.evaluate(xs), atol=1e-12)


@pytest.mark.parametrize("dp,eps", [(0.2, 1e-3), (0.1, 1e-4)])
def test_certified_on_dense_grid(dp, eps):
    p = sign_poly(dp, eps)
    assert p.sup_err <= eps
    xs = np.linspace(-1, 1, 10 * p.degree + 1)
    vals = p.evaluate(xs)
    assert np.max(np.abs(vals)) <= 1 + 1e-10
    mask = np.abs(xs) >= dp
    assert np.max(np.abs(vals[mask] - np.sign(xs[mask]))) <= eps * 1.05  # grid jitter


def test_degree_formula_bound():
    for dp, eps in [(0.2, 1e-3), (0.1, 1e-4), (0.05, 1e-4), (0.01, 1e-3), (0.002, 1e-3)]:
        p = sign_poly(dp, eps)
        assert p.degree <= np.ceil(DEGREE_BOUND_K * np.log(2 / eps) / dp)


def test_degree_doubles_as_gap_halves():
    degs = [sign_poly(dp, 1e-3).degree for dp in (0.2, 0.1, 0.05)]
    for a, b in zip(degs, degs[1:]):
        assert 1.7 <= b / a <= 2.3


def test_capacity_error_for_tiny_gap():
    with pytest.raises(CapacityError):
        sign_poly(1e-9, 1e-3)


def test_parameter_validation():
    with pytest.raises(ParameterError):
        sign_poly(0.0, 1e-3)
    with pytest.raises(ParameterError):
        sign_poly(0.1, 1.5)


def test_serialization_roundtrip():
    p = sign_poly(0.2, 1e-3)
    text = dump_chebpoly(p)
    head = text.splitlines()[0].split()
    assert head[0] == "CHEB" and int(head[1]) == p.degree
    q = load_chebpoly(text)
    assert q.degree == p.degree
    assert q.target_gap == p.target_gap
    assert q.sup_err == p.sup_err
    assert np.array_equal(q.coeffs, p.coeffs)


def test_quantize_gap_down():
    for x in (0.3, 0.1, 0.017, 3e-4):
        q = quantize_gap_down(x)
        assert q <= x < q * 2 ** (1 / 4) * 1.0000001
