"""Backend parity: the compiled kernels must reproduce the numpy fallback
bit for bit, on both boundary modes."""
import numpy as np
import pytest

from chanvese._kernels import available_backends

BACKENDS = available_backends()
needs_ext = pytest.mark.skipif(
    "cython" not in BACKENDS, reason="compiled kernels not built"
)


def fields(rng):
    smooth = np.add.outer(np.sin(np.linspace(0, 3, 41)), np.cos(np.linspace(0, 2, 53)))
    noisy = rng.normal(0.0, 4.0, size=(41, 53))
    return [np.ascontiguousarray(smooth * 10.0), np.ascontiguousarray(noisy)]


@needs_ext
@pytest.mark.parametrize("periodic", [False, True])
def test_upwind_norm_parity(rng, periodic):
    pure, fast = BACKENDS["pure"], BACKENDS["cython"]
    for phi in fields(rng):
        for sign in (1, -1):
            a = pure.upwind_norm(phi, sign, 1.0, 1.0, periodic)
            b = fast.upwind_norm(phi, sign, 1.0, 1.0, periodic)
            assert np.array_equal(a, b)


@needs_ext
@pytest.mark.parametrize("periodic", [False, True])
def test_grad_norm_parity(rng, periodic):
    pure, fast = BACKENDS["pure"], BACKENDS["cython"]
    for phi in fields(rng):
        a = pure.grad_norm(phi, 0.7, 1.3, periodic)
        b = fast.grad_norm(phi, 0.7, 1.3, periodic)
        assert np.array_equal(a, b)


@needs_ext
@pytest.mark.parametrize("periodic", [False, True])
@pytest.mark.parametrize("band", [3.0, np.inf])
def test_curvature_parity(rng, periodic, band):
    pure, fast = BACKENDS["pure"], BACKENDS["cython"]
    for phi in fields(rng):
        a = pure.curvature(phi, 1.0, 1.0, 1e-8, band, periodic)
        b = fast.curvature(phi, 1.0, 1.0, 1e-8, band, periodic)
        assert np.array_equal(a, b)


@needs_ext
@pytest.mark.parametrize("periodic", [False, True])
def test_sussman_sweep_parity(rng, periodic):
    pure, fast = BACKENDS["pure"], BACKENDS["cython"]
    for phi in fields(rng):
        a = pure.sussman_sweep(phi, 0.5, 1.0, 1.0, periodic)
        b = fast.sussman_sweep(phi, 0.5, 1.0, 1.0, periodic)
        assert np.array_equal(a, b)


@needs_ext
def test_repeated_sweeps_stay_identical(rng):
    pure, fast = BACKENDS["pure"], BACKENDS["cython"]
    phi_a = fields(rng)[1].copy()
    phi_b = phi_a.copy()
    for _ in range(25):
        phi_a = pure.sussman_sweep(phi_a, 0.5, 1.0, 1.0, False)
        phi_b = fast.sussman_sweep(phi_b, 0.5, 1.0, 1.0, False)
    assert np.array_equal(phi_a, phi_b)
