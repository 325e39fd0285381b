import numpy as np
import pytest

from ddsense.channels import build_channel, build_deriv
from ddsense.core import PathParams, Scheme, SystemConfig, generate_pilots
from ddsense.oracle import BranchCrossingError, compare, elementwise_channel, fd_derivative, numeric_fim

from conftest import FIG1_PATH, FIG3_PATHS


def test_cpofdm_identity():
    cfg = SystemConfig(4, 3, 15e3)
    np.testing.assert_allclose(elementwise_channel("cp_ofdm", cfg, PathParams(1, 0, 0, 0)), 2 * np.eye(12), atol=1e-12)


def test_twostep_identity():
    cfg = SystemConfig(4, 3, 15e3)
    np.testing.assert_allclose(elementwise_channel("two_step_otfs", cfg, PathParams(1, 0, 0, 0)), np.eye(12), atol=1e-12)


def test_oracle_rejects_bad_delay(cfg12):
    with pytest.raises(ValueError):
        elementwise_channel("zak_otfs", cfg12, PathParams(1, 0, cfg12.T, 0))


@pytest.mark.parametrize("scheme", list(Scheme))
def test_fd_phase(scheme):
    cfg = SystemConfig(6, 6, 15e3)
    path = PathParams(0.7, 1.0, 1.5 * cfg.T / 6, 900.0)
    rep = compare(fd_derivative(scheme, cfg, path, "phase"), 1j * build_channel(scheme, cfg, path), 1e-8)
    assert rep.passed


def test_fd_branch_crossing(cfg12):
    path = PathParams(1, 0, 2 * cfg12.T / cfg12.M, 100.0)
    with pytest.raises(BranchCrossingError):
        fd_derivative("zak_otfs", cfg12, path, "tau")


def test_fd_second_order_convergence(cfg12):
    path = PathParams(1, 0.3, 2.5 * cfg12.T / cfg12.M, 700.0)
    analytic = build_deriv("zak_otfs", cfg12, path, "tau")
    h = 1e-2 * cfg12.T / cfg12.M
    e1 = np.linalg.norm(fd_derivative("zak_otfs", cfg12, path, "tau", h) - analytic)
    e2 = np.linalg.norm(fd_derivative("zak_otfs", cfg12, path, "tau", h / 2) - analytic)
    assert 3 <= e1 / e2 <= 5


def test_fd_rejects_bad_step(cfg12):
    with pytest.raises(ValueError):
        fd_derivative("zak_otfs", cfg12, FIG1_PATH, "nu", 0.0)


def test_numeric_fim_properties():
    cfg = SystemConfig(6, 6, 15e3)
    x = generate_pilots(6, 6, 1)
    paths = [PathParams(0.9, 0.5, 1.3 * cfg.T / 6, 1.4 * cfg.delta_f / 6)]
    J = numeric_fim("cp_free_ofdm", cfg, paths, x, 1.0)
    assert np.array_equal(J, J.T)
    assert np.array_equal(numeric_fim("cp_free_ofdm", cfg, paths, x, 0.5), 2 * J)


def test_compare_identical():
    A = np.arange(12.0).reshape(3, 4) + 1j
    rep = compare(A, A, 0.0)
    assert rep.max_abs_error == 0 and rep.relative_frobenius_error == 0 and rep.passed


def test_compare_single_perturbation():
    A = np.ones((5, 5), dtype=complex)
    B = A.copy()
    B[3, 1] += 1e-3
    rep = compare(B, A, 1e-6)
    assert not rep.passed
    assert rep.worst_entry_index == (3, 1)
    assert rep.max_abs_error == pytest.approx(1e-3)


def test_compare_shape_mismatch():
    with pytest.raises(ValueError):
        compare(np.zeros((2, 2)), np.zeros((2, 3)), 1.0)


@pytest.mark.parametrize("scheme", list(Scheme))
def test_fast_vs_oracle_fig3(scheme, cfg12):
    for path in FIG3_PATHS:
        assert compare(build_channel(scheme, cfg12, path), elementwise_channel(scheme, cfg12, path), 1e-12).passed
