"""Analytic family invariants and the coordinate test functions."""

import numpy as np
import pytest

from mhs import geometry
from mhs.errors import DomainError, InvalidParameterError, SingularPointError
from mhs.geometry import (area, check_minimality, clifford, equator,
                          eval_frame, f_func, gradient_check, l_func,
                          sample_grid)


def frame_invariants(family, u):
    fp = eval_frame(family, u)
    frame = np.vstack([fp.x, fp.nu, fp.tangent_basis])
    gram = frame @ frame.T
    assert np.abs(gram - np.eye(len(frame))).max() < 1e-10
    assert abs(np.trace(fp.A)) < 1e-8
    assert abs((fp.A ** 2).sum() - fp.Asq) < 1e-8


@pytest.mark.parametrize("family", [equator(2), equator(3),
                                    clifford(2, 1), clifford(3, 1),
                                    clifford(4, 2)])
def test_frame_invariants_sampled(family):
    rng = np.random.default_rng(7)
    dom = family.param_domain
    for _ in range(10):
        u = np.array([rng.uniform(lo + 0.2, hi - 0.2)
                      for lo, hi in zip(dom.lows, dom.highs)])
        frame_invariants(family, u)


def test_equator_requires_dimension():
    with pytest.raises(InvalidParameterError):
        equator(1)


def test_clifford_parameter_range():
    with pytest.raises(InvalidParameterError):
        clifford(2, 2)
    with pytest.raises(InvalidParameterError):
        clifford(2, 0)


def test_equator_is_totally_geodesic():
    fam = equator(2)
    u = sample_grid(fam, 8)
    assert np.abs(fam.asq(u)).max() == 0.0
    assert check_minimality(equator(3)) == 0.0


def test_equator_area():
    assert abs(area(equator(2), resolution=64) - 4 * np.pi) < 1e-6


def test_clifford_radii_and_asq():
    fam = clifford(2, 1)
    u = sample_grid(fam, 8)
    x = fam.position(u)
    # each factor circle has radius 1/sqrt(2)
    assert np.abs(np.linalg.norm(x[:, :2], axis=1) - 2 ** -0.5).max() < 1e-12
    assert np.abs(np.linalg.norm(x[:, 2:], axis=1) - 2 ** -0.5).max() < 1e-12
    assert np.abs(fam.asq(u) - 2.0).max() < 1e-12
    u4 = sample_grid(clifford(4, 2), 4)
    assert np.abs(clifford(4, 2).asq(u4) - 4.0).max() < 1e-12


def test_clifford_minimality_fine_grid():
    assert check_minimality(clifford(3, 1), per_dim=8) < 1e-10


def test_clifford_area():
    assert abs(area(clifford(2, 1), resolution=64) - 2 * np.pi ** 2) < 1e-8


def test_clifford_principal_curvatures():
    fp = eval_frame(clifford(2, 1), np.array([0.3, 1.1]))
    vals = np.sort(np.linalg.eigvalsh(fp.A))
    assert np.abs(vals - [-1.0, 1.0]).max() < 1e-10


def test_eval_frame_domain_and_singular():
    fam = equator(2)
    with pytest.raises(DomainError):
        eval_frame(fam, np.array([-0.5, 0.0]))
    with pytest.raises(SingularPointError):
        eval_frame(fam, np.array([0.0, 1.0]))  # chart pole


def test_eval_frame_deterministic():
    fam = clifford(2, 1)
    u = np.array([0.7, 2.1])
    a = eval_frame(fam, u)
    b = eval_frame(fam, u)
    assert np.array_equal(a.tangent_basis, b.tangent_basis)
    assert np.array_equal(a.A, b.A)


def test_zero_vector_fields():
    fam = clifford(2, 1)
    u = sample_grid(fam, 6)
    assert np.all(l_func(fam, np.zeros(4))(u) == 0)
    assert np.all(f_func(fam, np.zeros(4))(u) == 0)


def test_equator_axis_fields():
    fam = equator(2)
    u = sample_grid(fam, 6)
    axis = np.array([0.0, 0.0, 0.0, 1.0])
    assert np.abs(l_func(fam, axis)(u)).max() == 0.0
    assert np.abs(np.abs(f_func(fam, axis)(u)) - 1.0).max() == 0.0


@pytest.mark.parametrize("family", [equator(2), clifford(2, 1)])
def test_coordinate_fields_partition(family):
    u = sample_grid(family, 6)
    basis = np.eye(family.ambient_dim)
    fsq = sum(f_func(family, v)(u) ** 2 for v in basis)
    lsq = sum(l_func(family, v)(u) ** 2 for v in basis)
    assert np.abs(fsq - 1.0).max() < 1e-12
    assert np.abs(lsq - 1.0).max() < 1e-12


def test_gradient_identities_clifford():
    fam = clifford(2, 1)
    u = np.array([0.8, 2.3])
    v = np.array([0.3, -0.5, 0.7, 0.2])
    r_l, r_f = gradient_check(fam, v, u, h=1e-3)
    assert r_l < 1e-5 and r_f < 1e-5
    # centered differences: halving the step cuts the residual ~4x
    r_l2, r_f2 = gradient_check(fam, v, u, h=5e-4)
    assert r_l2 < 0.5 * r_l + 1e-12
    assert r_f2 < 0.5 * r_f + 1e-12


def test_gradient_check_equator_constant_normal():
    fam = equator(2)
    u = np.array([1.2, 0.9])
    v = np.array([0.1, 0.4, -0.2, 0.8])
    _, r_f = gradient_check(fam, v, u, h=1e-4)
    assert r_f < 1e-9  # f_v constant, A = 0


def test_gradient_check_rejects_bad_step():
    with pytest.raises(InvalidParameterError):
        gradient_check(clifford(2, 1), np.ones(4), np.array([0.5, 0.5]), h=0)


def test_rotational_surface_minimality(otsuki_profile):
    from mhs.rotational import build_surface
    fam = build_surface(otsuki_profile, 32, 16)
    assert check_minimality(fam, per_dim=(32, 16)) <= 1e-6
