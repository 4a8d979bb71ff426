"""Trial-space checks: identities, ranks, v0 selection, chain, probe."""

import numpy as np
import pytest

from mhs import paperlab, spectral
from mhs.errors import InvalidParameterError
from mhs.paperlab import (VERDICT_GEODESIC, VERDICT_HYP_FAIL,
                          VERDICT_NEGATIVE, chain_sweep, chain_verify,
                          choose_v0, conjecture_probe, gauss_identities,
                          lemma_check, pencil_inertia, ratio_report,
                          theorem_check)


# ----------------------------------------------------------------- identities

def test_identities_clifford(clifford_mesh):
    r = gauss_identities(clifford_mesh)
    assert r.pair < 1e-12          # integrand vanishes pointwise
    assert r.int_l < 1e-6 * r.area
    assert r.int_asq_f < 1e-6 * r.area


def test_identities_otsuki(otsuki_mesh, otsuki_mesh_coarse):
    fine = gauss_identities(otsuki_mesh)
    coarse = gauss_identities(otsuki_mesh_coarse)
    for r in (fine, coarse):
        assert r.int_l <= 1e-4 * r.area
        assert r.int_asq_f <= 1e-4 * r.area
        assert r.pair <= 1e-4 * r.area
    # residuals shrink by at least 3x under one refinement step
    floor = 1e-13 * fine.area
    assert fine.int_l <= max(coarse.int_l / 3, floor)
    assert fine.int_asq_f <= max(coarse.int_asq_f / 3, floor)
    assert fine.pair <= max(coarse.pair / 3, floor)


def test_identities_sphere(sphere_mesh):
    r = gauss_identities(sphere_mesh)
    assert r.int_l < 1e-6 * r.area
    assert r.int_asq_f == 0.0


def test_ratio_values(clifford_mesh, sphere_mesh, otsuki_mesh):
    assert abs(ratio_report(clifford_mesh) - 1.0) < 1e-10
    assert ratio_report(sphere_mesh) == 0.0
    # any minimal torus in S^3 integrates |A|^2 to exactly 2|M|
    # (Gauss-Bonnet), so the ratio tends to 1 under refinement
    assert abs(ratio_report(otsuki_mesh) - 1.0) < 1e-2


# ----------------------------------------------------------------- ranks

def test_lemma_ranks(clifford_mesh, clifford_op, sphere_mesh, sphere_op,
                     otsuki_mesh, otsuki_op):
    rank, verdict, _ = lemma_check(otsuki_mesh, otsuki_op)
    assert (rank, verdict) == (9, "full_rank")
    rank, verdict, _ = lemma_check(clifford_mesh, clifford_op)
    assert (rank, verdict) == (5, "collapsed")
    rank, verdict, _ = lemma_check(sphere_mesh, sphere_op)
    assert (rank, verdict) == (4, "collapsed")


def test_gamma_basis_labels(clifford_mesh, clifford_op):
    _, rho = spectral.first_eigfunction(clifford_op)
    vectors, labels = paperlab.gamma_basis(clifford_mesh, rho)
    assert labels == ["rho", "f_e1", "f_e2", "f_e3", "f_e4",
                      "l_e1", "l_e2", "l_e3", "l_e4"]
    assert len(vectors) == 9
    assert all(np.linalg.norm(v) > 0 for v in vectors)


def test_pencil_inertia_toy():
    rank, neg = pencil_inertia(np.diag([-1.0, 1.0]), np.eye(2))
    assert (rank, neg) == (2, 1)
    # rank-deficient Gram: duplicated directions collapse
    G = np.array([[1.0, 1.0], [1.0, 1.0]])
    B = np.array([[-1.0, -1.0], [-1.0, -1.0]])
    rank, neg = pencil_inertia(B, G)
    assert (rank, neg) == (1, 1)


# ----------------------------------------------------------------- v0 choice

def test_choose_v0_trace_identity(clifford_mesh, otsuki_mesh):
    for mesh in (clifford_mesh, otsuki_mesh):
        choose_v0(mesh, 0.5)  # raises if the trace identity fails


def test_choose_v0_equator(sphere_mesh):
    v0, value = choose_v0(sphere_mesh, 0.5)
    # |A|^2 = 0: the quadratic is -n delta2 int f^2, minimized by the
    # polar axis where f is identically 1
    assert abs(abs(v0[3]) - 1.0) < 1e-12
    assert abs(value + 2 * 0.5 * sphere_mesh.area) < 1e-10 * sphere_mesh.area


def test_choose_v0_clifford_nonnegative(clifford_mesh):
    _, value = choose_v0(clifford_mesh, 0.5)
    # |A|^2 - n delta2 = 1 pointwise: no negative direction exists
    assert value >= 0


def test_choose_v0_validates_delta(clifford_mesh):
    with pytest.raises(InvalidParameterError):
        choose_v0(clifford_mesh, 0.0)
    with pytest.raises(InvalidParameterError):
        choose_v0(clifford_mesh, 1.0)


# ----------------------------------------------------------------- theorem

def test_theorem_clifford_hypotheses(clifford_mesh, clifford_op):
    report = theorem_check(clifford_mesh, 0.5, ops=clifford_op)
    assert report.hyp_pointwise          # 2 <= 2n delta1 = 2
    assert not report.hyp_integral       # int = 2|M| > delta2 n |M| = |M|
    assert report.verdict == VERDICT_HYP_FAIL
    assert report.rr_consistent
    assert report.spectral_index == 5


def test_theorem_equator_excluded(sphere_mesh, sphere_op):
    report = theorem_check(sphere_mesh, 0.5, ops=sphere_op)
    assert report.hyp_integral and report.hyp_pointwise
    assert report.geodesic_flag
    assert report.verdict == VERDICT_GEODESIC
    assert report.spectral_index == 1


def test_theorem_otsuki_rr_bound(otsuki_mesh, otsuki_op):
    report = theorem_check(otsuki_mesh, 0.5, ops=otsuki_op)
    assert report.verdict == VERDICT_HYP_FAIL
    assert report.neg_inertia_gamma0 <= report.spectral_index
    assert report.rr_consistent


def test_theorem_synthetic_negative_definite(synthetic_mesh, synthetic_op):
    report = theorem_check(synthetic_mesh, 0.5, ops=synthetic_op)
    assert report.hyp_integral and report.hyp_pointwise
    assert not report.geodesic_flag
    assert report.verdict == VERDICT_NEGATIVE
    assert report.gamma0_max_eig < 0
    # constant normal collapses f_v0 onto the ground state: only 4
    # independent directions survive, consistent with index 4
    assert report.neg_inertia_gamma0 == 4
    assert report.spectral_index == 4
    assert report.rr_consistent


def test_theorem_validates_delta(clifford_mesh, clifford_op):
    with pytest.raises(InvalidParameterError):
        theorem_check(clifford_mesh, 0.0, ops=clifford_op)
    with pytest.raises(InvalidParameterError):
        theorem_check(clifford_mesh, 0.5, 0.6, ops=clifford_op)


# ----------------------------------------------------------------- chain

def test_chain_identity_all_geometries(clifford_mesh, clifford_op,
                                       sphere_mesh, sphere_op,
                                       otsuki_mesh, otsuki_op):
    for mesh, ops in ((clifford_mesh, clifford_op),
                      (sphere_mesh, sphere_op),
                      (otsuki_mesh, otsuki_op)):
        records, _ = chain_sweep(mesh, ops, draws=25, seed=0)
        worst = max(r.residual_identity / r.scale for r in records)
        assert worst <= 1e-10


def test_chain_single_term_case(otsuki_mesh, otsuki_op):
    rec = chain_verify(otsuki_mesh, 0.0, 0.0, np.array([1.0, 0, 0, 0]),
                       0.5, ops=otsuki_op)
    # f = l_w alone: the direct value reduces to -int |A|^2 l_w^2 up to
    # the discrete residual of the coordinate eigenvalue identity
    assert rec.L0 < 0
    assert abs(rec.L0 - rec.L0e) < 1e-2 * rec.scale


def test_chain_ordering_vacuous_on_sphere(sphere_mesh, sphere_op):
    records, _ = chain_sweep(sphere_mesh, sphere_op, draws=10, seed=0)
    # lambda1 = -2 > -2n + tol: the ground-level substitution step does
    # not apply, and indeed L1 can fall below L0 here
    assert records[0].lambda1 > -4 + 0.05


def test_chain_ordering_gap_is_discretization_limited(otsuki_mesh,
                                                      otsuki_op):
    # the substitution L0 -> L1 uses lambda1 <= -2n; discretely the
    # expansion L0 = L0e holds only up to an O(h^2) residual, so the
    # ordering margin is bounded by that residual rather than by zero
    records, _ = chain_sweep(otsuki_mesh, otsuki_op, draws=50, seed=0)
    worst = min((r.L1 - r.L0) / r.scale for r in records)
    assert worst > -5e-3   # small, resolution-limited violation band


def test_chain_rejects_zero_draw(otsuki_mesh, otsuki_op):
    with pytest.raises(InvalidParameterError):
        chain_verify(otsuki_mesh, 0.0, 0.0, np.zeros(4), 0.5, ops=otsuki_op)


# ----------------------------------------------------------------- probe

def test_conjecture_probe_clifford(clifford_mesh, clifford_op):
    report, flag = conjecture_probe(clifford_mesh, clifford_op)
    assert report.basis_labels[0] == "one"
    assert report.rank == 5
    assert report.neg_inertia == 5
    assert not flag   # bounded by the collapsed rank
    # int 1 J(1) = -(n + |A|^2)|M| = -2n|M| for the product torus
    assert abs(report.B[0, 0] + 4 * clifford_mesh.area) < 1e-10


def test_conjecture_probe_equator(sphere_mesh, sphere_op):
    report, flag = conjecture_probe(sphere_mesh, sphere_op)
    assert report.rank == 4
    assert report.neg_inertia >= 1
    assert abs(report.B[0, 0] + 2 * sphere_mesh.area) < 1e-10
    assert not flag


def test_conjecture_probe_otsuki(otsuki_mesh, otsuki_op):
    report, flag = conjecture_probe(otsuki_mesh, otsuki_op)
    assert report.rank == 9
    assert report.neg_inertia >= 6
    assert flag
    # Rayleigh-Ritz: never exceeds the spectral index
    assert report.neg_inertia <= spectral.morse_index(otsuki_op)[0]
