"""Trial-space analysis of the stability form on coordinate functions.

The ambient coordinates l_v = <x, v> and the Gauss-map coordinates
f_v = <nu, v> satisfy Delta l_v = -n l_v and Delta f_v = -|A|^2 f_v, and
together with the ground state rho they span low-dimensional trial
spaces on which the stability form B(f, f) = int f J(f) can be made
negative.  This module checks those identities discretely, measures the
rank of the trial spaces, runs the averaged choice of the distinguished
direction v0, and verifies the completed-square decomposition of the
form on the (n+4)-dimensional trial space term by term.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from . import spectral
from .errors import InvalidParameterError
from .fem import f_vertex, l_vertex

_DEFAULT_RANK_TOL = 1e-8

VERDICT_NEGATIVE = "negative_definite"
VERDICT_NOT_NEGATIVE = "not_negative_definite"
VERDICT_HYP_FAIL = "hypotheses_not_met"
VERDICT_GEODESIC = "excluded_geodesic"


@dataclass(frozen=True)
class FormReport:
    """Gram and stability-form matrices on a named function basis."""

    basis_labels: tuple
    G: np.ndarray
    B: np.ndarray
    rank: int
    neg_inertia: int

    def to_dict(self):
        return {"basis_labels": list(self.basis_labels),
                "G": self.G.tolist(), "B": self.B.tolist(),
                "rank": self.rank, "neg_inertia": self.neg_inertia}


@dataclass(frozen=True)
class IdentityReport:
    """Worst-case residuals of the coordinate-function integrals."""

    int_l: float        # max_v |int l_v|
    int_asq_f: float    # max_v |int |A|^2 f_v|
    pair: float         # max_{v,w} |int (|A|^2 - n) l_w f_v|
    area: float
    mode: str           # "analytic" (chart quadrature) or "discrete"

    def to_dict(self):
        return {"int_l": self.int_l, "int_asq_f": self.int_asq_f,
                "pair": self.pair, "area": self.area, "mode": self.mode}


@dataclass(frozen=True)
class TheoremReport:
    """Hypothesis flags and trial-space verdict for one (delta1, delta2)."""

    delta1: float
    delta2: float
    hyp_integral: bool
    hyp_pointwise: bool
    geodesic_flag: bool
    v0: np.ndarray
    gamma0_max_eig: Optional[float]
    verdict: str
    neg_inertia_gamma0: int
    spectral_index: int
    rr_consistent: bool

    def to_dict(self):
        return {"delta1": self.delta1, "delta2": self.delta2,
                "hyp_integral": self.hyp_integral,
                "hyp_pointwise": self.hyp_pointwise,
                "geodesic_flag": self.geodesic_flag,
                "v0": self.v0.tolist(),
                "gamma0_max_eig": self.gamma0_max_eig,
                "verdict": self.verdict,
                "neg_inertia_gamma0": self.neg_inertia_gamma0,
                "spectral_index": self.spectral_index,
                "rr_consistent": self.rr_consistent}


@dataclass(frozen=True)
class ChainRecord:
    """The four lines of the completed-square estimate for one draw."""

    L0: float
    L0e: float
    L1: float
    L2: float
    terms: tuple          # the four signed contributions to L2
    scale: float
    lambda1: float

    @property
    def residual_identity(self):
        return abs(self.L1 - self.L2)

    @property
    def residual_expansion(self):
        return abs(self.L0 - self.L0e)

    def to_dict(self):
        return {"L0": self.L0, "L0e": self.L0e, "L1": self.L1,
                "L2": self.L2, "terms": list(self.terms),
                "scale": self.scale, "lambda1": self.lambda1,
                "residual_identity": self.residual_identity,
                "residual_expansion": self.residual_expansion}


# ----------------------------------------------------------------------
# quadrature helpers
# ----------------------------------------------------------------------

def _quad_fields(mesh):
    """(weights, positions, normals, |A|^2) at quadrature points.

    When the mesh carries chart coordinates and an analytic source the
    curved area element and exact positions are used; otherwise the
    flat-triangle data is the best available.
    """
    if mesh.quad_params is not None and mesh.source_family is not None:
        fam = mesh.source_family
        x = fam.position(mesh.quad_params)
        return mesh.quad_measure, x, mesh.quad_nu, mesh.quad_asq, "analytic"
    return (mesh.quad_weights, mesh.quad_points, mesh.quad_nu,
            mesh.quad_asq, "discrete")


def gauss_identities(mesh):
    """Residuals of int l_v = 0, int |A|^2 f_v = 0 and the pair identity
    int (|A|^2 - n) l_w f_v = 0 over all ambient basis directions."""
    w, x, nu, asq, mode = _quad_fields(mesh)
    n = mesh.surface_dim
    int_l = np.einsum("tq,tqa->a", w, x)
    int_sf = np.einsum("tq,tq,tqa->a", w, asq, nu)
    pair = np.einsum("tq,tq,tqa,tqb->ab", w, asq - n, x, nu)
    return IdentityReport(
        int_l=float(np.abs(int_l).max()),
        int_asq_f=float(np.abs(int_sf).max()),
        pair=float(np.abs(pair).max()),
        area=float(w.sum()), mode=mode)


def ratio_report(mesh):
    """int |A|^2 divided by n |M| (equals 1 exactly on the product tori)."""
    total = float((mesh.quad_weights * mesh.quad_asq).sum())
    return total / (mesh.surface_dim * mesh.area)


# ----------------------------------------------------------------------
# trial-space machinery
# ----------------------------------------------------------------------

def pencil_inertia(B, G, rank_tol=_DEFAULT_RANK_TOL):
    """(rank, negative inertia) of the form B on the span with Gram G.

    G may be rank deficient (collapsed bases); the form is reduced to
    the subspace of G-eigenvectors above rank_tol times the largest.
    """
    B = np.asarray(B, dtype=float)
    G = np.asarray(G, dtype=float)
    gvals, gvecs = sla.eigh(G)
    keep = gvals > rank_tol * max(gvals.max(), 0.0)
    rank = int(keep.sum())
    if rank == 0:
        return 0, 0
    U = gvecs[:, keep] / np.sqrt(gvals[keep])
    reduced = U.T @ B @ U
    rvals = sla.eigh(reduced, eigvals_only=True)
    neg = int((rvals < 0.0).sum())
    return rank, neg


def _form_report(ops, vectors, labels, rank_tol=_DEFAULT_RANK_TOL):
    X = np.stack(vectors, axis=1)
    G = X.T @ (ops.Mm @ X)
    Bm = X.T @ (ops.B @ X)
    G = 0.5 * (G + G.T)
    Bm = 0.5 * (Bm + Bm.T)
    rank, neg = pencil_inertia(Bm, G, rank_tol)
    return FormReport(basis_labels=tuple(labels), G=G, B=Bm,
                      rank=rank, neg_inertia=neg)


def _ambient_basis(mesh):
    return np.eye(mesh.vertices.shape[1])


def gamma_basis(mesh, rho):
    """Nodal vectors and labels of {rho, f_e1.., l_e1..} in fixed order."""
    dim = mesh.vertices.shape[1]
    basis = _ambient_basis(mesh)
    vectors = [np.asarray(rho, dtype=float)]
    labels = ["rho"]
    for a in range(dim):
        vectors.append(f_vertex(mesh, basis[a]))
        labels.append(f"f_e{a + 1}")
    for a in range(dim):
        vectors.append(l_vertex(mesh, basis[a]))
        labels.append(f"l_e{a + 1}")
    return vectors, labels


def lambda_basis(mesh):
    """Nodal vectors and labels of {1, f_e1.., l_e1..}."""
    dim = mesh.vertices.shape[1]
    basis = _ambient_basis(mesh)
    vectors = [np.ones(mesh.num_vertices)]
    labels = ["one"]
    for a in range(dim):
        vectors.append(f_vertex(mesh, basis[a]))
        labels.append(f"f_e{a + 1}")
    for a in range(dim):
        vectors.append(l_vertex(mesh, basis[a]))
        labels.append(f"l_e{a + 1}")
    return vectors, labels


def gamma0_basis(mesh, rho, v0):
    """Nodal vectors and labels of {rho, l_e1.., f_v0}."""
    dim = mesh.vertices.shape[1]
    basis = _ambient_basis(mesh)
    vectors = [np.asarray(rho, dtype=float)]
    labels = ["rho"]
    for a in range(dim):
        vectors.append(l_vertex(mesh, basis[a]))
        labels.append(f"l_e{a + 1}")
    vectors.append(f_vertex(mesh, v0))
    labels.append("f_v0")
    return vectors, labels


def lemma_check(mesh, ops=None, rho=None, rank_tol=_DEFAULT_RANK_TOL):
    """Gram rank of the (2n+5)-function trial set {rho, f's, l's}.

    Full rank certifies the surface is neither totally geodesic nor a
    product torus (those collapse the f's onto constants or the l's).
    Returns (rank, verdict, FormReport).
    """
    if ops is None:
        from .fem import assemble
        ops = assemble(mesh)
    if rho is None:
        _, rho = spectral.first_eigfunction(ops)
    vectors, labels = gamma_basis(mesh, rho)
    report = _form_report(ops, vectors, labels, rank_tol)
    full = 2 * mesh.surface_dim + 5
    verdict = "full_rank" if report.rank == full else "collapsed"
    return report.rank, verdict, report


def choose_v0(mesh, delta2):
    """Distinguished direction minimizing int (|A|^2 - n delta2) f_v^2.

    Assembles the quadratic form Q over the ambient basis and returns
    the unit eigenvector of its smallest eigenvalue together with that
    value.  The averaging identity trace Q = int (|A|^2 - n delta2) is
    enforced to 1e-10 relative.
    """
    if not (0.0 < delta2 < 1.0):
        raise InvalidParameterError("delta2 must lie in (0, 1)")
    w, _, nu, asq, _ = _quad_fields(mesh)
    n = mesh.surface_dim
    weight = w * (asq - n * delta2)
    Q = np.einsum("tq,tqa,tqb->ab", weight, nu, nu)
    Q = 0.5 * (Q + Q.T)
    total = float(weight.sum())
    scale = max(abs(total), float(np.abs(weight).sum()), 1e-30)
    if abs(np.trace(Q) - total) > 1e-10 * scale:
        raise InvalidParameterError(
            "quadrature normals are not unit: trace identity violated")
    vals, vecs = sla.eigh(Q)
    return vecs[:, 0], float(vals[0])


def theorem_check(mesh, delta1, delta2=None, zero_tol=0.05, ops=None,
                  rho=None, rank_tol=_DEFAULT_RANK_TOL):
    """Hypothesis flags and the sign of the form on {rho, l's, f_v0}.

    Verdict precedence: a totally geodesic surface is excluded, failed
    hypotheses are reported as such, and otherwise the verdict is the
    sign of the largest pencil eigenvalue of (B, G) on the trial space.
    The report always carries the Rayleigh-Ritz cross-check
    neg_inertia <= spectral Morse index.
    """
    if delta2 is None:
        delta2 = 1.0 - delta1
    if not (delta1 > 0 and delta2 > 0):
        raise InvalidParameterError("delta1 and delta2 must be positive")
    if abs(delta1 + delta2 - 1.0) > 1e-12:
        raise InvalidParameterError("delta1 + delta2 must equal 1")
    if ops is None:
        from .fem import assemble
        ops = assemble(mesh)
    n = mesh.surface_dim
    w = mesh.quad_weights
    total_asq = float((w * mesh.quad_asq).sum())
    volume = mesh.area
    hyp_integral = total_asq <= delta2 * n * volume
    hyp_pointwise = float(mesh.quad_asq.max()) <= 2.0 * n * delta1
    geodesic = float(mesh.quad_asq.max()) < 1e-12
    if rho is None:
        _, rho = spectral.first_eigfunction(ops)
    v0, _ = choose_v0(mesh, delta2)
    vectors, labels = gamma0_basis(mesh, rho, v0)
    report = _form_report(ops, vectors, labels, rank_tol)
    gamma0_max = _pencil_max_eig(report.B, report.G, rank_tol)
    if geodesic:
        verdict = VERDICT_GEODESIC
    elif not (hyp_integral and hyp_pointwise):
        verdict = VERDICT_HYP_FAIL
    elif gamma0_max is not None and gamma0_max < 0:
        verdict = VERDICT_NEGATIVE
    else:
        verdict = VERDICT_NOT_NEGATIVE
    index, _ = spectral.morse_index(ops, zero_tol=zero_tol)
    return TheoremReport(
        delta1=float(delta1), delta2=float(delta2),
        hyp_integral=hyp_integral, hyp_pointwise=hyp_pointwise,
        geodesic_flag=geodesic, v0=v0, gamma0_max_eig=gamma0_max,
        verdict=verdict, neg_inertia_gamma0=report.neg_inertia,
        spectral_index=index, rr_consistent=report.neg_inertia <= index)


def _pencil_max_eig(B, G, rank_tol):
    gvals, gvecs = sla.eigh(np.asarray(G, float))
    keep = gvals > rank_tol * max(gvals.max(), 0.0)
    if not keep.any():
        return None
    U = gvecs[:, keep] / np.sqrt(gvals[keep])
    rvals = sla.eigh(U.T @ np.asarray(B, float) @ U, eigvals_only=True)
    return float(rvals[-1])


def conjecture_probe(mesh, ops=None, rank_tol=_DEFAULT_RANK_TOL):
    """Form report on {1, f's, l's} plus the (n+4)-dimensional flag.

    By Sylvester's law the negative inertia equals the largest dimension
    of a subspace on which the stability form is negative definite, so
    the flag records whether such a subspace of dimension n+4 exists in
    this discretization.
    """
    if ops is None:
        from .fem import assemble
        ops = assemble(mesh)
    vectors, labels = lambda_basis(mesh)
    report = _form_report(ops, vectors, labels, rank_tol)
    return report, report.neg_inertia >= mesh.surface_dim + 4


def chain_verify(mesh, a, b, w, delta1, delta2=None, ops=None,
                 rho=None, lam1=None, v0=None):
    """Evaluate the four lines of the completed-square estimate.

    For f = a rho + l_w + b f_v0 computes the direct value L0, its
    integral expansion L0e, the version L1 with the ground-state bound
    lambda1 <= -2n substituted, and the completed-square form L2, whose
    four signed terms are returned individually.  L1 = L2 is an exact
    algebraic identity when delta1 + delta2 = 1.
    """
    if delta2 is None:
        delta2 = 1.0 - delta1
    if not (delta1 > 0 and delta2 > 0):
        raise InvalidParameterError("delta1 and delta2 must be positive")
    if abs(delta1 + delta2 - 1.0) > 1e-12:
        raise InvalidParameterError("delta1 + delta2 must equal 1")
    w_vec = np.asarray(w, dtype=float)
    if a == 0 and b == 0 and not w_vec.any():
        raise InvalidParameterError("(a, b, w) must not all vanish")
    if ops is None:
        from .fem import assemble
        ops = assemble(mesh)
    if rho is None or lam1 is None:
        lam1, rho = spectral.first_eigfunction(ops)
    if v0 is None:
        v0, _ = choose_v0(mesh, delta2)
    n = ops.n
    Mm, B = ops.Mm, ops.B
    SA = ops.W - n * ops.Mm          # |A|^2-weighted mass
    lw = l_vertex(mesh, w_vec)
    f0 = f_vertex(mesh, v0)
    f = a * rho + lw + b * f0

    def dot(u, A, v):
        return float(u @ (A @ v))

    rho2 = dot(rho, Mm, rho)
    f02 = dot(f0, Mm, f0)
    asq_l2 = dot(lw, SA, lw)
    asq_lf = dot(lw, SA, f0)
    asq_rl = dot(rho, SA, lw)
    L0 = dot(f, B, f)
    L0e = (a * a * lam1 * rho2 - asq_l2 - n * b * b * f02
           - 2.0 * b * asq_lf - 2.0 * a * asq_rl)
    L1 = (-2.0 * a * a * n * rho2 - asq_l2 - n * b * b * f02
          - 2.0 * b * asq_lf - 2.0 * a * asq_rl)
    t1 = a * a * (dot(rho, SA, rho) / delta1 - 2.0 * n * rho2)
    g2 = (a / np.sqrt(delta1)) * rho + np.sqrt(delta1) * lw
    t2 = -dot(g2, SA, g2)
    g3 = (b / np.sqrt(delta2)) * f0 + np.sqrt(delta2) * lw
    t3 = -dot(g3, SA, g3)
    t4 = b * b * (dot(f0, SA, f0) / delta2 - n * f02)
    L2 = t1 + t2 + t3 + t4
    scale = (abs(a * a * lam1 * rho2) + 2.0 * a * a * n * rho2
             + abs(asq_l2) + n * b * b * f02 + 2.0 * abs(b * asq_lf)
             + 2.0 * abs(a * asq_rl)
             + abs(t1) + abs(t2) + abs(t3) + abs(t4))
    return ChainRecord(L0=L0, L0e=L0e, L1=L1, L2=L2,
                       terms=(t1, t2, t3, t4), scale=scale,
                       lambda1=float(lam1))


def chain_sweep(mesh, ops=None, draws=100, seed=0):
    """Seeded random draws of (a, b, w, delta1) for the chain estimate.

    Returns the list of ChainRecords together with the draw parameters;
    a, b and the entries of w are standard normal, delta1 is uniform on
    (0.05, 0.95).
    """
    if ops is None:
        from .fem import assemble
        ops = assemble(mesh)
    lam1, rho = spectral.first_eigfunction(ops)
    rng = np.random.default_rng(seed)
    dim = mesh.vertices.shape[1]
    records, params = [], []
    v0_cache = {}
    for _ in range(draws):
        a = float(rng.standard_normal())
        b = float(rng.standard_normal())
        w = rng.standard_normal(dim)
        delta1 = float(rng.uniform(0.05, 0.95))
        delta2 = 1.0 - delta1
        if delta2 not in v0_cache:
            v0_cache[delta2], _ = choose_v0(mesh, delta2)
        rec = chain_verify(mesh, a, b, w, delta1, delta2, ops=ops,
                           rho=rho, lam1=lam1, v0=v0_cache[delta2])
        records.append(rec)
        params.append({"a": a, "b": b, "w": w.tolist(), "delta1": delta1})
    return records, params
