"""Stability (Morse) indices of minimal hypersurfaces of round spheres."""

__version__ = "0.1.0"

from .closedform import (SpectrumTable, clifford_jacobi, equator_jacobi,
                         harmonic_dim, sphere_spectrum)
from .errors import MhsError
from .fem import (OperatorSet, SurfaceMesh, assemble, f_vertex, l_vertex,
                  load_mesh, mesh_from_json, mesh_sphere, mesh_to_json,
                  mesh_torus, project, save_mesh)
from .geometry import (FramePoint, GeometryFamily, ParamDomain, area,
                       check_minimality, clifford, equator, eval_frame,
                       f_func, gradient_check, l_func)
from .paperlab import (ChainRecord, FormReport, IdentityReport,
                       TheoremReport, chain_sweep, chain_verify, choose_v0,
                       conjecture_probe, gauss_identities, lemma_check,
                       pencil_inertia, ratio_report, theorem_check)
from .rotational import (ProfileCurve, build_surface, find_otsuki,
                         rotation_number, rotation_window)
from .spectral import (EigenReport, first_eigfunction, inertia_below,
                       lowest_eigs, morse_index)

__all__ = [
    "__version__", "MhsError",
    "GeometryFamily", "FramePoint", "ParamDomain",
    "equator", "clifford", "eval_frame", "l_func", "f_func",
    "gradient_check", "check_minimality", "area",
    "ProfileCurve", "rotation_number", "rotation_window", "find_otsuki",
    "build_surface",
    "SurfaceMesh", "OperatorSet", "mesh_torus", "mesh_sphere", "assemble",
    "project", "l_vertex", "f_vertex", "mesh_to_json", "mesh_from_json",
    "save_mesh", "load_mesh",
    "EigenReport", "lowest_eigs", "inertia_below", "first_eigfunction",
    "morse_index",
    "SpectrumTable", "sphere_spectrum", "clifford_jacobi", "equator_jacobi",
    "harmonic_dim",
    "FormReport", "IdentityReport", "TheoremReport", "ChainRecord",
    "gauss_identities", "ratio_report", "pencil_inertia", "lemma_check",
    "choose_v0", "theorem_check", "conjecture_probe", "chain_verify",
    "chain_sweep",
]
