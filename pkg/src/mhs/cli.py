"""Command-line front end: stability indices and report generation.

Every subcommand emits a single JSON document (CSV is available for
spectrum tables) embedding the parsed configuration and the library
version, so runs are reproducible from the report alone.
"""

import argparse
import csv
import io
import json
import os
import sys
import time

from . import __version__, closedform, fem, paperlab, rotational, spectral
from .errors import (DomainError, InvalidParameterError, MeshFormatError,
                     MhsError, NoSolutionError)
from .geometry import clifford, equator

_USAGE_ERRORS = (InvalidParameterError, DomainError, MeshFormatError,
                 NoSolutionError)


def _apply_thread_cap():
    cap = os.environ.get("MHS_THREADS")
    if not cap:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS"):
        os.environ.setdefault(var, cap)


def _add_family_args(parser, with_res=True):
    parser.add_argument("--family", required=True,
                        choices=["clifford", "equator", "otsuki"])
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--k", type=int, default=1)
    parser.add_argument("--p", type=int, default=2)
    parser.add_argument("--q", type=int, default=3)
    parser.add_argument("--tol", type=float, default=1e-10)
    if with_res:
        parser.add_argument("--res", type=int, default=64,
                            help="grid resolution (torus side / icosphere "
                                 "subdivisions)")
        parser.add_argument("--nt", type=int, default=None,
                            help="override profile-direction resolution")
        parser.add_argument("--nphi", type=int, default=None,
                            help="override rotation-direction resolution")


def _build_mesh(args):
    """Mesh for the requested family at the requested resolution."""
    if args.family == "clifford":
        if args.n != 2:
            raise InvalidParameterError(
                "meshes are only available for surfaces in S^3 (n = 2)")
        fam = clifford(2, args.k)
        return fem.mesh_torus(fam, args.res, args.res)
    if args.family == "equator":
        if args.n != 2:
            raise InvalidParameterError(
                "meshes are only available for surfaces in S^3 (n = 2)")
        return fem.mesh_sphere(args.res)
    profile = rotational.find_otsuki(args.p, args.q, args.tol)
    nt = args.nt if args.nt else 4 * args.res
    nphi = args.nphi if args.nphi else args.res
    fam = rotational.build_surface(profile, nt, nphi)
    return fem.mesh_torus(fam, nt, nphi)


def _emit(args, config, report, csv_rows=None):
    doc = {"version": __version__,
           "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
           "config": config,
           "report": report}
    fmt = getattr(args, "format", "json")
    if fmt == "csv":
        if csv_rows is None:
            raise InvalidParameterError(
                "csv output is only available for spectrum tables")
        buf = io.StringIO()
        writer = csv.writer(buf)
        for row in csv_rows:
            writer.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_dict(args):
    skip = {"func", "output"}
    return {k: v for k, v in vars(args).items() if k not in skip}


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_oracle(args):
    if args.kind == "clifford":
        table, index, nullity = closedform.clifford_jacobi(
            args.n, args.k, args.cutoff)
    else:
        table, index, nullity = closedform.equator_jacobi(args.n, args.cutoff)
    report = {"spectrum": table.to_dict(), "index": index,
              "nullity": nullity}
    rows = [["eigenvalue", "multiplicity"]] + [
        [float(e), int(m)] for e, m in table.entries]
    _emit(args, _config_dict(args), report, csv_rows=rows)
    return 0


def cmd_family(args):
    if args.kind != "otsuki":
        raise InvalidParameterError(
            "only the otsuki family carries a generated profile")
    profile = rotational.find_otsuki(args.p, args.q, args.tol)
    report = profile.to_dict()
    report["closure_residual"] = profile.closure_residual
    report["clairaut_drift"] = profile.clairaut_drift
    _emit(args, _config_dict(args), report)
    return 0


def cmd_spectrum(args):
    mesh = _build_mesh(args)
    ops = fem.assemble(mesh)
    report = spectral.lowest_eigs(ops, args.count, args.zero_tol)
    doc = report.to_dict()
    doc["mesh"] = {"name": mesh.name, "vertices": mesh.num_vertices,
                   "area": mesh.area}
    rows = [["i", "eigenvalue"]] + [
        [i, float(v)] for i, v in enumerate(report.eigenvalues)]
    _emit(args, _config_dict(args), doc, csv_rows=rows)
    return 0


def cmd_paper_check(args):
    mesh = _build_mesh(args)
    ops = fem.assemble(mesh)
    lam1, rho = spectral.first_eigfunction(ops)
    rank, verdict, gamma_report = paperlab.lemma_check(mesh, ops, rho)
    theorem = paperlab.theorem_check(mesh, args.delta1, ops=ops, rho=rho)
    records, _ = paperlab.chain_sweep(mesh, ops, draws=args.draws,
                                      seed=args.seed)
    worst_id = max(r.residual_identity / r.scale for r in records)
    conjecture, flag = paperlab.conjecture_probe(mesh, ops)
    identities = paperlab.gauss_identities(mesh)
    report = {
        "lemma": {"rank": rank, "verdict": verdict,
                  "expected_full_rank": 2 * mesh.surface_dim + 5},
        "theorem": theorem.to_dict(),
        "chain": {"draws": args.draws, "seed": args.seed,
                  "lambda1": lam1,
                  "max_identity_residual": worst_id,
                  "records": [r.to_dict() for r in records[:5]]},
        "conjecture": {**conjecture.to_dict(),
                       "negative_subspace_reaches_n_plus_4": flag},
        "identities": identities.to_dict(),
        "ratio": paperlab.ratio_report(mesh),
        "mesh": {"name": mesh.name, "vertices": mesh.num_vertices,
                 "area": mesh.area},
    }
    _emit(args, _config_dict(args), report)
    return 0


def cmd_chain(args):
    mesh = _build_mesh(args)
    ops = fem.assemble(mesh)
    records, params = paperlab.chain_sweep(mesh, ops, draws=args.draws,
                                           seed=args.seed)
    report = {"draws": [dict(p, **r.to_dict())
                        for p, r in zip(params, records)],
              "max_identity_residual": max(
                  r.residual_identity / r.scale for r in records)}
    _emit(args, _config_dict(args), report)
    return 0


def cmd_conjecture(args):
    mesh = _build_mesh(args)
    ops = fem.assemble(mesh)
    report, flag = paperlab.conjecture_probe(mesh, ops, args.rank_tol)
    doc = {**report.to_dict(),
           "negative_subspace_reaches_n_plus_4": flag}
    _emit(args, _config_dict(args), doc)
    return 0


def cmd_mesh_export(args):
    mesh = _build_mesh(args)
    doc = fem.mesh_to_json(mesh)
    with open(args.output, "w") as fh:
        json.dump(doc, fh)
    summary = {"written": args.output, "vertices": mesh.num_vertices,
               "triangles": mesh.num_triangles, "area": mesh.area}
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return 0


def cmd_mesh_import(args):
    mesh = fem.load_mesh(args.input)
    ops = fem.assemble(mesh)
    report = spectral.lowest_eigs(ops, min(args.count, ops.size),
                                  args.zero_tol)
    doc = {"mesh": {"name": args.input, "vertices": mesh.num_vertices,
                    "triangles": mesh.num_triangles, "area": mesh.area,
                    "euler_characteristic": mesh.euler_characteristic,
                    "degraded_normals": mesh.degraded_normals},
           "spectrum": report.to_dict()}
    _emit(args, _config_dict(args), doc)
    return 0


# ----------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="mhs",
        description="Stability indices of minimal hypersurfaces of spheres")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("oracle", help="closed-form stability spectra")
    p.add_argument("kind", choices=["clifford", "equator"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--cutoff", type=float, default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("family", help="generate a rotational profile")
    p.add_argument("kind", choices=["otsuki"])
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("spectrum", help="discrete stability spectrum")
    _add_family_args(p)
    p.add_argument("--count", type=int, default=12)
    p.add_argument("--zero-tol", dest="zero_tol", type=float, default=0.05)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("paper-check",
                       help="full trial-space verification report")
    _add_family_args(p)
    p.add_argument("--delta1", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=100)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_paper_check)

    p = sub.add_parser("chain", help="completed-square estimate draws")
    _add_family_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=100)
    p.add_argument("--delta1", type=float, default=0.5)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("conjecture",
                       help="negative inertia of the coordinate span")
    _add_family_args(p)
    p.add_argument("--rank-tol", dest="rank_tol", type=float, default=1e-8)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("mesh-export", help="write a mesh JSON file")
    _add_family_args(p)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_mesh_export)

    p = sub.add_parser("mesh-import",
                       help="load a mesh JSON file and report its spectrum")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--count", type=int, default=12)
    p.add_argument("--zero-tol", dest="zero_tol", type=float, default=0.05)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_mesh_import)
    return parser


def main(argv=None):
    _apply_thread_cap()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except MhsError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
