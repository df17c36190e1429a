"""Command-line front end.

Every subcommand reads JSON description files, prints either a text or a
JSON report (one document, always with a "verdict" key), and exits with
0 for a positive verdict, 1 for a negative one, 2 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import linalg, specfiles
from .algebra import NotStratifiable, stratify, validate
from .calculus import NotNilpotent
from .conformal import commutation_residuals, frames_equivalent, analyze_commutation
from .heisenberg import NoIsometry, build_isometry, isometry_decision, \
    symplectic_spectrum
from .operators import sublaplacian
from .rational import rat_str

COMMANDS = ("validate", "stratify", "sublaplacian", "equiv-frames",
            "heis-spectrum", "heis-isometry", "analyze-map", "verify")


@dataclass(frozen=True)
class RunConfig:
    command: str
    paths: tuple
    tolerance: float = 1e-9
    probe_degree: int = 4
    format: str = "text"
    out: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError("unknown command %r" % (self.command,))
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.probe_degree < 2:
            raise ValueError("probe degree must be at least 2")
        if self.format not in ("text", "json"):
            raise ValueError("format must be 'text' or 'json'")


def _expect_paths(config, count):
    if len(config.paths) != count:
        raise specfiles.SpecFileError(
            "command %r takes %d file argument(s), got %d"
            % (config.command, count, len(config.paths)))


def _run_validate(config):
    # malformed files raise SpecFileError (exit 2); a well-formed file that
    # describes a bad algebra or an unusable polarization is a negative
    # verdict (exit 1)
    alg, pol, gram = specfiles.load_group_parts(config.paths[0])
    report = validate(alg)
    doc = {
        "verdict": "valid" if report.valid else "invalid",
        "dim": alg.dim,
        "rank": len(pol),
        "antisymmetry_violations": [[i + 1 for i in v]
                                    for v in report.antisymmetry_violations],
        "jacobi_violations": [[i + 1 for i in v] for v in report.jacobi_violations],
    }
    lines = []
    if report.valid:
        from .algebra import subriemannian_group
        try:
            group = subriemannian_group(alg, pol, gram)
        except ValueError as exc:
            doc["verdict"] = "invalid"
            doc["reason"] = str(exc)
            lines = ["verdict: invalid", "reason: %s" % exc]
            return 1, doc, lines
        doc["step"] = group.step
        lines = ["verdict: valid",
                 "dim %d, polarization rank %d, step %s"
                 % (group.dim, group.rank, group.step)]
        return 0, doc, lines
    lines = ["verdict: invalid"]
    for v in report.antisymmetry_violations:
        lines.append("antisymmetry violated at %s" % (tuple(i + 1 for i in v),))
    for v in report.jacobi_violations:
        lines.append("jacobi violated on %s" % (tuple(i + 1 for i in v),))
    return 1, doc, lines


def _run_stratify(config):
    group = specfiles.load_group(config.paths[0])
    try:
        v1 = group.polarization.basis
        layers = stratify(group.algebra, v1)
    except NotStratifiable as exc:
        doc = {"verdict": "not-stratifiable", "reason": str(exc)}
        return 1, doc, ["verdict: not-stratifiable", "reason: %s" % exc]
    doc = {
        "verdict": "stratified",
        "layer_dims": [len(layer) for layer in layers],
        "layers": [[[rat_str(v) for v in vec] for vec in layer] for layer in layers],
    }
    lines = ["verdict: stratified",
             "layer dims: %s" % (doc["layer_dims"],)]
    for k, layer in enumerate(layers, start=1):
        for vec in layer:
            lines.append("V%d: (%s)" % (k, ", ".join(rat_str(v) for v in vec)))
    return 0, doc, lines


def _run_sublaplacian(config):
    group = specfiles.load_group(config.paths[0])
    try:
        op = sublaplacian(group)
    except NotNilpotent as exc:
        raise specfiles.SpecFileError(str(exc), filename=config.paths[0])
    doc = {"verdict": "ok", "operator": specfiles.operator_to_dict(op)}
    lines = ["verdict: ok"]
    n = op.dim
    for i in range(n):
        for j in range(i, n):
            if op.second_order[i][j]:
                lines.append("d%d d%d: %s" % (i + 1, j + 1, op.second_order[i][j]))
    for i in range(n):
        if op.first_order[i]:
            lines.append("d%d: %s" % (i + 1, op.first_order[i]))
    if op.zero_order:
        lines.append("1: %s" % op.zero_order)
    return 0, doc, lines


def _run_equiv_frames(config):
    fx, fy = specfiles.load_frames(config.paths[0])
    try:
        decision = frames_equivalent(fx, fy)
    except ValueError as exc:
        raise specfiles.SpecFileError(str(exc), filename=config.paths[0])
    doc = {"verdict": "equivalent" if decision.equivalent else "not-equivalent"}
    lines = ["verdict: %s" % doc["verdict"]]
    if decision.witness is not None:
        doc["witness"] = [[rat_str(v) for v in row] for row in decision.witness]
        for row in decision.witness:
            lines.append("witness row: (%s)" % ", ".join(rat_str(v) for v in row))
    return (0 if decision.equivalent else 1), doc, lines


def _run_heis_spectrum(config):
    omega, gram = specfiles.load_pair(config.paths[0])
    try:
        spec = symplectic_spectrum(omega, gram, config.tolerance)
    except ValueError as exc:
        raise specfiles.SpecFileError(str(exc), filename=config.paths[0])
    doc = {
        "verdict": "ok",
        "spectrum": ["%.12g" % v for v in spec.r],
        "tolerance": spec.tolerance,
    }
    lines = ["verdict: ok",
             "spectrum: %s" % ", ".join(doc["spectrum"]),
             "tolerance: %g" % spec.tolerance]
    return 0, doc, lines


def _run_heis_isometry(config):
    om1, g1 = specfiles.load_pair(config.paths[0])
    om2, g2 = specfiles.load_pair(config.paths[1])
    try:
        psi, rho = build_isometry(om1, g1, om2, g2, config.tolerance)
    except NoIsometry:
        doc = {"verdict": "no-isometry", "tolerance": config.tolerance}
        return 1, doc, ["verdict: no-isometry"]
    except ValueError as exc:
        raise specfiles.SpecFileError(str(exc))
    doc = {
        "verdict": "isometric",
        "ratio": "%.12g" % rho,
        "matrix": [["%.12g" % v for v in row] for row in psi],
        "tolerance": config.tolerance,
    }
    lines = ["verdict: isometric", "ratio: %s" % doc["ratio"]]
    for row in doc["matrix"]:
        lines.append("psi row: (%s)" % ", ".join(row))
    return 0, doc, lines


def _run_analyze_map(config):
    source = specfiles.load_group(config.paths[0])
    target = specfiles.load_group(config.paths[1])
    f = specfiles.load_polymap(config.paths[2])
    if f.source_dim != source.dim or f.target_dim != target.dim:
        raise specfiles.SpecFileError(
            "map shape %d->%d does not match groups %d->%d"
            % (f.source_dim, f.target_dim, source.dim, target.dim),
            filename=config.paths[2])
    try:
        report = analyze_commutation(f, source, target, config.probe_degree)
    except NotNilpotent as exc:
        raise specfiles.SpecFileError(str(exc))
    doc = {"verdict": "conformal" if report.conformal else "not-conformal"}
    doc.update(specfiles.report_to_dict(report))
    lines = ["verdict: %s" % doc["verdict"],
             "contact: %s" % str(report.contact).lower()]
    if report.conformal:
        lines.append("lambda_sq: %s" % report.lambda_sq)
        lines.append("b: (%s)" % ", ".join(str(c) for c in report.b))
    else:
        lines.append("reason: %s" % report.reason)
        for r in report.residuals[:5]:
            lines.append("residual: %s" % r)
    return (0 if report.conformal else 1), doc, lines


def _run_verify(config):
    source = specfiles.load_group(config.paths[0])
    target = specfiles.load_group(config.paths[1])
    f = specfiles.load_polymap(config.paths[2])
    lam, b = specfiles.load_identity(config.paths[3], source.dim, target.dim)
    if f.source_dim != source.dim or f.target_dim != target.dim:
        raise specfiles.SpecFileError(
            "map shape %d->%d does not match groups %d->%d"
            % (f.source_dim, f.target_dim, source.dim, target.dim),
            filename=config.paths[2])
    try:
        bad = commutation_residuals(f, lam, b, source, target, config.probe_degree)
    except NotNilpotent as exc:
        raise specfiles.SpecFileError(str(exc))
    except ValueError as exc:
        raise specfiles.SpecFileError(str(exc), filename=config.paths[3])
    holds = not bad
    doc = {
        "verdict": "holds" if holds else "fails",
        "probe_degree": config.probe_degree,
        "failures": [{"probe": str(u), "residual": str(r)} for u, r in bad],
    }
    lines = ["verdict: %s" % doc["verdict"],
             "probe degree: %d" % config.probe_degree]
    for u, r in bad[:5]:
        lines.append("probe %s: residual %s" % (u, r))
    return (0 if holds else 1), doc, lines


_RUNNERS = {
    "validate": (_run_validate, 1),
    "stratify": (_run_stratify, 1),
    "sublaplacian": (_run_sublaplacian, 1),
    "equiv-frames": (_run_equiv_frames, 1),
    "heis-spectrum": (_run_heis_spectrum, 1),
    "heis-isometry": (_run_heis_isometry, 2),
    "analyze-map": (_run_analyze_map, 3),
    "verify": (_run_verify, 4),
}


def run(config: RunConfig):
    """Execute a command; returns (exit_code, report_dict, text_lines)."""
    runner, count = _RUNNERS[config.command]
    _expect_paths(config, count)
    return runner(config)


def _emit(config, doc, lines):
    if config.format == "json":
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sublap",
        description="sub-Riemannian group calculus: validation, sub-Laplacians, "
                    "frame equivalence, Heisenberg spectra, map analysis")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "validate": ("check the algebra axioms of a group file", ["group"]),
        "stratify": ("stratify an algebra starting from its polarization", ["group"]),
        "sublaplacian": ("print the coordinate sub-Laplacian", ["group"]),
        "equiv-frames": ("decide frame equivalence", ["frames"]),
        "heis-spectrum": ("symplectic spectrum of an (omega, gram) pair", ["pair"]),
        "heis-isometry": ("construct a conformal symplectic isometry",
                          ["pair1", "pair2"]),
        "analyze-map": ("analyze sub-Laplacian commutation along a map",
                        ["source_group", "target_group", "map"]),
        "verify": ("verify a given (lambda_sq, b) commutation identity",
                   ["source_group", "target_group", "map", "identity"]),
    }
    for name, (help_text, files) in specs.items():
        p = sub.add_parser(name, help=help_text)
        for f in files:
            p.add_argument(f, help="JSON description file")
        p.add_argument("--tol", type=float, default=1e-9,
                       help="numeric tolerance (default 1e-9)")
        p.add_argument("--probe-degree", type=int, default=4,
                       help="max degree of probe monomials (default 4)")
        p.add_argument("--format", choices=("text", "json"), default="text",
                       help="output format")
        p.add_argument("--out", default=None, help="write the report to a file")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    file_keys = [k for k in ("group", "frames", "pair", "pair1", "pair2",
                             "source_group", "target_group", "map", "identity")
                 if hasattr(args, k)]
    try:
        config = RunConfig(
            command=args.command,
            paths=tuple(getattr(args, k) for k in file_keys),
            tolerance=args.tol,
            probe_degree=args.probe_degree,
            format=args.format,
            out=args.out,
        )
    except ValueError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    try:
        code, doc, lines = run(config)
    except specfiles.SpecFileError as exc:
        _emit(config, {"verdict": "error", "error": str(exc)},
              ["verdict: error", "error: %s" % exc])
        return 2
    _emit(config, doc, lines)
    return code


if __name__ == "__main__":
    sys.exit(main())
