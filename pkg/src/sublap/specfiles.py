"""JSON descriptions of groups, maps, frames and symplectic pairs.

All indices in files are 1-based (basis vectors e1..en, variables x1..xn);
rationals are JSON integers or strings like "3/4".  Loaders raise
SpecFileError with the file name and the offending field path.
"""

from __future__ import annotations

import json
from typing import Optional

from . import linalg
from .algebra import Metric, SubRiemannianGroup, subriemannian_group
from .conformal import CommutationReport
from .heisenberg import SymplecticForm
from .operators import DifferentialOperator
from .polynomial import Polynomial, PolyMap
from .rational import Rat, rat, rat_str


class SpecFileError(ValueError):
    """A description file is malformed; the message carries file and field."""

    def __init__(self, message, filename=None, field=None):
        self.filename = filename
        self.field = field
        where = []
        if filename:
            where.append(str(filename))
        if field:
            where.append("field %s" % field)
        prefix = ("%s: " % ", ".join(where)) if where else ""
        super().__init__(prefix + message)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SpecFileError(str(exc), filename=path)
    except json.JSONDecodeError as exc:
        raise SpecFileError("invalid JSON at line %d column %d: %s"
                            % (exc.lineno, exc.colno, exc.msg), filename=path)


def _get(doc, key, kind, field, filename, optional=False, default=None):
    if key not in doc:
        if optional:
            return default
        raise SpecFileError("missing required key '%s'" % key,
                            filename=filename, field=field)
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        names = kind.__name__ if not isinstance(kind, tuple) else \
            "/".join(k.__name__ for k in kind)
        raise SpecFileError("expected %s, got %s" % (names, type(value).__name__),
                            filename=filename, field="%s.%s" % (field, key) if field else key)
    return value


def _parse_rat(value, field, filename):
    try:
        return rat(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise SpecFileError("bad rational %r" % (value,),
                            filename=filename, field=field)


def _parse_matrix(rows, field, filename, nrows=None, ncols=None):
    if not isinstance(rows, list) or not rows:
        raise SpecFileError("expected a non-empty list of rows",
                            filename=filename, field=field)
    out = []
    width = None
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise SpecFileError("expected a list", filename=filename,
                                field="%s[%d]" % (field, i + 1))
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise SpecFileError("ragged rows", filename=filename,
                                field="%s[%d]" % (field, i + 1))
        out.append(tuple(_parse_rat(v, "%s[%d][%d]" % (field, i + 1, j + 1), filename)
                         for j, v in enumerate(row)))
    if nrows is not None and len(out) != nrows:
        raise SpecFileError("expected %d rows, got %d" % (nrows, len(out)),
                            filename=filename, field=field)
    if ncols is not None and width != ncols:
        raise SpecFileError("expected %d columns, got %d" % (ncols, width),
                            filename=filename, field=field)
    return tuple(out)


# ---------------------------------------------------------------------------
# groups


def group_parts_from_dict(doc, filename=None):
    """Parse a group file into (algebra, polarization rows, gram rows)
    without running any geometric checks; raises SpecFileError only for
    structural problems with the file itself."""
    dim = _get(doc, "dim", int, "", filename)
    if dim < 1:
        raise SpecFileError("dim must be positive", filename=filename, field="dim")
    brackets = {}
    for t, entry in enumerate(_get(doc, "brackets", list, "", filename,
                                   optional=True, default=[])):
        field = "brackets[%d]" % (t + 1)
        if not isinstance(entry, dict):
            raise SpecFileError("expected an object", filename=filename, field=field)
        i = _get(entry, "i", int, field, filename)
        j = _get(entry, "j", int, field, filename)
        coeffs = _get(entry, "coeffs", dict, field, filename)
        if not (1 <= i <= dim and 1 <= j <= dim):
            raise SpecFileError("indices out of range 1..%d" % dim,
                                filename=filename, field=field)
        if i == j:
            raise SpecFileError("bracket of a vector with itself",
                                filename=filename, field=field)
        parsed = {}
        for k, v in coeffs.items():
            try:
                ki = int(k)
            except ValueError:
                raise SpecFileError("bad basis index %r" % k, filename=filename,
                                    field=field + ".coeffs")
            if not 1 <= ki <= dim:
                raise SpecFileError("basis index %s out of range 1..%d" % (k, dim),
                                    filename=filename, field=field + ".coeffs")
            parsed[ki - 1] = _parse_rat(v, "%s.coeffs.%s" % (field, k), filename)
        key = (i - 1, j - 1)
        if key in brackets or (j - 1, i - 1) in brackets:
            raise SpecFileError("duplicate bracket (%d, %d)" % (i, j),
                                filename=filename, field=field)
        brackets[key] = parsed
    from .algebra import LieAlgebra
    try:
        alg = LieAlgebra.from_brackets(dim, brackets)
    except ValueError as exc:
        raise SpecFileError(str(exc), filename=filename, field="brackets")
    pol = _parse_matrix(_get(doc, "polarization", list, "", filename),
                        "polarization", filename, ncols=dim)
    rank = len(pol)
    gram = _parse_matrix(_get(doc, "metric", list, "", filename),
                         "metric", filename, nrows=rank, ncols=rank)
    return alg, pol, gram


def group_from_dict(doc, filename=None) -> SubRiemannianGroup:
    alg, pol, gram = group_parts_from_dict(doc, filename=filename)
    try:
        return subriemannian_group(alg, pol, gram)
    except ValueError as exc:
        raise SpecFileError(str(exc), filename=filename)


def load_group(path) -> SubRiemannianGroup:
    return group_from_dict(_load_json(path), filename=path)


def load_group_parts(path):
    return group_parts_from_dict(_load_json(path), filename=path)


def group_to_dict(group: SubRiemannianGroup) -> dict:
    brackets = []
    by_pair = {}
    for (i, j, k), c in group.algebra.raw_table().items():
        by_pair.setdefault((i, j), {})[k] = c
    for (i, j), coeffs in sorted(by_pair.items()):
        brackets.append({
            "i": i + 1, "j": j + 1,
            "coeffs": {str(k + 1): rat_str(c) for k, c in sorted(coeffs.items())},
        })
    return {
        "dim": group.dim,
        "brackets": brackets,
        "polarization": [[rat_str(v) for v in row] for row in group.polarization.basis],
        "metric": [[rat_str(v) for v in row] for row in group.metric.gram],
    }


# ---------------------------------------------------------------------------
# polynomial maps


def polymap_from_dict(doc, filename=None) -> PolyMap:
    source_dim = _get(doc, "source_dim", int, "", filename)
    if source_dim < 1:
        raise SpecFileError("source_dim must be positive",
                            filename=filename, field="source_dim")
    comps = _get(doc, "components", list, "", filename)
    if not comps:
        raise SpecFileError("components must be non-empty",
                            filename=filename, field="components")
    parsed = []
    for i, text in enumerate(comps):
        field = "components[%d]" % (i + 1)
        if not isinstance(text, str):
            raise SpecFileError("expected a polynomial string",
                                filename=filename, field=field)
        try:
            parsed.append(Polynomial.parse(text, source_dim))
        except ValueError as exc:
            raise SpecFileError(str(exc), filename=filename, field=field)
    return PolyMap(source_dim, tuple(parsed))


def load_polymap(path) -> PolyMap:
    return polymap_from_dict(_load_json(path), filename=path)


def polymap_to_dict(pmap: PolyMap) -> dict:
    return {"source_dim": pmap.source_dim,
            "components": [str(c) for c in pmap.components]}


# ---------------------------------------------------------------------------
# frames


def frames_from_dict(doc, filename=None):
    dim = _get(doc, "dim", int, "", filename)
    fx = _parse_matrix(_get(doc, "frame_x", list, "", filename),
                       "frame_x", filename, ncols=dim)
    fy = _parse_matrix(_get(doc, "frame_y", list, "", filename),
                       "frame_y", filename, ncols=dim)
    return fx, fy


def load_frames(path):
    return frames_from_dict(_load_json(path), filename=path)


# ---------------------------------------------------------------------------
# symplectic pairs


def pair_from_dict(doc, filename=None):
    omega = _parse_matrix(_get(doc, "omega", list, "", filename), "omega", filename)
    gram = _parse_matrix(_get(doc, "gram", list, "", filename), "gram", filename)
    try:
        return SymplecticForm(omega), Metric(gram)
    except ValueError as exc:
        raise SpecFileError(str(exc), filename=filename)


def load_pair(path):
    return pair_from_dict(_load_json(path), filename=path)


# ---------------------------------------------------------------------------
# commutation identities (lambda_sq, b) for the verifier


def identity_from_dict(doc, source_dim, target_dim, filename=None):
    lam_text = _get(doc, "lambda_sq", (str, int), "", filename)
    try:
        lam = Polynomial.parse(str(lam_text), source_dim)
    except ValueError as exc:
        raise SpecFileError(str(exc), filename=filename, field="lambda_sq")
    b_texts = _get(doc, "b", list, "", filename)
    if len(b_texts) != target_dim:
        raise SpecFileError("b must have %d components" % target_dim,
                            filename=filename, field="b")
    b = []
    for i, text in enumerate(b_texts):
        try:
            b.append(Polynomial.parse(str(text), source_dim))
        except ValueError as exc:
            raise SpecFileError(str(exc), filename=filename,
                                field="b[%d]" % (i + 1))
    return lam, tuple(b)


def load_identity(path, source_dim, target_dim):
    return identity_from_dict(_load_json(path), source_dim, target_dim,
                              filename=path)


# ---------------------------------------------------------------------------
# structured output


def operator_to_dict(op: DifferentialOperator) -> dict:
    return {
        "dim": op.dim,
        "second_order": [[str(e) for e in row] for row in op.second_order],
        "first_order": [str(e) for e in op.first_order],
        "zero_order": str(op.zero_order),
    }


def report_to_dict(report: CommutationReport) -> dict:
    return {
        "contact": report.contact,
        "conformal": report.conformal,
        "lambda_sq": str(report.lambda_sq) if report.lambda_sq is not None else None,
        "b": [str(c) for c in report.b] if report.b is not None else None,
        "probe_degree": report.probe_degree,
        "residuals": [str(r) for r in report.residuals],
        "reason": report.reason,
    }
