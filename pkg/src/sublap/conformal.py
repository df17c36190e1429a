"""Deciders for metric compatibility questions.

Three related questions live here:

* when does a linear map between inner-product spaces act as a homothety off
  its kernel (equivalently, when is its cometric image a multiple of the
  target cometric),
* when do two spanning families induce the same cometric, together with an
  exact orthogonal change of frame whenever they do,
* when does a polynomial group map intertwine two sub-Laplacians up to a
  conformal factor and a drift term, verified on a polynomial probe basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import linalg
from .algebra import SubRiemannianGroup
from .calculus import lie_differential, require_step, second_lie_differential
from .operators import cometric, drift_vector, frame_components, gradient, \
    horizontal_inner, pullback_operator, sublaplacian
from .polynomial import Polynomial, PolyMap, const_poly_matrix, monomials_up_to, \
    poly_mat_mul
from .rational import Rat, rat


class NotConformal(ValueError):
    """Raised when a drift vector is requested for a non-commuting map."""


# ---------------------------------------------------------------------------
# homothetic projections of inner-product spaces


def _coerce_gram(g, size: int, name: str):
    g = linalg.mat(g)
    if linalg.shape(g) != (size, size):
        raise ValueError("%s must be %d x %d" % (name, size, size))
    if not linalg.is_positive_definite(g):
        raise ValueError("%s must be symmetric positive definite" % name)
    return g


def is_homothetic_projection(matrix, gram_v, gram_w) -> Optional[Rat]:
    """Decide whether L: V -> W scales the cometric: L G_V^{-1} L^T = c G_W^{-1}.

    Returns the factor c = lambda^2 > 0 if so, else None.  Equivalently L is,
    modulo its kernel, a surjective homothety of ratio lambda.
    """
    l = linalg.mat(matrix)
    m, n = linalg.shape(l)
    gv = _coerce_gram(gram_v, n, "gram_v")
    gw = _coerce_gram(gram_w, m, "gram_w")
    e = linalg.mat_mul(linalg.mat_mul(linalg.mat_mul(l, linalg.inverse(gv)),
                                      linalg.transpose(l)), gw)
    factor = e[0][0]
    for i in range(m):
        for j in range(m):
            if e[i][j] != (factor if i == j else 0):
                return None
    if factor <= 0:
        return None
    return factor


def homothetic_characterizations(matrix, gram_v, gram_w) -> dict:
    """Evaluate five independent formulations of the homothety property.

    Each entry holds the factor lambda^2 (or None).  They agree for every
    input; the separate code paths exist so that agreement is checkable.
    """
    l = linalg.mat(matrix)
    m, n = linalg.shape(l)
    gv = _coerce_gram(gram_v, n, "gram_v")
    gw = _coerce_gram(gram_w, m, "gram_w")
    gv_inv = linalg.inverse(gv)
    gw_inv = linalg.inverse(gw)
    lt = linalg.transpose(l)
    out = {}

    def scalar_multiple(a, b):
        """factor c with a == c b, for b invertible-shaped comparisons."""
        c = None
        size = len(a)
        for i in range(size):
            for j in range(len(a[0])):
                if b[i][j] != 0:
                    c = a[i][j] / b[i][j]
                    break
            if c is not None:
                break
        if c is None or c <= 0:
            return None
        for i in range(size):
            for j in range(len(a[0])):
                if a[i][j] != c * b[i][j]:
                    return None
        return c

    # (1) cometric image: L Gv^{-1} L^T Gw is a positive multiple of the identity
    e = linalg.mat_mul(linalg.mat_mul(linalg.mat_mul(l, gv_inv), lt), gw)
    out["cometric_identity"] = scalar_multiple(e, linalg.identity(m))

    # (2) dual cometric: L Gv^{-1} L^T is the same multiple of Gw^{-1}
    out["dual_cometric"] = scalar_multiple(
        linalg.mat_mul(linalg.mat_mul(l, gv_inv), lt), gw_inv)

    # (3) the metric adjoint T = Gv^{-1} L^T Gw is a homothetic embedding:
    #     T^T Gv T is a positive multiple of Gw
    t = linalg.mat_mul(linalg.mat_mul(gv_inv, lt), gw)
    out["adjoint_embedding"] = scalar_multiple(
        linalg.mat_mul(linalg.mat_mul(linalg.transpose(t), gv), t), gw)

    # (4) surjectivity plus L^*L equal to a multiple of the Gv-orthogonal
    #     projection onto the orthocomplement of the kernel
    if linalg.rank(l) < m:
        out["kernel_projection"] = None
    else:
        star = linalg.mat_mul(linalg.mat_mul(gv_inv, lt), gw)  # adjoint of L
        ll = linalg.mat_mul(star, l)
        kernel = linalg.nullspace(l)
        proj = linalg.identity(n)
        if kernel:
            # Gv-orthogonal projection onto the kernel, subtracted from 1
            k = linalg.transpose(kernel)             # n x dim(ker), columns
            kt_g = linalg.mat_mul(linalg.transpose(k), gv)
            gramk = linalg.mat_mul(kt_g, k)
            pk = linalg.mat_mul(linalg.mat_mul(k, linalg.inverse(gramk)), kt_g)
            proj = linalg.mat_sub(proj, pk)
        out["kernel_projection"] = scalar_multiple(ll, proj)

    # (5) isometry-up-to-scale on a basis of the orthocomplement of the kernel
    kernel = linalg.nullspace(l)
    if kernel:
        # Gv-orthocomplement: vectors w with k^T Gv w = 0 for all kernel k
        rows = tuple(linalg.mat_vec(gv, kv) for kv in kernel)
        comp = linalg.nullspace(linalg.mat(rows))
    else:
        comp = tuple(linalg.identity(n))
    if len(comp) != m or linalg.rank(linalg.mat(comp)) != m:
        out["restricted_isometry"] = None
    else:
        p = linalg.transpose(comp)                    # n x m, columns span ker^perp
        lp = linalg.mat_mul(l, p)
        lhs = linalg.mat_mul(linalg.mat_mul(linalg.transpose(lp), gw), lp)
        rhs = linalg.mat_mul(linalg.mat_mul(linalg.transpose(p), gv), p)
        out["restricted_isometry"] = scalar_multiple(lhs, rhs)

    return out


# ---------------------------------------------------------------------------
# frame equivalence


@dataclass(frozen=True)
class FrameDecision:
    equivalent: bool
    witness: Optional[tuple]  # orthogonal N x N matrix A with Y = A X, or None


def frames_equivalent(frame_x, frame_y) -> FrameDecision:
    """Do two spanning families induce the same cometric F^T F?

    Both frames are given as sequences of vectors (rows).  Raises ValueError
    if the two families span different subspaces or have different sizes.
    On a positive verdict the witness is an exact orthogonal matrix A (a
    product of rational reflections) with frame_y[i] = sum_j A[i][j] frame_x[j].
    """
    fx = linalg.mat(frame_x)
    fy = linalg.mat(frame_y)
    nx, dx = linalg.shape(fx)
    ny, dy = linalg.shape(fy)
    if dx != dy:
        raise ValueError("frames live in different ambient dimensions")
    if nx != ny:
        raise ValueError("frames have different sizes (%d vs %d)" % (nx, ny))
    if not linalg.span_equal(fx, fy):
        raise ValueError("frames span different subspaces")
    px = linalg.mat_mul(linalg.transpose(fx), fx)
    py = linalg.mat_mul(linalg.transpose(fy), fy)
    if px != py:
        return FrameDecision(False, None)
    return FrameDecision(True, _orthogonal_witness(fx, fy))


def _orthogonal_witness(fx, fy) -> tuple:
    """Orthogonal A with A fx = fy, as a product of reflections.

    Works column by column: the j-th columns of fx and fy have equal pairings
    with everything already matched (the Gram matrices agree), so a single
    reflection in their difference aligns them without disturbing previous
    columns.
    """
    n = len(fx)
    d = len(fx[0])
    a = linalg.identity(n)
    cols_x = linalg.transpose(fx)
    cols_y = linalg.transpose(fy)
    for j in range(d):
        f = linalg.mat_vec(a, cols_x[j])
        h = cols_y[j]
        if f == h:
            continue
        v = tuple(fi - hi for fi, hi in zip(f, h))
        vv = linalg.dot(v, v)
        scale = rat(2) / vv
        refl = tuple(
            tuple((1 if i == k else 0) - scale * v[i] * v[k] for k in range(n))
            for i in range(n)
        )
        a = linalg.mat_mul(refl, a)
    assert linalg.mat_mul(a, fx) == fy
    assert linalg.mat_mul(linalg.transpose(a), a) == linalg.identity(n)
    return a


# ---------------------------------------------------------------------------
# commutation analysis for polynomial group maps


@dataclass(frozen=True)
class CommutationReport:
    """Outcome of the sub-Laplacian commutation analysis.

    contact: DF maps the source polarization into the target polarization.
    conformal: additionally DF Q_G DF^T = lambda_sq * Q_H and the probe
    identity Delta_G(u o F) = lambda_sq (Delta_H u) o F + <b, (grad u) o F>
    holds on every monomial probe.  lambda_sq and b (target-algebra valued,
    entries Polynomial over the source) are populated only when conformal.
    residuals holds nonzero witness polynomials for whichever stage failed.
    """

    contact: bool
    conformal: bool
    lambda_sq: Optional[Polynomial]
    b: Optional[tuple]
    probe_degree: int
    residuals: tuple = field(default=())
    reason: str = ""


def _conformal_factor(c, qh):
    """Split C = lambda_sq * Q_H: returns (lambda_sq, mismatches)."""
    m = len(qh)
    n = c[0][0].nvars
    lam_sq = None
    for i in range(m):
        for j in range(m):
            if qh[i][j]:
                lam_sq = c[i][j] / qh[i][j]
                break
        if lam_sq is not None:
            break
    mismatches = []
    for i in range(m):
        for j in range(m):
            want = lam_sq * qh[i][j] if qh[i][j] else Polynomial.zero(n)
            diff = c[i][j] - want
            if diff:
                mismatches.append(diff)
    return lam_sq, tuple(mismatches)


def _contact_residuals(df, source, target):
    bg = source.polarization.matrix()
    bh = target.polarization.matrix()
    annihilators = linalg.left_nullspace(bh)
    df_bg = poly_mat_mul(df, const_poly_matrix(bg, source.dim))
    bad = []
    for y in annihilators:
        for j in range(source.rank):
            acc = Polynomial.zero(source.dim)
            for c in range(target.dim):
                if y[c] and df_bg[c][j]:
                    acc = acc + df_bg[c][j] * y[c]
            if acc:
                bad.append(acc)
    return df_bg, tuple(bad)


def commutation_residuals(F: PolyMap, lambda_sq, b, source: SubRiemannianGroup,
                          target: SubRiemannianGroup, probe_degree: int) -> tuple:
    """Residuals of Delta_G(u o F) - lambda_sq (Delta_H u) o F - <b, (grad u) o F>
    over all monomial probes u of degree <= probe_degree.

    lambda_sq is a Polynomial over the source (or a rational); b is a tuple of
    target-algebra components (Polynomial over the source), required to take
    values in the target polarization.  Returns ((probe, residual), ...) for
    the probes with nonzero residual.
    """
    if probe_degree < 2:
        raise ValueError("probe_degree must be at least 2")
    n, m = source.dim, target.dim
    if not isinstance(lambda_sq, Polynomial):
        lambda_sq = Polynomial.constant(rat(lambda_sq), n)
    op_g = sublaplacian(source)
    op_h = sublaplacian(target)
    beta = frame_components(b, target)  # raises if b is not horizontal
    gram = target.metric.gram
    comps = F.components
    bad = []
    for u in monomials_up_to(m, probe_degree):
        lhs = op_g.apply(u.subs(comps))
        mid = lambda_sq * (op_h.apply(u)).subs(comps)
        gamma = gradient(u, target)
        inner = Polynomial.zero(n)
        for j in range(target.rank):
            for k in range(target.rank):
                if gram[j][k] and beta[j] and gamma[k]:
                    inner = inner + beta[j] * gamma[k].subs(comps) * gram[j][k]
        residual = lhs - mid - inner
        if residual:
            bad.append((u, residual))
    return tuple(bad)


def analyze_commutation(F: PolyMap, source: SubRiemannianGroup,
                        target: SubRiemannianGroup,
                        probe_degree: int = 4) -> CommutationReport:
    """Decide whether F intertwines the two sub-Laplacians conformally.

    Stages: (1) contact compatibility of DF, (2) exact factorization
    DF Q_G DF^T = lambda_sq Q_H, (3) drift extraction from the second
    differential, (4) verification of the commutation identity on all
    monomials of degree <= probe_degree.
    """
    if probe_degree < 2:
        raise ValueError("probe_degree must be at least 2")
    require_step(source)
    require_step(target)
    if F.source_dim != source.dim or F.target_dim != target.dim:
        raise ValueError("map shape does not match the groups")
    n, m = source.dim, target.dim
    df = lie_differential(F, source, target)

    df_bg, contact_bad = _contact_residuals(df, source, target)
    if contact_bad:
        return CommutationReport(False, False, None, None, probe_degree,
                                 contact_bad, "differential leaves the polarization")

    ginv = linalg.inverse(source.metric.gram)
    c = poly_mat_mul(poly_mat_mul(df_bg, const_poly_matrix(ginv, n)),
                     tuple(zip(*df_bg)))
    qh = cometric(target).matrix
    lam_sq, mismatches = _conformal_factor(c, qh)
    if mismatches:
        return CommutationReport(True, False, None, None, probe_degree,
                                 mismatches, "cometric image is not a multiple of the target cometric")
    if lam_sq.is_constant and lam_sq.constant_value() <= 0:
        return CommutationReport(True, False, None, None, probe_degree,
                                 (lam_sq,), "conformal factor is not positive")

    pulled = pullback_operator(F, source, target)
    b = pulled.first
    try:
        frame_components(b, target)
    except ValueError:
        return CommutationReport(True, False, None, None, probe_degree,
                                 tuple(p for p in b if p),
                                 "drift vector is not horizontal")

    probe_bad = tuple(res for _, res in
                      commutation_residuals(F, lam_sq, b, source, target, probe_degree))
    if probe_bad:
        return CommutationReport(True, False, None, None, probe_degree,
                                 probe_bad, "commutation identity fails on probes")
    return CommutationReport(True, True, lam_sq, b, probe_degree, (), "")


def b_vector(F: PolyMap, lambda_sq, source: SubRiemannianGroup,
             target: SubRiemannianGroup) -> tuple:
    """The drift vector of a conformally commuting map, in target-algebra
    coordinates (entries Polynomial over the source).

    Raises NotConformal unless DF satisfies the contact condition and
    DF Q_G DF^T = lambda_sq Q_H exactly.
    """
    require_step(source)
    require_step(target)
    n = source.dim
    if not isinstance(lambda_sq, Polynomial):
        lambda_sq = Polynomial.constant(rat(lambda_sq), n)
    df = lie_differential(F, source, target)
    df_bg, contact_bad = _contact_residuals(df, source, target)
    if contact_bad:
        raise NotConformal("differential does not preserve the polarization")
    ginv = linalg.inverse(source.metric.gram)
    c = poly_mat_mul(poly_mat_mul(df_bg, const_poly_matrix(ginv, n)),
                     tuple(zip(*df_bg)))
    qh = cometric(target).matrix
    for i in range(target.dim):
        for j in range(target.dim):
            want = lambda_sq * qh[i][j] if qh[i][j] else Polynomial.zero(n)
            if c[i][j] != want:
                raise NotConformal("cometric image is not lambda_sq times the target cometric")
    # trace of the second differential against the source cometric, plus the
    # modular corrections (identically zero in the nilpotent scope but kept
    # so the formula is stated in full)
    qg = cometric(source).matrix
    d2 = second_lie_differential(F, source, target)
    out = []
    for cc in range(target.dim):
        acc = Polynomial.zero(n)
        for a in range(n):
            for bb in range(n):
                if qg[a][bb] and d2[a][bb][cc]:
                    acc = acc + d2[a][bb][cc] * qg[a][bb]
        out.append(acc)
    beta_g = drift_vector(source)
    beta_h = drift_vector(target)
    for cc in range(target.dim):
        for a in range(n):
            if beta_g[a] and df[cc][a]:
                out[cc] = out[cc] + df[cc][a] * beta_g[a]
        if beta_h[cc]:
            out[cc] = out[cc] - lambda_sq * beta_h[cc]
    return tuple(out)
