"""Horizontal differential operators with exact polynomial coefficients.

The sub-Laplacian here is the divergence-form operator sum_j X_j(g^{jk} X_k u)
built from the left-invariant frame of the polarization, with respect to
Lebesgue measure (= Haar in exponential coordinates).  On a nilpotent group
the modular corrections vanish, but the drift assembly keeps them explicit so
the formulas state the general shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import linalg
from .algebra import SubRiemannianGroup
from .calculus import left_translation_jacobian, lie_differential, require_step, \
    second_lie_differential
from .polynomial import Polynomial, PolyMap, const_poly_matrix, poly_mat_mul
from .rational import Rat, rat


@dataclass(frozen=True)
class Cometric:
    """The symmetric bilinear form on covectors induced by a polarized metric:
    Q = B G^{-1} B^T with B the polarization's column matrix."""

    matrix: tuple

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def rank(self) -> int:
        return linalg.rank(self.matrix)


def cometric(group: SubRiemannianGroup) -> Cometric:
    b = group.polarization.matrix()
    ginv = linalg.inverse(group.metric.gram)
    return Cometric(linalg.mat_mul(linalg.mat_mul(b, ginv), linalg.transpose(b)))


@dataclass(frozen=True)
class DifferentialOperator:
    """Second-order operator sum c2[i][j] d_i d_j + sum c1[i] d_i + c0 with
    Polynomial coefficients; c2 is stored symmetric."""

    dim: int
    second_order: tuple
    first_order: tuple
    zero_order: Polynomial

    def __post_init__(self):
        n = self.dim
        c2 = self.second_order
        if len(c2) != n or any(len(row) != n for row in c2):
            raise ValueError("second-order table must be %d x %d" % (n, n))
        if len(self.first_order) != n:
            raise ValueError("first-order table must have length %d" % n)
        for i in range(n):
            for j in range(i + 1, n):
                if c2[i][j] != c2[j][i]:
                    raise ValueError("second-order table must be symmetric")

    def apply(self, u: Polynomial) -> Polynomial:
        if u.nvars != self.dim:
            raise ValueError("argument has %d variables, expected %d" % (u.nvars, self.dim))
        n = self.dim
        du = [u.diff(c) for c in range(n)]
        out = self.zero_order * u if self.zero_order else Polynomial.zero(n)
        for c in range(n):
            if du[c]:
                if self.first_order[c]:
                    out = out + self.first_order[c] * du[c]
                for d in range(c, n):
                    coeff = self.second_order[c][d]
                    if not coeff:
                        continue
                    dd = du[c].diff(d)
                    if not dd:
                        continue
                    out = out + (coeff * dd if c == d else (coeff + coeff) * dd)
        return out


def _lambda_b(group: SubRiemannianGroup) -> tuple:
    """Columns of dL_p restricted to the polarization: n x r Polynomial."""
    lam = left_translation_jacobian(group)
    b = group.polarization.matrix()
    return poly_mat_mul(lam, const_poly_matrix(b, group.dim))


def drift_vector(group: SubRiemannianGroup) -> tuple:
    """Constant algebra vector beta = Q t with t_b the trace of ad(e_b);
    identically zero on nilpotent groups but kept explicit."""
    alg = group.algebra
    t = tuple(alg.modular_trace(alg.basis_vector(b)) for b in range(alg.dim))
    return linalg.mat_vec(cometric(group).matrix, t)


@lru_cache(maxsize=None)
def sublaplacian(group: SubRiemannianGroup) -> DifferentialOperator:
    """The horizontal Laplacian sum_{jk} g^{jk} v_j~ v_k~ in coordinates."""
    require_step(group)
    n = group.dim
    r = group.rank
    ginv = linalg.inverse(group.metric.gram)
    lam_b = _lambda_b(group)
    second = poly_mat_mul(poly_mat_mul(lam_b, const_poly_matrix(ginv, n)),
                          tuple(zip(*lam_b)))
    first = []
    for d in range(n):
        acc = Polynomial.zero(n)
        for j in range(r):
            for k in range(r):
                g = ginv[j][k]
                if not g:
                    continue
                for c in range(n):
                    if lam_b[c][j]:
                        part = lam_b[d][k].diff(c)
                        if part:
                            acc = acc + lam_b[c][j] * part * g
        first.append(acc)
    lam = left_translation_jacobian(group)
    beta = drift_vector(group)
    for d in range(n):
        for a in range(n):
            if beta[a] and lam[d][a]:
                first[d] = first[d] + lam[d][a] * beta[a]
    return DifferentialOperator(n, second, tuple(first), Polynomial.zero(n))


def gradient(u: Polynomial, group: SubRiemannianGroup) -> tuple:
    """Horizontal gradient in frame components: the tuple gamma with
    grad u = sum_j gamma_j v_j, gamma = G^{-1} (v_1~ u, ..., v_r~ u)."""
    require_step(group)
    if u.nvars != group.dim:
        raise ValueError("argument has %d variables, expected %d" % (u.nvars, group.dim))
    lam_b = _lambda_b(group)
    r = group.rank
    derivs = []
    for j in range(r):
        acc = Polynomial.zero(group.dim)
        for c in range(group.dim):
            if lam_b[c][j]:
                part = u.diff(c)
                if part:
                    acc = acc + lam_b[c][j] * part
        derivs.append(acc)
    ginv = linalg.inverse(group.metric.gram)
    out = []
    for j in range(r):
        acc = Polynomial.zero(group.dim)
        for k in range(r):
            if ginv[j][k] and derivs[k]:
                acc = acc + derivs[k] * ginv[j][k]
        out.append(acc)
    return tuple(out)


def horizontal_inner(alpha, beta, group: SubRiemannianGroup) -> Polynomial:
    """Metric pairing of two horizontal vectors given in frame components."""
    gram = group.metric.gram
    r = group.rank
    acc = Polynomial.zero(group.dim)
    for j in range(r):
        for k in range(r):
            if gram[j][k] and alpha[j] and beta[k]:
                acc = acc + alpha[j] * beta[k] * gram[j][k]
    return acc


def frame_components(vector, group: SubRiemannianGroup) -> tuple:
    """Solve B gamma = vector for a vector with values in the polarization.

    vector is a tuple of Polynomial (or rationals) of length dim; the
    polynomial entries may be in any number of variables (for instance the
    coordinates of another group when the vector is a drift field along a
    map).  Raises ValueError if the vector does not lie in the span of the
    polarization.
    """
    if len(vector) != group.dim:
        raise ValueError("vector has %d components, expected %d"
                         % (len(vector), group.dim))
    nv = group.dim
    for v in vector:
        if isinstance(v, Polynomial):
            nv = v.nvars
            break
    bmat = group.polarization.matrix()
    rows = linalg.pivot_rows(bmat)
    sub = tuple(tuple(bmat[i][j] for j in range(group.rank)) for i in rows)
    subinv = linalg.inverse(sub)
    vec = tuple(v if isinstance(v, Polynomial) else Polynomial.constant(rat(v), nv)
                for v in vector)
    gamma = []
    for j in range(group.rank):
        acc = Polynomial.zero(nv)
        for t, i in enumerate(rows):
            if subinv[j][t] and vec[i]:
                acc = acc + vec[i] * subinv[j][t]
        gamma.append(acc)
    for i in range(group.dim):
        acc = Polynomial.zero(nv)
        for j in range(group.rank):
            if bmat[i][j] and gamma[j]:
                acc = acc + gamma[j] * bmat[i][j]
        if acc != vec[i]:
            raise ValueError("vector does not take values in the polarization")
    return tuple(gamma)


def divergence(X, group: SubRiemannianGroup) -> Polynomial:
    """Coordinate divergence (with respect to Haar = Lebesgue measure)."""
    require_step(group)
    comps = X.components if hasattr(X, "components") else tuple(X)
    if len(comps) != group.dim:
        raise ValueError("field has %d components, expected %d" % (len(comps), group.dim))
    acc = Polynomial.zero(group.dim)
    for c, comp in enumerate(comps):
        if isinstance(comp, Polynomial):
            part = comp.diff(c)
            if part:
                acc = acc + part
    return acc


@dataclass(frozen=True)
class PullbackOperator:
    """Decomposition of u -> Delta_G(u o F) into frame derivatives on the
    target: second[c][d] multiplies (e_d~ e_c~ u) o F, first[c] multiplies
    (e_c~ u) o F, zero multiplies u o F.  Coefficients are Polynomial over
    the source coordinates."""

    map: PolyMap
    source: SubRiemannianGroup
    target: SubRiemannianGroup
    second: tuple
    first: tuple
    zero: Polynomial

    def apply(self, u: Polynomial) -> Polynomial:
        if u.nvars != self.target.dim:
            raise ValueError("argument has %d variables, expected %d"
                             % (u.nvars, self.target.dim))
        m = self.target.dim
        lam_h = left_translation_jacobian(self.target)
        first_h = []
        for c in range(m):
            acc = Polynomial.zero(m)
            for a in range(m):
                if lam_h[a][c]:
                    part = u.diff(a)
                    if part:
                        acc = acc + lam_h[a][c] * part
            first_h.append(acc)
        comps = self.map.components
        out = Polynomial.zero(self.source.dim)
        for c in range(m):
            if self.first[c] and first_h[c]:
                out = out + self.first[c] * first_h[c].subs(comps)
            for d in range(m):
                if not self.second[c][d] or not first_h[c]:
                    continue
                acc = Polynomial.zero(m)
                for a in range(m):
                    if lam_h[a][d]:
                        part = first_h[c].diff(a)
                        if part:
                            acc = acc + lam_h[a][d] * part
                if acc:
                    out = out + self.second[c][d] * acc.subs(comps)
        if self.zero:
            out = out + self.zero * u.subs(comps)
        return out


def pullback_operator(F: PolyMap, source: SubRiemannianGroup,
                      target: SubRiemannianGroup) -> PullbackOperator:
    """Push Delta_G through a polynomial map F: G -> H.

    second = DF Q_G DF^T (frame-indexed on the target), first collects the
    cometric trace of D2F plus the drift image DF[beta_G], zero vanishes.
    """
    df = lie_differential(F, source, target)
    n, m = source.dim, target.dim
    qg = cometric(source).matrix
    second = poly_mat_mul(poly_mat_mul(df, const_poly_matrix(qg, n)), tuple(zip(*df)))
    d2 = second_lie_differential(F, source, target)
    first = []
    for c in range(m):
        acc = Polynomial.zero(n)
        for a in range(n):
            for b in range(n):
                if qg[a][b] and d2[a][b][c]:
                    acc = acc + d2[a][b][c] * qg[a][b]
        first.append(acc)
    beta = drift_vector(source)
    for c in range(m):
        for a in range(n):
            if beta[a] and df[c][a]:
                first[c] = first[c] + df[c][a] * beta[a]
    return PullbackOperator(F, source, target, second, tuple(first),
                            Polynomial.zero(n))
