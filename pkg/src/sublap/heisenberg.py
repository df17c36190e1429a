"""Classification of Heisenberg sub-Laplacians by the symplectic spectrum.

The horizontal data of a Heisenberg group is a symplectic form omega and a
positive inner product G on the same even-dimensional space.  The operator
A = G^{-1} omega has purely imaginary spectrum {+-i mu_1, ..., +-i mu_n}; the
invariants r_i = sqrt(mu_i), listed in increasing order, classify the pair up
to linear symplectic-conformal isometry.  The computation reduces A to an
orthonormal gauge (exact LDL^T of G), where the problem becomes a symmetric
eigenvalue problem solved in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import LieAlgebra, Metric, SubRiemannianGroup, subriemannian_group
from .operators import DifferentialOperator
from .polynomial import Polynomial
from .rational import Rat, rat


class NoIsometry(ValueError):
    """The two pairs have different normalized spectra."""


@dataclass(frozen=True)
class SymplecticForm:
    matrix: tuple

    def __post_init__(self):
        m = linalg.mat(self.matrix)
        object.__setattr__(self, "matrix", m)
        size = len(m)
        if size == 0 or size % 2 != 0:
            raise ValueError("symplectic form needs even positive dimension")
        if any(len(row) != size for row in m):
            raise ValueError("symplectic form must be square")
        for i in range(size):
            for j in range(size):
                if m[i][j] != -m[j][i]:
                    raise ValueError("symplectic form must be antisymmetric")
        if linalg.rank(m) != size:
            raise ValueError("symplectic form must be nondegenerate")

    @property
    def dim(self) -> int:
        return len(self.matrix)


def standard_symplectic(n: int) -> SymplecticForm:
    """omega(X_i, Y_i) = 1 on the basis (X_1..X_n, Y_1..Y_n)."""
    size = 2 * n
    rows = []
    for i in range(size):
        row = [Rat(0)] * size
        if i < n:
            row[n + i] = Rat(1)
        else:
            row[i - n] = Rat(-1)
        rows.append(tuple(row))
    return SymplecticForm(tuple(rows))


def _coerce_pair(omega, gram):
    if not isinstance(omega, SymplecticForm):
        omega = SymplecticForm(omega)
    if not isinstance(gram, Metric):
        gram = Metric(linalg.mat(gram))
    if omega.dim != len(gram.gram):
        raise ValueError("omega and gram have different sizes")
    return omega, gram


def operator_a(omega, gram) -> tuple:
    """The exact matrix A = G^{-1} omega; satisfies G A = -A^T G."""
    omega, gram = _coerce_pair(omega, gram)
    return linalg.mat_mul(linalg.inverse(gram.gram), omega.matrix)


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Invariants r_1 <= ... <= r_n with +-i r_k^2 the eigenvalues of A."""

    r: tuple
    tolerance: float

    @property
    def n(self) -> int:
        return len(self.r)


def _orthonormal_skew(omega, gram):
    """Float matrix of omega in a G-orthonormal basis, via exact LDL^T."""
    l, d = linalg.ldl_pd(gram.gram)
    linv = linalg.inverse(l)
    mid = linalg.mat_mul(linalg.mat_mul(linv, omega.matrix), linalg.transpose(linv))
    size = omega.dim
    scale = [1.0 / math.sqrt(float(d[i])) for i in range(size)]
    s = np.empty((size, size))
    for i in range(size):
        for j in range(size):
            s[i, j] = float(mid[i][j]) * scale[i] * scale[j]
    # the exact change of basis, for reuse by the isometry constructor
    q = np.empty((size, size))
    linv_t = linalg.transpose(linv)
    for i in range(size):
        for j in range(size):
            q[i, j] = float(linv_t[i][j]) * scale[j]
    return s, q


def symplectic_spectrum(omega, gram, tolerance: float = 1e-9) -> SymplecticSpectrum:
    """The increasing invariants r_i of the pair (omega, G).

    Raises ValueError if the squared eigenvalues of the orthonormal-gauge
    skew matrix fail to split into n near-equal positive pairs within the
    tolerance (which signals inconsistent input data).
    """
    omega, gram = _coerce_pair(omega, gram)
    s, _ = _orthonormal_skew(omega, gram)
    w = np.linalg.eigvalsh(s.T @ s)
    size = omega.dim
    guard = tolerance * max(1.0, float(w[-1]))
    if w[0] < -guard:
        raise ValueError("negative squared eigenvalue; inconsistent input")
    r = []
    for k in range(size // 2):
        a, b = w[2 * k], w[2 * k + 1]
        if abs(a - b) > guard:
            raise ValueError("eigenvalues do not pair within tolerance")
        mu_sq = (a + b) / 2.0
        if mu_sq <= guard:
            raise ValueError("vanishing eigenvalue; degenerate symplectic form")
        r.append(mu_sq**0.25)
    return SymplecticSpectrum(tuple(r), tolerance)


def isometry_decision(omega1, gram1, omega2, gram2, tolerance: float = 1e-9):
    """Conformal ratio rho with r1 = rho * r2 (componentwise within the
    tolerance), or None when the normalized spectra differ."""
    s1 = symplectic_spectrum(omega1, gram1, tolerance)
    s2 = symplectic_spectrum(omega2, gram2, tolerance)
    if s1.n != s2.n:
        return None
    rho = s1.r[0] / s2.r[0]
    guard = tolerance * max(1.0, max(s1.r))
    for a, b in zip(s1.r, s2.r):
        if abs(a - rho * b) > guard:
            return None
    return rho


def _normal_form_basis(omega, gram, tolerance):
    """Basis U with U^T G U = 1 and U^T omega U = [[0, D], [-D, 0]],
    D = diag(r_i^2) increasing.  Returns (U, r) as floats."""
    s, q = _orthonormal_skew(omega, gram)
    size = omega.dim
    t = s.T @ s
    w, v = np.linalg.eigh(t)
    guard = tolerance * max(1.0, float(w[-1]))
    if w[0] < guard:
        raise ValueError("vanishing eigenvalue; degenerate symplectic form")
    # cluster equal eigenvalues so multiplicity is handled uniformly
    clusters = []
    start = 0
    for i in range(1, size):
        if w[i] - w[i - 1] > guard:
            clusters.append((start, i))
            start = i
    clusters.append((start, size))
    xs, ys, mus = [], [], []
    for lo, hi in clusters:
        if (hi - lo) % 2 != 0:
            raise ValueError("eigenvalues do not pair within tolerance")
        mu = math.sqrt(float(np.mean(w[lo:hi])))
        cols = [v[:, i].copy() for i in range(lo, hi)]
        while cols:
            x = None
            for cand in cols:
                norm = np.linalg.norm(cand)
                if norm > 1e-6:
                    x = cand / norm
                    break
            if x is None:
                raise ValueError("eigenvector cluster collapsed; inconsistent input")
            y = (s @ x) / mu
            # invariant plane found: omega(y, x) = mu in the orthonormal gauge
            xs.append(y)
            ys.append(x)
            mus.append(mu)
            cols = [c - (c @ x) * x - (c @ y) * y for c in cols]
            cols = [c for c in cols if np.linalg.norm(c) > 1e-6]
    order = np.argsort(mus, kind="stable")
    wmat = np.column_stack([xs[i] for i in order] + [ys[i] for i in order])
    u = q @ wmat
    r = tuple(math.sqrt(mus[i]) for i in order)
    return u, r


def build_isometry(omega1, gram1, omega2, gram2, tolerance: float = 1e-9):
    """Matrix Psi and ratio rho with Psi^T G1 Psi = G2 and
    Psi^T omega1 Psi = rho^2 omega2 (up to the tolerance), mapping the
    second structure to the first.  Raises NoIsometry when the normalized
    spectra differ."""
    omega1, gram1 = _coerce_pair(omega1, gram1)
    omega2, gram2 = _coerce_pair(omega2, gram2)
    rho = isometry_decision(omega1, gram1, omega2, gram2, tolerance)
    if rho is None:
        raise NoIsometry("normalized symplectic spectra differ")
    u1, _ = _normal_form_basis(omega1, gram1, tolerance)
    u2, _ = _normal_form_basis(omega2, gram2, tolerance)
    psi = u1 @ np.linalg.inv(u2)
    return psi, rho


# ---------------------------------------------------------------------------
# Heisenberg groups with parameterized metrics


def heisenberg_algebra(n: int) -> LieAlgebra:
    """Basis (X_1..X_n, Y_1..Y_n, Z) with [X_i, Y_i] = Z."""
    if n < 1:
        raise ValueError("n must be positive")
    return LieAlgebra.from_brackets(
        2 * n + 1, {(i, n + i): {2 * n: 1} for i in range(n)})


def heisenberg_group(n: int, rbar) -> SubRiemannianGroup:
    """The Heisenberg group whose metric makes (r_i X_i, r_i Y_i) orthonormal.

    rbar must be a nondecreasing tuple of positive rationals of length n; the
    resulting sub-Laplacian is sum_i r_i^2 (X_i~^2 + Y_i~^2) and its
    symplectic spectrum is rbar itself.
    """
    rbar = tuple(rat(v) for v in rbar)
    if len(rbar) != n or n < 1:
        raise ValueError("rbar must have length n >= 1")
    if any(v <= 0 for v in rbar):
        raise ValueError("rbar entries must be positive")
    if any(rbar[i] > rbar[i + 1] for i in range(n - 1)):
        raise ValueError("rbar must be nondecreasing")
    dim = 2 * n + 1
    alg = heisenberg_algebra(n)
    basis = tuple(tuple(Rat(1) if j == i else Rat(0) for j in range(dim))
                  for i in range(2 * n))
    gram = tuple(
        tuple((1 / rbar[i % n] ** 2) if i == j else Rat(0) for j in range(2 * n))
        for i in range(2 * n)
    )
    return subriemannian_group(alg, basis, gram)


def heisenberg_pair(n: int, rbar):
    """The (omega, G) data of heisenberg_group(n, rbar) on the horizontal
    space: standard omega and the diagonal metric."""
    group = heisenberg_group(n, rbar)
    return standard_symplectic(n), Metric(group.metric.gram)


def coordinate_sublaplacian(n: int, rbar) -> DifferentialOperator:
    """The Heisenberg sub-Laplacian written directly in coordinates:

    sum_i r_i^2 [ (d_{x_i} - y_i/2 d_z)^2 + (d_{y_i} + x_i/2 d_z)^2 ].

    Independent of the frame machinery; used to cross-check it.
    """
    rbar = tuple(rat(v) for v in rbar)
    if len(rbar) != n or n < 1:
        raise ValueError("rbar must have length n >= 1")
    dim = 2 * n + 1
    zero = Polynomial.zero(dim)
    second = [[zero for _ in range(dim)] for _ in range(dim)]
    z_diag = zero
    for i in range(n):
        rsq = rbar[i] ** 2
        xi = Polynomial.variable(i, dim)
        yi = Polynomial.variable(n + i, dim)
        second[i][i] = Polynomial.constant(rsq, dim)
        second[n + i][n + i] = Polynomial.constant(rsq, dim)
        second[i][2 * n] = yi * (-rsq / 2)
        second[2 * n][i] = second[i][2 * n]
        second[n + i][2 * n] = xi * (rsq / 2)
        second[2 * n][n + i] = second[n + i][2 * n]
        z_diag = z_diag + (xi * xi + yi * yi) * (rsq / 4)
    second[2 * n][2 * n] = z_diag
    return DifferentialOperator(
        dim, tuple(tuple(row) for row in second), (zero,) * dim, zero)
