import pytest

from conftest import random_rational, random_vector
from sublap.algebra import LieAlgebra, subriemannian_group
from sublap.calculus import (NotNilpotent, dilation, left_invariant_field,
                             left_translation, lie_derivative)
from sublap.catalog import sl2_algebra
from sublap.heisenberg import heisenberg_group
from sublap.operators import (Cometric, DifferentialOperator, cometric,
                              divergence, drift_vector, frame_components,
                              gradient, horizontal_inner, pullback_operator,
                              sublaplacian)
from sublap.polynomial import (Polynomial, PolyMap, monomials_up_to,
                               poly_mat_eval)
from sublap.rational import Rat

EYE2 = ((Rat(1), Rat(0)), (Rat(0), Rat(1)))


def p3(s):
    return Polynomial.parse(s, 3)


# ---------------------------------------------------------------------------
# cometric


def test_cometric_heisenberg(h1):
    q = cometric(h1)
    assert q.dim == 3
    assert q.rank() == 2
    assert q.matrix == (
        (Rat(1), Rat(0), Rat(0)),
        (Rat(0), Rat(1), Rat(0)),
        (Rat(0), Rat(0), Rat(0)),
    )


def test_cometric_scales_with_metric():
    group = heisenberg_group(1, (2,))
    assert group.metric.gram == ((Rat(1, 4), Rat(0)), (Rat(0), Rat(1, 4)))
    q = cometric(group).matrix
    assert q == ((Rat(4), Rat(0), Rat(0)), (Rat(0), Rat(4), Rat(0)),
                 (Rat(0), Rat(0), Rat(0)))


def _h1_with_frame(basis, gram):
    from sublap.heisenberg import heisenberg_algebra
    return subriemannian_group(heisenberg_algebra(1), basis, gram)


def test_cometric_is_frame_independent(h1):
    # new basis (X + Y, Y) with gram transported by the change of basis
    other = _h1_with_frame(((1, 1, 0), (0, 1, 0)),
                           ((Rat(2), Rat(1)), (Rat(1), Rat(1))))
    assert cometric(other).matrix == cometric(h1).matrix
    assert sublaplacian(other) == sublaplacian(h1)


# ---------------------------------------------------------------------------
# the sub-Laplacian


def test_sublaplacian_heisenberg_tables(h1):
    op = sublaplacian(h1)
    expect = [
        ["1", "0", "-1/2*x2"],
        ["0", "1", "1/2*x1"],
        ["-1/2*x2", "1/2*x1", "1/4*x1^2 + 1/4*x2^2"],
    ]
    for row, erow in zip(op.second_order, expect):
        assert list(row) == [p3(s) for s in erow]
    assert all(c.is_zero for c in op.first_order)
    assert op.zero_order.is_zero


def test_sublaplacian_heisenberg_values(h1):
    op = sublaplacian(h1)
    assert op.apply(p3("x3")).is_zero
    assert op.apply(p3("x1^2 + x2^2")) == p3("4")
    assert op.apply(p3("x1*x2")).is_zero
    assert op.apply(p3("x3^2")) == p3("1/2*x1^2 + 1/2*x2^2")
    assert op.apply(p3("7")).is_zero


def test_sublaplacian_is_sum_of_frame_squares(h2, engel, rng):
    # identity gram: the polarization basis itself is orthonormal
    for group, r in ((h2, 4), (engel, 2)):
        op = sublaplacian(group)
        for u in monomials_up_to(group.dim, 2):
            expect = Polynomial.zero(group.dim)
            for j in range(r):
                basis_vec = group.polarization.basis[j]
                expect = expect + lie_derivative(
                    lie_derivative(u, basis_vec, group), basis_vec, group)
            assert op.apply(u) == expect


def test_sublaplacian_scaled_metric_orthonormal_frame():
    # gram = diag(1/4, 1/4): the orthonormal frame is (2X, 2Y)
    group = heisenberg_group(1, (2,))
    op = sublaplacian(group)
    for u in monomials_up_to(3, 3):
        expect = Polynomial.zero(3)
        for vec in ((2, 0, 0), (0, 2, 0)):
            expect = expect + lie_derivative(lie_derivative(u, vec, group), vec, group)
        assert op.apply(u) == expect


def test_sublaplacian_left_invariance(engel, rng):
    op = sublaplacian(engel)
    for _ in range(3):
        a = random_vector(rng, 4, 3, 3)
        la = left_translation(engel, a).components
        for u in (Polynomial.parse("x3*x4", 4), Polynomial.parse("x1^2*x2", 4)):
            assert op.apply(u.subs(la)) == op.apply(u).subs(la)


def test_sublaplacian_dilation_covariance(h1, engel):
    lam = Rat(3)
    for group in (h1, engel):
        op = sublaplacian(group)
        d = dilation(group, lam).components
        for u in monomials_up_to(group.dim, 2):
            assert op.apply(u.subs(d)) == op.apply(u).subs(d) * lam**2


def test_sublaplacian_requires_nilpotency():
    sl2 = sl2_algebra()
    group = subriemannian_group(sl2, (sl2.basis_vector(0), sl2.basis_vector(1)), EYE2)
    with pytest.raises(NotNilpotent):
        sublaplacian(group)


# ---------------------------------------------------------------------------
# drift


def test_drift_vanishes_on_nilpotent(h2, engel):
    assert all(x == 0 for x in drift_vector(h2))
    assert all(x == 0 for x in drift_vector(engel))


def test_drift_on_solvable_group():
    alg = LieAlgebra.from_brackets(2, {(0, 1): {1: 1}})
    group = subriemannian_group(alg, alg.basis(), EYE2)
    assert drift_vector(group) == (Rat(1), Rat(0))


# ---------------------------------------------------------------------------
# gradient, pairing, frame components, divergence


def test_gradient_examples(h1):
    assert gradient(p3("x3"), h1) == (p3("-1/2*x2"), p3("1/2*x1"))
    assert gradient(p3("x1"), h1) == (p3("1"), p3("0"))
    with pytest.raises(ValueError):
        gradient(Polynomial.parse("x1", 2), h1)


def test_gradient_pairing_identity(h1, rng):
    # <grad u, gamma> = sum gamma_j (v_j~ u) for any frame components gamma
    u = p3("x1^2*x3 + x2")
    grad = gradient(u, h1)
    gamma = (p3("x2"), p3("x1*x3"))
    lhs = horizontal_inner(grad, gamma, h1)
    rhs = gamma[0] * lie_derivative(u, (1, 0, 0), h1) + \
        gamma[1] * lie_derivative(u, (0, 1, 0), h1)
    assert lhs == rhs


def test_gradient_respects_metric():
    group = heisenberg_group(1, (2,))
    # gram = diag(1/4): gradient components are 4 * frame derivatives
    assert gradient(p3("x1"), group) == (p3("4"), p3("0"))
    # but |grad u|^2 pairs back through the gram
    sq = horizontal_inner(gradient(p3("x1"), group), gradient(p3("x1"), group), group)
    assert sq == p3("4")


def test_frame_components(h1):
    assert frame_components((p3("x2"), p3("x1"), p3("0")), h1) == (p3("x2"), p3("x1"))
    assert frame_components((1, 2, 0), h1) == (
        Polynomial.constant(Rat(1), 3), Polynomial.constant(Rat(2), 3))
    with pytest.raises(ValueError, match="polarization"):
        frame_components((p3("0"), p3("0"), p3("1")), h1)
    with pytest.raises(ValueError, match="components"):
        frame_components((p3("1"), p3("0")), h1)


def test_frame_components_foreign_variables(h2):
    # entries may live over another coordinate system (e.g. a map's source)
    two_var = Polynomial.parse("x1*x2", 2)
    vec = (two_var, Polynomial.zero(2), Polynomial.zero(2), Polynomial.zero(2),
           Polynomial.zero(2))
    assert frame_components(vec, h2)[0] == two_var


def test_divergence(engel, rng):
    for _ in range(5):
        x = random_vector(rng, 4)
        assert divergence(left_invariant_field(x, engel), engel).is_zero
    quad = (Polynomial.parse("x1^2", 4), Polynomial.zero(4),
            Polynomial.zero(4), Polynomial.zero(4))
    assert divergence(quad, engel) == Polynomial.parse("2*x1", 4)


# ---------------------------------------------------------------------------
# DifferentialOperator container rules


def test_operator_requires_symmetric_table():
    z = Polynomial.zero(2)
    one = Polynomial.constant(Rat(1), 2)
    with pytest.raises(ValueError, match="symmetric"):
        DifferentialOperator(2, ((z, one), (z, z)), (z, z), z)
    with pytest.raises(ValueError, match="second-order"):
        DifferentialOperator(2, ((z, z),), (z, z), z)
    op = DifferentialOperator(2, ((one, z), (z, one)), (z, z), z)
    with pytest.raises(ValueError, match="variables"):
        op.apply(p3("x1"))


def test_operator_zero_order_term():
    one = Polynomial.constant(Rat(1), 1)
    z = Polynomial.zero(1)
    op = DifferentialOperator(1, ((z,),), (z,), one + one)
    assert op.apply(Polynomial.parse("x1", 1)) == Polynomial.parse("2*x1", 1)


# ---------------------------------------------------------------------------
# pullback decomposition


def test_pullback_of_identity(h1):
    pull = pullback_operator(PolyMap.identity(3), h1, h1)
    q = cometric(h1).matrix
    for c in range(3):
        for d in range(3):
            assert pull.second[c][d] == Polynomial.constant(q[c][d], 3)
    assert all(c.is_zero for c in pull.first)
    assert pull.zero.is_zero
    for u in monomials_up_to(3, 3):
        assert pull.apply(u) == sublaplacian(h1).apply(u)


def test_pullback_of_left_translation(h1):
    a = (Rat(1), Rat(-2), Rat(1, 3))
    la = left_translation(h1, a)
    pull = pullback_operator(la, h1, h1)
    q = cometric(h1).matrix
    for c in range(3):
        for d in range(3):
            assert pull.second[c][d] == Polynomial.constant(q[c][d], 3)
    assert all(c.is_zero for c in pull.first)
    op = sublaplacian(h1)
    for u in monomials_up_to(3, 2):
        assert pull.apply(u) == op.apply(u).subs(la.components)


def test_pullback_of_dilation(h1):
    lam = Rat(2)
    d = dilation(h1, lam)
    pull = pullback_operator(d, h1, h1)
    q = cometric(h1).matrix
    for c in range(3):
        for e in range(3):
            assert pull.second[c][e] == Polynomial.constant(lam**2 * q[c][e], 3)
    assert all(c.is_zero for c in pull.first)
    op = sublaplacian(h1)
    for u in monomials_up_to(3, 2):
        assert pull.apply(u) == op.apply(u).subs(d.components) * lam**2


def test_pullback_of_constant_map(h1):
    f = PolyMap.parse(["1", "2", "3"], 3)
    pull = pullback_operator(f, h1, h1)
    assert all(e.is_zero for row in pull.second for e in row)
    assert all(c.is_zero for c in pull.first)
    assert pull.apply(p3("x1^2 + x3")).is_zero


def test_pullback_matches_direct_composition(h1, h2):
    # Delta_G(u o F) for maps that are not group maps at all
    cases = [
        (PolyMap.parse(["x1", "x2", "x3 + x1^2"], 3), h1, h1),
        (PolyMap.parse(["x1 + x2^2", "x2", "x3", "x1*x2", "x3 - x1"], 3), h1, h2),
    ]
    for f, source, target in cases:
        pull = pullback_operator(f, source, target)
        op = sublaplacian(source)
        for u in monomials_up_to(target.dim, 2):
            assert pull.apply(u) == op.apply(u.subs(f.components))


def test_pullback_apply_checks_variables(h1):
    pull = pullback_operator(PolyMap.identity(3), h1, h1)
    with pytest.raises(ValueError):
        pull.apply(Polynomial.parse("x1", 2))
