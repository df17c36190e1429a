import random

import pytest

from conftest import random_rational
from sublap import linalg
from sublap.calculus import NotNilpotent, dilation, left_translation
from sublap.catalog import abelian_group, sl2_algebra
from sublap.algebra import subriemannian_group
from sublap.conformal import (CommutationReport, FrameDecision, NotConformal,
                              analyze_commutation, b_vector,
                              commutation_residuals, frames_equivalent,
                              homothetic_characterizations,
                              is_homothetic_projection)
from sublap.operators import pullback_operator
from sublap.polynomial import Polynomial, PolyMap
from sublap.rational import Rat

EYE = linalg.identity


def rmat(rows):
    return tuple(tuple(Rat(x) for x in row) for row in rows)


# ---------------------------------------------------------------------------
# homothetic projections


def test_projection_is_homothety():
    l = rmat([[1, 0, 0], [0, 1, 0]])
    assert is_homothetic_projection(l, EYE(3), EYE(2)) == 1


def test_scaled_projection():
    l = rmat([[2, 0, 0], [0, 2, 0]])
    assert is_homothetic_projection(l, EYE(3), EYE(2)) == 4


def test_unequal_scaling_is_not_homothety():
    l = rmat([[1, 0], [0, 2]])
    assert is_homothetic_projection(l, EYE(2), EYE(2)) is None


def test_homothety_depends_on_the_grams():
    # diag(1, 2) becomes a homothety once the target metric reweighs axis 2
    l = rmat([[1, 0], [0, 2]])
    gw = rmat([[1, 0], [0, Rat(1, 4)]])
    assert is_homothetic_projection(l, EYE(2), gw) == 1


def test_rank_deficient_map_is_rejected():
    l = rmat([[1, 1], [1, 1]])
    assert is_homothetic_projection(l, EYE(2), EYE(2)) is None
    chars = homothetic_characterizations(l, EYE(2), EYE(2))
    assert set(chars) == {"cometric_identity", "dual_cometric",
                          "adjoint_embedding", "kernel_projection",
                          "restricted_isometry"}
    assert all(v is None for v in chars.values())


def test_gram_validation():
    l = rmat([[1, 0], [0, 1]])
    with pytest.raises(ValueError, match="positive definite"):
        is_homothetic_projection(l, rmat([[1, 2], [2, 1]]), EYE(2))
    with pytest.raises(ValueError, match="2 x 2"):
        is_homothetic_projection(l, EYE(3), EYE(2))


def _random_pd(rng, n):
    a = tuple(tuple(random_rational(rng, 3, 3) for _ in range(n)) for _ in range(n))
    return linalg.mat_add(linalg.mat_mul(linalg.transpose(a), a), EYE(n))


def test_characterizations_agree_on_random_inputs():
    rng = random.Random(4242)
    shapes = [(1, 2), (2, 2), (2, 3), (3, 4)]
    seen_positive = 0
    for trial in range(40):
        m, n = shapes[trial % len(shapes)]
        l = tuple(tuple(random_rational(rng, 3, 2) for _ in range(n)) for _ in range(m))
        gv = _random_pd(rng, n)
        gw = _random_pd(rng, m)
        expected = is_homothetic_projection(l, gv, gw)
        chars = homothetic_characterizations(l, gv, gw)
        assert all(v == expected for v in chars.values()), (l, gv, gw, chars)
        if expected is not None:
            seen_positive += 1
            # a nonzero map to a line is always a homothety off its kernel;
            # for m >= 2 random inputs are essentially never homothetic
            assert m == 1
    assert seen_positive == 10


def test_characterizations_agree_on_engineered_homotheties():
    rng = random.Random(99)
    for m, n in [(1, 3), (2, 3), (2, 4), (3, 5)]:
        for _ in range(5):
            while True:
                l = tuple(tuple(random_rational(rng, 3, 2) for _ in range(n))
                          for _ in range(m))
                if linalg.rank(l) == m:
                    break
            gv = _random_pd(rng, n)
            lam_sq = Rat(rng.randint(1, 16), rng.randint(1, 16))
            middle = linalg.mat_mul(linalg.mat_mul(l, linalg.inverse(gv)),
                                    linalg.transpose(l))
            gw = linalg.inverse(linalg.mat_scale(1 / lam_sq, middle))
            assert is_homothetic_projection(l, gv, gw) == lam_sq
            chars = homothetic_characterizations(l, gv, gw)
            assert all(v == lam_sq for v in chars.values())


# ---------------------------------------------------------------------------
# frame equivalence


def test_identical_frames():
    fx = rmat([[1, 0, 0], [0, 1, 0]])
    decision = frames_equivalent(fx, fx)
    assert decision.equivalent
    assert decision.witness == EYE(2)


def test_rotated_frame_is_equivalent():
    fx = rmat([[1, 0, 0], [0, 1, 0]])
    a = rmat([[Rat(3, 5), Rat(4, 5)], [Rat(-4, 5), Rat(3, 5)]])
    fy = linalg.mat_mul(a, fx)
    decision = frames_equivalent(fx, fy)
    assert decision.equivalent
    assert decision.witness == a


def test_stretched_frame_is_not_equivalent():
    fx = rmat([[1, 0], [0, 1]])
    fy = rmat([[1, 0], [0, 2]])
    decision = frames_equivalent(fx, fy)
    assert not decision.equivalent
    assert decision.witness is None


def test_scaled_heisenberg_frames_differ():
    # orthonormal frames of g_(1,1) and g_(1,2) on the same coordinates
    fx = EYE(4)
    fy = rmat([[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 2]])
    assert not frames_equivalent(fx, fy).equivalent


def test_redundant_frame_witness():
    fx = rmat([[1, 0], [0, 1], [1, 1]])
    a = linalg.mat_scale(Rat(1, 3), rmat([[2, -2, 1], [1, 2, 2], [2, 1, -2]]))
    assert linalg.mat_mul(linalg.transpose(a), a) == EYE(3)
    fy = linalg.mat_mul(a, fx)
    decision = frames_equivalent(fx, fy)
    assert decision.equivalent
    w = decision.witness
    assert linalg.mat_mul(w, fx) == fy
    assert linalg.mat_mul(linalg.transpose(w), w) == EYE(3)


def test_frame_errors():
    with pytest.raises(ValueError, match="span"):
        frames_equivalent(rmat([[1, 0]]), rmat([[0, 1]]))
    with pytest.raises(ValueError, match="sizes"):
        frames_equivalent(rmat([[1, 0], [0, 1]]), rmat([[1, 0], [0, 1], [1, 1]]))
    with pytest.raises(ValueError, match="ambient"):
        frames_equivalent(rmat([[1, 0]]), rmat([[1, 0, 0]]))


def test_frame_equivalence_is_symmetric():
    fx = rmat([[2, 1], [1, 2], [0, 1]])
    a = linalg.mat_scale(Rat(1, 3), rmat([[2, -2, 1], [1, 2, 2], [2, 1, -2]]))
    fy = linalg.mat_mul(a, fx)
    assert frames_equivalent(fx, fy).equivalent
    assert frames_equivalent(fy, fx).equivalent
    fz = rmat([[2, 1], [1, 2], [1, 1]])
    assert not frames_equivalent(fx, fz).equivalent
    assert not frames_equivalent(fz, fx).equivalent


# ---------------------------------------------------------------------------
# commutation analysis


def horizontal_projection():
    # H^1 -> R^2 onto the horizontal coordinates
    return PolyMap.parse(["x1", "x2"], 3)


def test_horizontal_projection_commutes(h1, r2):
    report = analyze_commutation(horizontal_projection(), h1, r2)
    assert report.contact and report.conformal
    assert report.lambda_sq == Polynomial.constant(Rat(1), 3)
    assert all(c.is_zero for c in report.b)
    assert report.residuals == () and report.reason == ""


def test_forgetting_a_horizontal_pair_is_not_contact(h1, h2):
    # dropping (x2, y2): H^2 -> H^1 on coordinates is not even contact,
    # since moving along the forgotten pair still displaces the center
    report = analyze_commutation(PolyMap.parse(["x1", "x3", "x5"], 5), h2, h1)
    assert not report.contact
    assert report.reason == "differential leaves the polarization"


def test_dilation_commutes(h1):
    report = analyze_commutation(dilation(h1, 2), h1, h1)
    assert report.conformal
    assert report.lambda_sq == Polynomial.constant(Rat(4), 3)
    assert all(c.is_zero for c in report.b)


def test_left_translation_commutes(engel):
    la = left_translation(engel, (Rat(1), Rat(-1), Rat(1, 2), Rat(2)))
    report = analyze_commutation(la, engel, engel)
    assert report.conformal
    assert report.lambda_sq == Polynomial.constant(Rat(1), 4)
    assert all(c.is_zero for c in report.b)


def test_vertical_projection_has_polynomial_factor(h1):
    # projecting to the center: lambda^2 = (x1^2 + x2^2)/4, a genuine
    # non-constant conformal factor
    r1 = abelian_group(1)
    report = analyze_commutation(PolyMap.parse(["x3"], 3), h1, r1)
    assert report.contact and report.conformal
    assert report.lambda_sq == Polynomial.parse("1/4*x1^2 + 1/4*x2^2", 3)
    assert all(c.is_zero for c in report.b)


def test_cubed_coordinate_fails_conformality(h1):
    r3 = abelian_group(3)
    report = analyze_commutation(PolyMap.parse(["x1", "x2^3", "x3"], 3), h1, r3)
    assert report.contact
    assert not report.conformal
    assert report.reason == "cometric image is not a multiple of the target cometric"
    assert Polynomial.parse("9*x2^4 - 1", 3) in report.residuals


def test_axis_squash_fails(r2):
    report = analyze_commutation(PolyMap.parse(["x1", "2*x2"], 2), r2, r2)
    assert report.contact and not report.conformal
    assert report.residuals == (Polynomial.constant(Rat(3), 2),)


def test_vertical_shear_breaks_contact(h1):
    report = analyze_commutation(PolyMap.parse(["x1", "x2", "x3 + x1"], 3), h1, h1)
    assert not report.contact and not report.conformal
    assert report.reason == "differential leaves the polarization"
    assert report.residuals


def test_constant_map_has_zero_factor(r2):
    report = analyze_commutation(PolyMap.parse(["1", "2"], 2), r2, r2)
    assert report.contact and not report.conformal
    assert report.reason == "conformal factor is not positive"


def test_analyze_argument_checks(h1, r2):
    with pytest.raises(ValueError, match="probe_degree"):
        analyze_commutation(PolyMap.identity(3), h1, h1, probe_degree=1)
    with pytest.raises(ValueError, match="shape"):
        analyze_commutation(PolyMap.identity(3), h1, r2)
    sl2 = sl2_algebra()
    bad = subriemannian_group(
        sl2, (sl2.basis_vector(0), sl2.basis_vector(1)),
        ((Rat(1), Rat(0)), (Rat(0), Rat(1))))
    with pytest.raises(NotNilpotent):
        analyze_commutation(PolyMap.identity(3), bad, bad)


def test_complex_square_is_conformal(h1, r2):
    f = PolyMap.parse(["x1^2 - x2^2", "2*x1*x2"], 3)
    report = analyze_commutation(f, h1, r2)
    assert report.conformal
    assert report.lambda_sq == Polynomial.parse("4*x1^2 + 4*x2^2", 3)
    assert all(c.is_zero for c in report.b)


def test_radial_square_has_drift(r2):
    r1 = abelian_group(1)
    f = PolyMap.parse(["x1^2 + x2^2"], 2)
    report = analyze_commutation(f, r2, r1)
    assert report.conformal
    assert report.lambda_sq == Polynomial.parse("4*x1^2 + 4*x2^2", 2)
    assert report.b == (Polynomial.constant(Rat(4), 2),)


# ---------------------------------------------------------------------------
# residual machinery and the drift vector


def test_residuals_flag_wrong_factor(h1, r2):
    f = horizontal_projection()
    zero_b = (Polynomial.zero(3), Polynomial.zero(3))
    assert commutation_residuals(f, 1, zero_b, h1, r2, 3) == ()
    bad = commutation_residuals(f, 2, zero_b, h1, r2, 3)
    assert bad
    probes, residuals = zip(*bad)
    assert all(r for r in residuals)


def test_residuals_flag_wrong_drift(h1, r2):
    f = horizontal_projection()
    b = (Polynomial.constant(Rat(1), 3), Polynomial.zero(3))
    bad = commutation_residuals(f, 1, b, h1, r2, 3)
    assert bad


def test_residuals_reject_nonhorizontal_drift(h1):
    f = PolyMap.identity(3)
    vertical = (Polynomial.zero(3), Polynomial.zero(3), Polynomial.constant(Rat(1), 3))
    with pytest.raises(ValueError, match="polarization"):
        commutation_residuals(f, 1, vertical, h1, h1, 3)
    with pytest.raises(ValueError, match="probe_degree"):
        commutation_residuals(f, 1, (Polynomial.zero(3),) * 3, h1, h1, 1)


def _similarity_automorphism():
    # 2 x rotation on the horizontal layer, det on the center
    m = ((Rat(6, 5), Rat(8, 5)), (Rat(-8, 5), Rat(6, 5)))
    return PolyMap.linear((
        (m[0][0], m[0][1], Rat(0)),
        (m[1][0], m[1][1], Rat(0)),
        (Rat(0), Rat(0), Rat(4)),
    ))


def test_b_vector_of_similarity_automorphism(h1):
    f = _similarity_automorphism()
    assert b_vector(f, 4, h1, h1) == (Polynomial.zero(3),) * 3
    report = analyze_commutation(f, h1, h1)
    assert report.conformal and report.lambda_sq == Polynomial.constant(Rat(4), 3)


def test_b_vector_of_translated_automorphism(h1):
    f = left_translation(h1, (1, 2, Rat(-1, 2))).compose(_similarity_automorphism())
    assert b_vector(f, 4, h1, h1) == (Polynomial.zero(3),) * 3


def test_b_vector_matches_pullback_trace(h1, r2):
    r1 = abelian_group(1)
    cases = [
        (PolyMap.parse(["x1^2 + x2^2"], 2), Polynomial.parse("4*x1^2 + 4*x2^2", 2), r2, r1),
        (PolyMap.parse(["x1^2 - x2^2", "2*x1*x2"], 3),
         Polynomial.parse("4*x1^2 + 4*x2^2", 3), h1, r2),
        (horizontal_projection(), 1, h1, r2),
    ]
    for f, lam_sq, source, target in cases:
        b = b_vector(f, lam_sq, source, target)
        assert b == pullback_operator(f, source, target).first
        report = analyze_commutation(f, source, target)
        assert report.b == b


def test_b_vector_rejects_wrong_factor(r2):
    r1 = abelian_group(1)
    f = PolyMap.parse(["x1^2 + x2^2"], 2)
    with pytest.raises(NotConformal, match="cometric image"):
        b_vector(f, 3, r2, r1)


def test_b_vector_rejects_broken_contact(h1):
    f = PolyMap.parse(["x1", "x2", "x3 + x1"], 3)
    with pytest.raises(NotConformal, match="polarization"):
        b_vector(f, 1, h1, h1)
