#include "doctest.h"
#include "support.hpp"

#include "calibra/calibration.hpp"
#include "calibra/forms.hpp"
#include "calibra/subspaces.hpp"

#include <numbers>

using namespace calibra;

namespace {

ComassOptions quick(int restarts = 16, std::uint64_t seed = 5) {
    ComassOptions o;
    o.restarts = restarts;
    o.seed = seed;
    return o;
}

Multivector kahler_power(int n, int k) {
    const Multivector w = build_kahler(n);
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return w.power(k) * (1.0 / f);
}

CurvatureTensor abelian(const Multivector& phi) {
    CurvatureTensor f;
    f.dim = phi.dim();
    f.rank = 1;
    f.terms.emplace_back(phi, Eigen::MatrixXcd::Constant(1, 1, cd(0, 1)));
    return f;
}

double max_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.cols() != b.cols()) return 1e9;
    return principal_angles(a, b).maxCoeff();
}

} // namespace

TEST_CASE("comass of volume forms") {
    for (int m = 2; m <= 6; ++m) {
        const ComassReport r = comass_estimate(Multivector::volume(m), m, quick(4));
        CHECK(std::abs(r.estimate - 1.0) < 1e-9);
        CHECK(r.argmax_plane.k() == m);
    }
}

TEST_CASE("comass of Kahler powers") {
    for (int n = 1; n <= 3; ++n)
        for (int k = 1; k <= n; ++k) {
            const ComassReport r = comass_estimate(kahler_power(n, k), 2 * k, quick());
            CHECK(std::abs(r.estimate - 1.0) < 1e-6);
            CHECK(r.converged);
            CHECK(is_a_subspace(r.argmax_plane, complexes));
        }
}

TEST_CASE("comass of exceptional and special Lagrangian forms") {
    const ComassReport g2 = comass_estimate(g2_form_set().at("g2_three"), 3, quick());
    CHECK(std::abs(g2.estimate - 1.0) < 1e-6);
    CHECK(classify_special_lagrangian(g2.argmax_plane, g2_form_set()).cls == SpecialClass::associative);
    const ComassReport co = comass_estimate(g2_form_set().at("g2_four"), 4, quick());
    CHECK(std::abs(co.estimate - 1.0) < 1e-6);
    CHECK(classify_special_lagrangian(co.argmax_plane, g2_form_set()).cls == SpecialClass::coassociative);
    const auto& o = form_set(octonions, 1);
    const ComassReport sp = comass_estimate(o.at("spin7_four"), 4, quick());
    CHECK(std::abs(sp.estimate - 1.0) < 1e-6);
    CHECK(classify_special_lagrangian(sp.argmax_plane, o).cls == SpecialClass::cayley);
    for (int n = 1; n <= 3; ++n) {
        const auto& c = form_set(complexes, n);
        const ComassReport re = comass_estimate(c.at("hol_volume_re"), n, quick());
        CHECK(std::abs(re.estimate - 1.0) < 1e-6);
        CHECK(classify_special_lagrangian(re.argmax_plane, c).cls == SpecialClass::special_lagrangian_phase_0);
    }
}

TEST_CASE("comass reports are deterministic and monotone in restarts") {
    const Multivector phi = g2_form_set().at("g2_three") + Multivector::basis(7, {0, 1, 2}) * 0.3;
    ComassOptions a = quick(8, 42), b = quick(8, 42);
    a.threads = 1;
    b.threads = 4;
    const ComassReport ra = comass_estimate(phi, 3, a), rb = comass_estimate(phi, 3, b);
    CHECK(ra.estimate == rb.estimate);
    CHECK(testing::max_abs(ra.argmax_plane.frame() - rb.argmax_plane.frame()) == 0.0);
    double last = -1e9;
    for (int r : {1, 2, 4, 8, 16}) {
        const double e = comass_estimate(phi, 3, quick(r, 42)).estimate;
        CHECK(e >= last);
        last = e;
    }
    // random oriented planes never beat the estimate
    Rng rng(9);
    for (int t = 0; t < 200; ++t) CHECK(evaluate(phi, random_frame(7, 3, rng)) <= last + 1e-12);
}

TEST_CASE("comass input errors") {
    CHECK_THROWS_AS(comass_estimate(build_kahler(2) + Multivector::volume(4), 2, quick()), Error);
    CHECK_THROWS_AS(comass_estimate(build_kahler(2), 5, quick()), Error);
}

TEST_CASE("calibrated planes") {
    for (int n = 1; n <= 4; ++n) {
        const auto& c = form_set(complexes, n);
        CHECK(is_calibrated_plane(c.at("hol_volume_re"), real_lagrangian(n)));
        CHECK(!is_calibrated_plane(c.at("hol_volume_im"), real_lagrangian(n)));
        CHECK(std::abs(calibration_value(c.at("hol_volume_im"), real_lagrangian(n))) < 1e-15);
    }
    const Multivector theta = form_set(octonions, 1).at("spin7_four");
    CHECK(is_calibrated_plane(theta, quaternion_cayley_plane()));
    CHECK(!is_calibrated_plane(theta, quaternion_cayley_plane().reversed()));
    CHECK_THROWS_AS(is_calibrated_plane(theta, Subspace::coordinate(8, {0, 1, 2})), Error);
    // calibrated planes achieve the comass estimate
    const double est = comass_estimate(theta, 4, quick()).estimate;
    Rng rng(4);
    const auto& spin7 = structure_algebra(octonions, 1, false);
    for (int t = 0; t < 20; ++t) {
        const Subspace p = quaternion_cayley_plane().transformed(random_group_element(spin7, 8, rng));
        CHECK(is_calibrated_plane(theta, p));
        CHECK(std::abs(calibration_value(theta, p) - est) < 1e-8);
    }
}

TEST_CASE("hyperkahler double calibration") {
    // J-complex, I-holomorphic Lagrangian planes: rotate the K-complex model by right multiplication
    const Element q = (Element::one(quaternions) + Element::unit(quaternions, 1)) * (1.0 / std::sqrt(2.0));
    for (int n = 1; n <= 3; ++n) {
        const Subspace model = complex_lagrangian_model(n);
        const Subspace c(block_action(Side::right, q, n) * model.oriented_frame());
        const auto [wi, wj, wk] = build_hyperkahler_triple(n);
        CHECK(form_restrict(wi, c).max_abs() < 1e-12);
        CHECK(form_restrict(wk, c).max_abs() < 1e-12);
        const Multivector vol_j = wj.power(n) * (1.0 / std::tgamma(n + 1.0));
        const auto [re, im] = build_hyperkahler_holomorphic_volume(n);
        const double a = calibration_value(vol_j, c), b = calibration_value(re, c);
        CHECK(std::abs(std::abs(a) - 1.0) < 1e-12);
        CHECK(std::abs(a - b) < 1e-12);
        const Subspace oriented = a > 0 ? c : c.reversed();
        CHECK(is_calibrated_plane(vol_j, oriented));
        CHECK(is_calibrated_plane(re, oriented));
        CHECK(std::abs(calibration_value(im, oriented)) < 1e-12);
    }
}

TEST_CASE("Yang-Mills quadratic at m = 4") {
    const YangMillsQuadratic y = ym_quadratic(Multivector::scalar(4, 1.0));
    CHECK(std::abs(y.eigenvalues[0] + 1.0) < 1e-12);
    CHECK(std::abs(y.eigenvalues[2] + 1.0) < 1e-12);
    CHECK(std::abs(y.eigenvalues[3] - 1.0) < 1e-12);
    CHECK(std::abs(y.top_eigenvalue - 1.0) < 1e-12);
    CHECK(testing::max_abs(y.matrix - y.matrix.transpose()) < 1e-12);
    const auto d = decompose_two_forms(reals, 4);
    (void)d;
    for (int i = 0; i < y.extremal.cols(); ++i) {
        const Multivector phi = two_form_from_vector(4, y.extremal.col(i));
        CHECK(max_abs_diff(hodge_star(phi), phi * -1.0) < 1e-12);
    }
    CHECK(y.extremal.cols() == 3);
    CHECK(y.is_calibrating());
    CHECK_THROWS_AS(ym_quadratic(Multivector::volume(4)), Error);
}

TEST_CASE("Yang-Mills quadratic for the Spin(7) form") {
    const YangMillsQuadratic y = ym_quadratic(form_set(octonions, 1).at("spin7_four"));
    const auto clusters = cluster_eigen(y.matrix);
    REQUIRE(clusters.size() == 2);
    CHECK(std::abs(clusters[0].value + 1.0) < 1e-10);
    CHECK(clusters[0].basis.cols() == 21);
    CHECK(std::abs(clusters[1].value - 3.0) < 1e-10);
    CHECK(clusters[1].basis.cols() == 7);
    CHECK(std::abs(y.bundle_top - 1.0) < 1e-10);
    CHECK(max_angle(y.extremal, decompose_two_forms(octonions, 1).component("L2_21").basis) < 1e-8);
    // the 3-eigenspace is spanned by the right-multiplication forms
    Eigen::MatrixXd omegas(28, 7);
    for (int u = 1; u < 8; ++u)
        omegas.col(u - 1) = two_form_vector(right_multiplication_form(Element::unit(octonions, u), 1));
    CHECK(max_angle(clusters[1].basis, range_basis(omegas)) < 1e-8);
}

TEST_CASE("Yang-Mills quadratic for the G2 form") {
    const Multivector omega = g2_form_set().at("g2_three");
    const YangMillsQuadratic pos = ym_quadratic(omega, 1);
    CHECK(std::abs(pos.bundle_top - 2.0) < 1e-10);
    const YangMillsQuadratic neg = ym_quadratic(omega, -1);
    CHECK(std::abs(neg.bundle_top - 1.0) < 1e-10);
    CHECK(max_angle(neg.extremal, decompose_g2_two_forms().component("L2_14").basis) < 1e-8);
}

TEST_CASE("Yang-Mills quadratic on C^n") {
    for (int n = 2; n <= 4; ++n) {
        const Multivector phi = n == 2 ? Multivector::scalar(4, 1.0) : kahler_power(n, n - 2);
        const YangMillsQuadratic y = ym_quadratic(phi);
        const Eigen::MatrixXd l110 = decompose_two_forms(complexes, n).component("L11_0").basis;
        CHECK(testing::max_abs(y.matrix * l110 + l110) < 1e-10);
        CHECK(std::abs(y.bundle_top - 1.0) < 1e-10);
        CHECK(max_angle(y.extremal, l110) < 1e-8);
    }
}

TEST_CASE("Yang-Mills quadratic for the quaternionic form") {
    const auto& h2 = form_set(quaternions, 2);
    const YangMillsQuadratic y = ym_quadratic(h2.at("quat_theta"), h2.orientation());
    CHECK(std::abs(y.bundle_top - 6.0) < 1e-9);
    CHECK(std::abs(ym_quadratic(y.normalized(), h2.orientation()).bundle_top - 1.0) < 1e-10);
    CHECK(max_angle(y.extremal, decompose_two_forms(quaternions, 2).component("Sym2V").basis) < 1e-8);
}

TEST_CASE("energy bound at the quadratic level") {
    Rng rng(21);
    for (const Multivector& phi : {Multivector::scalar(4, 1.0), form_set(octonions, 1).at("spin7_four")}) {
        const YangMillsQuadratic y = ym_quadratic(phi);
        const int n = static_cast<int>(y.matrix.rows());
        const Eigen::MatrixXd proj = y.extremal * y.extremal.transpose();
        for (int t = 0; t < 200; ++t) {
            const Eigen::VectorXd v = random_unit(n, rng);
            const double q = -v.dot(y.matrix * v);
            CHECK(q <= y.bundle_top + 1e-12);
            const Eigen::VectorXd e = (proj * v).normalized();
            CHECK(std::abs(-e.dot(y.matrix * e) - y.bundle_top) < 1e-10);
            if ((v - proj * v).norm() > 1e-3) CHECK(q < y.bundle_top - 1e-8);
        }
    }
}

TEST_CASE("Yang-Mills calibrated curvature") {
    const Multivector one = Multivector::scalar(4, 1.0);
    const Multivector e12 = Multivector::basis(4, {0, 1}), e34 = Multivector::basis(4, {2, 3});
    const YmVerdict asd = classify_ym_calibrated(abelian(e12 - e34), one);
    CHECK(asd.is_calibrated);
    CHECK(std::abs(asd.slack) < 1e-12);
    CHECK(std::abs(asd.energy - 2.0) < 1e-12);
    const YmVerdict kahler = classify_ym_calibrated(abelian(build_kahler(2)), one);
    CHECK(!kahler.is_calibrated);
    CHECK(std::abs(kahler.slack - 4.0) < 1e-12);
    CurvatureTensor zero;
    zero.dim = 4;
    const YmVerdict z = classify_ym_calibrated(zero, one);
    CHECK(z.is_calibrated);
    CHECK(z.slack == 0.0);
    // su(2)-valued ASD curvature
    CurvatureTensor f;
    f.dim = 4;
    f.rank = 2;
    Eigen::MatrixXcd a(2, 2), b(2, 2);
    a << cd(0, 1), 0, 0, cd(0, -1);
    b << 0, 1, -1, 0;
    f.terms.emplace_back(e12 - e34, a);
    f.terms.emplace_back(Multivector::basis(4, {0, 2}) + Multivector::basis(4, {1, 3}), b);
    CHECK(classify_ym_calibrated(f, one).is_calibrated);
    f.terms.emplace_back(e12 + e34, a * 0.1);
    const YmVerdict mixed = classify_ym_calibrated(f, one);
    CHECK(!mixed.is_calibrated);
    CHECK(mixed.slack > 0);
    CHECK_THROWS_AS(classify_ym_calibrated(abelian(e12), Multivector::scalar(5, 1.0)), Error);
}

TEST_CASE("Chern pairing") {
    const FlatTorus t4 = FlatTorus::standard(4);
    const Multivector one = Multivector::scalar(4, 1.0);
    const Multivector e12 = Multivector::basis(4, {0, 1}), e34 = Multivector::basis(4, {2, 3});
    CurvatureTensor zero;
    zero.dim = 4;
    CHECK(chern_pairing(zero, one, t4) == 0.0);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(std::abs(chern_pairing(abelian(e12 - e34), one, t4) + 1.0 / (4 * pi2)) < 1e-14);
    CHECK(std::abs(chern_pairing(abelian(e12 + e34), one, t4) - 1.0 / (4 * pi2)) < 1e-14);
    Eigen::MatrixXd lat = Eigen::MatrixXd::Identity(4, 4);
    lat(0, 0) = 3;
    CHECK(std::abs(chern_pairing(abelian(e12 - e34), one, FlatTorus(lat)) + 3.0 / (4 * pi2)) < 1e-14);
    // calibrated curvature for the Spin(7) form pairs non-positively
    const auto& o = form_set(octonions, 1);
    const Eigen::MatrixXd l21 = decompose_two_forms(octonions, 1).component("L2_21").basis;
    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
        const Multivector phi = two_form_from_vector(8, l21 * random_unit(21, rng));
        CHECK(classify_ym_calibrated(abelian(phi), o.at("spin7_four")).is_calibrated);
        CHECK(chern_pairing(abelian(phi), o.at("spin7_four"), FlatTorus::standard(8)) < 0);
    }
}
