#include "doctest.h"
#include "support.hpp"

#include "calibra/forms.hpp"
#include "calibra/groups.hpp"

using namespace calibra;

namespace {

int two_form_count(int m) { return m * (m - 1) / 2; }

Eigen::MatrixXd spin7_lambda7() {
    Eigen::MatrixXd v(28, 7);
    for (int u = 1; u <= 7; ++u) v.col(u - 1) = two_form_vector(right_multiplication_form(Element::unit(octonions, u), 1));
    return v;
}

} // namespace

TEST_CASE("twisted isomorphisms") {
    for (int l = 0; l < 4; ++l) {
        const int n = l == 3 ? 1 : 2;
        const int m = (1 << l) * n;
        const auto r = twisted_isomorphism_check(Eigen::MatrixXd::Identity(m, m), AlgebraLevel{l}, n);
        CHECK(r.is_twisted);
        CHECK(r.theta->isIdentity(1e-12));
        CHECK(*r.is_special);
    }
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        const Element beta(quaternions, random_unit(4, rng));
        const auto r = twisted_isomorphism_check(block_action(Side::right, beta, 2), quaternions, 2);
        REQUIRE(r.is_twisted);
        // theta(x) = beta^-1 x beta
        for (int i = 0; i < 4; ++i) {
            const Element x = Element::unit(quaternions, i);
            const Element expected = cd_inverse(beta) * x * beta;
            CHECK((r.theta->col(i) - expected.coeffs()).norm() < 1e-10);
        }
        CHECK(!*r.is_special);
    }
    Rng rng8(8);
    for (int t = 0; t < 20; ++t) CHECK(!twisted_isomorphism_check(random_orthogonal(8, rng8), octonions, 1).is_twisted);
    CHECK(!twisted_isomorphism_check(2.0 * Eigen::MatrixXd::Identity(4, 4), quaternions, 1).is_twisted);
    CHECK_THROWS(twisted_isomorphism_check(Eigen::MatrixXd::Identity(6, 6), quaternions, 1));
    CHECK_THROWS(twisted_isomorphism_check(Eigen::MatrixXd::Identity(4, 3), complexes, 2));
}

TEST_CASE("special twisted isomorphisms by group") {
    Rng rng(2);
    for (int l = 1; l < 4; ++l) {
        const AlgebraLevel a{l};
        const int n = l == 3 ? 1 : 2;
        const int m = a.dim() * n;
        for (int t = 0; t < 10; ++t) {
            const auto h = twisted_isomorphism_check(random_group_element(structure_algebra(a, n, true), m, rng), a, n);
            CHECK(h.is_twisted);
            CHECK(*h.is_special);
            const auto g = twisted_isomorphism_check(random_group_element(structure_algebra(a, n, false), m, rng), a, n);
            CHECK(g.is_twisted);
            CHECK(!*g.is_special);
        }
    }
}

TEST_CASE("stabilizer dimensions") {
    for (int m = 2; m <= 6; ++m) CHECK(stabilizer_algebra(Multivector::volume(m)).dimension == two_form_count(m));
    CHECK(stabilizer_algebra(build_spin7_four_form()).dimension == 21);
    CHECK(stabilizer_algebra(build_g2_three_form()).dimension == 14);
    CHECK(stabilizer_algebra(build_g2_four_form()).dimension == 14);
    CHECK(structure_algebra(complexes, 3, false).dimension == 9);
    CHECK(structure_algebra(complexes, 3, true).dimension == 8);
    CHECK(structure_algebra(quaternions, 2, true).dimension == 10);
    CHECK(structure_algebra(octonions, 1, true).dimension == 14);
    const auto& spin7 = structure_algebra(octonions, 1, false);
    for (const auto& x : spin7.basis) CHECK(max_abs_diff(lie_action(x, build_spin7_four_form()), Multivector(8)) < 1e-12);
}

TEST_CASE("lie action is the derivative of the group action") {
    Rng rng(3);
    const Multivector theta = build_spin7_four_form();
    const Eigen::MatrixXd x = skew_from_coords(8, random_gaussian(28, 1, rng).col(0));
    const double h = 1e-6;
    const Multivector fd = (transform_form(expm(h * x), theta) - transform_form(expm(-h * x), theta)) * (0.5 / h);
    // g . form = (g^-1)^* form, so d/dt = -D_X
    CHECK(max_abs_diff(fd, lie_action(x, theta) * -1.0) < 1e-8);
}

TEST_CASE("spin(7) decomposition of two-forms") {
    const auto d = decompose_two_forms(octonions, 1);
    REQUIRE(d.components.size() == 2);
    CHECK(d.component("L2_21").dim() == 21);
    CHECK(*d.component("L2_21").eigenvalue == doctest::Approx(-1.0));
    CHECK(d.component("L2_7").dim() == 7);
    CHECK(*d.component("L2_7").eigenvalue == doctest::Approx(3.0));
    // s_O = span of right multiplications
    const Eigen::VectorXd angles = principal_angles(d.component("L2_7").basis, range_basis(spin7_lambda7()));
    CHECK(angles.maxCoeff() < 1e-8);
    // the Lie algebra of the stabilizer is L2_21
    Eigen::MatrixXd spin7(28, 21);
    const auto& st = structure_algebra(octonions, 1, false);
    for (int i = 0; i < 21; ++i) spin7.col(i) = two_form_vector(two_form_from_matrix(st.basis[i]));
    CHECK(principal_angles(d.component("L2_21").basis, range_basis(spin7)).maxCoeff() < 1e-8);
    // text and table forms of the O-connection equation agree
    const Multivector theta = build_spin7_four_form();
    for (int i = 0; i < 21; ++i) {
        const Multivector f = two_form_from_vector(8, d.component("L2_21").basis.col(i));
        CHECK(max_abs_diff(f + hodge_star(theta.wedge(f)), Multivector(8)) < 1e-12);
        CHECK(max_abs_diff(hodge_star(f) + theta.wedge(f), Multivector(8)) < 1e-12);
    }
}

TEST_CASE("G2 decomposition of two-forms") {
    const auto d = decompose_g2_two_forms();
    CHECK(d.component("L2_14").dim() == 14);
    CHECK(*d.component("L2_14").eigenvalue == doctest::Approx(1.0));
    CHECK(d.component("L2_7").dim() == 7);
    CHECK(*d.component("L2_7").eigenvalue == doctest::Approx(-2.0));
    // 14-space is {phi : phi ^ Theta_G2 = 0}
    const Multivector psi = build_g2_four_form();
    Eigen::MatrixXd wedge_op(subsets(7, 6).size(), 21);
    for (int j = 0; j < 21; ++j) {
        const Multivector w = psi.wedge(two_form_from_vector(7, Eigen::VectorXd::Unit(21, j)));
        for (std::size_t r = 0; r < subsets(7, 6).size(); ++r) wedge_op(r, j) = w.coeff(subsets(7, 6)[r]);
    }
    const Eigen::MatrixXd ker = nullspace(wedge_op);
    CHECK(ker.cols() == 14);
    CHECK(principal_angles(d.component("L2_14").basis, ker).maxCoeff() < 1e-8);
    Eigen::MatrixXd g2(21, 14);
    for (int i = 0; i < 14; ++i) g2.col(i) = two_form_vector(two_form_from_matrix(g2_algebra().basis[i]));
    CHECK(principal_angles(d.component("L2_14").basis, range_basis(g2)).maxCoeff() < 1e-8);
}

TEST_CASE("complex and quaternionic decompositions") {
    const auto c2 = decompose_two_forms(complexes, 2);
    CHECK(c2.component("L11_0").dim() == 3);
    CHECK(c2.component("R_omega").dim() == 1);
    CHECK(c2.component("L20_02").dim() == 2);
    for (int n = 1; n <= 4; ++n) {
        const auto d = decompose_two_forms(complexes, n);
        CHECK(d.component("L11_0").dim() == n * n - 1);
        CHECK(d.component("L20_02").dim() == n * (n - 1));
        // dim g = dim h + dim s
        CHECK(structure_algebra(complexes, n, false).dimension ==
              d.component("L11_0").dim() + d.component("R_omega").dim());
    }
    const auto h1 = decompose_two_forms(quaternions, 1);
    CHECK(h1.component("Sym2V").dim() == 3);
    CHECK(h1.component("Sym2S").dim() == 3);
    CHECK(h1.component("L2_0V_Sym2S").dim() == 0);
    const int orient = form_set(quaternions, 1).orientation();
    for (int i = 0; i < 3; ++i) {
        const Multivector s = two_form_from_vector(4, h1.component("Sym2S").basis.col(i));
        const Multivector v = two_form_from_vector(4, h1.component("Sym2V").basis.col(i));
        CHECK(max_abs_diff(hodge_star(s, orient), s) < 1e-12);
        CHECK(max_abs_diff(hodge_star(v, orient), v * -1.0) < 1e-12);
    }
    for (int n = 1; n <= 2; ++n) {
        const auto d = decompose_two_forms(quaternions, n);
        CHECK(d.component("Sym2V").dim() == n * (2 * n + 1));
        CHECK(d.component("L2_0V_Sym2S").dim() == 3 * (n * (2 * n - 1) - 1));
        CHECK(structure_algebra(quaternions, n, false).dimension ==
              d.component("Sym2V").dim() + d.component("Sym2S").dim());
    }
}

TEST_CASE("projectors are complete and orthogonal") {
    std::vector<TwoFormDecomposition> all = {decompose_two_forms(reals, 3), decompose_two_forms(complexes, 3),
                                             decompose_two_forms(quaternions, 2), decompose_two_forms(octonions, 1),
                                             decompose_g2_two_forms()};
    for (const auto& d : all) {
        const int n = two_form_count(d.ambient_dim);
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < d.components.size(); ++i) {
            const Eigen::MatrixXd pi = d.components[i].projector();
            CHECK(testing::max_abs(pi * pi - pi) < 1e-10);
            for (std::size_t j = i + 1; j < d.components.size(); ++j)
                CHECK(testing::max_abs(pi * d.components[j].projector()) < 1e-10);
            sum += pi;
        }
        CHECK(testing::max_abs(sum - Eigen::MatrixXd::Identity(n, n)) < 1e-10);
    }
}

TEST_CASE("decompositions are equivariant") {
    Rng rng(4);
    struct Case {
        TwoFormDecomposition d;
        const StabilizerAlgebra* g;
    };
    std::vector<Case> cases = {{decompose_two_forms(complexes, 3), &structure_algebra(complexes, 3, false)},
                               {decompose_two_forms(quaternions, 2), &structure_algebra(quaternions, 2, false)},
                               {decompose_two_forms(octonions, 1), &structure_algebra(octonions, 1, false)},
                               {decompose_g2_two_forms(), &g2_algebra()}};
    for (const auto& c : cases) {
        const int m = c.d.ambient_dim;
        for (int t = 0; t < 10; ++t) {
            const Eigen::MatrixXd g = random_group_element(*c.g, m, rng);
            for (const auto& comp : c.d.components) {
                if (comp.dim() == 0) continue;
                Eigen::MatrixXd moved(comp.basis.rows(), comp.dim());
                for (int i = 0; i < comp.dim(); ++i)
                    moved.col(i) = two_form_vector(transform_form(g, two_form_from_vector(m, comp.basis.col(i))));
                CHECK(containment_residual(moved, comp.basis) < 1e-9);
            }
        }
    }
}

TEST_CASE("classify connections") {
    for (int n = 1; n <= 3; ++n) {
        const auto d = decompose_two_forms(complexes, n);
        CurvatureTensor f{2 * n, 1, {{build_kahler(n), Eigen::MatrixXcd::Constant(1, 1, {0, 1})}}};
        const auto r = classify_connection(f, d);
        CHECK(r.is_a_connection);
        CHECK(!*r.is_special);
    }
    const auto d2 = decompose_two_forms(complexes, 2);
    CurvatureTensor f0{4, 2, {{two_form_from_vector(4, d2.component("L11_0").basis.col(0)),
                               Eigen::MatrixXcd::Identity(2, 2) * std::complex<double>(0, 1)}}};
    CHECK(*classify_connection(f0, d2).is_special);

    Multivector asd = Multivector::basis(4, 0b0011) - Multivector::basis(4, 0b1100);
    Eigen::MatrixXcd a(2, 2);
    a << std::complex<double>(0, 1), 1, -1, std::complex<double>(0, -1);
    // under the H orientation (-e0123) dx01 - dx23 is self-dual; dx01 + dx23 is anti-self-dual
    asd = Multivector::basis(4, 0b0011) + Multivector::basis(4, 0b1100);
    CHECK(max_abs_diff(hodge_star(asd, form_set(quaternions, 1).orientation()), asd * -1.0) < 1e-14);
    const auto h = classify_connection(CurvatureTensor{4, 2, {{asd, a}}}, decompose_two_forms(quaternions, 1));
    CHECK(h.is_a_connection);
    CHECK(*h.is_special);
    const auto sd = classify_connection(CurvatureTensor{4, 2, {{Multivector::basis(4, 0b0011) - Multivector::basis(4, 0b1100), a}}},
                                        decompose_two_forms(quaternions, 1));
    CHECK(sd.is_a_connection);
    CHECK(!*sd.is_special);

    CurvatureTensor bad{4, 1, {{asd, Eigen::MatrixXcd::Constant(1, 1, 1.0)}}};
    CHECK_THROWS(classify_connection(bad, decompose_two_forms(quaternions, 1)));
    CHECK_THROWS(classify_connection(CurvatureTensor{6, 1, {}}, decompose_two_forms(quaternions, 1)));
}
