#include "doctest.h"
#include "support.hpp"

#include "calibra/forms.hpp"
#include "calibra/linalg.hpp"
#include "calibra/multivector.hpp"

using namespace calibra;

namespace {

Multivector random_form(int m, int k, Rng& rng) {
    std::normal_distribution<double> nd;
    Multivector a(m);
    for (Mask s : subsets(m, k)) a.set(s, nd(rng));
    return a;
}

Multivector dx(int m, int i) { return Multivector::basis(m, Mask{1} << i); }

} // namespace

TEST_CASE("wedge basics") {
    const Multivector e12 = dx(4, 0).wedge(dx(4, 1));
    CHECK(e12.coeff(0b11) == 1.0);
    CHECK(dx(4, 1).wedge(dx(4, 0)).coeff(0b11) == -1.0);
    Rng rng(1);
    const Multivector a = random_form(5, 1, rng);
    CHECK(a.wedge(a).empty());
    const Multivector w = build_kahler(2);
    CHECK(max_abs_diff(w.wedge(w), Multivector::volume(4) * 2.0) == 0.0);
    CHECK_THROWS(dx(3, 0).wedge(dx(4, 0)));
}

TEST_CASE("wedge properties") {
    Rng rng(2);
    for (int t = 0; t < 50; ++t) {
        const int m = 3 + t % 5;
        const int p = t % 3, q = (t / 3) % 3, r = 1;
        const Multivector a = random_form(m, p, rng), b = random_form(m, q, rng), c = random_form(m, r, rng);
        const double sign = (p * q) % 2 ? -1.0 : 1.0;
        CHECK(max_abs_diff(a.wedge(b), b.wedge(a) * sign) < 1e-12);
        CHECK(max_abs_diff(a.wedge(b).wedge(c), a.wedge(b.wedge(c))) < 1e-12);
    }
}

TEST_CASE("hodge star examples") {
    CHECK(max_abs_diff(hodge_star(Multivector::scalar(5, 1.0)), Multivector::volume(5)) == 0.0);
    const Multivector s = hodge_star(dx(4, 0).wedge(dx(4, 1)));
    CHECK(max_abs_diff(s, dx(4, 2).wedge(dx(4, 3))) == 0.0);
    CHECK(max_abs_diff(hodge_star(dx(4, 0).wedge(dx(4, 1)), -1), dx(4, 2).wedge(dx(4, 3)) * -1.0) == 0.0);
}

TEST_CASE("hodge star properties") {
    Rng rng(3);
    for (int m = 1; m <= 8; ++m)
        for (int k = 0; k <= m; ++k) {
            const Multivector a = random_form(m, k, rng), b = random_form(m, k, rng);
            const double sign = (k * (m - k)) % 2 ? -1.0 : 1.0;
            CHECK(max_abs_diff(hodge_star(hodge_star(a)), a * sign) < 1e-12);
            CHECK(max_abs_diff(a.wedge(hodge_star(b)), Multivector::volume(m) * form_inner(a, b)) < 1e-12);
        }
}

TEST_CASE("non-Euclidean metric agrees with an orthonormal coframe") {
    Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        const int m = 3 + t % 3;
        const Eigen::MatrixXd l = random_gaussian(m, m, rng) + 3.0 * Eigen::MatrixXd::Identity(m, m);
        const Metric g{l * l.transpose()};
        // columns of f are g-orthonormal
        const Eigen::MatrixXd f = l.transpose().inverse();
        const int orient = f.determinant() > 0 ? 1 : -1;
        for (int k = 0; k <= m; ++k) {
            const Multivector a = random_form(m, k, rng), b = random_form(m, k, rng);
            CHECK(std::abs(form_inner(a, b, g) - form_inner(pullback(a, f), pullback(b, f))) < 1e-9);
            CHECK(max_abs_diff(pullback(hodge_star(a, g), f), hodge_star(pullback(a, f), orient)) < 1e-9);
        }
    }
    CHECK_THROWS(Metric{-Eigen::MatrixXd::Identity(2, 2)}.validate());
}

TEST_CASE("inner products") {
    CHECK(form_inner(dx(4, 0).wedge(dx(4, 1)), dx(4, 0).wedge(dx(4, 1))) == 1.0);
    CHECK(form_inner(dx(4, 0), dx(4, 0).wedge(dx(4, 1))) == 0.0);
    for (int n = 1; n <= 4; ++n) CHECK(form_inner(build_kahler(n), build_kahler(n)) == doctest::Approx(n));
}

TEST_CASE("restriction") {
    for (int n = 1; n <= 3; ++n) {
        std::vector<int> xs;
        for (int j = 0; j < n; ++j) xs.push_back(2 * j);
        CHECK(form_restrict(build_kahler(n), Subspace::coordinate(2 * n, xs)).empty());
    }
    CHECK(max_abs_diff(form_restrict(Multivector::volume(5), Subspace::full(5)), Multivector::volume(5)) < 1e-14);
    const Multivector r = form_restrict(dx(4, 0).wedge(dx(4, 1)), Subspace::coordinate(4, {0, 1}));
    CHECK(max_abs_diff(r, Multivector::volume(2)) == 0.0);
    CHECK(max_abs_diff(form_restrict(dx(4, 0).wedge(dx(4, 1)), Subspace::coordinate(4, {0, 1}, -1)),
                       Multivector::volume(2) * -1.0) == 0.0);

    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        const Multivector a = random_form(7, 3, rng);
        const Subspace c(random_gaussian(7, 5, rng));
        const Eigen::MatrixXd sub = random_gaussian(5, 3, rng);
        const Multivector two_step = pullback(form_restrict(a, c), sub);
        const Multivector direct = pullback(a, c.oriented_frame() * sub);
        CHECK(max_abs_diff(two_step, direct) < 1e-12);
        CHECK(std::abs(evaluate(a, c.oriented_frame().leftCols(3)) -
                       pullback(a, c.oriented_frame().leftCols(3)).coeff(0b111)) < 1e-12);
    }
}

TEST_CASE("two-form matrix round trip") {
    Rng rng(6);
    const Multivector a = random_form(6, 2, rng);
    CHECK(max_abs_diff(two_form_from_matrix(two_form_matrix(a)), a) == 0.0);
    CHECK(max_abs_diff(two_form_from_vector(6, two_form_vector(a)), a) == 0.0);
    const Eigen::MatrixXd x = two_form_matrix(a);
    const Eigen::VectorXd u = random_gaussian(6, 1, rng), v = random_gaussian(6, 1, rng);
    Eigen::MatrixXd uv(6, 2);
    uv << u, v;
    CHECK(std::abs(evaluate(a, uv) - u.dot(x * v)) < 1e-12);
}

TEST_CASE("subspace canonicalization") {
    Rng rng(7);
    const Eigen::MatrixXd f = random_gaussian(6, 3, rng);
    const Subspace c(f);
    CHECK(testing::max_abs(c.frame().transpose() * c.frame() - Eigen::MatrixXd::Identity(3, 3)) < 1e-12);
    // orientation of the input frame is kept
    CHECK((c.frame().transpose() * f).determinant() > 0);
    Eigen::MatrixXd bad(3, 2);
    bad << 1, 2, 0, 0, 0, 0;
    CHECK_THROWS(Subspace(bad));
}
