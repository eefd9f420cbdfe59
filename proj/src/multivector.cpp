#include "calibra/multivector.hpp"
#include "calibra/linalg.hpp"

#include <array>
#include <cmath>
#include <mutex>

namespace calibra {

namespace {

void require_dim(const Multivector& a, const Multivector& b) {
    if (a.dim() != b.dim()) fail(ErrorKind::dimension_mismatch, "form dimension mismatch");
}

void require_metric(const Multivector& a, const Metric& g) {
    if (g.dim() != a.dim()) fail(ErrorKind::dimension_mismatch, "metric dimension mismatch");
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    Eigen::MatrixXd s(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = m(rows[i], cols[j]);
    return s;
}

double det_of(const Eigen::MatrixXd& m) {
    switch (m.rows()) {
    case 0: return 1.0;
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    default: return m.partialPivLu().determinant();
    }
}

// <e^I, e^J> induced by the inverse gram matrix.
double basis_inner(Mask i, Mask j, const Eigen::MatrixXd& ginv) {
    return det_of(submatrix(ginv, mask_indices(i), mask_indices(j)));
}

} // namespace

void Metric::validate() const {
    if (gram.rows() != gram.cols()) fail(ErrorKind::dimension_mismatch, "metric must be square");
    if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        fail(ErrorKind::invalid_argument, "metric must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.eigenvalues().minCoeff() <= 0) fail(ErrorKind::invalid_argument, "metric must be positive definite");
}

const std::vector<Mask>& subsets(int m, int k) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<Mask>> cache;
    std::lock_guard lock(mu);
    auto [it, inserted] = cache.try_emplace({m, k});
    if (inserted && k >= 0 && k <= m) {
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            Mask mask = 0;
            for (int i : idx) mask |= Mask{1} << i;
            it->second.push_back(mask);
            int p = k - 1;
            while (p >= 0 && idx[p] == m - k + p) --p;
            if (p < 0) break;
            ++idx[p];
            for (int q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
        }
    }
    return it->second;
}

Multivector hodge_star(const Multivector& a, const Metric& g, int orientation) {
    require_metric(a, g);
    const int m = a.dim();
    const Mask full = m == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << m) - 1);
    Multivector r(m);
    if (g.is_identity()) {
        for (const auto& [i, c] : a.terms()) {
            const Mask ic = full & ~i;
            r.add(ic, c * wedge_sign(i, ic) * orientation);
        }
        return r;
    }
    g.validate();
    const Eigen::MatrixXd ginv = g.gram.inverse();
    const double vol = std::sqrt(g.gram.determinant()) * orientation;
    for (int k = 0; k <= m; ++k) {
        const Multivector ak = a.grade_component(k);
        if (ak.empty()) continue;
        // coefficient on e^K is sign(K^c, K) * vol * <e^{K^c}, a>
        for (Mask kc : subsets(m, k)) {
            double s = 0;
            for (const auto& [j, c] : ak.terms()) s += c * basis_inner(kc, j, ginv);
            const Mask km = full & ~kc;
            r.add(km, s * vol * wedge_sign(kc, km));
        }
    }
    return r;
}

Multivector hodge_star(const Multivector& a, int orientation) {
    return hodge_star(a, Metric::euclidean(a.dim()), orientation);
}

double form_inner(const Multivector& a, const Multivector& b, const Metric& g) {
    require_dim(a, b);
    require_metric(a, g);
    if (g.is_identity()) return form_inner(a, b);
    g.validate();
    const Eigen::MatrixXd ginv = g.gram.inverse();
    double s = 0;
    for (const auto& [i, ci] : a.terms())
        for (const auto& [j, cj] : b.terms())
            if (grade_of(i) == grade_of(j)) s += ci * cj * basis_inner(i, j, ginv);
    return s;
}

double form_inner(const Multivector& a, const Multivector& b) {
    require_dim(a, b);
    double s = 0;
    for (const auto& [i, ci] : a.terms()) s += ci * b.coeff(i);
    return s;
}

Multivector pullback(const Multivector& a, const Eigen::MatrixXd& frame) {
    if (frame.rows() != a.dim()) fail(ErrorKind::dimension_mismatch, "frame does not match form dimension");
    const int k = static_cast<int>(frame.cols());
    Multivector r(k);
    std::vector<int> cols;
    for (const auto& [i, c] : a.terms()) {
        const int d = grade_of(i);
        if (d > k) continue;
        const std::vector<int> rows = mask_indices(i);
        for (Mask s : subsets(k, d)) r.add(s, c * det_of(submatrix(frame, rows, mask_indices(s))));
    }
    return r;
}

Multivector form_restrict(const Multivector& a, const Subspace& c) {
    if (c.ambient_dim() != a.dim()) fail(ErrorKind::dimension_mismatch, "subspace does not match form dimension");
    return pullback(a, c.oriented_frame());
}

double evaluate(const Multivector& a, const Eigen::MatrixXd& frame) {
    if (frame.rows() != a.dim()) fail(ErrorKind::dimension_mismatch, "frame does not match form dimension");
    const int k = static_cast<int>(frame.cols());
    std::vector<int> all(k);
    for (int j = 0; j < k; ++j) all[j] = j;
    double s = 0;
    for (const auto& [i, c] : a.terms())
        if (grade_of(i) == k) s += c * det_of(submatrix(frame, mask_indices(i), all));
    return s;
}

Eigen::VectorXd two_form_vector(const Multivector& phi) {
    const int m = phi.dim();
    if (!phi.is_pure(2)) fail(ErrorKind::dimension_mismatch, "expected a 2-form");
    const auto& basis = subsets(m, 2);
    Eigen::VectorXd v(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) v[i] = phi.coeff(basis[i]);
    return v;
}

Multivector two_form_from_vector(int m, const Eigen::VectorXd& v) {
    const auto& basis = subsets(m, 2);
    if (static_cast<std::size_t>(v.size()) != basis.size())
        fail(ErrorKind::dimension_mismatch, "2-form coefficient vector has wrong length");
    Multivector r(m);
    for (std::size_t i = 0; i < basis.size(); ++i) r.set(basis[i], v[i]);
    return r;
}

Eigen::MatrixXd two_form_matrix(const Multivector& phi) {
    if (!phi.is_pure(2)) fail(ErrorKind::dimension_mismatch, "expected a 2-form");
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(phi.dim(), phi.dim());
    for (const auto& [mask, c] : phi.terms()) {
        const auto idx = mask_indices(mask);
        x(idx[0], idx[1]) = c;
        x(idx[1], idx[0]) = -c;
    }
    return x;
}

Multivector two_form_from_matrix(const Eigen::MatrixXd& x) {
    const int m = static_cast<int>(x.rows());
    Multivector r(m);
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) r.set(indices_mask({a, b}), 0.5 * (x(a, b) - x(b, a)));
    return r;
}

} // namespace calibra
