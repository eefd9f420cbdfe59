#include "calibra/linalg.hpp"
#include "calibra/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <map>
#include <mutex>

namespace calibra {

Subspace::Subspace(const Eigen::MatrixXd& frame, int orientation) : orientation_(orientation >= 0 ? 1 : -1) {
    const auto m = frame.rows(), k = frame.cols();
    if (k > m) fail(ErrorKind::malformed_input, "frame has more columns than rows");
    if (!frame.allFinite()) fail(ErrorKind::malformed_input, "frame has non-finite entries");
    if (k == 0) {
        frame_ = Eigen::MatrixXd(m, 0);
        return;
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const double scale = std::max(frame.cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index j = 0; j < k; ++j) {
        if (std::abs(r(j, j)) <= 1e-10 * scale) fail(ErrorKind::malformed_input, "frame is rank-deficient");
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    frame_ = q;
}

Subspace Subspace::coordinate(int m, const std::vector<int>& axes, int orientation) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(m, axes.size());
    for (std::size_t j = 0; j < axes.size(); ++j) {
        if (axes[j] < 0 || axes[j] >= m) fail(ErrorKind::dimension_mismatch, "axis out of range");
        f(axes[j], j) = 1.0;
    }
    return Subspace(f, orientation);
}

Subspace Subspace::full(int m) { return Subspace(Eigen::MatrixXd::Identity(m, m)); }

Eigen::MatrixXd Subspace::oriented_frame() const {
    Eigen::MatrixXd f = frame_;
    if (orientation_ < 0 && f.cols() > 0) f.col(0) = -f.col(0);
    return f;
}

Subspace Subspace::transformed(const Eigen::MatrixXd& g) const {
    if (g.cols() != frame_.rows()) fail(ErrorKind::dimension_mismatch, "map does not match ambient dimension");
    return Subspace(g * oriented_frame());
}

Eigen::MatrixXd nullspace(const Eigen::MatrixXd& a, double tol) {
    const auto n = a.cols();
    if (a.rows() == 0 || n == 0) return Eigen::MatrixXd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s[0] : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (smax > 0 && s[i] >= tol * smax) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

int numerical_rank(const Eigen::MatrixXd& a, double tol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[0] > 0 && s[i] >= tol * s[0]) ++rank;
    return rank;
}

Eigen::MatrixXd range_basis(const Eigen::MatrixXd& a, double tol) {
    if (a.cols() == 0) return Eigen::MatrixXd(a.rows(), 0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[0] > 0 && s[i] >= tol * s[0]) ++rank;
    return svd.matrixU().leftCols(rank);
}

Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& a, double tol) {
    if (a.cols() == 0) return Eigen::MatrixXd::Identity(a.rows(), a.rows());
    return nullspace(a.transpose(), tol);
}

Eigen::VectorXd principal_angles(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows()) fail(ErrorKind::dimension_mismatch, "principal angles need a common ambient space");
    if (a.cols() > b.cols()) return principal_angles(b, a);
    const auto k = a.cols();
    if (k == 0) return Eigen::VectorXd(0);
    // cosines are inaccurate near 1; small angles come from the sines of the residual
    Eigen::JacobiSVD<Eigen::MatrixXd> cos_svd(a.transpose() * b);
    Eigen::JacobiSVD<Eigen::MatrixXd> sin_svd(a - b * (b.transpose() * a));
    Eigen::VectorXd angles(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double c = std::clamp(cos_svd.singularValues()[i], 0.0, 1.0);
        const double s = std::clamp(sin_svd.singularValues()[k - 1 - i], 0.0, 1.0);
        angles[i] = c * c >= 0.5 ? std::asin(s) : std::acos(c);
    }
    return angles;
}

double containment_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.cols() == 0) return 0.0;
    if (b.cols() == 0) return a.norm();
    return (a - b * (b.transpose() * a)).norm();
}

Eigen::MatrixXd random_gaussian(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = nd(rng);
    return m;
}

Eigen::MatrixXd random_orthogonal(int m, Rng& rng) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_gaussian(m, m, rng));
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR();
    for (int j = 0; j < m; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

Eigen::MatrixXd random_frame(int m, int k, Rng& rng) { return Subspace(random_gaussian(m, k, rng)).frame(); }

Eigen::VectorXd random_unit(int m, Rng& rng) {
    Eigen::VectorXd v = random_gaussian(m, 1, rng);
    return v / v.norm();
}

const std::vector<Eigen::MatrixXd>& so_basis(int m) {
    static std::mutex mu;
    static std::map<int, std::vector<Eigen::MatrixXd>> cache;
    std::lock_guard lock(mu);
    auto [it, inserted] = cache.try_emplace(m);
    if (inserted)
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) {
                Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, m);
                e(a, b) = 1;
                e(b, a) = -1;
                it->second.push_back(e);
            }
    return it->second;
}

Eigen::MatrixXd skew_from_coords(int m, const Eigen::VectorXd& coords) {
    const auto& basis = so_basis(m);
    if (static_cast<std::size_t>(coords.size()) != basis.size())
        fail(ErrorKind::dimension_mismatch, "so(m) coordinate vector has wrong length");
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < basis.size(); ++i) x += coords[i] * basis[i];
    return x;
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& x) { return x.exp(); }

std::vector<EigenCluster> cluster_eigen(const Eigen::MatrixXd& sym, double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    std::vector<EigenCluster> out;
    Eigen::Index start = 0;
    const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 1; i <= vals.size(); ++i) {
        if (i == vals.size() || vals[i] - vals[i - 1] > tol * scale) {
            const auto count = i - start;
            out.push_back({vals.segment(start, count).mean(), vecs.middleCols(start, count)});
            start = i;
        }
    }
    return out;
}

} // namespace calibra
