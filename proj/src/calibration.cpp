#include "calibra/calibration.hpp"
#include "calibra/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numbers>
#include <string>
#include <thread>

namespace calibra {

namespace {

struct Term {
    std::vector<int> rows;
    double coeff;
};

std::vector<Term> terms_of(const Multivector& form) {
    std::vector<Term> out;
    for (const auto& [m, c] : form.terms()) out.push_back({mask_indices(m), c});
    return out;
}

double minor_det(const Eigen::MatrixXd& a, int skip_r, int skip_c) {
    const int k = static_cast<int>(a.rows());
    if (k == 1) return 1.0;
    Eigen::MatrixXd m(k - 1, k - 1);
    for (int i = 0, ii = 0; i < k; ++i) {
        if (i == skip_r) continue;
        for (int j = 0, jj = 0; j < k; ++j) {
            if (j == skip_c) continue;
            m(ii, jj++) = a(i, j);
        }
        ++ii;
    }
    return m.determinant();
}

// Value and Euclidean gradient of F -> Phi(f_1, ..., f_k).
double value_and_gradient(const std::vector<Term>& terms, const Eigen::MatrixXd& f, Eigen::MatrixXd* grad) {
    const int k = static_cast<int>(f.cols());
    double v = 0;
    if (grad) grad->setZero(f.rows(), k);
    Eigen::MatrixXd sub(k, k);
    for (const auto& t : terms) {
        for (int r = 0; r < k; ++r) sub.row(r) = f.row(t.rows[r]);
        v += t.coeff * sub.determinant();
        if (!grad) continue;
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c)
                (*grad)(t.rows[r], c) += t.coeff * (((r + c) % 2) ? -1.0 : 1.0) * minor_det(sub, r, c);
    }
    return v;
}

Eigen::MatrixXd retract(const Eigen::MatrixXd& x) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(x.rows(), x.cols());
    const Eigen::MatrixXd r = qr.matrixQR().topRows(x.cols()).triangularView<Eigen::Upper>();
    for (int j = 0; j < x.cols(); ++j)
        if (r(j, j) < 0) q.col(j) *= -1.0;
    return q;
}

struct Ascent {
    double value;
    Eigen::MatrixXd frame;
    bool converged;
};

Ascent ascend(const std::vector<Term>& terms, int m, int k, std::uint64_t seed, int restart, const ComassOptions& o) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    Rng rng(seq);
    Eigen::MatrixXd f = random_frame(m, k, rng);
    Eigen::MatrixXd g;
    double v = value_and_gradient(terms, f, &g);
    double step = 0.5;
    bool converged = false;
    for (int it = 0; it < o.max_iterations && !converged; ++it) {
        const Eigen::MatrixXd ftg = f.transpose() * g;
        const Eigen::MatrixXd rg = g - f * (0.5 * (ftg + ftg.transpose()));
        if (rg.norm() < 1e-13) {
            converged = true;
            break;
        }
        const double slope = rg.squaredNorm();
        for (;;) {
            const Eigen::MatrixXd cand = retract(f + step * rg);
            const double cv = value_and_gradient(terms, cand, nullptr);
            if (cv >= v + 0.5 * step * slope) {
                converged = cv - v < o.tolerance;
                f = cand;
                v = value_and_gradient(terms, f, &g);
                step = std::min(2.0 * step, 4.0);
                break;
            }
            step *= 0.5;
            if (step < 1e-14) {
                converged = true;
                break;
            }
        }
    }
    // values stagnate before the frame does; refine on the gradient norm
    const auto riemannian = [&](const Eigen::MatrixXd& x, const Eigen::MatrixXd& gx) {
        const Eigen::MatrixXd xtg = x.transpose() * gx;
        return Eigen::MatrixXd(gx - x * (0.5 * (xtg + xtg.transpose())));
    };
    step = 0.5;
    Eigen::MatrixXd rg = riemannian(f, g);
    for (int it = 0; it < 200 && rg.norm() > 1e-13; ++it) {
        const Eigen::MatrixXd cand = retract(f + step * rg);
        Eigen::MatrixXd cg;
        const double cv = value_and_gradient(terms, cand, &cg);
        const Eigen::MatrixXd crg = riemannian(cand, cg);
        if (crg.norm() >= rg.norm() || cv < v - 1e-13) {
            step *= 0.5;
            if (step < 1e-6) break;
            continue;
        }
        f = cand;
        g = cg;
        v = cv;
        rg = crg;
    }
    return {v, f, converged};
}

} // namespace

int worker_threads() {
    if (const char* env = std::getenv("CALIBRA_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ComassReport comass_estimate(const Multivector& form, int k, const ComassOptions& opts) {
    const int m = form.dim();
    if (k < 1 || k > m) fail(ErrorKind::dimension_mismatch, "plane dimension out of range");
    if (!form.is_pure(k) && form.max_abs() > 0) fail(ErrorKind::dimension_mismatch, "form is not pure of the requested grade");
    if (opts.restarts < 1) fail(ErrorKind::invalid_argument, "restarts must be positive");
    const auto terms = terms_of(form);
    std::vector<Ascent> results(opts.restarts);
    const int workers = std::min(opts.threads > 0 ? opts.threads : worker_threads(), opts.restarts);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int r = w; r < opts.restarts; r += workers) results[r] = ascend(terms, m, k, opts.seed, r, opts);
        });
    for (auto& t : pool) t.join();
    int best = 0;
    for (int r = 1; r < opts.restarts; ++r)
        if (results[r].value > results[best].value) best = r;
    ComassReport rep;
    rep.form = form;
    rep.k = k;
    rep.estimate = results[best].value;
    rep.argmax_plane = Subspace(results[best].frame);
    rep.restarts = opts.restarts;
    rep.converged = results[best].converged;
    rep.seed = opts.seed;
    return rep;
}

double calibration_value(const Multivector& form, const Subspace& c) {
    if (form.dim() != c.ambient_dim()) fail(ErrorKind::dimension_mismatch, "form and plane live in different dimensions");
    if (!form.is_pure(c.k()) && form.max_abs() > 0) fail(ErrorKind::dimension_mismatch, "form grade does not match plane dimension");
    return evaluate(form, c.oriented_frame());
}

bool is_calibrated_plane(const Multivector& form, const Subspace& c, double tol) {
    return std::abs(calibration_value(form, c) - 1.0) <= tol;
}

YangMillsQuadratic ym_quadratic(const Multivector& phi, int orientation) {
    const int m = phi.dim();
    if (m < 4) fail(ErrorKind::dimension_mismatch, "Yang-Mills forms need dimension at least 4");
    if (!phi.is_pure(m - 4) && phi.max_abs() > 0) fail(ErrorKind::dimension_mismatch, "form must have degree m - 4");
    if (orientation != 1 && orientation != -1) fail(ErrorKind::invalid_argument, "orientation must be +1 or -1");
    const auto& basis = subsets(m, 2);
    const int n = static_cast<int>(basis.size());
    const Mask top = (Mask{1} << m) - 1;
    YangMillsQuadratic y;
    y.phi = phi;
    y.dim = m;
    y.orientation = orientation;
    y.matrix = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            if (basis[a] & basis[b]) continue;
            const Multivector w = Multivector::basis(m, basis[a]).wedge(Multivector::basis(m, basis[b])).wedge(phi);
            y.matrix(a, b) = y.matrix(b, a) = orientation * w.coeff(top);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(y.matrix);
    y.eigenvalues = es.eigenvalues();
    y.top_eigenvalue = y.eigenvalues[n - 1];
    y.bundle_top = -y.eigenvalues[0];
    y.normalization = y.bundle_top > 1e-12 ? 1.0 / y.bundle_top : 0.0;
    int count = 0;
    while (count < n && y.eigenvalues[count] <= y.eigenvalues[0] + 1e-8 * std::max(1.0, std::abs(y.eigenvalues[0])))
        ++count;
    y.extremal = es.eigenvectors().leftCols(count);
    return y;
}

YmVerdict classify_ym_calibrated(const CurvatureTensor& f, const Multivector& phi, int orientation, double tol) {
    f.validate();
    if (f.dim != phi.dim()) fail(ErrorKind::dimension_mismatch, "curvature and form dimensions differ");
    const YangMillsQuadratic y = ym_quadratic(phi, orientation);
    YmVerdict v;
    for (const auto& [pa, aa] : f.terms)
        for (const auto& [pb, ab] : f.terms) {
            const Eigen::VectorXd va = two_form_vector(pa), vb = two_form_vector(pb);
            v.energy += va.dot(vb) * (aa * ab.adjoint()).trace().real();
            v.q += va.dot(y.matrix * vb) * (aa * ab).trace().real();
        }
    v.slack = v.energy - v.q;
    v.is_calibrated = std::abs(v.slack) <= tol * std::max(1.0, v.energy);
    return v;
}

double chern_pairing(const CurvatureTensor& f, const Multivector& phi, const FlatTorus& torus, int orientation) {
    f.validate();
    const int m = f.dim;
    if (torus.n() != m || phi.dim() != m) fail(ErrorKind::dimension_mismatch, "curvature, form and torus dimensions differ");
    // matrix-valued even forms, multiplied by wedge and matrix product
    using MatForm = std::map<Mask, Eigen::MatrixXcd>;
    const int r = f.rank;
    const cd scale = cd(0.0, 1.0) / (2.0 * std::numbers::pi);
    MatForm x;
    for (const auto& [p, a] : f.terms)
        for (const auto& [mask, c] : p.terms()) {
            auto it = x.try_emplace(mask, Eigen::MatrixXcd::Zero(r, r)).first;
            it->second += scale * c * a;
        }
    auto mul = [&](const MatForm& a, const MatForm& b) {
        MatForm out;
        for (const auto& [ma, va] : a)
            for (const auto& [mb, vb] : b) {
                if (ma & mb) continue;
                auto it = out.try_emplace(ma | mb, Eigen::MatrixXcd::Zero(r, r)).first;
                it->second += static_cast<double>(wedge_sign(ma, mb)) * (va * vb);
            }
        return out;
    };
    MatForm term{{Mask{0}, Eigen::MatrixXcd::Identity(r, r)}};
    ComplexMultivector ch(m);
    for (int k = 0; 2 * k <= m; ++k) {
        for (const auto& [mask, v] : term) ch.add(mask, v.trace());
        term = mul(term, x);
        for (auto& [mask, v] : term) v /= static_cast<double>(k + 1);
    }
    const Mask top = (Mask{1} << m) - 1;
    cd total = 0;
    for (const auto& [mask, c] : phi.terms())
        if (grade_of(mask) % 2 == m % 2) {
            const cd ca = ch.coeff(top & ~mask);
            if (ca != cd(0)) total += ca * c * static_cast<double>(wedge_sign(top & ~mask, mask));
        }
    return orientation * total.real() * torus.covolume();
}

} // namespace calibra
