#include "calibra/groups.hpp"
#include "calibra/error.hpp"
#include "calibra/forms.hpp"

#include <cmath>
#include <map>
#include <functional>
#include <mutex>
#include <tuple>

namespace calibra {

namespace {

int permutation_sign(std::vector<int> seq) {
    int sign = 1;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (seq[i] > seq[j]) sign = -sign;
    return sign;
}

Eigen::VectorXd flatten(const Multivector& a, int k) {
    const auto& basis = subsets(a.dim(), k);
    Eigen::VectorXd v(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) v[i] = a.coeff(basis[i]);
    return v;
}

std::complex<double> complex_det(const Eigen::MatrixXd& phi, int n) {
    Eigen::MatrixXcd c(n, n);
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) c(r, s) = {phi(2 * r, 2 * s), phi(2 * r + 1, 2 * s)};
    return c.determinant();
}

Eigen::MatrixXd apply_to_two_forms(int m, const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& f) {
    const auto& basis = subsets(m, 2);
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd op(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Unit(n, j);
        op.col(j) = two_form_vector(two_form_from_matrix(f(two_form_matrix(two_form_from_vector(m, e)))));
    }
    return op;
}

TwoFormComponent make_component(std::string name, ComponentRole role, Eigen::MatrixXd basis,
                                std::optional<double> ev = std::nullopt) {
    return TwoFormComponent{std::move(name), role, std::move(basis), ev};
}

TwoFormDecomposition eigen_decomposition(const Multivector& form, int orientation, int big, int small,
                                         const std::string& big_name, const std::string& small_name,
                                         ComponentRole big_role) {
    const Eigen::MatrixXd op = star_wedge_operator(form, orientation);
    auto clusters = cluster_eigen(op);
    TwoFormDecomposition d;
    for (const auto& c : clusters) {
        if (c.basis.cols() == big) d.components.push_back(make_component(big_name, big_role, c.basis, c.value));
        else if (c.basis.cols() == small)
            d.components.push_back(make_component(small_name, ComponentRole::complement, c.basis, c.value));
        else fail(ErrorKind::invalid_argument, "unexpected eigenspace dimension in 2-form decomposition");
    }
    if (d.components.size() != 2) fail(ErrorKind::invalid_argument, "expected exactly two eigenspaces");
    if (d.components[0].role != big_role) std::swap(d.components[0], d.components[1]);
    return d;
}

} // namespace

TwistedCheck twisted_isomorphism_check(const Eigen::MatrixXd& phi, AlgebraLevel algebra, int rank) {
    if (phi.rows() != phi.cols()) fail(ErrorKind::dimension_mismatch, "linear map must be square");
    const int d = algebra.dim();
    const int m = d * rank;
    if (phi.rows() != m) fail(ErrorKind::dimension_mismatch, "map dimension incompatible with algebra and rank");
    if (algebra.level == 3 && rank != 1) fail(ErrorKind::dimension_mismatch, "octonionic maps exist only for rank 1");
    TwistedCheck out;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m, m);
    if ((phi.transpose() * phi - eye).cwiseAbs().maxCoeff() > 1e-9) return out;

    Eigen::MatrixXd a(m * m, d);
    std::vector<Eigen::MatrixXd> right(d);
    for (int k = 0; k < d; ++k) {
        right[k] = block_action(Side::right, Element::unit(algebra, k), rank);
        const Eigen::MatrixXd rk = right[k] * phi;
        a.col(k) = Eigen::Map<const Eigen::VectorXd>(rk.data(), m * m);
    }
    Eigen::MatrixXd theta(d, d);
    double res2 = 0;
    const auto qr = a.colPivHouseholderQr();
    for (int c = 0; c < d; ++c) {
        const Eigen::MatrixXd rhs = phi * right[c];
        const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), m * m);
        theta.col(c) = qr.solve(b);
        res2 += (a * theta.col(c) - b).squaredNorm();
    }
    out.residual = std::sqrt(res2);
    if (out.residual > 1e-8 * m) return out;
    if ((theta.transpose() * theta - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-8 ||
        theta.determinant() < 0)
        return out;
    out.is_twisted = true;
    out.theta = theta;
    switch (algebra.level) {
    case 0: out.is_special = phi.determinant() > 0; break;
    case 1: out.is_special = std::abs(complex_det(phi, rank) - 1.0) <= 1e-8; break;
    case 2: out.is_special = (theta - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-8; break;
    case 3: {
        const bool fixes_one = (phi.col(0) - Eigen::VectorXd::Unit(8, 0)).cwiseAbs().maxCoeff() <= 1e-8;
        bool preserves = false;
        if (fixes_one) {
            const Eigen::MatrixXd g7 = phi.bottomRightCorner(7, 7);
            const Multivector omega = build_g2_three_form();
            preserves = max_abs_diff(transform_form(g7, omega), omega) <= 1e-8;
        }
        out.is_special = fixes_one && preserves;
        break;
    }
    }
    return out;
}

Multivector lie_action(const Eigen::MatrixXd& x, const Multivector& form) {
    const int m = form.dim();
    if (x.rows() != m || x.cols() != m) fail(ErrorKind::dimension_mismatch, "matrix does not match form dimension");
    Multivector r(m);
    for (const auto& [mask, c] : form.terms()) {
        const std::vector<int> idx = mask_indices(mask);
        for (std::size_t p = 0; p < idx.size(); ++p)
            for (int b = 0; b < m; ++b) {
                const double xb = x(idx[p], b);
                if (xb == 0.0) continue;
                if (b != idx[p] && (mask >> b & 1)) continue;
                std::vector<int> seq = idx;
                seq[p] = b;
                const Mask nm = (mask & ~(Mask{1} << idx[p])) | (Mask{1} << b);
                r.add(nm, c * xb * permutation_sign(seq));
            }
    }
    return r;
}

Multivector transform_form(const Eigen::MatrixXd& g, const Multivector& form) {
    if (g.rows() != form.dim() || g.cols() != form.dim())
        fail(ErrorKind::dimension_mismatch, "matrix does not match form dimension");
    return pullback(form, g.inverse());
}

StabilizerAlgebra stabilizer_algebra(const std::vector<Multivector>& forms) {
    if (forms.empty()) fail(ErrorKind::invalid_argument, "no forms given");
    const int m = forms.front().dim();
    const auto& so = so_basis(m);
    std::vector<Eigen::VectorXd> blocks(so.size());
    Eigen::Index rows = 0;
    std::vector<std::vector<Eigen::VectorXd>> cols(so.size());
    for (std::size_t j = 0; j < so.size(); ++j)
        for (const auto& f : forms) {
            if (f.dim() != m) fail(ErrorKind::dimension_mismatch, "forms live in different dimensions");
            for (int k = 0; k <= m; ++k) {
                const Multivector fk = f.grade_component(k);
                if (fk.empty()) continue;
                cols[j].push_back(flatten(lie_action(so[j], fk), k));
            }
        }
    for (const auto& v : cols[0]) rows += v.size();
    Eigen::MatrixXd a(rows, so.size());
    for (std::size_t j = 0; j < so.size(); ++j) {
        Eigen::Index r = 0;
        for (const auto& v : cols[j]) {
            a.col(j).segment(r, v.size()) = v;
            r += v.size();
        }
    }
    const Eigen::MatrixXd ker = nullspace(a);
    StabilizerAlgebra out;
    out.dimension = static_cast<int>(ker.cols());
    for (Eigen::Index c = 0; c < ker.cols(); ++c) out.basis.push_back(skew_from_coords(m, ker.col(c)));
    return out;
}

StabilizerAlgebra stabilizer_algebra(const Multivector& form) { return stabilizer_algebra(std::vector{form}); }

std::vector<Multivector> structure_forms(AlgebraLevel algebra, int rank, bool special) {
    const CanonicalFormSet& s = form_set(algebra, rank);
    const int m = s.ambient_dim;
    switch (algebra.level) {
    case 0: return {special ? s.at("volume") : Multivector::scalar(m, 1.0)};
    case 1:
        if (special) return {s.at("kahler"), s.at("hol_volume_re"), s.at("hol_volume_im")};
        return {s.at("kahler")};
    case 2:
        if (special) return {s.at("omega_i"), s.at("omega_j"), s.at("omega_k")};
        return {s.at("quat_theta")};
    default:
        if (special) return {s.at("spin7_four"), Multivector::basis(8, Mask{1})};
        return {s.at("spin7_four")};
    }
}

const StabilizerAlgebra& structure_algebra(AlgebraLevel algebra, int rank, bool special) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, bool>, StabilizerAlgebra> cache;
    std::lock_guard lock(mu);
    auto key = std::tuple{algebra.level, rank, special};
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, stabilizer_algebra(structure_forms(algebra, rank, special))).first;
    return it->second;
}

const StabilizerAlgebra& g2_algebra() {
    static const StabilizerAlgebra a = stabilizer_algebra(build_g2_three_form());
    return a;
}

Eigen::MatrixXd random_group_element(const StabilizerAlgebra& algebra, int m, Rng& rng, double scale) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, m);
    for (const auto& b : algebra.basis) x += scale * nd(rng) * b;
    return expm(x);
}

std::string role_name(ComponentRole role) {
    switch (role) {
    case ComponentRole::special: return "h";
    case ComponentRole::trace: return "s";
    case ComponentRole::structure: return "g";
    default: return "complement";
    }
}

const TwoFormComponent& TwoFormDecomposition::component(const std::string& name) const {
    for (const auto& c : components)
        if (c.name == name) return c;
    fail(ErrorKind::invalid_argument, "no component named '" + name + "'");
}

bool TwoFormDecomposition::has_special_split() const {
    for (const auto& c : components)
        if (c.role == ComponentRole::special) return true;
    return false;
}

std::string TwoFormDecomposition::label() const {
    return g2 ? "ImO" : algebra.name() + "^" + std::to_string(rank);
}

Eigen::MatrixXd star_wedge_operator(const Multivector& form, int orientation) {
    const int m = form.dim();
    const auto n = static_cast<Eigen::Index>(subsets(m, 2).size());
    Eigen::MatrixXd op(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Multivector e = two_form_from_vector(m, Eigen::VectorXd::Unit(n, j));
        op.col(j) = two_form_vector(hodge_star(form.wedge(e), orientation));
    }
    return op;
}

TwoFormDecomposition decompose_two_forms(AlgebraLevel algebra, int rank) {
    const CanonicalFormSet& s = form_set(algebra, rank);
    const int m = s.ambient_dim;
    const auto n = static_cast<Eigen::Index>(subsets(m, 2).size());
    TwoFormDecomposition d;
    switch (algebra.level) {
    case 0:
        d.components.push_back(make_component("so(n)", ComponentRole::special, Eigen::MatrixXd::Identity(n, n)));
        break;
    case 1: {
        const Eigen::MatrixXd j = block_action(Side::right, Element::unit(complexes, 1), rank);
        const Eigen::MatrixXd op =
            apply_to_two_forms(m, [&](const Eigen::MatrixXd& x) { return Eigen::MatrixXd(j.transpose() * x * j); });
        Eigen::MatrixXd one_one, two_zero = Eigen::MatrixXd(n, 0);
        for (const auto& c : cluster_eigen(op)) {
            if (std::abs(c.value - 1.0) < 1e-8) one_one = c.basis;
            else if (std::abs(c.value + 1.0) < 1e-8) two_zero = c.basis;
        }
        Eigen::VectorXd w = two_form_vector(s.at("kahler"));
        w.normalize();
        const Eigen::MatrixXd p = one_one * one_one.transpose() - w * w.transpose();
        d.components.push_back(make_component("L11_0", ComponentRole::special, range_basis(p)));
        d.components.push_back(make_component("R_omega", ComponentRole::trace, w));
        d.components.push_back(make_component("L20_02", ComponentRole::complement, two_zero));
        break;
    }
    case 2: {
        Eigen::MatrixXd stacked(3 * n, n);
        Eigen::MatrixXd trace(n, 3);
        for (int u = 1; u <= 3; ++u) {
            const Eigen::MatrixXd ju = block_action(Side::right, Element::unit(quaternions, u), rank);
            stacked.middleRows((u - 1) * n, n) =
                apply_to_two_forms(m, [&](const Eigen::MatrixXd& x) { return Eigen::MatrixXd(ju.transpose() * x * ju); }) -
                Eigen::MatrixXd::Identity(n, n);
            trace.col(u - 1) = two_form_vector(right_multiplication_form(Element::unit(quaternions, u), rank));
        }
        const Eigen::MatrixXd symv = nullspace(stacked);
        const Eigen::MatrixXd syms = range_basis(trace);
        Eigen::MatrixXd both(n, symv.cols() + syms.cols());
        both << symv, syms;
        d.components.push_back(make_component("Sym2V", ComponentRole::special, symv));
        d.components.push_back(make_component("Sym2S", ComponentRole::trace, syms));
        d.components.push_back(make_component("L2_0V_Sym2S", ComponentRole::complement, complement_basis(both)));
        break;
    }
    default: {
        auto e = eigen_decomposition(s.at("spin7_four"), s.orientation(), 21, 7, "L2_21", "L2_7",
                                     ComponentRole::structure);
        d.components = std::move(e.components);
        break;
    }
    }
    d.algebra = algebra;
    d.rank = rank;
    d.ambient_dim = m;
    return d;
}

TwoFormDecomposition decompose_g2_two_forms() {
    const CanonicalFormSet& s = g2_form_set();
    auto d = eigen_decomposition(s.at("g2_three"), s.orientation(), 14, 7, "L2_14", "L2_7", ComponentRole::special);
    d.algebra = octonions;
    d.rank = 1;
    d.ambient_dim = 7;
    d.g2 = true;
    return d;
}

void CurvatureTensor::validate() const {
    for (const auto& [phi, a] : terms) {
        if (phi.dim() != dim) fail(ErrorKind::dimension_mismatch, "curvature form dimension mismatch");
        if (!phi.is_pure(2)) fail(ErrorKind::dimension_mismatch, "curvature components must be 2-forms");
        if (a.rows() != rank || a.cols() != rank) fail(ErrorKind::dimension_mismatch, "coefficient matrix has wrong rank");
        if ((a + a.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            fail(ErrorKind::invalid_argument, "coefficient matrices must be skew-Hermitian");
    }
}

ConnectionClass classify_connection(const CurvatureTensor& f, const TwoFormDecomposition& d, double tol) {
    f.validate();
    if (f.dim != d.ambient_dim) fail(ErrorKind::dimension_mismatch, "curvature does not match decomposition");
    ConnectionClass out;
    double outside = 0, trace = 0, total = 0;
    for (const auto& c : d.components) {
        const Eigen::MatrixXd p = c.projector();
        // |P F|^2 = sum_ab <P phi_a, P phi_b> Re Tr(A_a A_b^dagger)
        double n2 = 0;
        for (const auto& [pa, aa] : f.terms) {
            const Eigen::VectorXd va = p * two_form_vector(pa);
            for (const auto& [pb, ab] : f.terms)
                n2 += va.dot(p * two_form_vector(pb)) * (aa * ab.adjoint()).trace().real();
        }
        const double r = std::sqrt(std::max(0.0, n2));
        out.residuals.emplace_back(c.name, r);
        total += n2;
        if (c.role == ComponentRole::complement) outside += n2;
        if (c.role == ComponentRole::trace) trace += n2;
    }
    const double scale = std::max(1.0, std::sqrt(total));
    out.is_a_connection = std::sqrt(outside) <= tol * scale;
    if (d.has_special_split()) out.is_special = out.is_a_connection && std::sqrt(trace) <= tol * scale;
    return out;
}

} // namespace calibra
