#include "calibra/torus.hpp"
#include "calibra/error.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace calibra {

namespace {

constexpr cd I(0.0, 1.0);

int sign_pow(int e) { return (e % 2) ? -1 : 1; }

cd ipow(cd c, int n) {
    cd r = 1;
    for (int k = 0; k < n; ++k) r *= c;
    return r;
}

void require_n(int n) {
    if (n < 1 || 3 * n > max_form_dim) fail(ErrorKind::dimension_mismatch, "torus rank must be 1..5");
}

// Monomials of form ^ exp(F) containing every bit of `full`, with that block removed.
ComplexMultivector extract(const ComplexMultivector& product, Mask full,
                           const std::function<cd(Mask)>& weight) {
    ComplexMultivector out(product.dim());
    for (const auto& [m, c] : product.terms())
        if ((m & full) == full) out.add(m & ~full, c * weight(m));
    return out;
}

ComplexMultivector kernel_form(int n, cd c) {
    ComplexMultivector f(3 * n);
    for (int j = 0; j < n; ++j) f.add(indices_mask({MixedForm::y(n, j), MixedForm::dual(n, j)}), c);
    return f;
}

MixedForm forward(const MixedForm& form, cd c) {
    if (form.has_dual_factors()) fail(ErrorKind::dimension_mismatch, "input must not contain dual-fiber factors");
    const int n = form.n();
    const ComplexMultivector product = form.form().wedge(kernel_form(n, c).exp());
    const Mask dual = form.dual_mask();
    return MixedForm(n, extract(product, form.fiber_mask(), [&](Mask m) {
                         const int q = grade_of(m & dual);
                         return cd(sign_pow(n * (n - 1) / 2 + q * (n + 1)));
                     }));
}

bool is_asd(const Multivector& phi, const Metric& g, double tol) {
    return max_abs_diff(hodge_star(phi, g), phi * -1.0) <= tol * std::max(1.0, phi.max_abs());
}

bool is_sd(const Multivector& phi, const Metric& g, double tol) {
    return max_abs_diff(hodge_star(phi, g), phi) <= tol * std::max(1.0, phi.max_abs());
}

} // namespace

FlatTorus::FlatTorus(const Eigen::MatrixXd& lattice) : lattice_(lattice) {
    if (lattice.rows() != lattice.cols() || lattice.rows() == 0)
        fail(ErrorKind::dimension_mismatch, "lattice basis must be square");
    if (std::abs(lattice.determinant()) <= 1e-12) fail(ErrorKind::invalid_argument, "singular lattice");
}

FlatTorus dual_torus(const FlatTorus& t) { return FlatTorus(t.lattice().transpose().inverse()); }

Kernel parse_kernel(const std::string& name) {
    if (name == "syz") return Kernel::syz;
    if (name == "cohomology") return Kernel::cohomology;
    fail(ErrorKind::malformed_input, "unknown kernel '" + name + "'");
}

std::string kernel_name(Kernel k) { return k == Kernel::syz ? "syz" : "cohomology"; }

cd kernel_scale(Kernel k) { return k == Kernel::syz ? I : 2.0 * std::numbers::pi * I; }

MixedForm::MixedForm(int n, ComplexMultivector form) : n_(n), form_(std::move(form)) {
    require_n(n);
    if (form_.dim() != 3 * n) fail(ErrorKind::dimension_mismatch, "mixed form must live on 3n variables");
}

bool MixedForm::has_fiber_factors() const {
    for (const auto& [m, c] : form_.terms())
        if (m & fiber_mask()) return true;
    return false;
}

bool MixedForm::has_dual_factors() const {
    for (const auto& [m, c] : form_.terms())
        if (m & dual_mask()) return true;
    return false;
}

std::vector<std::string> MixedForm::variables() const {
    std::vector<std::string> v;
    for (int i = 1; i <= n_; ++i) v.push_back("x^" + std::to_string(i));
    for (int i = 1; i <= n_; ++i) v.push_back("y^" + std::to_string(i));
    for (int i = 1; i <= n_; ++i) v.push_back("y_" + std::to_string(i));
    return v;
}

MixedForm MixedForm::operator+(const MixedForm& o) const {
    if (o.n_ != n_) fail(ErrorKind::dimension_mismatch, "mixed form rank mismatch");
    return MixedForm(n_, form_ + o.form_);
}

MixedForm MixedForm::wedge(const MixedForm& o) const {
    if (o.n_ != n_) fail(ErrorKind::dimension_mismatch, "mixed form rank mismatch");
    return MixedForm(n_, form_.wedge(o.form_));
}

double max_abs_diff(const MixedForm& a, const MixedForm& b) {
    if (a.n() != b.n()) fail(ErrorKind::dimension_mismatch, "mixed form rank mismatch");
    return max_abs_diff(a.form(), b.form());
}

MixedForm poincare_curvature(int n, Kernel k) {
    require_n(n);
    return MixedForm(n, kernel_form(n, kernel_scale(k)));
}

MixedForm fiberwise_fourier(const MixedForm& form, Kernel k) { return forward(form, kernel_scale(k)); }

MixedForm inverse_fiberwise_fourier(const MixedForm& form, Kernel k) {
    if (form.has_fiber_factors()) fail(ErrorKind::dimension_mismatch, "input must not contain fiber factors");
    const int n = form.n();
    const ComplexMultivector product = form.form().wedge(poincare_curvature(n, k).form().exp());
    const cd norm = 1.0 / ipow(kernel_scale(k), n);
    return MixedForm(n, extract(product, form.dual_mask(), [&](Mask) { return norm; }));
}

MixedForm symplectic_exponential(const Eigen::MatrixXd& phi) {
    const int n = static_cast<int>(phi.rows());
    require_n(n);
    ComplexMultivector w(3 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (phi(i, j) != 0.0) w.add(indices_mask({MixedForm::x(n, i), MixedForm::y(n, j)}), phi(i, j));
    return MixedForm(n, w.exp());
}

MixedForm mirror_holomorphic_volume(const Eigen::MatrixXd& phi) {
    const int n = static_cast<int>(phi.rows());
    require_n(n);
    ComplexMultivector r = ComplexMultivector::scalar(3 * n, 1.0);
    for (int i = 0; i < n; ++i) {
        ComplexMultivector factor = ComplexMultivector::basis(3 * n, Mask{1} << MixedForm::dual(n, i), I);
        for (int j = 0; j < n; ++j)
            if (phi(i, j) != 0.0) factor.add(Mask{1} << MixedForm::x(n, j), phi(i, j));
        r = r.wedge(factor);
    }
    return MixedForm(n, r);
}

MixedForm complex_volume(int n) {
    require_n(n);
    ComplexMultivector r = ComplexMultivector::scalar(3 * n, 1.0);
    for (int j = 0; j < n; ++j) {
        ComplexMultivector factor = ComplexMultivector::basis(3 * n, Mask{1} << MixedForm::x(n, j));
        factor.add(Mask{1} << MixedForm::y(n, j), I);
        r = r.wedge(factor);
    }
    return MixedForm(n, r);
}

MixedForm mirror_symplectic_exponential(int n) {
    require_n(n);
    ComplexMultivector w(3 * n);
    for (int i = 0; i < n; ++i) w.add(indices_mask({MixedForm::x(n, i), MixedForm::dual(n, i)}), 1.0);
    return MixedForm(n, w.exp());
}

cd mirror_volume_constant(int n) { return ipow(I, n) * cd(sign_pow(n * (n - 1) / 2)); }

Eigen::MatrixXd cohomology_fourier_matrix(int n, int grade) {
    require_n(n);
    if (grade < 0 || grade > n) fail(ErrorKind::dimension_mismatch, "grade out of range");
    const auto& in = subsets(n, grade);
    const auto& out = subsets(n, n - grade);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(out.size(), in.size());
    for (std::size_t c = 0; c < in.size(); ++c) {
        // a class on T sits in the fiber slots; exp((i/2pi) F) = exp(-sum dy^j ^ dy_j)
        MixedForm f(n, ComplexMultivector::basis(3 * n, in[c] << n));
        const MixedForm image = forward(f, I * kernel_scale(Kernel::cohomology) / (2.0 * std::numbers::pi));
        for (std::size_t r = 0; r < out.size(); ++r) {
            const cd v = image.form().coeff(out[r] << (2 * n));
            t(r, c) = v.real();
        }
    }
    return t;
}

std::vector<CohomologyClass> cohomology_fourier(const std::vector<CohomologyClass>& classes, const FlatTorus& t) {
    const int n = t.n();
    std::vector<CohomologyClass> out;
    for (const auto& c : classes) {
        if (c.grade < 0 || c.grade > n) fail(ErrorKind::dimension_mismatch, "grade out of range");
        if (static_cast<std::size_t>(c.coeffs.size()) != subsets(n, c.grade).size())
            fail(ErrorKind::dimension_mismatch, "class has wrong number of coefficients");
        out.push_back({n - c.grade, cohomology_fourier_matrix(n, c.grade) * c.coeffs});
    }
    return out;
}

AsdTransformReport asd_transform_check(const CurvatureTensor& f, const FlatTorus& t) {
    f.validate();
    if (f.dim != 4 || t.n() != 4) fail(ErrorKind::dimension_mismatch, "ASD transform check needs T^4");
    if (f.rank != 1) fail(ErrorKind::invalid_argument, "only rank-1 constant curvature is modelled");
    const Metric g{t.gram()};
    const Metric gd{dual_torus(t).gram()};
    const Eigen::MatrixXd h2 = cohomology_fourier_matrix(4, 2);
    AsdTransformReport r;
    r.image.dim = 4;
    r.image.rank = 1;
    Multivector total_in(4), total_out(4);
    for (const auto& [phi, a] : f.terms) {
        const Multivector img = two_form_from_vector(4, h2 * two_form_vector(phi));
        r.image.terms.emplace_back(img, a);
        total_in += phi * a(0, 0).imag();
        total_out += img * a(0, 0).imag();
    }
    r.input_asd = is_asd(total_in, g, 1e-10);
    r.input_sd = is_sd(total_in, g, 1e-10);
    r.output_asd = is_asd(total_out, gd, 1e-10);
    r.output_sd = is_sd(total_out, gd, 1e-10);
    return r;
}

} // namespace calibra
