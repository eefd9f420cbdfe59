#include "calibra/subspaces.hpp"
#include "calibra/error.hpp"

#include <cmath>
#include <numbers>

namespace calibra {

namespace {

double form_max(const Multivector& a) { return a.max_abs(); }

Eigen::MatrixXd right_unit(AlgebraLevel a, int u, int rank) { return block_action(Side::right, Element::unit(a, u), rank); }

Element imaginary_element(AlgebraLevel a, const Eigen::VectorXd& im) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(a.dim());
    v.tail(a.dim() - 1) = im;
    return Element(a, v);
}

// canonical sign: first significant component positive
Element canonical_sign(const Element& e) {
    for (int i = 0; i < e.dim(); ++i)
        if (std::abs(e[i]) > 1e-9) return e[i] < 0 ? -e : e;
    return e;
}

double wrap_angle(double a) {
    const double two_pi = 2 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a < 0) a += two_pi;
    if (a >= two_pi - 1e-12) a = 0;
    return a;
}

} // namespace

int ambient_rank(const Subspace& c, AlgebraLevel algebra) {
    const int d = algebra.dim();
    if (c.ambient_dim() % d != 0) fail(ErrorKind::dimension_mismatch, "ambient dimension is not a multiple of dim A");
    const int n = c.ambient_dim() / d;
    if (algebra.level == 3 && n != 1) fail(ErrorKind::dimension_mismatch, "octonionic ambient space must be O");
    return n;
}

ASubspaceCheck check_a_subspace(const Subspace& c, AlgebraLevel algebra) {
    const int n = ambient_rank(c, algebra);
    ASubspaceCheck out;
    for (int u = 1; u < algebra.dim(); ++u)
        out.residual = std::max(out.residual, containment_residual(right_unit(algebra, u, n) * c.frame(), c.frame()));
    out.value = out.residual <= 1e-10;
    return out;
}

bool is_a_subspace(const Subspace& c, AlgebraLevel algebra) { return check_a_subspace(c, algebra).value; }

WitnessKernel lagrangian_kernel(const Subspace& c, AlgebraLevel algebra) {
    const int n = ambient_rank(c, algebra);
    if (2 * c.k() != c.ambient_dim()) fail(ErrorKind::dimension_mismatch, "not middle dimensional");
    const int im = algebra.dim() - 1;
    const int pairs = c.k() * (c.k() - 1) / 2;
    WitnessKernel out;
    if (im == 0) {
        out.basis = Eigen::MatrixXd(0, 0);
        return out;
    }
    Eigen::MatrixXd map(pairs, im);
    for (int u = 1; u <= im; ++u) {
        const Multivector r = pullback(two_form_from_matrix(right_unit(algebra, u, n)), c.frame());
        map.col(u - 1) = two_form_vector(r.empty() ? Multivector(c.k()) : r);
    }
    if (pairs > 0) out.singular_values = Eigen::JacobiSVD<Eigen::MatrixXd>(map).singularValues();
    // all-zero map: everything is kernel
    out.basis = map.norm() <= 1e-12 ? Eigen::MatrixXd::Identity(im, im) : nullspace(map, rank_tolerance);
    out.dimension = static_cast<int>(out.basis.cols());
    return out;
}

LagrangianWitness make_witness(AlgebraLevel algebra, int rank, const std::vector<Element>& generators) {
    LagrangianWitness w;
    w.algebra = algebra;
    w.rank = rank;
    for (const auto& g : generators) {
        if (!(g.level() == algebra) || !g.is_imaginary(1e-10))
            fail(ErrorKind::invalid_argument, "witness generators must be imaginary elements of the algebra");
        w.generators.push_back(g);
        w.two_forms.push_back(right_multiplication_form(g, rank));
    }
    w.kernel_dim = static_cast<int>(generators.size());
    return w;
}

std::optional<LagrangianWitness> find_lagrangian_witness(const Subspace& c, AlgebraLevel algebra) {
    const WitnessKernel ker = lagrangian_kernel(c, algebra);
    const int half = algebra.dim() / 2;
    if (ker.dimension < half) return std::nullopt;
    std::vector<Element> gens;
    for (int i = 0; i < half; ++i) gens.push_back(imaginary_element(algebra, ker.basis.col(i)));
    LagrangianWitness w = make_witness(algebra, ambient_rank(c, algebra), gens);
    w.kernel_dim = ker.dimension;
    return w;
}

double witness_residual(const Subspace& c, const LagrangianWitness& w) {
    double r = 0;
    for (const auto& f : w.two_forms) r = std::max(r, form_max(pullback(f, c.frame())));
    return r;
}

std::vector<ResidualStructure> residual_complex_structure(const Subspace& c, const LagrangianWitness& w) {
    const int n = ambient_rank(c, w.algebra);
    if (n != w.rank) fail(ErrorKind::dimension_mismatch, "witness rank does not match subspace");
    if (witness_residual(c, w) > classify_tolerance) fail(ErrorKind::invalid_argument, "stale witness");
    const int im = w.algebra.dim() - 1;
    std::vector<ResidualStructure> out;
    if (im == 0) return out;
    Eigen::MatrixXd l(im, w.generators.size());
    for (std::size_t i = 0; i < w.generators.size(); ++i) l.col(i) = w.generators[i].coeffs().tail(im);
    const Eigen::MatrixXd perp = complement_basis(l);
    for (Eigen::Index j = 0; j < perp.cols(); ++j) {
        const Element v = imaginary_element(w.algebra, perp.col(j));
        const Eigen::MatrixXd jv = block_action(Side::right, v, n);
        out.push_back({v, containment_residual(jv * c.frame(), c.frame())});
    }
    return out;
}

std::string type_name(SpecialType t) {
    switch (t) {
    case SpecialType::type_one: return "type I";
    case SpecialType::type_two: return "type II";
    case SpecialType::both: return "type I and II";
    default: return "none";
    }
}

LambdaDeterminant lambda_determinant(const Subspace& c, AlgebraLevel algebra, const CanonicalFormSet& forms) {
    const auto witness = find_lagrangian_witness(c, algebra);
    if (!witness) fail(ErrorKind::invalid_argument, "uncertified input: subspace is not half-A-Lagrangian");
    if (!(forms.algebra == algebra) || forms.g2 || forms.ambient_dim != c.ambient_dim())
        fail(ErrorKind::dimension_mismatch, "form set does not match subspace");
    LambdaDeterminant out;
    out.algebra = algebra;
    const Eigen::MatrixXd f = c.oriented_frame();
    switch (algebra.level) {
    case 0: out.kind = LambdaDeterminant::Kind::trivial; break;
    case 1: {
        out.kind = LambdaDeterminant::Kind::complex_phase;
        const double re = evaluate(forms.at("hol_volume_re"), f), im = evaluate(forms.at("hol_volume_im"), f);
        out.lagrangian_angle = wrap_angle(std::atan2(im, re));
        out.phase = out.lagrangian_angle / forms.rank;
        const double s = std::abs(std::sin(out.lagrangian_angle)), co = std::abs(std::cos(out.lagrangian_angle));
        if (s <= classify_tolerance) out.type = SpecialType::type_one, out.type_residual = s;
        else if (co <= classify_tolerance) out.type = SpecialType::type_two, out.type_residual = co;
        else out.type_residual = std::min(s, co);
        break;
    }
    case 2: {
        out.kind = LambdaDeterminant::Kind::quaternionic_line;
        const auto rs = residual_complex_structure(c, *witness);
        if (rs.size() != 1) fail(ErrorKind::invalid_argument, "quaternionic witness must leave one direction");
        const Element u = canonical_sign(rs.front().v);
        out.line = u;
        // special (Omega_J|_C = 0) iff u = +-j; types I and II coincide
        out.type_residual = (u - Element::unit(quaternions, 2)).norm();
        out.type = out.type_residual <= classify_tolerance ? SpecialType::both : SpecialType::none;
        break;
    }
    default: {
        out.kind = LambdaDeterminant::Kind::octonionic_self;
        out.self = c;
        const double along = (c.frame().transpose() * Eigen::VectorXd::Unit(8, 0)).norm();
        if (std::abs(along - 1) <= classify_tolerance) out.type = SpecialType::type_one, out.type_residual = 1 - along;
        else if (along <= classify_tolerance) out.type = SpecialType::type_two, out.type_residual = along;
        else out.type_residual = std::min(along, 1 - along);
        break;
    }
    }
    return out;
}

std::string class_name(SpecialClass c) {
    switch (c) {
    case SpecialClass::not_lagrangian: return "not Lagrangian";
    case SpecialClass::lagrangian: return "Lagrangian";
    case SpecialClass::special_lagrangian_phase_0: return "special Lagrangian (phase 0)";
    case SpecialClass::special_lagrangian_phase_pi_2: return "special Lagrangian (phase pi/2)";
    case SpecialClass::c_lagrangian: return "C-Lagrangian";
    case SpecialClass::complex_lagrangian: return "complex Lagrangian";
    case SpecialClass::associative: return "associative";
    case SpecialClass::coassociative: return "coassociative";
    case SpecialClass::cayley: return "Cayley";
    case SpecialClass::not_calibrated: return "none";
    default: return "n/a";
    }
}

double cross_product_closure(const Subspace& c) {
    if (c.ambient_dim() != 7) fail(ErrorKind::dimension_mismatch, "cross product closure needs Im O");
    const Eigen::MatrixXd f = c.frame();
    double r = 0;
    for (int i = 0; i < c.k(); ++i)
        for (int j = i + 1; j < c.k(); ++j) {
            Eigen::VectorXd a = Eigen::VectorXd::Zero(8), b = Eigen::VectorXd::Zero(8);
            a.tail(7) = f.col(i);
            b.tail(7) = f.col(j);
            const Eigen::VectorXd x = cross_product(Element(octonions, a), Element(octonions, b)).coeffs().tail(7);
            r = std::max(r, (x - f * (f.transpose() * x)).norm());
        }
    return r;
}

SpecialClassification classify_special_lagrangian(const Subspace& c, const CanonicalFormSet& forms) {
    if (c.ambient_dim() != forms.ambient_dim) fail(ErrorKind::dimension_mismatch, "wrong ambient dimension");
    SpecialClassification out;
    const Eigen::MatrixXd f = c.oriented_frame();
    const double tol = classify_tolerance;
    auto restricted = [&](const std::string& name) { return form_max(form_restrict(forms.at(name), c)); };
    if (forms.g2) {
        const double om = evaluate(forms.at("g2_three"), f.leftCols(std::min(c.k(), 3)));
        if (c.k() == 3) {
            const double closure = cross_product_closure(c);
            out.residuals = {{"cross_closure", closure}, {"omega_minus_vol", std::abs(std::abs(om) - 1)}};
            out.cls = closure <= tol ? SpecialClass::associative : SpecialClass::not_calibrated;
        } else if (c.k() == 4) {
            const double r = restricted("g2_three");
            out.residuals = {{"omega_restricted", r},
                             {"psi_minus_vol", std::abs(std::abs(evaluate(forms.at("g2_four"), f)) - 1)}};
            out.cls = r <= tol ? SpecialClass::coassociative : SpecialClass::not_calibrated;
        } else {
            fail(ErrorKind::dimension_mismatch, "associative/coassociative planes have dimension 3 or 4");
        }
        return out;
    }
    if (2 * c.k() != c.ambient_dim()) fail(ErrorKind::dimension_mismatch, "not middle dimensional");
    switch (forms.algebra.level) {
    case 0: out.cls = SpecialClass::not_applicable; break;
    case 1: {
        const double w = restricted("kahler"), re = restricted("hol_volume_re"), im = restricted("hol_volume_im");
        out.residuals = {{"omega", w}, {"re_Omega", re}, {"im_Omega", im}};
        if (w > tol) out.cls = SpecialClass::not_lagrangian;
        else if (im <= tol) out.cls = SpecialClass::special_lagrangian_phase_0;
        else if (re <= tol) out.cls = SpecialClass::special_lagrangian_phase_pi_2;
        else out.cls = SpecialClass::lagrangian;
        break;
    }
    case 2: {
        const double wi = restricted("omega_i"), wj = restricted("omega_j"), wk = restricted("omega_k");
        out.residuals = {{"omega_I", wi}, {"omega_J", wj}, {"omega_K", wk}};
        if (wi <= tol && wk <= tol) out.cls = SpecialClass::complex_lagrangian;
        else if (find_lagrangian_witness(c, quaternions)) out.cls = SpecialClass::c_lagrangian;
        else out.cls = SpecialClass::not_lagrangian;
        break;
    }
    default: {
        const double v = evaluate(forms.at("spin7_four"), f);
        out.residuals = {{"theta_minus_vol", std::abs(std::abs(v) - 1)}, {"theta_value", v}};
        out.cls = std::abs(std::abs(v) - 1) <= tol ? SpecialClass::cayley : SpecialClass::not_calibrated;
        break;
    }
    }
    return out;
}

Subspace quaternion_cayley_plane() { return Subspace::coordinate(8, {1, 2, 3, 0}); }

Subspace complex_lagrangian_model(int n) {
    std::vector<int> axes;
    for (int b = 0; b < n; ++b) {
        axes.push_back(4 * b);
        axes.push_back(4 * b + 3);
    }
    return Subspace::coordinate(4 * n, axes);
}

Subspace real_lagrangian(int n, double theta) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(2 * n, n);
    for (int j = 0; j < n; ++j) {
        f(2 * j, j) = std::cos(theta);
        f(2 * j + 1, j) = std::sin(theta);
    }
    return Subspace(f);
}

} // namespace calibra
