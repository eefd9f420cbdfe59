#include "calibra/algebra.hpp"
#include "calibra/error.hpp"

#include <mutex>
#include <vector>

namespace calibra {

namespace {

Eigen::VectorXd conj_vec(const Eigen::VectorXd& x) {
    Eigen::VectorXd r = -x;
    r[0] = x[0];
    return r;
}

// (a,b)(c,d) = (ac - d b*, a* d + c b), second halves stored conjugated.
Eigen::VectorXd mul_vec(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const auto n = x.size();
    if (n == 1) return Eigen::VectorXd::Constant(1, x[0] * y[0]);
    const auto h = n / 2;
    const Eigen::VectorXd a = x.head(h), b = conj_vec(x.tail(h));
    const Eigen::VectorXd c = y.head(h), d = conj_vec(y.tail(h));
    Eigen::VectorXd r(n);
    r.head(h) = mul_vec(a, c) - mul_vec(d, conj_vec(b));
    r.tail(h) = conj_vec(mul_vec(conj_vec(a), d) + mul_vec(c, b));
    return r;
}

void require_same(const Element& x, const Element& y) {
    if (!(x.level() == y.level())) fail(ErrorKind::dimension_mismatch, "algebra level mismatch");
}

} // namespace

std::string AlgebraLevel::name() const {
    static const char* names[] = {"R", "C", "H", "O"};
    return names[level];
}

AlgebraLevel AlgebraLevel::checked(int level) {
    if (level < 0 || level > 3)
        fail(ErrorKind::invalid_argument, "algebra level must be 0..3 (O+O is not normed)");
    return AlgebraLevel{level};
}

AlgebraLevel AlgebraLevel::parse(const std::string& name) {
    if (name == "R" || name == "r" || name == "real") return reals;
    if (name == "C" || name == "c" || name == "complex") return complexes;
    if (name == "H" || name == "h" || name == "quaternion") return quaternions;
    if (name == "O" || name == "o" || name == "octonion") return octonions;
    fail(ErrorKind::malformed_input, "unknown algebra '" + name + "'");
}

Element::Element(AlgebraLevel level) : level_(AlgebraLevel::checked(level.level)) {
    coeffs_ = Eigen::VectorXd::Zero(level_.dim());
}

Element::Element(AlgebraLevel level, const Eigen::VectorXd& coeffs)
    : level_(AlgebraLevel::checked(level.level)), coeffs_(coeffs) {
    if (coeffs_.size() != level_.dim())
        fail(ErrorKind::dimension_mismatch, "coefficient vector length must be 2^level");
}

Element Element::unit(AlgebraLevel level, int index) {
    Element e(level);
    if (index < 0 || index >= e.dim()) fail(ErrorKind::invalid_argument, "basis index out of range");
    e.coeffs_[index] = 1.0;
    return e;
}

Element Element::im() const {
    Element r = *this;
    r.coeffs_[0] = 0.0;
    return r;
}

Element Element::operator+(const Element& o) const {
    require_same(*this, o);
    return Element(level_, coeffs_ + o.coeffs_);
}

Element Element::operator-(const Element& o) const {
    require_same(*this, o);
    return Element(level_, coeffs_ - o.coeffs_);
}

Element Element::operator-() const { return Element(level_, -coeffs_); }
Element Element::operator*(double s) const { return Element(level_, coeffs_ * s); }
Element Element::operator*(const Element& o) const { return cd_multiply(*this, o); }

double inner(const Element& x, const Element& y) {
    require_same(x, y);
    return x.coeffs().dot(y.coeffs());
}

Element cd_multiply(const Element& x, const Element& y) {
    require_same(x, y);
    return Element(x.level(), mul_vec(x.coeffs(), y.coeffs()));
}

Element cd_conjugate(const Element& x) { return Element(x.level(), conj_vec(x.coeffs())); }

Element cd_inverse(const Element& x) {
    const double n2 = x.coeffs().squaredNorm();
    if (n2 == 0.0) fail(ErrorKind::invalid_argument, "zero has no inverse");
    return cd_conjugate(x) * (1.0 / n2);
}

Element cross_product(const Element& x, const Element& y) {
    require_same(x, y);
    if (!(x.level() == octonions)) fail(ErrorKind::invalid_argument, "cross product requires octonions");
    return cd_multiply(cd_conjugate(y), x).im();
}

Element j_u_action(const Element& u, const Element& y) {
    require_same(u, y);
    if (u.level().level == 0 || !u.is_imaginary(1e-12) || std::abs(u.norm() - 1.0) > 1e-12)
        fail(ErrorKind::invalid_argument, "invalid complex-structure generator");
    return cd_multiply(y, u);
}

Eigen::MatrixXd as_real_matrix(Side side, const Element& x) {
    const int d = x.dim();
    Eigen::MatrixXd m(d, d);
    for (int j = 0; j < d; ++j) {
        const Element e = Element::unit(x.level(), j);
        m.col(j) = (side == Side::left ? cd_multiply(x, e) : cd_multiply(e, x)).coeffs();
    }
    return m;
}

Eigen::MatrixXd block_action(Side side, const Element& x, int rank) {
    const int d = x.dim();
    const Eigen::MatrixXd blk = as_real_matrix(side, x);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d * rank, d * rank);
    for (int b = 0; b < rank; ++b) m.block(b * d, b * d, d, d) = blk;
    return m;
}

const BasisProduct& basis_product(AlgebraLevel level, int i, int j) {
    static std::once_flag once;
    static std::array<std::vector<BasisProduct>, 4> tables;
    std::call_once(once, [] {
        for (int l = 0; l < 4; ++l) {
            const AlgebraLevel lv{l};
            const int d = lv.dim();
            tables[l].resize(d * d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    const Element p = cd_multiply(Element::unit(lv, a), Element::unit(lv, b));
                    Eigen::Index k;
                    p.coeffs().cwiseAbs().maxCoeff(&k);
                    tables[l][a * d + b] = {static_cast<int>(k), p[static_cast<int>(k)] > 0 ? 1 : -1};
                }
        }
    });
    const int d = level.dim();
    if (i < 0 || j < 0 || i >= d || j >= d) fail(ErrorKind::invalid_argument, "basis index out of range");
    return tables[level.level][i * d + j];
}

const Element& octonion_associator(int i, int j, int k) {
    static std::once_flag once;
    static std::vector<Element> table;
    std::call_once(once, [] {
        table.reserve(512);
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b)
                for (int c = 0; c < 8; ++c) {
                    const Element ea = Element::unit(octonions, a), eb = Element::unit(octonions, b),
                                  ec = Element::unit(octonions, c);
                    table.push_back((ea * eb) * ec - ea * (eb * ec));
                }
    });
    if (i < 0 || j < 0 || k < 0 || i >= 8 || j >= 8 || k >= 8)
        fail(ErrorKind::invalid_argument, "basis index out of range");
    return table[(i * 8 + j) * 8 + k];
}

} // namespace calibra
