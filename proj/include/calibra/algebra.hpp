#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

namespace calibra {

// Cayley-Dickson level: 0 = R, 1 = C, 2 = H, 3 = O.
struct AlgebraLevel {
    int level = 0;

    constexpr int dim() const { return 1 << level; }
    std::string name() const;
    static AlgebraLevel checked(int level);
    static AlgebraLevel parse(const std::string& name);

    friend bool operator==(AlgebraLevel a, AlgebraLevel b) { return a.level == b.level; }
};

inline constexpr AlgebraLevel reals{0};
inline constexpr AlgebraLevel complexes{1};
inline constexpr AlgebraLevel quaternions{2};
inline constexpr AlgebraLevel octonions{3};

// Coefficients on e_0 = 1, e_1, ..., e_{2^a - 1}.
// Doubling step k stores (a, b) as coeffs(a) followed by coeffs(conj b), so
// e_{2^k + j} = e_j * e_{2^k}.  This is the ordering in which e1 e2 = e3.
class Element {
public:
    Element() = default;
    explicit Element(AlgebraLevel level);
    Element(AlgebraLevel level, const Eigen::VectorXd& coeffs);

    static Element unit(AlgebraLevel level, int index);
    static Element one(AlgebraLevel level) { return unit(level, 0); }

    AlgebraLevel level() const { return level_; }
    int dim() const { return level_.dim(); }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }
    double operator[](int i) const { return coeffs_[i]; }

    double re() const { return coeffs_[0]; }
    Element im() const;
    double norm() const { return coeffs_.norm(); }
    bool is_imaginary(double tol = 1e-12) const { return std::abs(coeffs_[0]) <= tol; }

    Element operator+(const Element& o) const;
    Element operator-(const Element& o) const;
    Element operator-() const;
    Element operator*(double s) const;
    Element operator*(const Element& o) const;

private:
    AlgebraLevel level_{};
    Eigen::VectorXd coeffs_;
};

double inner(const Element& x, const Element& y);

Element cd_multiply(const Element& x, const Element& y);
Element cd_conjugate(const Element& x);
Element cd_inverse(const Element& x);

// x * y = Im(conj(y) x), octonions only.
Element cross_product(const Element& x, const Element& y);

// J_u(y) = y u for a unit imaginary u.
Element j_u_action(const Element& u, const Element& y);

enum class Side { left, right };

// Matrix of y -> x y (left) or y -> y x (right) in the e-basis.
Eigen::MatrixXd as_real_matrix(Side side, const Element& x);

// Block-diagonal action on A^n: v = (v_1, ..., v_n), v_j -> v_j x (or x v_j).
Eigen::MatrixXd block_action(Side side, const Element& x, int rank);

// Memoized table of e_i e_j = sign * e_index at a given level.
struct BasisProduct {
    int index;
    int sign;
};
const BasisProduct& basis_product(AlgebraLevel level, int i, int j);

// Associator [e_i, e_j, e_k] = (e_i e_j) e_k - e_i (e_j e_k) for octonion units.
const Element& octonion_associator(int i, int j, int k);

} // namespace calibra
