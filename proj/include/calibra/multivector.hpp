#pragma once

#include "calibra/error.hpp"

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <vector>

namespace calibra {

using Mask = std::uint32_t;

inline constexpr int max_form_dim = 16;
inline constexpr double prune_threshold = 1e-14;

inline int grade_of(Mask m) { return std::popcount(m); }

// Sign of e^a ^ e^b for disjoint masks: (-1)^(pairs i in a, j in b with i > j).
inline int wedge_sign(Mask a, Mask b) {
    int swaps = 0;
    for (Mask rest = b; rest; rest &= rest - 1) {
        const int j = std::countr_zero(rest);
        swaps += std::popcount(a >> (j + 1));
    }
    return (swaps & 1) ? -1 : 1;
}

inline std::vector<int> mask_indices(Mask m) {
    std::vector<int> out;
    for (; m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
}

inline Mask indices_mask(std::initializer_list<int> idx) {
    Mask m = 0;
    for (int i : idx) m |= Mask{1} << i;
    return m;
}

// Element of the exterior algebra of (R^m)*, basis e^I indexed by bitmask
// (bit i <-> dx^i, 0-based).  Absent keys are zero.
template <class T>
class BasicMultivector {
public:
    using Scalar = T;
    using Terms = std::map<Mask, T>;

    BasicMultivector() = default;
    explicit BasicMultivector(int dim) : dim_(dim) {
        if (dim < 0 || dim > max_form_dim) fail(ErrorKind::dimension_mismatch, "form dimension exceeds 16");
    }

    static BasicMultivector scalar(int dim, T c) {
        BasicMultivector r(dim);
        r.add(0, c);
        return r;
    }
    static BasicMultivector basis(int dim, Mask m, T c = T(1)) {
        BasicMultivector r(dim);
        if (dim < 32 && (m >> dim) != 0) fail(ErrorKind::dimension_mismatch, "basis index exceeds form dimension");
        r.add(m, c);
        return r;
    }
    static BasicMultivector basis(int dim, std::initializer_list<int> idx, T c = T(1)) {
        // ordered product dx^{i1} ^ ... ^ dx^{ik}
        BasicMultivector r = scalar(dim, c);
        for (int i : idx) r = r.wedge(basis(dim, Mask{1} << i));
        return r;
    }
    static BasicMultivector volume(int dim, int orientation = 1) {
        return basis(dim, dim == 0 ? Mask{0} : static_cast<Mask>((std::uint64_t{1} << dim) - 1), T(orientation));
    }

    int dim() const { return dim_; }
    const Terms& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    T coeff(Mask m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? T(0) : it->second;
    }

    void add(Mask m, T c) {
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) it->second += c;
        if (std::abs(it->second) < prune_threshold) terms_.erase(it);
    }
    void set(Mask m, T c) {
        if (std::abs(c) < prune_threshold) terms_.erase(m);
        else terms_[m] = c;
    }

    // -1 for zero or mixed grade.
    int grade() const {
        int g = -1;
        for (const auto& [m, c] : terms_) {
            const int k = grade_of(m);
            if (g == -1) g = k;
            else if (g != k) return -1;
        }
        return g;
    }
    bool is_pure(int k) const {
        for (const auto& [m, c] : terms_)
            if (grade_of(m) != k) return false;
        return true;
    }
    int max_grade() const {
        int g = -1;
        for (const auto& [m, c] : terms_) g = std::max(g, grade_of(m));
        return g;
    }
    BasicMultivector grade_component(int k) const {
        BasicMultivector r(dim_);
        for (const auto& [m, c] : terms_)
            if (grade_of(m) == k) r.terms_.emplace(m, c);
        return r;
    }

    double max_abs() const {
        double v = 0;
        for (const auto& [m, c] : terms_) v = std::max(v, static_cast<double>(std::abs(c)));
        return v;
    }

    BasicMultivector operator+(const BasicMultivector& o) const {
        check(o);
        BasicMultivector r = *this;
        for (const auto& [m, c] : o.terms_) r.add(m, c);
        return r;
    }
    BasicMultivector operator-(const BasicMultivector& o) const { return *this + o * T(-1); }
    BasicMultivector operator-() const { return *this * T(-1); }
    BasicMultivector operator*(T s) const {
        BasicMultivector r(dim_);
        for (const auto& [m, c] : terms_) r.set(m, c * s);
        return r;
    }
    BasicMultivector& operator+=(const BasicMultivector& o) { return *this = *this + o; }

    BasicMultivector wedge(const BasicMultivector& o) const {
        check(o);
        BasicMultivector r(dim_);
        for (const auto& [a, ca] : terms_)
            for (const auto& [b, cb] : o.terms_) {
                if (a & b) continue;
                const T v = ca * cb;
                r.add(a | b, wedge_sign(a, b) > 0 ? v : -v);
            }
        return r;
    }

    // Phi^k / k! summed over k (finite since nilpotent in positive degree).
    BasicMultivector exp() const {
        BasicMultivector r = scalar(dim_, T(1)), term = r;
        for (int k = 1; k <= dim_; ++k) {
            term = term.wedge(*this) * T(1.0 / k);
            if (term.empty()) break;
            r += term;
        }
        return r;
    }

    BasicMultivector power(int k) const {
        BasicMultivector r = scalar(dim_, T(1));
        for (int i = 0; i < k; ++i) r = r.wedge(*this);
        return r;
    }

    friend double max_abs_diff(const BasicMultivector& a, const BasicMultivector& b) { return (a - b).max_abs(); }

private:
    void check(const BasicMultivector& o) const {
        if (o.dim_ != dim_) fail(ErrorKind::dimension_mismatch, "form dimension mismatch");
    }

    int dim_ = 0;
    Terms terms_;
};

using Multivector = BasicMultivector<double>;
using ComplexMultivector = BasicMultivector<std::complex<double>>;

template <class T>
BasicMultivector<T> wedge(const BasicMultivector<T>& a, const BasicMultivector<T>& b) {
    return a.wedge(b);
}

struct Metric {
    Eigen::MatrixXd gram;

    static Metric euclidean(int m) { return Metric{Eigen::MatrixXd::Identity(m, m)}; }
    int dim() const { return static_cast<int>(gram.rows()); }
    bool is_identity() const { return gram.isIdentity(0.0); }
    void validate() const;
};

class Subspace;

Multivector hodge_star(const Multivector& a, const Metric& g, int orientation = 1);
Multivector hodge_star(const Multivector& a, int orientation = 1);
double form_inner(const Multivector& a, const Multivector& b, const Metric& g);
double form_inner(const Multivector& a, const Multivector& b);
inline double form_norm2(const Multivector& a) { return form_inner(a, a); }

// Pullback along the columns of an m x k frame: result lives on R^k.
Multivector pullback(const Multivector& a, const Eigen::MatrixXd& frame);
Multivector form_restrict(const Multivector& a, const Subspace& c);

// a(v_1, ..., v_k) for the columns of an m x k frame, degree-k part only.
double evaluate(const Multivector& a, const Eigen::MatrixXd& frame);

// Coefficient vector of a pure 2-form on the orthonormal basis e^{ab}, a < b (lex order).
Eigen::VectorXd two_form_vector(const Multivector& phi);
Multivector two_form_from_vector(int m, const Eigen::VectorXd& v);
// Skew matrix X with phi(x, y) = x^T X y, and back.
Eigen::MatrixXd two_form_matrix(const Multivector& phi);
Multivector two_form_from_matrix(const Eigen::MatrixXd& x);

// Masks of all k-subsets of {0..m-1} in lex order of index tuples.
const std::vector<Mask>& subsets(int m, int k);

} // namespace calibra
