#include "calibra/forms.hpp"
#include "calibra/error.hpp"

#include <atomic>
#include <cmath>
#include <mutex>

namespace calibra {

namespace {

void check_dim(int m) {
    if (m < 1 || m > max_form_dim) fail(ErrorKind::dimension_mismatch, "dimension overflow (m must be 1..16)");
}

double factorial(int k) {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

std::atomic<double> cache_perturbation{0.0};

void perturb(CanonicalFormSet& s) {
    const double eps = cache_perturbation.load();
    if (eps == 0.0) return;
    for (auto& [name, f] : s.forms)
        if (name != "volume" && !f.terms().empty()) f.add(f.terms().begin()->first, eps);
}

CanonicalFormSet make_set(AlgebraLevel algebra, int rank) {
    CanonicalFormSet s;
    s.algebra = algebra;
    s.rank = rank;
    s.ambient_dim = algebra.dim() * rank;
    check_dim(s.ambient_dim);
    const int m = s.ambient_dim;
    switch (algebra.level) {
    case 0: s.forms["volume"] = Multivector::volume(m); break;
    case 1: {
        s.forms["kahler"] = build_kahler(rank);
        auto [re, im] = build_holomorphic_volume(rank);
        s.forms["hol_volume_re"] = re;
        s.forms["hol_volume_im"] = im;
        s.forms["volume"] = Multivector::volume(m);
        break;
    }
    case 2: {
        auto [wi, wj, wk] = build_hyperkahler_triple(rank);
        s.forms["omega_i"] = wi;
        s.forms["omega_j"] = wj;
        s.forms["omega_k"] = wk;
        s.forms["quat_theta"] = build_quaternionic_theta(rank);
        s.forms["volume"] = Multivector::volume(m, rank % 2 ? -1 : 1);
        break;
    }
    case 3:
        if (rank != 1) fail(ErrorKind::invalid_argument, "octonionic forms exist only for rank 1");
        s.forms["spin7_four"] = build_spin7_four_form();
        s.forms["volume"] = Multivector::volume(8);
        break;
    }
    perturb(s);
    return s;
}

} // namespace

const Multivector& CanonicalFormSet::at(const std::string& name) const {
    auto it = forms.find(name);
    if (it == forms.end()) fail(ErrorKind::invalid_argument, "form '" + name + "' not defined for " + label());
    return it->second;
}

int CanonicalFormSet::orientation() const {
    const Multivector& v = at("volume");
    return v.coeff(static_cast<Mask>((std::uint64_t{1} << ambient_dim) - 1)) > 0 ? 1 : -1;
}

std::string CanonicalFormSet::label() const {
    if (g2) return "ImO";
    return algebra.name() + "^" + std::to_string(rank);
}

Multivector right_multiplication_form(const Element& u, int rank) {
    check_dim(u.dim() * rank);
    return two_form_from_matrix(block_action(Side::right, u, rank));
}

Multivector build_kahler(int n) {
    check_dim(2 * n);
    Multivector w(2 * n);
    for (int j = 0; j < n; ++j) w.add(indices_mask({2 * j, 2 * j + 1}), 1.0);
    return w;
}

std::pair<Multivector, Multivector> build_holomorphic_volume(int n) {
    check_dim(2 * n);
    const std::complex<double> i(0, 1);
    ComplexMultivector omega = ComplexMultivector::scalar(2 * n, 1.0);
    for (int j = 0; j < n; ++j) {
        ComplexMultivector dz = ComplexMultivector::basis(2 * n, Mask{1} << (2 * j)) +
                                ComplexMultivector::basis(2 * n, Mask{1} << (2 * j + 1), i);
        omega = omega.wedge(dz);
    }
    Multivector re(2 * n), im(2 * n);
    for (const auto& [m, c] : omega.terms()) {
        re.set(m, c.real());
        im.set(m, c.imag());
    }
    return {re, im};
}

std::array<Multivector, 3> build_hyperkahler_triple(int n) {
    check_dim(4 * n);
    return {right_multiplication_form(Element::unit(quaternions, 1), n),
            right_multiplication_form(Element::unit(quaternions, 2), n),
            right_multiplication_form(Element::unit(quaternions, 3), n)};
}

Multivector build_quaternionic_theta(int n) {
    auto [wi, wj, wk] = build_hyperkahler_triple(n);
    return wi.wedge(wi) + wj.wedge(wj) + wk.wedge(wk);
}

std::pair<Multivector, Multivector> build_hyperkahler_holomorphic_volume(int n) {
    auto [wi, wj, wk] = build_hyperkahler_triple(n);
    const int m = 4 * n;
    ComplexMultivector hol(m);
    for (const auto& [mask, c] : wj.terms()) hol.add(mask, c);
    for (const auto& [mask, c] : wk.terms()) hol.add(mask, std::complex<double>(0, c));
    const ComplexMultivector top = hol.power(n) * std::complex<double>(1.0 / factorial(n));
    Multivector re(m), im(m);
    for (const auto& [mask, c] : top.terms()) {
        re.set(mask, c.real());
        im.set(mask, c.imag());
    }
    return {re, im};
}

Multivector build_g2_three_form() {
    Multivector omega(7);
    for (int a = 1; a <= 7; ++a)
        for (int b = a + 1; b <= 7; ++b)
            for (int c = b + 1; c <= 7; ++c) {
                const Element x = Element::unit(octonions, a);
                const double v = inner(x, cross_product(Element::unit(octonions, b), Element::unit(octonions, c)));
                omega.set(indices_mask({a - 1, b - 1, c - 1}), v);
            }
    return omega;
}

Multivector build_g2_four_form() { return hodge_star(build_g2_three_form()); }

Multivector embed(const Multivector& a, int m, int offset) {
    if (offset < 0 || offset + a.dim() > m) fail(ErrorKind::dimension_mismatch, "embedding out of range");
    Multivector r(m);
    for (const auto& [mask, c] : a.terms()) r.set(mask << offset, c);
    return r;
}

Multivector build_spin7_four_form() {
    const Multivector omega = embed(build_g2_three_form(), 8, 1);
    const Multivector theta = embed(build_g2_four_form(), 8, 1);
    return omega.wedge(Multivector::basis(8, Mask{1})) - theta;
}

void set_form_cache_perturbation(double eps) { cache_perturbation.store(eps); }

const CanonicalFormSet& form_set(AlgebraLevel algebra, int rank) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, CanonicalFormSet> cache;
    if (rank < 1) fail(ErrorKind::invalid_argument, "rank must be positive");
    std::lock_guard lock(mu);
    auto it = cache.find({algebra.level, rank});
    if (it == cache.end()) it = cache.emplace(std::pair{algebra.level, rank}, make_set(algebra, rank)).first;
    return it->second;
}

const CanonicalFormSet& g2_form_set() {
    static const CanonicalFormSet s = [] {
        CanonicalFormSet r;
        r.algebra = octonions;
        r.rank = 1;
        r.ambient_dim = 7;
        r.g2 = true;
        r.forms["g2_three"] = build_g2_three_form();
        r.forms["g2_four"] = build_g2_four_form();
        r.forms["volume"] = Multivector::volume(7);
        perturb(r);
        return r;
    }();
    return s;
}

} // namespace calibra
