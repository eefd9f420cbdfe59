#pragma once

#include "calibra/algebra.hpp"
#include "calibra/multivector.hpp"

#include <array>
#include <map>
#include <string>
#include <utility>

namespace calibra {

// Coordinates on A^n: real index b * 2^a + c is component c of block b.
// On C^n that is (x1, y1, x2, y2, ...); on O it is (e0, e1, ..., e7).
struct CanonicalFormSet {
    AlgebraLevel algebra;
    int rank = 1;
    int ambient_dim = 1;
    bool g2 = false; // Im O = R^7 rather than O
    std::map<std::string, Multivector> forms;

    const Multivector& at(const std::string& name) const;
    bool has(const std::string& name) const { return forms.count(name) != 0; }
    // Sign of the volume form relative to e^0 ^ ... ^ e^{m-1}.
    int orientation() const;
    std::string label() const;
};

// omega_u(x, y) = <x, y u>, blockwise on A^n.
Multivector right_multiplication_form(const Element& u, int rank);

Multivector build_kahler(int n);
std::pair<Multivector, Multivector> build_holomorphic_volume(int n);
std::array<Multivector, 3> build_hyperkahler_triple(int n);
Multivector build_quaternionic_theta(int n);
Multivector build_g2_three_form();
Multivector build_g2_four_form();
Multivector build_spin7_four_form();

// Re and Im of (omega_J + i omega_K)^n / n!, the holomorphic volume for I.
std::pair<Multivector, Multivector> build_hyperkahler_holomorphic_volume(int n);

// Shift a form on R^k into coordinates offset..offset+k-1 of R^m.
Multivector embed(const Multivector& a, int m, int offset);

const CanonicalFormSet& form_set(AlgebraLevel algebra, int rank);
const CanonicalFormSet& g2_form_set();

// Test hook: canonical form sets built after this call carry an additive error eps.
void set_form_cache_perturbation(double eps);

} // namespace calibra
