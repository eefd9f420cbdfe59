#pragma once

#include "calibra/algebra.hpp"
#include "calibra/forms.hpp"
#include "calibra/linalg.hpp"
#include "calibra/multivector.hpp"

#include <optional>
#include <string>
#include <vector>

namespace calibra {

inline constexpr double classify_tolerance = 1e-8;

int ambient_rank(const Subspace& c, AlgebraLevel algebra);

// Stability of the span under right multiplication by every basis unit
// (the right module structure J_u(y) = y u).
struct ASubspaceCheck {
    bool value = false;
    double residual = 0;
};
ASubspaceCheck check_a_subspace(const Subspace& c, AlgebraLevel algebra);
bool is_a_subspace(const Subspace& c, AlgebraLevel algebra);

// Kernel of u -> omega_u|_c on Im A; columns are Im A vectors in e_1.. coordinates.
struct WitnessKernel {
    int dimension = 0;
    Eigen::MatrixXd basis;
    Eigen::VectorXd singular_values;
};
WitnessKernel lagrangian_kernel(const Subspace& c, AlgebraLevel algebra);

struct LagrangianWitness {
    AlgebraLevel algebra;
    int rank = 1;
    std::vector<Element> generators; // orthonormal basis of L
    std::vector<Multivector> two_forms;
    int kernel_dim = 0;
};
std::optional<LagrangianWitness> find_lagrangian_witness(const Subspace& c, AlgebraLevel algebra);
// Witness from a prescribed L, e.g. one transported by theta.
LagrangianWitness make_witness(AlgebraLevel algebra, int rank, const std::vector<Element>& generators);
double witness_residual(const Subspace& c, const LagrangianWitness& w);

struct ResidualStructure {
    Element v;
    double residual;
};
std::vector<ResidualStructure> residual_complex_structure(const Subspace& c, const LagrangianWitness& w);

enum class SpecialType { none, type_one, type_two, both };
std::string type_name(SpecialType t);

struct LambdaDeterminant {
    enum class Kind { trivial, complex_phase, quaternionic_line, octonionic_self };
    AlgebraLevel algebra;
    Kind kind = Kind::trivial;
    double lagrangian_angle = 0; // arg Omega(oriented frame) in [0, 2pi)
    double phase = 0;            // A(C) = e^{i phase} R^n with A in SU(n); lagrangian_angle / n
    std::optional<Element> line; // unit u in Im H, defined up to sign
    std::optional<Subspace> self;
    SpecialType type = SpecialType::none;
    double type_residual = 0;
};
LambdaDeterminant lambda_determinant(const Subspace& c, AlgebraLevel algebra, const CanonicalFormSet& forms);

enum class SpecialClass {
    not_lagrangian,
    lagrangian,
    special_lagrangian_phase_0,
    special_lagrangian_phase_pi_2,
    c_lagrangian,
    complex_lagrangian,
    associative,
    coassociative,
    cayley,
    not_calibrated,
    not_applicable,
};
std::string class_name(SpecialClass c);

struct SpecialClassification {
    SpecialClass cls = SpecialClass::not_applicable;
    std::vector<std::pair<std::string, double>> residuals;
};
SpecialClassification classify_special_lagrangian(const Subspace& c, const CanonicalFormSet& forms);

// max ||(I - P)(f_i x f_j)|| over frame pairs of a 3-plane in Im O.
double cross_product_closure(const Subspace& c);

// Constructions used by tests and the self-test.
Subspace quaternion_cayley_plane();        // H x {0} with Theta-calibrated orientation
Subspace complex_lagrangian_model(int n); // blockwise span{1, k} in H^n, L = span{i, j}
Subspace real_lagrangian(int n, double theta = 0.0);

} // namespace calibra
