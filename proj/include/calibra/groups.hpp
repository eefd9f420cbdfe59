#pragma once

#include "calibra/algebra.hpp"
#include "calibra/linalg.hpp"
#include "calibra/multivector.hpp"

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace calibra {

struct TwistedCheck {
    bool is_twisted = false;
    std::optional<Eigen::MatrixXd> theta;
    std::optional<bool> is_special;
    double residual = 0;
};

// Searches theta in SO(A) with phi(v x) = phi(v) theta(x).
TwistedCheck twisted_isomorphism_check(const Eigen::MatrixXd& phi, AlgebraLevel algebra, int rank);

struct StabilizerAlgebra {
    int dimension = 0;
    std::vector<Eigen::MatrixXd> basis; // skew m x m, orthonormal in so(m) coordinates
};

// Derivation action of X in gl(m) on a constant form: pulls back each dx^a to sum_b X_ab dx^b.
Multivector lie_action(const Eigen::MatrixXd& x, const Multivector& form);
// g . form = (g^-1)^* form.
Multivector transform_form(const Eigen::MatrixXd& g, const Multivector& form);

StabilizerAlgebra stabilizer_algebra(const std::vector<Multivector>& forms);
StabilizerAlgebra stabilizer_algebra(const Multivector& form);

// Defining forms of G_A(n) (special = false) or H_A(n) (special = true).
std::vector<Multivector> structure_forms(AlgebraLevel algebra, int rank, bool special);
const StabilizerAlgebra& structure_algebra(AlgebraLevel algebra, int rank, bool special);
const StabilizerAlgebra& g2_algebra(); // in so(7)
// exp of a random element of the structure algebra.
Eigen::MatrixXd random_group_element(const StabilizerAlgebra& algebra, int m, Rng& rng, double scale = 1.0);

enum class ComponentRole {
    special,    // h_A
    trace,      // s_A
    structure,  // g_A when no special split exists
    complement, // outside g_A
};
std::string role_name(ComponentRole role);

struct TwoFormComponent {
    std::string name;
    ComponentRole role;
    Eigen::MatrixXd basis; // N x d, orthonormal, N = m(m-1)/2
    std::optional<double> eigenvalue;

    int dim() const { return static_cast<int>(basis.cols()); }
    Eigen::MatrixXd projector() const { return basis * basis.transpose(); }
};

struct TwoFormDecomposition {
    AlgebraLevel algebra;
    int rank = 1;
    int ambient_dim = 1;
    bool g2 = false;
    std::vector<TwoFormComponent> components;

    const TwoFormComponent& component(const std::string& name) const;
    bool has_special_split() const;
    std::string label() const;
};

TwoFormDecomposition decompose_two_forms(AlgebraLevel algebra, int rank);
TwoFormDecomposition decompose_g2_two_forms();

// Matrix of phi -> *(form ^ phi) on the orthonormal 2-form basis.
Eigen::MatrixXd star_wedge_operator(const Multivector& form, int orientation);

struct CurvatureTensor {
    int dim = 0;
    int rank = 1;
    std::vector<std::pair<Multivector, Eigen::MatrixXcd>> terms;

    void validate() const;
};

struct ConnectionClass {
    bool is_a_connection = false;
    std::optional<bool> is_special;
    std::vector<std::pair<std::string, double>> residuals;
};

ConnectionClass classify_connection(const CurvatureTensor& f, const TwoFormDecomposition& d, double tol = 1e-8);

} // namespace calibra
