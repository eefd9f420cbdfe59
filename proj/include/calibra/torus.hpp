#pragma once

#include "calibra/groups.hpp"
#include "calibra/multivector.hpp"

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace calibra {

using cd = std::complex<double>;

class FlatTorus {
public:
    explicit FlatTorus(const Eigen::MatrixXd& lattice);
    static FlatTorus standard(int n) { return FlatTorus(Eigen::MatrixXd::Identity(n, n)); }

    int n() const { return static_cast<int>(lattice_.rows()); }
    const Eigen::MatrixXd& lattice() const { return lattice_; } // columns generate the lattice
    // Metric in lattice coordinates.
    Eigen::MatrixXd gram() const { return lattice_.transpose() * lattice_; }
    double covolume() const { return std::abs(lattice_.determinant()); }

private:
    Eigen::MatrixXd lattice_;
};

FlatTorus dual_torus(const FlatTorus& t);

enum class Kernel { syz, cohomology };
Kernel parse_kernel(const std::string& name);
std::string kernel_name(Kernel k);
// Scalar c in F = c * sum dy^j ^ dy_j: i (syz) or 2 pi i (cohomology).
cd kernel_scale(Kernel k);

// Translation-invariant form on the total space, variables ordered
// (x^1..x^n ; y^1..y^n ; y_1..y_n) at bit positions 0..3n-1.
class MixedForm {
public:
    MixedForm() = default;
    MixedForm(int n, ComplexMultivector form);
    explicit MixedForm(int n) : MixedForm(n, ComplexMultivector(3 * n)) {}

    int n() const { return n_; }
    const ComplexMultivector& form() const { return form_; }

    static int x(int n, int i) { (void)n; return i; }
    static int y(int n, int j) { return n + j; }
    static int dual(int n, int j) { return 2 * n + j; }
    Mask base_mask() const { return (Mask{1} << n_) - 1; }
    Mask fiber_mask() const { return base_mask() << n_; }
    Mask dual_mask() const { return base_mask() << (2 * n_); }

    bool has_fiber_factors() const;
    bool has_dual_factors() const;
    std::vector<std::string> variables() const;

    MixedForm operator+(const MixedForm& o) const;
    MixedForm operator*(cd s) const { return MixedForm(n_, form_ * s); }
    MixedForm wedge(const MixedForm& o) const;

private:
    int n_ = 0;
    ComplexMultivector form_;
};

double max_abs_diff(const MixedForm& a, const MixedForm& b);

MixedForm poincare_curvature(int n, Kernel k = Kernel::syz);

// Integrate form ^ exp(F) over the fiber.  Sign convention: a monomial
// alpha ^ dy^n ^ ... ^ dy^1 (alpha free of fiber factors) integrates to alpha,
// followed by the pullback y_j -> -y_j on the dual factors.
MixedForm fiberwise_fourier(const MixedForm& form, Kernel k = Kernel::syz);
// Integrate over the dual fiber (normal-ordered extraction) against the same
// kernel and divide by c^n, so that it inverts fiberwise_fourier.
MixedForm inverse_fiberwise_fourier(const MixedForm& form, Kernel k = Kernel::syz);

// exp(sum phi_ij dx^i ^ dy^j) on M.
MixedForm symplectic_exponential(const Eigen::MatrixXd& phi);
// prod_i (sum_j phi_ij dx^j + i dy_i) on W, as written in the mirror identity.
MixedForm mirror_holomorphic_volume(const Eigen::MatrixXd& phi);
// prod_j (dx^j + i dy^j) on M.
MixedForm complex_volume(int n);
// exp(sum dx^i ^ dy_i) on W.
MixedForm mirror_symplectic_exponential(int n);
// Global constant in Omega_M -> kappa_n exp(omega_W) under the sign convention above.
cd mirror_volume_constant(int n);

struct CohomologyClass {
    int grade = 0;
    Eigen::VectorXd coeffs; // over subsets(n, grade)
};

// Matrix of the transform H^k(T) -> H^{n-k}(T*) in lattice(-dual) monomial bases.
Eigen::MatrixXd cohomology_fourier_matrix(int n, int grade);
std::vector<CohomologyClass> cohomology_fourier(const std::vector<CohomologyClass>& classes, const FlatTorus& t);

struct AsdTransformReport {
    CurvatureTensor image;
    bool input_asd = false;
    bool input_sd = false;
    bool output_asd = false;
    bool output_sd = false;
};
// Constant abelian curvature on T^4 (lattice coordinates) mapped through H^2.
AsdTransformReport asd_transform_check(const CurvatureTensor& f, const FlatTorus& t);

} // namespace calibra
