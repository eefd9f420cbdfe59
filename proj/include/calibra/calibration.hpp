#pragma once

#include "calibra/groups.hpp"
#include "calibra/linalg.hpp"
#include "calibra/multivector.hpp"
#include "calibra/torus.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace calibra {

struct ComassOptions {
    int restarts = 64;
    std::uint64_t seed = 0;
    int max_iterations = 500;
    double tolerance = 1e-12;
    int threads = 0; // 0: CALIBRA_THREADS or hardware concurrency
};

struct ComassReport {
    Multivector form;
    int k = 0;
    double estimate = 0;
    Subspace argmax_plane;
    int restarts = 0;
    bool converged = false;
    std::uint64_t seed = 0;
};

// Worker count: CALIBRA_THREADS if set and positive, else hardware concurrency.
int worker_threads();

ComassReport comass_estimate(const Multivector& form, int k, const ComassOptions& opts = {});

double calibration_value(const Multivector& form, const Subspace& c);
bool is_calibrated_plane(const Multivector& form, const Subspace& c, double tol = 1e-8);

// q(phi) = phi ^ phi ^ Phi / nu on the basis e^{ij} (i < j, lex order), nu = orientation * e^{1..m}.
// On ad(E)-valued forms the Killing pairing Re Tr(AB) of skew-Hermitian
// coefficients is negative definite, so the bundle quadratic form is -Q.
struct YangMillsQuadratic {
    Multivector phi;
    int dim = 0;
    int orientation = 1;
    Eigen::MatrixXd matrix;        // Q
    Eigen::VectorXd eigenvalues;   // of Q, ascending
    double top_eigenvalue = 0;     // of Q
    double bundle_top = 0;         // of -Q
    double normalization = 0;      // 1 / bundle_top, 0 if bundle_top <= 0
    Eigen::MatrixXd extremal;      // eigenspace of -Q at bundle_top

    bool is_calibrating(double tol = 1e-10) const { return bundle_top <= 1.0 + tol; }
    Multivector normalized() const { return phi * normalization; }
};

YangMillsQuadratic ym_quadratic(const Multivector& phi, int orientation = 1);

struct YmVerdict {
    bool is_calibrated = false;
    double energy = 0;  // |F|^2
    double q = 0;       // q_Phi(F)
    double slack = 0;   // |F|^2 - q_Phi(F)
};

YmVerdict classify_ym_calibrated(const CurvatureTensor& f, const Multivector& phi, int orientation = 1,
                                 double tol = 1e-10);

// int_T Tr exp((i / 2 pi) F) ^ Phi for constant F in orthonormal coordinates of V.
double chern_pairing(const CurvatureTensor& f, const Multivector& phi, const FlatTorus& torus, int orientation = 1);

} // namespace calibra
