#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

namespace calibra {

inline constexpr double rank_tolerance = 1e-8;

using Rng = std::mt19937_64;

// Oriented k-plane in R^m.  The frame is orthonormal and spans the plane with
// the orientation of the input frame; `orientation` flips it on top of that.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(const Eigen::MatrixXd& frame, int orientation = 1);

    static Subspace coordinate(int m, const std::vector<int>& axes, int orientation = 1);
    static Subspace full(int m) ;

    int ambient_dim() const { return static_cast<int>(frame_.rows()); }
    int k() const { return static_cast<int>(frame_.cols()); }
    const Eigen::MatrixXd& frame() const { return frame_; }
    int orientation() const { return orientation_; }

    // Frame whose column order/sign carries the orientation.
    Eigen::MatrixXd oriented_frame() const;
    Eigen::MatrixXd projector() const { return frame_ * frame_.transpose(); }
    Subspace reversed() const { return Subspace(frame_, -orientation_, raw_tag{}); }
    Subspace transformed(const Eigen::MatrixXd& g) const;

private:
    struct raw_tag {};
    Subspace(const Eigen::MatrixXd& frame, int orientation, raw_tag) : frame_(frame), orientation_(orientation) {}

    Eigen::MatrixXd frame_;
    int orientation_ = 1;
};

// Orthonormal basis of ker(a); sigma < tol * sigma_max counts as zero.
Eigen::MatrixXd nullspace(const Eigen::MatrixXd& a, double tol = rank_tolerance);
int numerical_rank(const Eigen::MatrixXd& a, double tol = rank_tolerance);
// Orthonormal basis of the column span.
Eigen::MatrixXd range_basis(const Eigen::MatrixXd& a, double tol = rank_tolerance);
// Orthonormal basis of the orthogonal complement of span(a) in R^rows.
Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& a, double tol = rank_tolerance);

// Principal angles between spans of orthonormal bases (ascending).
Eigen::VectorXd principal_angles(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
// ||(I - P_b) a|| for orthonormal a, b: zero iff span a lies in span b.
double containment_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

Eigen::MatrixXd random_gaussian(int rows, int cols, Rng& rng);
Eigen::MatrixXd random_orthogonal(int m, Rng& rng);
Eigen::MatrixXd random_frame(int m, int k, Rng& rng);
Eigen::VectorXd random_unit(int m, Rng& rng);

// E_ab = e_a e_b^T - e_b e_a^T, a < b, in the same order as 2-form coefficients.
const std::vector<Eigen::MatrixXd>& so_basis(int m);
Eigen::MatrixXd skew_from_coords(int m, const Eigen::VectorXd& coords);
Eigen::MatrixXd expm(const Eigen::MatrixXd& x);

// Eigen-decomposition of a symmetric matrix, eigenvalues clustered at `tol`.
struct EigenCluster {
    double value;
    Eigen::MatrixXd basis;
};
std::vector<EigenCluster> cluster_eigen(const Eigen::MatrixXd& sym, double tol = 1e-8);

} // namespace calibra
