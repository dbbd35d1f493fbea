#pragma once

// Dense reference constructions of every linear operator, built directly from
// index formulas rather than through the matrix-free code paths. Intended for
// small instances only (oracles in tests and `tisr solve --oracle-check`).

#include <Eigen/Dense>

#include "tisr/degradation.hpp"
#include "tisr/selfsim.hpp"

namespace tisr::dense {

Eigen::VectorXd to_vector(const Image& img);
Image to_image(const Eigen::VectorXd& v, std::size_t height, std::size_t width);

Eigen::MatrixXd blur_matrix(std::size_t h, std::size_t w, const Kernel& kernel);
Eigen::MatrixXd decimation_matrix(std::size_t h, std::size_t w, std::size_t factor);
Eigen::MatrixXd shift_matrix(std::size_t h, std::size_t w, int rows, int cols);
/// [D B; D B S], 2mn x MN.
Eigen::MatrixXd stacked_matrix(const DegradationModel& model);
/// q^2 x (h w) selection matrix of patch k.
Eigen::MatrixXd patch_matrix(const PatchGrid& grid, std::size_t k);
/// sum alpha (P_i - P_j)^T (P_i - P_j).
Eigen::MatrixXd laplacian_matrix(const SelfSimGraph& graph);

Eigen::VectorXd stack(const StackedObservation& obs);

/// Minimizer of 1/2 ||H z - y||^2 + lambda f(z) via the normal equations
/// (H^T H + lambda L) z = H^T y, using a rank-revealing solve so that
/// singular systems return the minimum-norm solution.
Image direct_minimizer(const StackedObservation& obs, const DegradationModel& model,
                       const SelfSimGraph& graph, double lambda);

/// Woodbury form of (H^T H + c I)^{-1} rhs:
/// (1/c)(I - (1/c) H^T Phi H) rhs with Phi = (I + H H^T / c)^{-1}.
Image woodbury_solve(const DegradationModel& model, double c, const Image& rhs);

}  // namespace tisr::dense
