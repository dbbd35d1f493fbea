#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "tisr/degradation.hpp"
#include "tisr/selfsim.hpp"

namespace tisr {

struct SolverConfig {
  double lambda = 0.1;      // regularization strength
  double c = 2.0;           // ADMM penalty
  int admm_iters = 30;
  double cg_tol = 1e-8;
  int cg_max_iter = 500;
  double primal_tol = 1e-6;  // 0 disables early stopping

  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double primal_residual = 0.0;  // ||x - z|| / max(||z||, 1)
  int cg_iters_z = 0;
  int cg_iters_x = 0;
};

/// ADMM iterates; d is the scaled dual variable.
struct SolverState {
  Image x;
  Image z;
  Image d;
  int iter = 0;
  std::vector<IterationRecord> history;
};

struct SolveResult {
  Image z;
  SolverState state;
};

/// 1/2 ||D B z - y1||^2 + 1/2 ||D B S z - y2||^2.
double data_misfit(const Image& z, const StackedObservation& obs,
                   const DegradationModel& model);

/// data_misfit(z) + lambda f(z).
double objective(const Image& z, const StackedObservation& obs,
                 const DegradationModel& model, const SelfSimGraph& graph,
                 double lambda);

/// prox_{lambda/c f}(x - d). Writes the CG iteration count to `cg_iters`.
Image z_update(const SolverState& state, const SelfSimGraph& graph,
               const SolverConfig& config, int* cg_iters = nullptr);

/// Solves (H^T H + c I) x = H^T y + c (z + d) by CG, warm-started at state.x.
Image x_update(const SolverState& state, const StackedObservation& obs,
               const DegradationModel& model, const SolverConfig& config,
               int* cg_iters = nullptr);

/// d - (x - z).
Image dual_update(const SolverState& state);

using IterationCallback = std::function<void(const IterationRecord&)>;

/// Runs ADMM from x = 1/2 H^T y, d = 0 until `admm_iters` rounds or the
/// primal residual drops to `primal_tol`; returns the final z.
SolveResult solve_tisr(const StackedObservation& obs, const DegradationModel& model,
                       const SelfSimGraph& graph, const SolverConfig& config,
                       const IterationCallback& on_iteration = {});

/// CSV: a "# lambda=..,c=..,k=.." comment line, then
/// "iter,objective,primal_residual,cg_iters_z,cg_iters_x" rows.
void write_iteration_log(std::ostream& out, const SolverState& state,
                         const SolverConfig& config, std::size_t neighbors);

}  // namespace tisr
