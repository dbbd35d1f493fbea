#include "tisr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace tisr {

void SolverConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be nonnegative");
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument, "ADMM penalty c must be positive");
  }
  if (admm_iters < 1) throw Error(ErrorCode::InvalidArgument, "admm_iters must be >= 1");
  if (!(cg_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "cg_tol must be positive");
  if (cg_max_iter < 1) throw Error(ErrorCode::InvalidArgument, "cg_max_iter must be >= 1");
  if (!(primal_tol >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "primal_tol must be nonnegative");
  }
}

double data_misfit(const Image& z, const StackedObservation& obs,
                   const DegradationModel& model) {
  StackedObservation r = apply_H(model, z);
  r.y1 -= obs.y1;
  r.y2 -= obs.y2;
  return 0.5 * (dot(r.y1, r.y1) + dot(r.y2, r.y2));
}

double objective(const Image& z, const StackedObservation& obs,
                 const DegradationModel& model, const SelfSimGraph& graph,
                 double lambda) {
  double value = data_misfit(z, obs, model);
  if (lambda != 0.0) value += lambda * regularizer_value(z, graph);
  return value;
}

Image z_update(const SolverState& state, const SelfSimGraph& graph,
               const SolverConfig& config, int* cg_iters) {
  const Image v = state.x - state.d;
  CgResult prox = prox_f(v, graph, config.lambda / config.c, config.cg_tol,
                         config.cg_max_iter);
  if (cg_iters) *cg_iters = prox.iterations;
  return std::move(prox.x);
}

Image x_update(const SolverState& state, const StackedObservation& obs,
               const DegradationModel& model, const SolverConfig& config,
               int* cg_iters) {
  Image rhs = state.z + state.d;
  rhs *= config.c;
  rhs += apply_Ht(model, obs);
  auto normal_op = [&](const Image& u) {
    Image out = apply_Ht(model, apply_H(model, u));
    axpy(config.c, u, out);
    return out;
  };
  CgResult solve = cg_solve(normal_op, rhs, state.x, config.cg_tol, config.cg_max_iter);
  if (!solve.converged) {
    throw Error(ErrorCode::NotConverged,
                "x_update: CG stopped at relative residual " +
                    std::to_string(solve.residual));
  }
  if (cg_iters) *cg_iters = solve.iterations;
  return std::move(solve.x);
}

Image dual_update(const SolverState& state) {
  Image d = state.d;
  d -= state.x;
  d += state.z;
  return d;
}

SolveResult solve_tisr(const StackedObservation& obs, const DegradationModel& model,
                       const SelfSimGraph& graph, const SolverConfig& config,
                       const IterationCallback& on_iteration) {
  config.validate();
  model.validate();
  if (graph.grid.image_h != model.hr_height || graph.grid.image_w != model.hr_width) {
    throw Error(ErrorCode::DimensionMismatch, "graph geometry does not match model");
  }

  SolverState state;
  state.x = apply_Ht(model, obs);  // validates observation shape
  state.x *= 0.5;
  state.d = Image(model.hr_height, model.hr_width);
  state.z = state.x;

  for (int k = 0; k < config.admm_iters; ++k) {
    IterationRecord record;
    record.iter = k + 1;
    state.z = z_update(state, graph, config, &record.cg_iters_z);
    state.x = x_update(state, obs, model, config, &record.cg_iters_x);
    state.d = dual_update(state);
    state.iter = k + 1;

    record.primal_residual = norm(state.x - state.z) / std::max(norm(state.z), 1.0);
    record.objective = objective(state.z, obs, model, graph, config.lambda);
    state.history.push_back(record);
    if (on_iteration) on_iteration(record);
    if (record.primal_residual <= config.primal_tol) break;
  }
  return {state.z, std::move(state)};
}

void write_iteration_log(std::ostream& out, const SolverState& state,
                         const SolverConfig& config, std::size_t neighbors) {
  char line[160];
  std::snprintf(line, sizeof line, "# lambda=%.10g,c=%.10g,k=%zu\n", config.lambda,
                config.c, neighbors);
  out << line << "iter,objective,primal_residual,cg_iters_z,cg_iters_x\n";
  for (const auto& r : state.history) {
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%d,%d\n", r.iter, r.objective,
                  r.primal_residual, r.cg_iters_z, r.cg_iters_x);
    out << line;
  }
}

}  // namespace tisr
