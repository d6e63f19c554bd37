#pragma once

// Newton restoration of weighted-volume constraints: move vertices along the
// span of the volume gradients until every region hits its target volume.
// Solves the small Gram system G lambda = (targets - V) each iteration.

#include <cmath>
#include <string>
#include <vector>

#include "bubbles/core.hpp"
#include "bubbles/density.hpp"
#include "bubbles/mesh.hpp"

namespace bubbles {

struct ProjectionOptions {
  double tolerance = 1e-9;          // relative volume residual to reach
  int max_iterations = 20;
  double gram_condition_limit = 1e12;
};

struct ProjectionReport {
  int iterations = 0;
  double max_rel_residual = 0.0;
  double displacement = 0.0;  // total max-vertex displacement over the call
};

namespace detail {

inline double max_rel_residual(const std::vector<double>& volumes,
                               const std::vector<double>& targets) {
  double worst = 0;
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    double denom = std::max(std::abs(targets[i]), 1e-300);
    worst = std::max(worst, std::abs(volumes[i] - targets[i]) / denom);
  }
  return worst;
}

}  // namespace detail

// In-place projection; throws SingularGram / NoConvergence.
inline ProjectionReport project_volumes_inplace(ClusterMesh& mesh, const Density& f,
                                                const std::vector<double>& targets,
                                                const ProjectionOptions& opts = {}) {
  const std::size_t k = mesh.regions.size();
  if (targets.size() != k)
    fail(Errc::invalid_parameter, "target count does not match region count");

  ProjectionReport report;
  std::vector<std::vector<Vec3>> grads(k);
  std::vector<double> gram(k * k), rhs(k), lambda;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    std::vector<double> volumes = weighted_region_volumes(mesh, f);
    report.max_rel_residual = detail::max_rel_residual(volumes, targets);
    if (report.max_rel_residual < opts.tolerance) return report;

    volume_gradients(mesh, f, grads);

    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i; j < k; ++j) {
        double s = 0;
        for (std::size_t v = 0; v < mesh.positions.size(); ++v)
          s += dot(grads[i][v], grads[j][v]);
        gram[i * k + j] = gram[j * k + i] = s;
      }
      rhs[i] = targets[i] - volumes[i];
    }

    std::vector<double> ev = symmetric_eigenvalues(gram, int(k));
    double lo = ev[0], hi = ev[0];
    for (double e : ev) {
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    if (!(lo > 0.0) || hi / lo > opts.gram_condition_limit)
      fail(Errc::singular_gram, "volume gradients are numerically dependent (cond > " +
                                    std::to_string(opts.gram_condition_limit) + ")");

    if (!solve_dense(gram, rhs, int(k), lambda))
      fail(Errc::singular_gram, "Gram solve failed");

    double max_step = 0;
    for (std::size_t v = 0; v < mesh.positions.size(); ++v) {
      Vec3 delta{};
      for (std::size_t i = 0; i < k; ++i) delta += lambda[i] * grads[i][v];
      mesh.positions[v] += delta;
      max_step = std::max(max_step, norm(delta));
    }
    report.displacement += max_step;
    report.iterations = iter + 1;
  }

  std::vector<double> volumes = weighted_region_volumes(mesh, f);
  report.max_rel_residual = detail::max_rel_residual(volumes, targets);
  if (report.max_rel_residual >= opts.tolerance)
    fail(Errc::no_convergence, "volume projection did not reach tolerance after " +
                                   std::to_string(opts.max_iterations) + " iterations");
  return report;
}

// Value-returning variant; targets default to the regions' stored targets.
inline ClusterMesh project_volumes(const ClusterMesh& mesh, const Density& f,
                                   const std::vector<double>& targets,
                                   const ProjectionOptions& opts = {}) {
  ClusterMesh out = mesh;
  project_volumes_inplace(out, f, targets, opts);
  return out;
}

inline ClusterMesh project_volumes(const ClusterMesh& mesh, const Density& f,
                                   const ProjectionOptions& opts = {}) {
  std::vector<double> targets;
  for (const Region& r : mesh.regions) targets.push_back(r.target_weighted_volume);
  return project_volumes(mesh, f, targets, opts);
}

}  // namespace bubbles
