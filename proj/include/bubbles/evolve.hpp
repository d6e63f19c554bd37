#pragma once

// Volume-constrained weighted-area descent. Each iteration projects the area
// gradient onto the null space of the volume gradients, backtracks on the
// step size until the post-projection weighted area strictly decreases, and
// restores the volume constraints by Newton iteration. Refinement passes
// (refine + equiangulate + cleanup) run at scheduled iterations.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "bubbles/constraint.hpp"
#include "bubbles/core.hpp"
#include "bubbles/density.hpp"
#include "bubbles/mesh.hpp"
#include "bubbles/shapes.hpp"

namespace bubbles {

struct EvolveConfig {
  int max_iterations = 2000;
  double step0 = 0.0;               // initial step scale; 0 = diameter^2 / E0
  double backtrack_factor = 0.5;
  double constraint_tol = 1e-9;     // relative weighted-volume error bound
  std::vector<int> refine_schedule = {200, 600, 1400};
  double converge_rel_energy = 1e-8;
  int converge_window = 100;
  double cleanup_min_edge_fraction = 0.25;
  int projection_max_iterations = 20;
  double gram_condition_limit = 1e12;
};

inline void validate_config(const EvolveConfig& cfg) {
  if (cfg.max_iterations <= 0) fail(Errc::invalid_parameter, "max_iterations must be positive");
  if (!(cfg.backtrack_factor > 0 && cfg.backtrack_factor < 1))
    fail(Errc::invalid_parameter, "backtrack_factor must lie in (0,1)");
  if (!(cfg.constraint_tol > 0)) fail(Errc::invalid_parameter, "constraint_tol must be positive");
  if (!(cfg.converge_rel_energy > 0) || cfg.converge_window <= 0)
    fail(Errc::invalid_parameter, "bad convergence thresholds");
  if (!(cfg.step0 >= 0)) fail(Errc::invalid_parameter, "step0 must be >= 0");
}

enum class RunStatus { Converged, Stalled, MaxIterations };

inline const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::Stalled: return "stalled";
    case RunStatus::MaxIterations: return "max_iterations";
  }
  return "?";
}

struct TraceRow {
  int iteration = 0;
  double weighted_area = 0;
  double max_volume_residual = 0;
  double step = 0;
  int vertex_count = 0;
};

// Row semantics: each row is the post-projection state after that iteration's
// accepted step(s). Weighted area is non-increasing between consecutive rows
// with the same vertex count; a vertex-count change marks a remesh pass
// (refine + equiangulate + cleanup), which re-discretizes the functional and
// may move the energy either way.
struct EvolveTrace {
  std::vector<TraceRow> rows;
  RunStatus status = RunStatus::MaxIterations;
};

// CSV with the fixed header iter,area,maxvolresid,step,nverts.
inline void write_trace_csv(const EvolveTrace& trace, std::ostream& os) {
  os << "iter,area,maxvolresid,step,nverts\n";
  char buf[160];
  for (const TraceRow& r : trace.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%d\n", r.iteration, r.weighted_area,
                  r.max_volume_residual, r.step, r.vertex_count);
    os << buf;
  }
}

// Diameter proxy used for step scaling and contact tolerances: twice the
// largest vertex distance from the vertex centroid.
inline double cluster_diameter(const ClusterMesh& mesh) {
  if (mesh.positions.empty()) return 0;
  Vec3 c{};
  for (const Vec3& p : mesh.positions) c += p;
  c = c / double(mesh.positions.size());
  double r2max = 0;
  for (const Vec3& p : mesh.positions) r2max = std::max(r2max, norm2(p - c));
  return 2.0 * std::sqrt(r2max);
}

struct DescentOutcome {
  bool accepted = false;
  bool stalled = false;
  double step = 0;             // accepted step size
  double energy = 0;           // post-step weighted area
  double max_volume_residual = 0;
  Vec3 mean_direction{};       // average projected gradient (translation force)
};

// One descent step with backtracking; mutates the mesh positions on success.
// h_start is the first trial step; h_floor is the stall threshold.
inline DescentOutcome descent_step_inplace(ClusterMesh& mesh, const Density& f,
                                           const std::vector<double>& targets,
                                           const EvolveConfig& cfg, double h_start,
                                           double h_floor) {
  const std::size_t k = mesh.regions.size();
  const std::size_t nv = mesh.positions.size();

  double e0 = total_weighted_area(mesh, f);

  std::vector<Vec3> ga;
  area_gradient(mesh, f, ga);
  std::vector<std::vector<Vec3>> gv;
  volume_gradients(mesh, f, gv);

  // Project the area gradient onto the volume-preserving subspace.
  std::vector<double> gram(k * k), rhs(k), mu;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      double s = 0;
      for (std::size_t v = 0; v < nv; ++v) s += dot(gv[i][v], gv[j][v]);
      gram[i * k + j] = gram[j * k + i] = s;
    }
    double s = 0;
    for (std::size_t v = 0; v < nv; ++v) s += dot(gv[i][v], ga[v]);
    rhs[i] = s;
  }
  {
    std::vector<double> ev = symmetric_eigenvalues(gram, int(k));
    double lo = ev[0], hi = ev[0];
    for (double e : ev) {
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    if (!(lo > 0.0) || hi / lo > cfg.gram_condition_limit)
      fail(Errc::singular_gram, "volume gradients degenerate during descent");
  }
  if (!solve_dense(gram, rhs, int(k), mu)) fail(Errc::singular_gram, "Gram solve failed");

  std::vector<Vec3> dir(nv);
  Vec3 mean_dir{};
  for (std::size_t v = 0; v < nv; ++v) {
    Vec3 d = ga[v];
    for (std::size_t i = 0; i < k; ++i) d -= mu[i] * gv[i][v];
    dir[v] = d;
    mean_dir += d;
  }
  mean_dir = mean_dir / double(nv);

  std::vector<Vec3> saved = mesh.positions;
  ProjectionOptions popts;
  popts.tolerance = cfg.constraint_tol;
  popts.max_iterations = cfg.projection_max_iterations;
  popts.gram_condition_limit = cfg.gram_condition_limit;

  DescentOutcome out;
  out.mean_direction = mean_dir;
  double h = h_start;
  while (h >= h_floor) {
    for (std::size_t v = 0; v < nv; ++v) mesh.positions[v] = saved[v] - h * dir[v];
    bool feasible = true;
    ProjectionReport rep;
    try {
      rep = project_volumes_inplace(mesh, f, targets, popts);
    } catch (const Error& err) {
      if (err.code() == Errc::no_convergence)
        feasible = false;  // step too large for Newton restoration; shrink
      else
        throw;
    }
    if (feasible) {
      bool healthy = true;
      for (FacetId fi = 0; fi < mesh.facets.size() && healthy; ++fi)
        if (!(mesh.facet_area(fi) > 0.0)) healthy = false;
      if (healthy) {
        double e1 = total_weighted_area(mesh, f);
        if (e1 < e0) {
          out.accepted = true;
          out.step = h;
          out.energy = e1;
          out.max_volume_residual = rep.max_rel_residual;
          return out;
        }
      }
    }
    h *= cfg.backtrack_factor;
  }

  mesh.positions = saved;
  out.stalled = true;
  out.energy = e0;
  return out;
}

// Rigid-translation line search along the net gradient force. Cluster
// repositioning (toward the origin) is a much softer mode than shape
// relaxation and would otherwise crawl at the shape-limited step size; a
// whole-cluster translation with its own step scale fixes that. Accepted only
// on strict energy decrease after volume restoration, so monotonicity is
// preserved.
inline double try_rigid_translation(ClusterMesh& mesh, const Density& f,
                                    const std::vector<double>& targets,
                                    const EvolveConfig& cfg, const Vec3& mean_direction,
                                    double s_start, double& energy, double& residual) {
  double force = norm(mean_direction);
  if (!(force > 0) || !(s_start > 0)) return 0.0;
  Vec3 t_hat = mean_direction / force * -1.0;

  ProjectionOptions popts;
  popts.tolerance = cfg.constraint_tol;
  popts.max_iterations = cfg.projection_max_iterations;
  popts.gram_condition_limit = cfg.gram_condition_limit;

  std::vector<Vec3> saved = mesh.positions;
  double s = s_start;
  for (int trial = 0; trial < 4; ++trial) {
    for (std::size_t v = 0; v < mesh.positions.size(); ++v)
      mesh.positions[v] = saved[v] + s * t_hat;
    bool feasible = true;
    ProjectionReport rep;
    try {
      rep = project_volumes_inplace(mesh, f, targets, popts);
    } catch (const Error& err) {
      if (err.code() == Errc::no_convergence)
        feasible = false;
      else
        throw;
    }
    if (feasible) {
      double e1 = total_weighted_area(mesh, f);
      if (e1 < energy) {
        energy = e1;
        residual = rep.max_rel_residual;
        return s;
      }
    }
    s *= cfg.backtrack_factor;
  }
  mesh.positions = saved;
  return 0.0;
}

// Single-step convenience form: returns the stepped mesh and the accepted step
// (0 when stalled).
inline std::pair<ClusterMesh, double> descent_step(const ClusterMesh& mesh, const Density& f,
                                                   const EvolveConfig& cfg) {
  ClusterMesh out = mesh;
  std::vector<double> targets;
  for (const Region& r : out.regions) targets.push_back(r.target_weighted_volume);
  double diam = cluster_diameter(out);
  double e0 = total_weighted_area(out, f);
  double h0 = cfg.step0 > 0 ? cfg.step0 : diam * diam / std::max(e0, 1e-300);
  DescentOutcome res = descent_step_inplace(out, f, targets, cfg, h0, 1e-14 * h0);
  return {std::move(out), res.accepted ? res.step : 0.0};
}

struct EvolveResult {
  ClusterMesh mesh;
  EvolveTrace trace;
};

inline EvolveResult evolve(const BubbleSpec& spec, const EvolveConfig& cfg = {}) {
  validate_config(cfg);
  Density f(spec.p, spec.epsilon);
  ClusterMesh mesh = seed_mesh(spec);
  std::vector<double> targets = spec.volumes;

  EvolveTrace trace;
  trace.rows.reserve(cfg.max_iterations + 1);

  auto auto_step = [&](const ClusterMesh& m) {
    double diam = cluster_diameter(m);
    double e = total_weighted_area(m, f);
    return cfg.step0 > 0 ? cfg.step0 : diam * diam / std::max(e, 1e-300);
  };
  double step_cap = auto_step(mesh);
  double h_next = step_cap;
  double trans_cap = 0.1 * cluster_diameter(mesh);
  double trans_next = trans_cap;
  int next_translation = 1;
  int last_remesh = 0;

  ProjectionOptions popts;
  popts.tolerance = cfg.constraint_tol;
  popts.max_iterations = cfg.projection_max_iterations;
  popts.gram_condition_limit = cfg.gram_condition_limit;

  {
    TraceRow row;
    row.iteration = 0;
    row.weighted_area = total_weighted_area(mesh, f);
    row.max_volume_residual =
        detail::max_rel_residual(weighted_region_volumes(mesh, f), targets);
    row.vertex_count = int(mesh.positions.size());
    trace.rows.push_back(row);
  }

  std::vector<int> schedule = cfg.refine_schedule;
  std::sort(schedule.begin(), schedule.end());
  std::size_t sched_idx = 0;

  auto do_remesh = [&](int it) {
    try {
      mesh = refine(mesh);
      mesh = equiangulate(mesh);
      mesh = cleanup(mesh, cfg.cleanup_min_edge_fraction).mesh;
      project_volumes_inplace(mesh, f, targets, popts);
    } catch (const Error& e) {
      fail(e.code(), std::string(e.what()) + " (remesh at iteration " + std::to_string(it) + ")");
    }
    step_cap = auto_step(mesh);
    h_next = step_cap;
    trans_cap = 0.1 * cluster_diameter(mesh);
    trans_next = trans_cap;
    next_translation = it + 1;
    last_remesh = it;
  };

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    if (sched_idx < schedule.size() && it >= schedule[sched_idx]) {
      do_remesh(it);
      ++sched_idx;
    }

    DescentOutcome out =
        descent_step_inplace(mesh, f, targets, cfg, h_next, 1e-14 * step_cap);

    double residual = out.accepted ? out.max_volume_residual
                                   : detail::max_rel_residual(
                                         weighted_region_volumes(mesh, f), targets);
    double energy = out.energy;
    double s_accepted = 0.0;
    if (it >= next_translation) {
      s_accepted = try_rigid_translation(mesh, f, targets, cfg, out.mean_direction, trans_next,
                                         energy, residual);
      if (s_accepted > 0) {
        trans_next = std::min(trans_cap, 2.0 * s_accepted);
        next_translation = it + 1;
      } else {
        trans_next = std::max(0.02 * trans_cap, 0.25 * trans_next);
        next_translation = it + 8;  // rejected: the cluster is well placed
      }
    }

    TraceRow row;
    row.iteration = it;
    row.weighted_area = energy;
    row.max_volume_residual = residual;
    row.step = out.accepted ? out.step : 0.0;
    row.vertex_count = int(mesh.positions.size());
    trace.rows.push_back(row);

    if (out.stalled && s_accepted == 0.0) {
      if (sched_idx < schedule.size()) {
        do_remesh(it);
        ++sched_idx;
        continue;
      }
      trace.status = RunStatus::Stalled;
      return {std::move(mesh), std::move(trace)};
    }
    h_next = out.accepted ? std::min(step_cap, 2.0 * out.step) : h_next;

    // Energy window convergence, never across a remesh boundary. At a
    // non-final level convergence pulls the next scheduled refinement
    // forward; the run only finishes once the schedule is exhausted.
    if (it - last_remesh > cfg.converge_window) {
      double e_then = trace.rows[it - cfg.converge_window].weighted_area;
      if ((e_then - energy) / std::max(std::abs(e_then), 1e-300) < cfg.converge_rel_energy) {
        if (sched_idx < schedule.size()) {
          do_remesh(it);
          ++sched_idx;
        } else {
          trace.status = RunStatus::Converged;
          return {std::move(mesh), std::move(trace)};
        }
      }
    }
  }

  trace.status = RunStatus::MaxIterations;
  return {std::move(mesh), std::move(trace)};
}

}  // namespace bubbles
