#pragma once

// Scenario files and the batch runner behind the command-line tool: a simple
// key-value text format describing seeds and evolution settings, metrics
// serialization, report comparison, and the vertex-separation sweep.
//
// Grammar (line oriented):
//   # comment
//   [scenario]        starts a new scenario (implicit for the first one)
//   [evolve]          switches to evolution settings of the current scenario
//   [outputs]         switches to output toggles
//   [sweep]           switches to sweep settings
//   key = value
//
// Exit codes used by the runner: 0 converged, 2 stalled or iteration budget
// exhausted, 3 constraint failure, 4 configuration/parse error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bubbles/analyze.hpp"
#include "bubbles/evolve.hpp"
#include "bubbles/shapes.hpp"

namespace bubbles {

struct ScenarioOutputs {
  bool obj = true;
  bool trace = true;
  bool metrics = true;
};

struct Scenario {
  std::string name;
  BubbleSpec spec;
  EvolveConfig config;
  ScenarioOutputs outputs;
  std::vector<double> sweep_p;
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail_scenario {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

[[noreturn]] inline void parse_fail(const std::string& file, int line, const std::string& msg) {
  fail(Errc::parse_error, file + ":" + std::to_string(line) + ": " + msg);
}

inline double parse_number(const std::string& file, int line, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) parse_fail(file, line, "trailing characters in number '" + v + "'");
    return x;
  } catch (const std::exception&) {
    parse_fail(file, line, "expected a number, got '" + v + "'");
  }
}

inline std::vector<double> parse_numbers(const std::string& file, int line,
                                         const std::string& v) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string tok;
  while (is >> tok) out.push_back(parse_number(file, line, tok));
  return out;
}

inline bool parse_bool(const std::string& file, int line, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  parse_fail(file, line, "expected a boolean, got '" + v + "'");
}

}  // namespace detail_scenario

inline std::vector<Scenario> parse_scenarios(std::istream& in, const std::string& filename) {
  using namespace detail_scenario;
  std::vector<Scenario> out;
  std::string section = "scenario";
  bool started = false;
  std::string linebuf;
  int lineno = 0;

  auto current = [&]() -> Scenario& {
    if (!started) {
      out.emplace_back();
      started = true;
    }
    return out.back();
  };

  while (std::getline(in, linebuf)) {
    ++lineno;
    std::string line = trim(linebuf);
    if (line.empty() || line[0] == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(filename, lineno, "unterminated section header");
      std::string sec = trim(line.substr(1, line.size() - 2));
      if (sec == "scenario") {
        out.emplace_back();
        started = true;
        section = "scenario";
      } else if (sec == "evolve" || sec == "outputs" || sec == "sweep") {
        current();
        section = sec;
      } else {
        parse_fail(filename, lineno, "unknown section [" + sec + "]");
      }
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos) parse_fail(filename, lineno, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(filename, lineno, "empty key");
    Scenario& sc = current();

    if (section == "scenario") {
      if (key == "name") {
        sc.name = value;
      } else if (key == "topology") {
        try {
          sc.spec.topology = topology_from_string(value);
        } catch (const Error&) {
          parse_fail(filename, lineno, "unknown topology '" + value + "'");
        }
      } else if (key == "volumes") {
        sc.spec.volumes = parse_numbers(filename, lineno, value);
      } else if (key == "p") {
        sc.spec.p = parse_number(filename, lineno, value);
      } else if (key == "epsilon") {
        sc.spec.epsilon = parse_number(filename, lineno, value);
      } else if (key == "seed_level") {
        sc.spec.refinement_level = int(parse_number(filename, lineno, value));
      } else if (key == "seed_jitter") {
        sc.spec.seed_jitter = parse_number(filename, lineno, value);
      } else if (key == "placement_offset") {
        std::vector<double> v = parse_numbers(filename, lineno, value);
        if (v.size() != 3) parse_fail(filename, lineno, "placement_offset needs 3 numbers");
        sc.spec.placement = sc.spec.placement.then(RigidTransform::translate({v[0], v[1], v[2]}));
      } else if (key == "placement_rotate") {
        std::vector<double> v = parse_numbers(filename, lineno, value);
        if (v.size() != 4) parse_fail(filename, lineno,
                                      "placement_rotate needs axis (3 numbers) + angle_deg");
        sc.spec.placement = sc.spec.placement.then(
            RigidTransform::rotate({v[0], v[1], v[2]}, v[3] * M_PI / 180.0));
      } else {
        parse_fail(filename, lineno, "unknown scenario key '" + key + "'");
      }
    } else if (section == "evolve") {
      if (key == "max_iterations") {
        sc.config.max_iterations = int(parse_number(filename, lineno, value));
      } else if (key == "step0") {
        sc.config.step0 = parse_number(filename, lineno, value);
      } else if (key == "backtrack_factor") {
        sc.config.backtrack_factor = parse_number(filename, lineno, value);
      } else if (key == "constraint_tol") {
        sc.config.constraint_tol = parse_number(filename, lineno, value);
      } else if (key == "refine_schedule") {
        sc.config.refine_schedule.clear();
        for (double x : parse_numbers(filename, lineno, value))
          sc.config.refine_schedule.push_back(int(x));
      } else if (key == "converge_rel_energy") {
        sc.config.converge_rel_energy = parse_number(filename, lineno, value);
      } else if (key == "converge_window") {
        sc.config.converge_window = int(parse_number(filename, lineno, value));
      } else if (key == "cleanup_min_edge_fraction") {
        sc.config.cleanup_min_edge_fraction = parse_number(filename, lineno, value);
      } else {
        parse_fail(filename, lineno, "unknown evolve key '" + key + "'");
      }
    } else if (section == "outputs") {
      if (key == "obj") {
        sc.outputs.obj = parse_bool(filename, lineno, value);
      } else if (key == "trace") {
        sc.outputs.trace = parse_bool(filename, lineno, value);
      } else if (key == "metrics") {
        sc.outputs.metrics = parse_bool(filename, lineno, value);
      } else {
        parse_fail(filename, lineno, "unknown outputs key '" + key + "'");
      }
    } else {  // sweep
      if (key == "p") {
        sc.sweep_p = parse_numbers(filename, lineno, value);
      } else {
        parse_fail(filename, lineno, "unknown sweep key '" + key + "'");
      }
    }
  }

  if (out.empty()) fail(Errc::parse_error, filename + ": no scenarios defined");
  std::map<std::string, int> seen;
  for (const Scenario& sc : out) {
    if (sc.name.empty()) fail(Errc::parse_error, filename + ": scenario without a name");
    if (++seen[sc.name] > 1)
      fail(Errc::parse_error, filename + ": duplicate scenario name '" + sc.name + "'");
    try {
      validate_spec(sc.spec);
      validate_config(sc.config);
    } catch (const Error& e) {
      fail(Errc::parse_error, filename + ": scenario '" + sc.name + "': " + e.what());
    }
  }
  return out;
}

inline std::vector<Scenario> parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open scenario file '" + path + "'");
  return parse_scenarios(in, path);
}

// ---------------------------------------------------------------------------
// Metrics serialization (fixed key order; `key,value` rows)

struct RunRecord {
  Scenario scenario;
  RunStatus status = RunStatus::MaxIterations;
  int iterations = 0;
  MetricsReport metrics;
  std::size_t final_vertices = 0, final_facets = 0;
  double diameter = 0;
  double max_volume_residual = 0;
  double euclidean_area = 0;
  ClusterMesh mesh;
  EvolveTrace trace;
};

namespace detail_scenario {

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string join(const std::vector<double>& xs, char sep = ';') {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += sep;
    s += fmt(xs[i]);
  }
  return s;
}

}  // namespace detail_scenario

inline void write_metrics_csv(const RunRecord& r, std::ostream& os) {
  using detail_scenario::fmt;
  using detail_scenario::join;
  const Scenario& sc = r.scenario;
  os << "key,value\n";
  os << "name," << sc.name << "\n";
  os << "topology," << topology_name(sc.spec.topology) << "\n";
  os << "p," << fmt(sc.spec.p) << "\n";
  os << "epsilon," << fmt(sc.spec.epsilon) << "\n";
  os << "volumes," << join(sc.spec.volumes) << "\n";
  os << "seed_level," << sc.spec.refinement_level << "\n";
  os << "seed_jitter," << fmt(sc.spec.seed_jitter) << "\n";
  os << "max_iterations," << sc.config.max_iterations << "\n";
  os << "step0," << fmt(sc.config.step0) << "\n";
  os << "backtrack_factor," << fmt(sc.config.backtrack_factor) << "\n";
  os << "constraint_tol," << fmt(sc.config.constraint_tol) << "\n";
  {
    std::vector<double> sched(sc.config.refine_schedule.begin(),
                              sc.config.refine_schedule.end());
    os << "refine_schedule," << join(sched) << "\n";
  }
  os << "converge_rel_energy," << fmt(sc.config.converge_rel_energy) << "\n";
  os << "converge_window," << sc.config.converge_window << "\n";
  os << "cleanup_min_edge_fraction," << fmt(sc.config.cleanup_min_edge_fraction) << "\n";
  os << "status," << run_status_name(r.status) << "\n";
  os << "iterations," << r.iterations << "\n";
  os << "final_vertices," << r.final_vertices << "\n";
  os << "final_facets," << r.final_facets << "\n";
  os << "diameter," << fmt(r.diameter) << "\n";
  os << "weighted_area," << fmt(r.metrics.weighted_area) << "\n";
  os << "euclidean_area," << fmt(r.euclidean_area) << "\n";
  for (const auto& [id, v] : r.metrics.region_volumes)
    os << "volume_" << id << "," << fmt(v) << "\n";
  os << "volume_residual_max," << fmt(r.max_volume_residual) << "\n";
  os << "junction_samples," << r.metrics.junction.samples << "\n";
  os << "junction_mean_deg," << fmt(r.metrics.junction.mean_deg) << "\n";
  os << "junction_mean_dev_deg," << fmt(r.metrics.junction.mean_dev_deg) << "\n";
  os << "junction_max_dev_deg," << fmt(r.metrics.junction.max_dev_deg) << "\n";
  os << "quad_samples," << r.metrics.quad.samples << "\n";
  os << "quad_mean_deg," << fmt(r.metrics.quad.mean_deg) << "\n";
  os << "quad_mean_dev_deg," << fmt(r.metrics.quad.mean_dev_deg) << "\n";
  os << "quad_max_dev_deg," << fmt(r.metrics.quad.max_dev_deg) << "\n";
  os << "origin_dist_curve," << fmt(r.metrics.origin.singular_curve) << "\n";
  os << "origin_dist_vertex," << fmt(r.metrics.origin.singular_vertex) << "\n";
  os << "origin_dist_surface," << fmt(r.metrics.origin.surface) << "\n";
  os << "vertex_separations," << join(r.metrics.vertex_separations) << "\n";
  for (const InterfaceCurvature& ic : r.metrics.curvature)
    os << "curvature_" << ic.lo << "_" << ic.hi << "," << fmt(ic.mean) << ";" << fmt(ic.stddev)
       << ";" << ic.samples << "\n";
}

inline void write_metrics_text(const RunRecord& r, std::ostream& os) {
  char buf[256];
  const MetricsReport& m = r.metrics;
  os << "scenario " << r.scenario.name << " (" << topology_name(r.scenario.spec.topology)
     << ", p = " << r.scenario.spec.p << ")\n";
  std::snprintf(buf, sizeof buf, "  status %s after %d iterations, %zu vertices / %zu facets\n",
                run_status_name(r.status), r.iterations, r.final_vertices, r.final_facets);
  os << buf;
  std::snprintf(buf, sizeof buf, "  weighted area %.8g (euclidean %.8g), diameter %.6g\n",
                m.weighted_area, r.euclidean_area, r.diameter);
  os << buf;
  for (const auto& [id, v] : m.region_volumes) {
    std::snprintf(buf, sizeof buf, "  region %u weighted volume %.10g\n", unsigned(id), v);
    os << buf;
  }
  std::snprintf(buf, sizeof buf,
                "  junction angles: mean %.3f deg, mean|dev| %.3f deg, max|dev| %.3f deg (%zu)\n",
                m.junction.mean_deg, m.junction.mean_dev_deg, m.junction.max_dev_deg,
                m.junction.samples);
  os << buf;
  if (m.quad.samples) {
    std::snprintf(buf, sizeof buf,
                  "  singular-vertex angles: mean %.3f deg, mean|dev| %.3f deg (%zu pairs)\n",
                  m.quad.mean_deg, m.quad.mean_dev_deg, m.quad.samples);
    os << buf;
  }
  std::snprintf(buf, sizeof buf,
                "  origin distances: curve %.6g, vertex %.6g, surface %.6g\n",
                m.origin.singular_curve, m.origin.singular_vertex, m.origin.surface);
  os << buf;
  for (const InterfaceCurvature& ic : m.curvature) {
    std::snprintf(buf, sizeof buf,
                  "  interface %u-%u curvature: mean %.6g, std %.4g (%zu vertices)\n",
                  unsigned(ic.lo), unsigned(ic.hi), ic.mean, ic.stddev, ic.samples);
    os << buf;
  }
}

// ---------------------------------------------------------------------------
// Runner

inline int exit_code_for(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return 0;
    case RunStatus::Stalled: return 2;
    case RunStatus::MaxIterations: return 2;
  }
  return 2;
}

inline RunRecord run_scenario_record(const Scenario& scenario) {
  RunRecord rec;
  rec.scenario = scenario;
  EvolveResult result = evolve(scenario.spec, scenario.config);
  Density f(scenario.spec.p, scenario.spec.epsilon);
  rec.status = result.trace.status;
  rec.iterations = result.trace.rows.empty() ? 0 : result.trace.rows.back().iteration;
  rec.metrics = compute_metrics(result.mesh, f);
  rec.final_vertices = result.mesh.vertex_count();
  rec.final_facets = result.mesh.facet_count();
  rec.diameter = cluster_diameter(result.mesh);
  rec.max_volume_residual = result.trace.rows.empty()
                                ? 0.0
                                : result.trace.rows.back().max_volume_residual;
  rec.euclidean_area = total_weighted_area(result.mesh, Density(0.0));

  // Artifact files.
  rec.mesh = std::move(result.mesh);
  rec.trace = std::move(result.trace);
  return rec;
}

inline int run_scenario(const Scenario& scenario, const std::string& out_dir,
                        std::ostream& log) {
  RunRecord rec = run_scenario_record(scenario);
  std::string base = out_dir.empty() ? scenario.name : out_dir + "/" + scenario.name;
  if (scenario.outputs.obj) {
    std::ofstream os(base + ".obj");
    if (!os) fail(Errc::io_error, "cannot write " + base + ".obj");
    write_obj(rec.mesh, os);
  }
  if (scenario.outputs.trace) {
    std::ofstream os(base + ".trace.csv");
    if (!os) fail(Errc::io_error, "cannot write " + base + ".trace.csv");
    write_trace_csv(rec.trace, os);
  }
  if (scenario.outputs.metrics) {
    std::ofstream os(base + ".metrics.csv");
    if (!os) fail(Errc::io_error, "cannot write " + base + ".metrics.csv");
    write_metrics_csv(rec, os);
  }
  write_metrics_text(rec, log);
  return exit_code_for(rec.status);
}

// ---------------------------------------------------------------------------
// Report comparison

struct ParsedMetrics {
  std::map<std::string, std::string> kv;

  const std::string& get(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) fail(Errc::parse_error, "metrics file lacks key '" + key + "'");
    return it->second;
  }
  double get_number(const std::string& key) const { return std::stod(get(key)); }
};

inline ParsedMetrics parse_metrics_csv(std::istream& in, const std::string& name) {
  ParsedMetrics pm;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail_scenario::trim(line);
    if (line.empty()) continue;
    std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      fail(Errc::parse_error, name + ":" + std::to_string(lineno) + ": expected 'key,value'");
    pm.kv[line.substr(0, comma)] = line.substr(comma + 1);
  }
  if (pm.kv.empty()) fail(Errc::parse_error, name + ": empty metrics file");
  return pm;
}

inline ParsedMetrics parse_metrics_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open metrics file '" + path + "'");
  return parse_metrics_csv(in, path);
}

struct CompareResult {
  std::string lower_name;  // empty on a tie
  double area_a = 0, area_b = 0;
};

// Declares the report with the lower weighted area; requires matching p and
// volume targets. Ties within 1e-12 relative.
inline CompareResult compare_reports(const ParsedMetrics& a, const ParsedMetrics& b) {
  if (a.get("p") != b.get("p"))
    fail(Errc::mismatch, "reports have different p (" + a.get("p") + " vs " + b.get("p") + ")");
  if (a.get("volumes") != b.get("volumes"))
    fail(Errc::mismatch, "reports have different volume targets");
  CompareResult r;
  r.area_a = a.get_number("weighted_area");
  r.area_b = b.get_number("weighted_area");
  double scale = std::max({std::abs(r.area_a), std::abs(r.area_b), 1.0});
  if (std::abs(r.area_a - r.area_b) <= 1e-12 * scale)
    r.lower_name = "";
  else
    r.lower_name = r.area_a < r.area_b ? a.get("name") : b.get("name");
  return r;
}

// ---------------------------------------------------------------------------
// Vertex-separation sweep (triple topology): evolved singular-vertex pairwise
// distances, normalized by cluster diameter, for each density exponent.

struct SweepRow {
  double p = 0;
  std::size_t vertices = 0;
  double diameter = 0;
  double min_separation = 0;
  double separation_over_diameter = 0;
  RunStatus status = RunStatus::MaxIterations;
};

inline std::vector<SweepRow> sweep_vertex_separation(const Scenario& base,
                                                     const std::vector<double>& p_list) {
  if (base.spec.topology != Topology::Triple)
    fail(Errc::unsupported_topology, "vertex-separation sweep requires triple topology");
  std::vector<SweepRow> rows;
  for (double p : p_list) {
    Scenario sc = base;
    sc.spec.p = p;
    validate_spec(sc.spec);
    RunRecord rec = run_scenario_record(sc);
    SweepRow row;
    row.p = p;
    row.vertices = singular_vertices(rec.mesh).size();
    row.diameter = rec.diameter;
    double minsep = std::numeric_limits<double>::infinity();
    for (double s : rec.metrics.vertex_separations) minsep = std::min(minsep, s);
    row.min_separation = rec.metrics.vertex_separations.empty() ? 0.0 : minsep;
    row.separation_over_diameter = row.diameter > 0 ? row.min_separation / row.diameter : 0.0;
    row.status = rec.status;
    rows.push_back(row);
  }
  return rows;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << "p,vertices,diameter,min_separation,separation_over_diameter,status\n";
  for (const SweepRow& r : rows) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g,%.17g,%s\n", r.p, r.vertices,
                  r.diameter, r.min_separation, r.separation_over_diameter,
                  run_status_name(r.status));
    os << buf;
  }
}

}  // namespace bubbles
