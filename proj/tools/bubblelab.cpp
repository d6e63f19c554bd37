// bubblelab: runs bubble-cluster scenarios, compares metric reports, and
// sweeps the vertex-separation observable over density exponents.
//
// Exit codes: 0 converged, 2 stalled / iteration budget exhausted,
// 3 constraint failure, 4 configuration or parse error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "bubbles/bubbles.hpp"

namespace {

int severity(int code) {
  // Worst-of ordering for batch runs.
  switch (code) {
    case 0: return 0;
    case 2: return 1;
    case 3: return 2;
    case 4: return 3;
  }
  return 3;
}

int error_exit_code(const bubbles::Error& e) {
  switch (e.code()) {
    case bubbles::Errc::parse_error:
    case bubbles::Errc::invalid_parameter:
    case bubbles::Errc::io_error:
    case bubbles::Errc::unsupported_topology:
    case bubbles::Errc::mismatch:
      return 4;
    default:
      return 3;  // constraint / numerical failure
  }
}

struct Overrides {
  int refine_level = -1;
  int max_iter = -1;
  double seed_jitter = -1;
  std::string out_dir = ".";

  void apply(bubbles::Scenario& sc) const {
    if (refine_level >= 0) sc.spec.refinement_level = refine_level;
    if (max_iter > 0) sc.config.max_iterations = max_iter;
    if (seed_jitter >= 0) sc.spec.seed_jitter = seed_jitter;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bubblelab - weighted-perimeter bubble cluster laboratory"};
  app.require_subcommand(1);

  Overrides ov;
  std::string scenario_path, metrics_a, metrics_b;
  std::vector<double> sweep_p;

  CLI::App* run = app.add_subcommand("run", "run every scenario in a file");
  run->add_option("scenario-file", scenario_path, "scenario file")->required();
  run->add_option("--out-dir", ov.out_dir, "directory for output artifacts");
  run->add_option("--refine-level", ov.refine_level, "override initial refinement level");
  run->add_option("--max-iter", ov.max_iter, "override iteration budget");
  run->add_option("--seed-jitter", ov.seed_jitter, "seed jitter fraction of diameter");

  CLI::App* cmp = app.add_subcommand("compare", "compare two metrics reports");
  cmp->add_option("a", metrics_a, "first metrics csv")->required();
  cmp->add_option("b", metrics_b, "second metrics csv")->required();

  CLI::App* swp = app.add_subcommand("sweep",
                                     "evolved singular-vertex separations over densities");
  swp->add_option("scenario-file", scenario_path, "scenario file (first scenario is the base)")
      ->required();
  swp->add_option("--p", sweep_p, "density exponents to sweep")->delimiter(',');
  swp->add_option("--out-dir", ov.out_dir, "directory for output artifacts");
  swp->add_option("--refine-level", ov.refine_level, "override initial refinement level");
  swp->add_option("--max-iter", ov.max_iter, "override iteration budget");
  swp->add_option("--seed-jitter", ov.seed_jitter, "seed jitter fraction of diameter");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      std::vector<bubbles::Scenario> scenarios = bubbles::parse_scenario_file(scenario_path);
      int worst = 0;
      for (bubbles::Scenario& sc : scenarios) {
        ov.apply(sc);
        int code = bubbles::run_scenario(sc, ov.out_dir, std::cout);
        if (severity(code) > severity(worst)) worst = code;
      }
      return worst;
    }

    if (cmp->parsed()) {
      bubbles::ParsedMetrics a = bubbles::parse_metrics_file(metrics_a);
      bubbles::ParsedMetrics b = bubbles::parse_metrics_file(metrics_b);
      bubbles::CompareResult r = bubbles::compare_reports(a, b);
      std::printf("%s: weighted_area %.12g\n", a.get("name").c_str(), r.area_a);
      std::printf("%s: weighted_area %.12g\n", b.get("name").c_str(), r.area_b);
      if (r.lower_name.empty())
        std::printf("verdict: tie\n");
      else
        std::printf("verdict: %s lower\n", r.lower_name.c_str());
      return 0;
    }

    // sweep
    std::vector<bubbles::Scenario> scenarios = bubbles::parse_scenario_file(scenario_path);
    bubbles::Scenario base = scenarios.front();
    ov.apply(base);
    if (!sweep_p.empty()) base.sweep_p = sweep_p;
    std::vector<bubbles::SweepRow> rows = bubbles::sweep_vertex_separation(base, base.sweep_p);
    std::string out = ov.out_dir + "/" + base.name + ".sweep.csv";
    std::ofstream os(out);
    if (!os) bubbles::fail(bubbles::Errc::io_error, "cannot write " + out);
    bubbles::write_sweep_csv(rows, os);
    bubbles::write_sweep_csv(rows, *&std::cout);
    int worst = 0;
    for (const bubbles::SweepRow& r : rows) {
      int code = bubbles::exit_code_for(r.status);
      if (severity(code) > severity(worst)) worst = code;
    }
    return worst;
  } catch (const bubbles::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return error_exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
