#include <catch2/catch.hpp>

#include <sstream>

#include "bubbles/scenario.hpp"

using namespace bubbles;

namespace {

const char* kGoodFile = R"(# a batch of two scenarios
[scenario]
name = tiny_double
topology = double
volumes = 2 1
p = 2
seed_level = 1

[evolve]
max_iterations = 40
refine_schedule =

[outputs]
obj = false
trace = true
metrics = true

[scenario]
name = tiny_single
topology = single
volumes = 1
p = 0
seed_level = 1

[evolve]
max_iterations = 30
refine_schedule =
)";

}  // namespace

TEST_CASE("scenario parsing", "[cli]") {
  SECTION("valid batch file") {
    std::istringstream in(kGoodFile);
    std::vector<Scenario> s = parse_scenarios(in, "good.scn");
    REQUIRE(s.size() == 2);
    CHECK(s[0].name == "tiny_double");
    CHECK(s[0].spec.topology == Topology::Double);
    CHECK(s[0].spec.volumes == std::vector<double>{2, 1});
    CHECK(s[0].config.max_iterations == 40);
    CHECK(s[0].config.refine_schedule.empty());
    CHECK_FALSE(s[0].outputs.obj);
    CHECK(s[1].name == "tiny_single");
    CHECK(s[1].spec.p == 0);
  }
  SECTION("empty file fails") {
    std::istringstream in("");
    CHECK_THROWS_AS(parse_scenarios(in, "empty.scn"), Error);
  }
  SECTION("parse errors carry line numbers") {
    std::istringstream in("name = x\ntopology = dodecahedron\n");
    try {
      parse_scenarios(in, "bad.scn");
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::parse_error);
      CHECK(std::string(e.what()).find("bad.scn:2") != std::string::npos);
    }
  }
  SECTION("unknown keys are rejected with their line") {
    std::istringstream in("name = x\nwibble = 3\n");
    try {
      parse_scenarios(in, "bad.scn");
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("bad.scn:2") != std::string::npos);
    }
  }
  SECTION("duplicate names are rejected") {
    std::istringstream in(
        "[scenario]\nname = a\ntopology = single\nvolumes = 1\n"
        "[scenario]\nname = a\ntopology = single\nvolumes = 1\n");
    CHECK_THROWS_AS(parse_scenarios(in, "dup.scn"), Error);
  }
  SECTION("volume count must match topology") {
    std::istringstream in("name = a\ntopology = triple\nvolumes = 1 2\n");
    CHECK_THROWS_AS(parse_scenarios(in, "mismatch.scn"), Error);
  }
}

TEST_CASE("metrics round-trip and comparison", "[cli]") {
  Scenario sc;
  sc.name = "roundtrip";
  sc.spec.topology = Topology::Double;
  sc.spec.volumes = {2, 1};
  sc.spec.p = 2;
  sc.spec.refinement_level = 1;
  sc.config.max_iterations = 50;
  sc.config.refine_schedule = {};
  RunRecord rec = run_scenario_record(sc);

  std::ostringstream os;
  write_metrics_csv(rec, os);
  std::istringstream is(os.str());
  ParsedMetrics pm = parse_metrics_csv(is, "mem");
  CHECK(pm.get("name") == "roundtrip");
  CHECK(pm.get_number("weighted_area") == Approx(rec.metrics.weighted_area).epsilon(1e-15));
  CHECK(pm.get("status") == run_status_name(rec.status));

  SECTION("a report ties with itself") {
    CompareResult r = compare_reports(pm, pm);
    CHECK(r.lower_name.empty());
  }
  SECTION("mismatched p is an error") {
    ParsedMetrics other = pm;
    other.kv["p"] = "3";
    try {
      compare_reports(pm, other);
      FAIL("expected Mismatch");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::mismatch);
    }
  }
  SECTION("lower area wins") {
    ParsedMetrics other = pm;
    other.kv["name"] = "heavier";
    other.kv["weighted_area"] = detail_scenario::fmt(rec.metrics.weighted_area * 1.05);
    CompareResult r = compare_reports(pm, other);
    CHECK(r.lower_name == "roundtrip");
  }
}

TEST_CASE("sweep over densities", "[cli]") {
  SECTION("empty p list gives an empty table") {
    Scenario base;
    base.name = "sweep";
    base.spec.topology = Topology::Triple;
    base.spec.volumes = {1, 1, 1};
    base.spec.p = 2;
    base.spec.refinement_level = 1;
    std::vector<SweepRow> rows = sweep_vertex_separation(base, {});
    CHECK(rows.empty());
    std::ostringstream os;
    write_sweep_csv(rows, os);
    CHECK(os.str() == "p,vertices,diameter,min_separation,separation_over_diameter,status\n");
  }
  SECTION("non-triple topology is rejected") {
    Scenario base;
    base.name = "sweep";
    base.spec.topology = Topology::Double;
    base.spec.volumes = {1, 1};
    CHECK_THROWS_AS(sweep_vertex_separation(base, {2.0}), Error);
  }
  SECTION("evolved vertex separations stay well apart across densities") {
    // The two singular vertices of the triple bubble do not approach each
    // other as p grows; the normalized separation stays far from zero.
    Scenario base;
    base.name = "sweep";
    base.spec.topology = Topology::Triple;
    base.spec.volumes = {1, 1, 1};
    base.spec.p = 2;
    base.spec.epsilon = 0.01;
    base.spec.refinement_level = 1;
    base.config.max_iterations = 800;
    base.config.refine_schedule = {200, 500};
    std::vector<SweepRow> rows = sweep_vertex_separation(base, {0.5, 2.0, 3.0});
    REQUIRE(rows.size() == 3);
    for (const SweepRow& r : rows) {
      CHECK(r.vertices == 2);
      CHECK(r.separation_over_diameter > 0.05);
    }
  }
}

TEST_CASE("run_scenario writes the requested artifacts", "[cli]") {
  Scenario sc;
  sc.name = "artifact_check";
  sc.spec.topology = Topology::Single;
  sc.spec.volumes = {1};
  sc.spec.p = 0;
  sc.spec.refinement_level = 1;
  sc.config.max_iterations = 30;
  sc.config.refine_schedule = {};
  std::ostringstream log;
  int code = run_scenario(sc, "/tmp", log);
  CHECK((code == 0 || code == 2));
  CHECK(log.str().find("artifact_check") != std::string::npos);
  std::ifstream obj("/tmp/artifact_check.obj");
  CHECK(obj.good());
  std::ifstream trace("/tmp/artifact_check.trace.csv");
  CHECK(trace.good());
  std::string header;
  std::getline(trace, header);
  CHECK(header == "iter,area,maxvolresid,step,nverts");
  ParsedMetrics pm = parse_metrics_file("/tmp/artifact_check.metrics.csv");
  CHECK(pm.get("name") == "artifact_check");

  // Identical scenario -> byte-identical trace file.
  std::ostringstream log2;
  run_scenario(sc, "/tmp", log2);
  auto slurp = [](const char* path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string t1 = slurp("/tmp/artifact_check.trace.csv");
  run_scenario(sc, "/tmp", log2);
  CHECK(slurp("/tmp/artifact_check.trace.csv") == t1);
  CHECK_FALSE(t1.empty());
}
