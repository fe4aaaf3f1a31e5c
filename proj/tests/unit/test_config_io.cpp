#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlns/config.hpp"
#include "nlns/error.hpp"
#include "nlns/functionals.hpp"
#include "nlns/io.hpp"
#include "nlns/run.hpp"

using namespace nlns;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nlns_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("preset expansion") {
  const RunConfig c = parse_config("dim=1\nn=64\nL=8\nalpha=0.5\npreset=limit\nT=0.5");
  CHECK(c.dim == 1);
  CHECK(c.n == 64);
  CHECK(c.T == 0.5);
  CHECK(c.params.half_length == 8.0);
  for (double v : {c.params.epsilon, c.params.nu, c.params.eta, c.params.delta, c.params.kappa, c.params.r0,
                   c.params.r1})
    CHECK(v == 0.0);

  const RunConfig full = parse_config("n=64\nL=8\npreset=galerkin-full\nkappa=2e-4\n");
  CHECK(full.params.epsilon == 1e-3);
  CHECK(full.params.kappa == 2e-4);
  CHECK(full.params.delta == doctest::Approx(1e-10 * std::pow(16.0 / 64.0, 6)));
}

TEST_CASE("configuration errors") {
  CHECK(error_of("alpha=2.5").find("alpha must lie in (0,2)") != std::string::npos);
  const std::string dup = error_of("n=32\n# comment\nT=1\nn=64\n");
  CHECK(dup.find("1") != std::string::npos);
  CHECK(dup.find("4") != std::string::npos);
  CHECK(dup.find("duplicate") != std::string::npos);
  CHECK(error_of("bogus=1\n").find("line 1") != std::string::npos);
  CHECK(error_of("n=32\nT=abc\n").find("line 2") != std::string::npos);
  CHECK(error_of("n=31\n") != "");
  CHECK(error_of("dim=1\nalpha=1.5\n") != "");
  CHECK(error_of("preset=unknown\n") != "");
  CHECK_THROWS_AS(load_config("/nonexistent/x.cfg"), IoError);
}

TEST_CASE("manifest round trip") {
  const RunConfig c = parse_config("dim=2\nn=32\nL=6\nalpha=1.1\npreset=bd-regime\nT=0.3\ndt=0.001\nseed=9\n");
  const std::string m = manifest(c);
  CHECK(manifest(parse_config(m)) == m);
  const RunConfig back = parse_config(m);
  CHECK(back.params.kappa == c.params.kappa);
  CHECK(back.dt.has_value());
  CHECK(*back.dt == 0.001);
  const RunConfig a = parse_config("n=16\n");
  CHECK_FALSE(parse_config(manifest(a)).dt.has_value());
}

TEST_CASE("snapshot round trip") {
  const fs::path dir = scratch_dir("snapshot");
  const TorusGrid g(2, 8, 1.5);
  Field rho(g), u0(g), u1(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    rho[i] = 1.0 + 0.01 * i;
    u0[i] = std::sin(0.1 * i);
    u1[i] = -1e-300 * i;
  }
  const std::vector<NamedField> fields{{"rho", rho}, {"u0", u0}, {"u1", u1}};
  write_snapshot((dir / "s.nlns").string(), fields);
  const auto back = read_snapshot((dir / "s.nlns").string());
  REQUIRE(back.size() == 3);
  for (std::size_t f = 0; f < 3; ++f) {
    CHECK(back[f].name == fields[f].name);
    CHECK(back[f].field.grid() == g);
    CHECK(back[f].field.data() == fields[f].field.data());
  }
  std::ofstream(dir / "bad.nlns") << "garbage";
  CHECK_THROWS_AS(read_snapshot((dir / "bad.nlns").string()), IoError);
}

TEST_CASE("runs are deterministic and their CSV round-trips") {
  RunConfig c = parse_config("dim=1\nn=32\nL=8\nalpha=0.5\npreset=galerkin-full\nT=0.05\ndt=0.005\n");
  const fs::path dir_a = scratch_dir("run_a");
  c.output_dir = dir_a.string();
  const RunSummary a = run(c);
  c.output_dir = scratch_dir("run_b").string();
  run(c);
  const std::string csv_a = slurp(dir_a / "diagnostics.csv");
  const std::string csv_b = slurp(fs::path(c.output_dir) / "diagnostics.csv");
  CHECK(!csv_a.empty());
  CHECK(csv_a == csv_b);
  CHECK(a.steps == 10);
  CHECK(a.records.size() == 11);
  for (const char* f : {"manifest.cfg", "summary.json", "snapshots.csv", "snapshot_000010.nlns"})
    CHECK(fs::exists(fs::path(c.output_dir) / f));

  const auto records = read_diagnostics_csv((fs::path(c.output_dir) / "diagnostics.csv").string());
  REQUIRE(records.size() == a.records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].t == a.records[i].t);
    CHECK(records[i].energy_E == a.records[i].energy_E);
    CHECK(records[i].energy_budget_residual == a.records[i].energy_budget_residual);
  }
  CHECK(csv_header().size() == csv_values(records[0]).size());
}

TEST_CASE("diagnostics and snapshot cadences are independent") {
  RunConfig c = parse_config("n=16\nL=8\npreset=limit\nT=0.06\ndt=0.01\nsnapshot_every=3\ndiagnostics_every=2\n");
  c.output_dir = scratch_dir("cadence").string();
  const RunSummary s = run(c);
  CHECK(s.records.size() == 4);  // steps 0, 2, 4, 6
  int snapshots = 0;
  for (const auto& e : fs::directory_iterator(c.output_dir))
    if (e.path().extension() == ".nlns") ++snapshots;
  CHECK(snapshots == 2);  // steps 3 and 6
}

TEST_CASE("full preset completes with decreasing energy") {
  RunConfig c = parse_config("dim=1\nn=64\nL=8\nalpha=0.5\npreset=galerkin-full\nT=0.5\n");
  const RunSummary s = run(c, RunOptions{.write_outputs = false});
  CHECK(s.final_state.t == doctest::Approx(0.5));
  for (std::size_t i = 1; i < s.records.size(); ++i)
    CHECK(s.records[i].energy_E <= s.records[i - 1].energy_E);
  CHECK(s.max_floored_points == 0);
}
