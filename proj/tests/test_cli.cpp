#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vectormix/cli.hpp"
#include "vectormix/simulation.hpp"
#include "vectormix/snapshot.hpp"
#include "vectormix/spectral_ops.hpp"

using namespace vectormix;
namespace fs = std::filesystem;

namespace {

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "vectormix");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(int(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& body) {
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("simulate writes the series and snapshots") {
  TempDir tmp("vectormix_cli_sim");
  const auto cfg = write_config(tmp.path, "run.cfg",
                                "alpha = 1\nn_cutoff = 12\nt_end = 0.4\ninit = dipole\noutput_interval = 0.1\n"
                                "snapshot_interval = 0.2\nout_dir = " +
                                    (tmp.path / "out").string() + "\n");
  REQUIRE(cli({"simulate", "--config", cfg.string()}) == 0);
  const std::string csv = slurp(tmp.path / "out" / "series.csv");
  CHECK(csv.rfind("t,dt,h_neg_alpha,energy,gradU_l2,gradU_linf,decay_rate_inst\n", 0) == 0);
  const auto rows = read_csv_rows(tmp.path / "out" / "series.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows.back().t == 0.4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].t > rows[i - 1].t);
  CHECK(fs::exists(tmp.path / "out" / "u_000003.vmxs"));
  CHECK(fs::exists(tmp.path / "out" / "p_000003.vmxs"));
  CHECK_FALSE(fs::exists(tmp.path / "out" / "u_000004.vmxs"));

  SUBCASE("reruns are byte-identical") {
    const auto cfg2 = write_config(tmp.path, "run2.cfg",
                                   slurp(cfg).replace(slurp(cfg).find("out\n"), 4, "out2\n"));
    REQUIRE(cli({"simulate", "--config", cfg2.string()}) == 0);
    CHECK(slurp(tmp.path / "out2" / "series.csv") == csv);
    CHECK(slurp(tmp.path / "out2" / "u_000003.vmxs") == slurp(tmp.path / "out" / "u_000003.vmxs"));
  }
  SUBCASE("optimal-field and pressure on snapshot files") {
    const auto u = (tmp.path / "out" / "u_000001.vmxs").string();
    const auto U = (tmp.path / "U_opt.vmxs").string();
    REQUIRE(cli({"optimal-field", "--in", u, "--alpha", "1", "--out", U}) == 0);
    const Snapshot s = read_snapshot(U);
    CHECK(sobolev_norm(s.field, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    const Snapshot stored = read_snapshot(tmp.path / "out" / "U_000001.vmxs");
    CHECK(max_coefficient(s.field - stored.field) <= 1e-15);
    const auto p = (tmp.path / "p.vmxs").string();
    REQUIRE(cli({"pressure", "--in-u", u, "--in-U", U, "--out", p}) == 0);
    CHECK(slurp(p) == slurp(tmp.path / "out" / "p_000001.vmxs"));
    CHECK(cli({"pressure", "--in-u", u, "--in-U", (tmp.path / "missing.vmxs").string(), "--out", p}) == 1);
  }
}

TEST_CASE("resume reproduces the uninterrupted run") {
  TempDir tmp("vectormix_cli_resume");
  const std::string body = "alpha = 1\nn_cutoff = 12\nt_end = 1\ninit = dipole\noutput_interval = 0.05\n"
                           "snapshot_interval = 0.25\nout_dir = " +
                           (tmp.path / "out").string() + "\n";
  const auto cfg = write_config(tmp.path, "run.cfg", body);
  REQUIRE(cli({"simulate", "--config", cfg.string()}) == 0);
  const auto full = read_csv_rows(tmp.path / "out" / "series.csv");

  REQUIRE(cli({"resume", "--checkpoint", (tmp.path / "out" / "checkpoint_000002.txt").string()}) == 0);
  const auto resumed = read_csv_rows(tmp.path / "out" / "series.csv");
  REQUIRE(resumed.size() == full.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    CHECK(resumed[i].t == full[i].t);
    CHECK(resumed[i].h_neg_alpha == doctest::Approx(full[i].h_neg_alpha).epsilon(1e-7));
    CHECK(resumed[i].energy == doctest::Approx(full[i].energy).epsilon(1e-7));
  }

  SUBCASE("extending t_end continues the run") {
    std::string longer = body;
    longer.replace(longer.find("t_end = 1"), 9, "t_end = 1.2");
    write_config(tmp.path, "run.cfg", longer);
    REQUIRE(cli({"resume", "--checkpoint", (tmp.path / "out" / "checkpoint.txt").string()}) == 0);
    const auto ext = read_csv_rows(tmp.path / "out" / "series.csv");
    CHECK(ext.size() == full.size() + 4);
    CHECK(ext.back().t == doctest::Approx(1.2));
  }
  SUBCASE("a changed config is refused") {
    std::string changed = body;
    changed.replace(changed.find("alpha = 1"), 9, "alpha = 0.5");
    write_config(tmp.path, "run.cfg", changed);
    CHECK(cli({"resume", "--checkpoint", (tmp.path / "out" / "checkpoint.txt").string()}) == 1);
  }
}

TEST_CASE("exit codes") {
  TempDir tmp("vectormix_cli_codes");
  CHECK(cli({}) == 1);
  CHECK(cli({"frobnicate"}) == 1);
  CHECK(cli({"bounds", "--q", "2", "--alpha", "1", "--d", "2", "--h-norm", "1", "--l2-norm", "1",
             "--budget", "1"}) == 0);
  CHECK(cli({"bounds", "--q", "two", "--alpha", "1", "--d", "2", "--h-norm", "1", "--l2-norm", "1",
             "--budget", "1"}) == 1);
  CHECK(cli({"bounds", "--q", "4", "--alpha", "0.5", "--d", "2", "--h-norm", "1", "--l2-norm", "1",
             "--budget", "1", "--r", "3"}) == 1);
  CHECK(cli({"simulate", "--config", (tmp.path / "nope.cfg").string()}) == 1);
  const auto bad = write_config(tmp.path, "bad.cfg", "alpha = 0.3\nn_cutoff = 8\nt_end = 1\ninit = dipole\n");
  CHECK(cli({"simulate", "--config", bad.string()}) == 1);
  CHECK(cli({"verify", "--suite", "nonsense"}) == 1);
  // A tolerance the integrator cannot meet above dt_min is a numerical failure.
  const auto stiff = write_config(tmp.path, "stiff.cfg",
                                  "alpha = 1\nn_cutoff = 8\nt_end = 1\ninit = dipole\nrtol = 1e-300\natol = 1e-300\n"
                                  "out_dir = " + (tmp.path / "o").string() + "\n");
  CHECK(cli({"simulate", "--config", stiff.string()}) == 2);
}

TEST_CASE("verify suites at small scale") {
  CHECK(cli({"verify", "--suite", "groenwall", "--n", "12", "--t-end", "0.5"}) == 0);
  CHECK(cli({"verify", "--suite", "growth", "--n", "12", "--growth-t-end", "0.5"}) == 0);
}
