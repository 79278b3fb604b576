#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(HMCF_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

double last_time(const std::string& csv) {
  const auto end = csv.find_last_not_of('\n');
  const auto start = csv.rfind('\n', end);
  return std::stod(csv.substr(start + 1, csv.find(',', start + 1) - start - 1));
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("missing geometry is a config error") {
    const auto cfg = write_temp("hmcf_cli_nogeom.json", R"({"beta": 0})");
    CHECK(run("train " + cfg.string()).code == 2);
    CHECK(run("sample-preview " + cfg.string()).code == 2);
  }

  TEST_CASE("unknown subcommand or option is a usage error") {
    CHECK(run("frobnicate").code == 2);
    CHECK(run("oracle curve 1 0 --nope").code == 2);
    CHECK(run("oracle ellipse 1 0").code == 2);
  }

  TEST_CASE("oracle collapse times") {
    const auto curve = run("oracle curve 1 0 --every 1000");
    REQUIRE(curve.code == 0);
    CHECK(curve.out.rfind("t,r\n", 0) == 0);
    CHECK(last_time(curve.out) == doctest::Approx(1.2533).epsilon(1e-3));
    const auto sphere = run("oracle sphere 1 0 --every 1000");
    REQUIRE(sphere.code == 0);
    CHECK(last_time(sphere.out) == doctest::Approx(0.8862).epsilon(1e-3));
    const auto closed = run("oracle curve 1 0.5 --closed-form --every 500");
    CHECK(closed.out.rfind("t,r,r_closed_form\n", 0) == 0);
  }

  TEST_CASE("sample-preview emits one row per sampled point") {
    const auto cfg = write_temp("hmcf_cli_preview.json", R"({"geometry": {"type": "sphere", "r0": 1},
      "sampling": {"n_f": 40, "n_0": 10, "n_b": 8, "n_p": 6}})");
    const auto r = run("sample-preview " + cfg.string() + " --seed 5");
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1 + 40 + 10 + 8 + 6);
    CHECK(r.out == run("sample-preview " + cfg.string() + " --seed 5").out);
  }

  TEST_CASE("train then eval round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "hmcf_cli_run";
    std::filesystem::remove_all(dir);
    const auto cfg = write_temp("hmcf_cli_train.json", R"({"geometry": {"type": "circle", "r0": 1},
      "network": {"hidden_layers": 2, "hidden_width": 6},
      "sampling": {"n_f": 20, "n_0": 10, "n_b": 10},
      "schedule": {"adam1_steps": 5, "adam2_steps": 5, "lbfgs_iters": 2}})");
    REQUIRE(run("train " + cfg.string() + " --output " + dir.string()).code == 0);
    CHECK(std::filesystem::exists(dir / "final.ckpt"));
    const auto e = run("eval " + (dir / "final.ckpt").string() + " " + cfg.string() + " --output " + (dir / "e").string());
    CHECK(e.code == 0);
    CHECK(e.out.find("rel_l2_train_horizon") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "e" / "diagnostics.json"));
    const auto bad = write_temp("hmcf_cli_bad.json", R"({"geometry": {"type": "circle", "r0": 1},
      "network": {"hidden_layers": 3, "hidden_width": 6}})");
    CHECK(run("eval " + (dir / "final.ckpt").string() + " " + bad.string()).code == 2);
    std::filesystem::remove_all(dir);
  }
}
