#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hirsch/json_io.hpp"

namespace {

std::string g_bin;
std::filesystem::path g_tmp;

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult run(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd = env_prefix + g_bin + " " + args + " 2>&1";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) {
    r.output.append(buf, got);
  }
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string tmp_file(const std::string& name) {
  return (g_tmp / name).string();
}

}  // namespace

TEST_CASE("fixed point command writes the exact uniform measure") {
  const std::string out = tmp_file("const2_measure.json");
  const auto r = run("gmeasure --g const2 --level 6 --out " + out);
  INFO(r.output);
  CHECK(r.code == 0);
  CHECK(r.output.find("converged") != std::string::npos);
  CHECK(r.output.find("yes") != std::string::npos);
  const auto mu = hirsch::load_measure(out);
  REQUIRE(mu.level() == 6);
  for (std::size_t j = 0; j < mu.size(); ++j) {
    CHECK(mu.arc_weight(j) == std::ldexp(1.0, -6));
  }
}

TEST_CASE("iteration cap surfaces as exit 3") {
  const auto r = run("gmeasure --g sine:a=0.3 --level 6 --max-iter 3 --tol 1e-15");
  INFO(r.output);
  CHECK(r.code == 3);
}

TEST_CASE("input errors surface as exit 2") {
  CHECK(run("gmeasure --g sine:a=abc --level 4").code == 2);
  CHECK(run("gmeasure --level 4").code == 2);
  CHECK(run("gmeasure --g const2 --level 30").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("gmeasure --g table:/definitely/not/there.json --level 4").code == 2);
  CHECK(run("stationarity --family const2 --mu /nope.json --n 10 --t-end 0.1").code == 2);
  CHECK(run("audit --family sine:a=0.9,eps=0.2 --grid 16 --level 3").code == 2);

  const std::string bad = tmp_file("bad_table.json");
  {
    nlohmann::json j;
    j["level"] = 1;
    j["values"] = {1.0, 2.0};
    std::ofstream(bad) << j.dump();
  }
  CHECK(run("gmeasure --g table:" + bad + " --level 4").code == 2);
}

TEST_CASE("table files round trip through the fixed point command") {
  const std::string table = tmp_file("table.json");
  {
    nlohmann::json j;
    j["level"] = 2;
    j["interpolation"] = "reciprocal-linear";
    j["values"] = {2.0, 4.0, 2.0, 4.0 / 3.0};
    std::ofstream(table) << j.dump();
  }
  const std::string out = tmp_file("table_measure.json");
  const auto r = run("gmeasure --g table:" + table + " --level 5 --out " + out);
  INFO(r.output);
  CHECK(r.code == 0);
  const auto mu = hirsch::load_measure(out);
  CHECK(mu.level() == 5);
  CHECK(mu.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("geometry audits pass at production grid and fail when starved") {
  const auto good = run("audit --family sine:a=0.3 --grid 256 --level 5");
  INFO(good.output);
  CHECK(good.code == 0);
  CHECK(good.output.find("audit verdict: pass") != std::string::npos);

  // Four quadrature cells per side cannot reach the area tolerance; the
  // command must say so and exit with the audit failure code.
  const auto starved = run("audit --family const2 --grid 4 --level 4");
  INFO(starved.output);
  CHECK(starved.code == 4);
  CHECK(starved.output.find("audit verdict: FAIL") != std::string::npos);
}

TEST_CASE("single path simulation is consistent and byte reproducible") {
  const std::string r1 = tmp_file("sim1.json");
  const std::string r2 = tmp_file("sim2.json");
  const std::string args =
      "simulate --family sine:a=0.3 --fiber 0.2 --chart 1 --u 0.5 --v 0.1 "
      "--dt 1e-3 --t-end 1.5 --seed 5 --sample-dt 0.25 --report ";
  const auto a = run(args + r1);
  INFO(a.output);
  CHECK(a.code == 0);
  CHECK(a.output.find("events consistent") != std::string::npos);
  CHECK(a.output.find("yes") != std::string::npos);
  const auto b = run(args + r2);
  CHECK(b.code == 0);

  const auto ja = hirsch::load_json(r1);
  const auto jb = hirsch::load_json(r2);
  REQUIRE(ja.contains("meta"));
  REQUIRE(ja["meta"].contains("generated_at"));
  REQUIRE(ja.contains("report"));
  CHECK(ja["report"].dump() == jb["report"].dump());
  CHECK(ja["report"].contains("events"));
  CHECK(ja["report"].contains("samples"));
}

TEST_CASE("stationarity controls: invariance passes, wrong pairing rejected") {
  const std::string rep = tmp_file("stat_pos.json");
  const auto pos = run(
      "stationarity --family const2 --mu uniform --level 6 --n 1500 "
      "--t-end 1 --dt 2e-3 --bootstrap 50 --seed 2 --report " + rep);
  INFO(pos.output);
  CHECK(pos.code == 0);
  const auto j = hirsch::load_json(rep);
  CHECK(j["report"]["stationary"].get<bool>());

  const auto neg = run(
      "stationarity --family sine:a=0.7 --mu uniform --level 6 --n 3000 "
      "--t-end 3 --dt 2e-3 --bootstrap 50 --seed 2");
  INFO(neg.output);
  CHECK(neg.code == 5);
}

TEST_CASE("seeded reruns are byte identical across thread counts") {
  const std::string r1 = tmp_file("threads1.json");
  const std::string r8 = tmp_file("threads8.json");
  const std::string args =
      "stationarity --family sine:a=0.3 --mu uniform --level 6 --n 800 "
      "--t-end 1 --dt 2e-3 --bootstrap 40 --seed 9 --report ";
  const auto a = run(args + r1, "HIRSCHLAB_THREADS=1 ");
  const auto b = run(args + r8, "HIRSCHLAB_THREADS=8 ");
  INFO(a.output);
  INFO(b.output);
  // Either verdict is acceptable here; the two runs must agree bytewise.
  CHECK(a.code == b.code);
  const auto ja = hirsch::load_json(r1);
  const auto jb = hirsch::load_json(r8);
  CHECK(ja["report"].dump() == jb["report"].dump());
}

TEST_CASE("distinctness verdicts and the family guard") {
  const auto yes = run(
      "distinct --family-a sine:a=0.3 --mu-a g --mu-b uniform --level 6 "
      "--threshold 1e-4");
  INFO(yes.output);
  CHECK(yes.code == 0);
  CHECK(yes.output.find("distinct") != std::string::npos);

  const auto same = run(
      "distinct --family-a sine:a=0.3 --mu-a uniform --mu-b uniform --level 6");
  INFO(same.output);
  CHECK(same.code == 5);

  const auto guard = run(
      "distinct --family-a sine:a=0.3 --family-b sine:a=0.4 --mu-a uniform "
      "--mu-b uniform --level 6");
  INFO(guard.output);
  CHECK(guard.code == 2);
}

TEST_CASE("measure files feed the stationarity command") {
  const std::string mu = tmp_file("uniform6.json");
  REQUIRE(run("gmeasure --g const2 --level 6 --out " + mu).code == 0);
  const auto r = run(
      "stationarity --family const2 --mu " + mu +
      " --level 6 --n 400 --t-end 0.5 --dt 2e-3 --bootstrap 40 --seed 4");
  INFO(r.output);
  CHECK(r.code == 0);
}

int main(int argc, char** argv) {
  std::vector<char*> pass;
  pass.push_back(argv[0]);
  for (int i = 1; i < argc; ++i) {
    if (g_bin.empty() && argv[i][0] != '-') {
      g_bin = argv[i];
    } else {
      pass.push_back(argv[i]);
    }
  }
  if (g_bin.empty()) {
    std::fprintf(stderr, "usage: test_cli <path-to-hirschlab> [doctest args]\n");
    return 1;
  }
  g_tmp = std::filesystem::temp_directory_path() /
          ("hirschlab_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(g_tmp);

  doctest::Context ctx(int(pass.size()), pass.data());
  const int rc = ctx.run();
  std::error_code ec;
  std::filesystem::remove_all(g_tmp, ec);
  return rc;
}
