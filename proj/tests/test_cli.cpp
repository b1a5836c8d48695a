#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/experiment.hpp"
#include "samplenash/error.hpp"

using namespace samplenash;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"samplenash"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : store) argv.push_back(s.data());
  std::ostringstream out, err;
  int code = samplenash::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "samplenash_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& text) {
  auto p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("matrix parsing") {
  auto m = cli::parse_matrix_json(R"({"rows": [[1, 0], [0, 1]]})");
  CHECK(m == GameMatrix{{1.0, 0.0}, {0.0, 1.0}});
  CHECK_THROWS_AS(cli::parse_matrix_json("{\"rows\": [[1, 0]]}"), Error);
  CHECK_THROWS_AS(cli::parse_matrix_json("{\"rows\": [[1, 0, 2], [0, 1, 2]]}"), Error);
  CHECK_THROWS_AS(cli::parse_matrix_json("not json"), Error);
  CHECK(cli::builtin_matrix("supp3"));
  CHECK_FALSE(cli::builtin_matrix("nope"));
  try {
    cli::load_matrix(scratch("missing.json").string());
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIoError);
  }
}

TEST_CASE("solve and params commands") {
  auto r = invoke({"solve", "id2"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(0.5));
  CHECK(j["row_support"] == nlohmann::json::array({1, 2}));
  CHECK(j["col_support"] == nlohmann::json::array({1, 2}));

  r = invoke({"params", "id2"});
  j = nlohmann::json::parse(r.out);
  CHECK(j["D"].get<double>() == 2.0);
  CHECK(j["delta_min"].get<double>() == 1.0);
  CHECK(j["delta_m2"].get<double>() == 1.0);
  CHECK(j["has_psne"] == false);

  r = invoke({"params", "supp3"});
  j = nlohmann::json::parse(r.out);
  CHECK(j["delta_min"].get<double>() == doctest::Approx(0.1));
  CHECK(j["delta_g"].get<double>() == doctest::Approx(0.238095).epsilon(1e-6));

  r = invoke({"params", write_file("const.json", R"({"rows": [[2, 2], [2, 2]]})")});
  j = nlohmann::json::parse(r.out);
  CHECK(j["D"].get<double>() == 0.0);
  CHECK(j["has_psne"] == true);

  CHECK(invoke({"solve", write_file("bad.json", "{rows: ")}).code == 2);
  CHECK(invoke({"solve", write_file("one.json", R"({"rows": [[1, 2]]})")}).code == 2);
  CHECK(invoke({"solve", scratch("absent.json").string()}).code == 3);
  CHECK(invoke({"frobnicate"}).code == 2);
}

TEST_CASE("run command writes the CSV and summary") {
  auto out = scratch("run.csv");
  auto r = invoke({"run", "--builtin", "id2", "--alg", "eps-good", "--eps", "0.005", "--delta", "0.05",
               "--noise", "none", "--trials", "1", "--seed", "1", "--out", out.string(),
               "--no-timing"});
  REQUIRE(r.code == 0);
  auto csv = slurp(out);
  CHECK(csv ==
        "trial,seed,rounds,total_samples,branch,eps_good,eps_nash,support_correct,wall_time_ms\n"
        "0,1,165615,662460,alg1:line11-N,true,true,,0.000\n");
  auto summary = nlohmann::json::parse(slurp(out.string() + ".summary.json"));
  CHECK(summary["success_rate"].get<double>() == 1.0);
  CHECK(summary["upper_bound_violations"].get<int>() == 0);
}

TEST_CASE("identical configurations give identical CSV files") {
  auto a = scratch("det_a.csv"), b = scratch("det_b.csv");
  for (const auto& p : {a, b}) {
    auto r = invoke({"run", "--builtin", "supp3", "--alg", "support", "--eps", "0.2", "--delta", "0.1",
                 "--noise", "gaussian", "--trials", "8", "--seed", "77", "--threads",
                 p == a ? "1" : "4", "--out", p.string(), "--no-timing"});
    REQUIRE(r.code == 0);
  }
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("trial records recompute success from the truth") {
  cli::ExperimentConfig cfg{"sep2", GameMatrix{{1.1, 1.0}, {0.0, 1.1}}};
  cfg.algorithm = Algorithm::kEpsNash;
  cfg.eps = 0.05;
  cfg.delta = 0.05;
  cfg.noise = NoiseKind::kGaussian;
  cfg.trials = 6;
  cfg.seed = 9;
  cfg.threads = 3;
  auto recs = cli::run_trials(cfg);
  REQUIRE(recs.size() == 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(recs[k].trial == k);
    CHECK(recs[k].seed == 9u + static_cast<unsigned>(k));
    SamplingEnv env(cfg.matrix, cfg.noise, recs[k].seed);
    auto res = alg2_eps_nash(env, cfg.eps, cfg.delta);
    CHECK(recs[k].eps_nash == is_eps_nash(cfg.matrix, res.x, res.y, cfg.eps));
    CHECK(recs[k].total_samples == res.total_samples);
  }
  cfg.trials = 0;
  CHECK_THROWS_AS(cli::validate(cfg), Error);
}

TEST_CASE("unwritable output is an I/O error") {
  auto r = invoke({"run", "--builtin", "id2", "--alg", "naive", "--eps", "0.2", "--delta", "0.1",
               "--out", "/nonexistent-dir/x/y.csv"});
  CHECK(r.code == 3);
}

TEST_CASE("verify-lb command") {
  auto r = invoke({"verify-lb", "--family", "thm1", "--eps", "0.01", "--delta", "0.01", "--grid", "401",
               "--matrix", "id2"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["bound"].get<double>() == doctest::Approx(0.015));

  auto nash = write_file("thm3.json", R"({"rows": [[2, 1], [0, 3]]})");
  CHECK(invoke({"verify-lb", "--family", "thm3", "--eps", "0.01", "--delta", "0.01", "--grid", "401",
            "--matrix", nash})
            .code == 0);
  CHECK(invoke({"verify-lb", "--family", "thm1", "--eps", "0.2", "--matrix", "id2"}).code == 2);
  CHECK(invoke({"verify-lb", "--family", "thm7", "--eps", "0.01", "--matrix", "id2"}).code == 2);
}
