#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "samplenash/error.hpp"

namespace samplenash::cli {

using nlohmann::json;

namespace {

std::vector<std::size_t> one_based(const std::vector<std::size_t>& v) {
  std::vector<std::size_t> out;
  for (auto i : v) out.push_back(i + 1);
  return out;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json("undefined");
}

}  // namespace

std::optional<GameMatrix> builtin_matrix(const std::string& name) {
  if (name == "id2") return GameMatrix{{1.0, 0.0}, {0.0, 1.0}};
  if (name == "sep2") return GameMatrix{{1.1, 1.0}, {0.0, 1.1}};
  if (name == "supp3") return GameMatrix{{1.0, 0.0}, {0.0, 1.0}, {0.3, 0.2}};
  return std::nullopt;
}

GameMatrix parse_matrix_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array()) {
    throw Error(ErrorCode::kParseError, "expected an object with a \"rows\" array");
  }
  std::vector<GameMatrix::Row> rows;
  for (const auto& r : j["rows"]) {
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
      throw Error(ErrorCode::kParseError, "each row must hold exactly two numbers");
    }
    rows.push_back({r[0].get<double>(), r[1].get<double>()});
  }
  if (rows.size() < 2) throw Error(ErrorCode::kParseError, "matrix needs at least 2 rows");
  return GameMatrix(std::move(rows));
}

GameMatrix load_matrix(const std::string& path_or_builtin) {
  std::ifstream in(path_or_builtin);
  if (!in) {
    if (auto m = builtin_matrix(path_or_builtin)) return *m;
    throw Error(ErrorCode::kIoError, "cannot read '" + path_or_builtin + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_matrix_json(ss.str());
}

std::string solution_json(const NashSolution& s) {
  json j;
  j["value"] = s.value;
  j["x"] = s.x;
  j["y"] = s.y;
  j["kind"] = nash_kind_name(s.kind);
  j["row_support"] = one_based(s.row_support);
  j["col_support"] = one_based(s.col_support);
  if (s.psne) j["psne"] = {s.psne->row + 1, s.psne->col + 1};
  return j.dump(2);
}

std::string params_json(const GameMatrix& a) {
  const InstanceParams p = instance_params(a);
  json j;
  j["n"] = a.n();
  j["D"] = optional_number(p.d);
  j["delta_min"] = p.delta_min;
  j["delta_m2"] = optional_number(p.delta_m2);
  j["delta_g"] = optional_number(p.delta_g);
  j["has_psne"] = p.has_psne;
  j["r"] = p.r ? json(*p.r) : json("undefined");
  return j.dump(2);
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorCode::kInvalidArgs, "trials must be >= 1");
  if (!(cfg.eps > 0.0) || !std::isfinite(cfg.eps)) {
    throw Error(ErrorCode::kInvalidArgs, "eps must be positive");
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgs, "delta must lie in (0,1)");
  }
  if (cfg.threads < 1) throw Error(ErrorCode::kInvalidArgs, "threads must be >= 1");
  const bool two_by_two = cfg.algorithm == Algorithm::kEpsGood ||
                          cfg.algorithm == Algorithm::kEpsNash;
  if (two_by_two && cfg.matrix.n() != 2) {
    throw Error(ErrorCode::kInvalidArgs, "eps-good and eps-nash need a 2x2 matrix");
  }
  if (cfg.noise == NoiseKind::kSignBernoulli && cfg.matrix.max_abs() > 1.0) {
    throw Error(ErrorCode::kInvalidArgs, "sign noise needs |A_ij| <= 1");
  }
}

TrialRecord run_trial(const ExperimentConfig& cfg, int trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = cfg.seed + static_cast<std::uint64_t>(trial);

  SamplingEnv env(cfg.matrix, cfg.noise, rec.seed);
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult r = run_algorithm(cfg.algorithm, env, cfg.eps, cfg.delta);
  const auto t1 = std::chrono::steady_clock::now();

  rec.rounds = r.rounds;
  rec.total_samples = r.total_samples;
  rec.branch = r.branch;
  rec.wall_time_ms =
      cfg.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;

  // Judged against the true matrix, never the run's own estimate.
  const GameMatrix& truth = cfg.matrix;
  rec.eps_good = is_eps_good(truth, r.x, r.y, cfg.eps);
  rec.eps_nash = is_eps_nash(truth, r.x, r.y, cfg.eps);
  if (r.kind == OutputKind::kSupport) {
    const NashSolution s = solve_nx2(truth);
    rec.support_correct = r.row_support == s.row_support && r.col_support == s.col_support;
  }
  switch (cfg.algorithm) {
    case Algorithm::kEpsGood:
    case Algorithm::kPipelineGood:
      rec.success = rec.eps_good;
      break;
    case Algorithm::kSupport:
      rec.success = rec.support_correct.value_or(rec.eps_nash);
      break;
    default:
      rec.success = rec.eps_nash;
  }
  return rec;
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<TrialRecord> out(static_cast<std::size_t>(cfg.trials));
  const int workers = std::min(cfg.threads, cfg.trials);
  if (workers == 1) {
    for (int k = 0; k < cfg.trials; ++k) out[k] = run_trial(cfg, k);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int k = next++; k < cfg.trials; k = next++) out[k] = run_trial(cfg, k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "trial,seed,rounds,total_samples,branch,eps_good,eps_nash,support_correct,"
        "wall_time_ms\n";
  for (const auto& r : records) {
    os << r.trial << ',' << r.seed << ',' << r.rounds << ',' << r.total_samples << ','
       << r.branch << ',' << (r.eps_good ? "true" : "false") << ','
       << (r.eps_nash ? "true" : "false") << ',';
    if (r.support_correct) os << (*r.support_correct ? "true" : "false");
    os << ',' << std::fixed << std::setprecision(3) << r.wall_time_ms
       << std::defaultfloat << '\n';
  }
}

std::string summary_json(const ExperimentConfig& cfg,
                         const std::vector<TrialRecord>& records) {
  const double n = static_cast<double>(records.size());
  double good = 0, nash = 0, success = 0, tau = 0, rounds = 0, max_tau = 0;
  int support_seen = 0, support_ok = 0, violations = 0;
  std::map<std::string, int> branches;
  const double upper = upper_total_samples(cfg.algorithm, cfg.matrix, cfg.eps, cfg.delta);
  for (const auto& r : records) {
    good += r.eps_good;
    nash += r.eps_nash;
    success += r.success;
    const double t = static_cast<double>(r.total_samples);
    tau += t;
    max_tau = std::max(max_tau, t);
    rounds += static_cast<double>(r.rounds);
    if (r.support_correct) {
      ++support_seen;
      support_ok += *r.support_correct;
    }
    if (t > upper) ++violations;
    ++branches[r.branch];
  }
  json j;
  j["instance"] = cfg.instance_label;
  j["algorithm"] = algorithm_name(cfg.algorithm);
  j["eps"] = cfg.eps;
  j["delta"] = cfg.delta;
  j["noise"] = noise_kind_name(cfg.noise);
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["success_rate"] = success / n;
  j["success_rate_eps_good"] = good / n;
  j["success_rate_eps_nash"] = nash / n;
  j["support_correct_rate"] =
      support_seen > 0 ? json(static_cast<double>(support_ok) / support_seen) : json(nullptr);
  j["mean_tau"] = tau / n;
  j["max_tau"] = max_tau;
  j["mean_rounds"] = rounds / n;
  j["upper_bound_total_samples"] = upper;
  j["upper_bound_violations"] = violations;
  j["branches"] = branches;
  if (cfg.family) {
    const HardnessTriple t = make_triple(*cfg.family, cfg.matrix, cfg.eps, cfg.delta);
    j["family"] = family_name(*cfg.family);
    j["tau_lower"] = t.tau_lower;
    j["tau_lower_binding"] = cfg.delta < 1.0 / 30.0;
  }
  return j.dump(2);
}

Algorithm parse_algorithm(const std::string& alg, const std::string& goal) {
  if (alg == "naive") return Algorithm::kNaive;
  if (alg == "eps-good") return Algorithm::kEpsGood;
  if (alg == "eps-nash") return Algorithm::kEpsNash;
  if (alg == "support") return Algorithm::kSupport;
  if (alg == "pipeline") {
    if (goal == "good") return Algorithm::kPipelineGood;
    if (goal == "nash") return Algorithm::kPipelineNash;
    throw Error(ErrorCode::kInvalidArgs, "goal must be good or nash");
  }
  throw Error(ErrorCode::kInvalidArgs, "unknown algorithm '" + alg + "'");
}

namespace {

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::kIoError ? 3 : 2;
}

int cmd_solve(const std::string& path, std::ostream& out) {
  out << solution_json(solve_nx2(load_matrix(path))) << '\n';
  return 0;
}

int cmd_params(const std::string& path, std::ostream& out) {
  out << params_json(load_matrix(path)) << '\n';
  return 0;
}

struct RunOptions {
  std::string alg = "eps-good";
  std::string goal = "nash";
  double eps = 0.1;
  double delta = 0.1;
  std::string noise = "gaussian";
  int trials = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string summary;
  std::string matrix;
  std::string builtin;
  std::string family;
  int threads = 1;
  bool no_timing = false;
};

int cmd_run(const RunOptions& o, std::ostream& out) {
  ExperimentConfig cfg;
  if (!o.builtin.empty()) {
    auto m = builtin_matrix(o.builtin);
    if (!m) throw Error(ErrorCode::kInvalidArgs, "unknown builtin '" + o.builtin + "'");
    cfg.matrix = *m;
    cfg.instance_label = o.builtin;
  } else if (!o.matrix.empty()) {
    cfg.matrix = load_matrix(o.matrix);
    cfg.instance_label = o.matrix;
  } else {
    throw Error(ErrorCode::kInvalidArgs, "give --matrix or --builtin");
  }
  cfg.algorithm = parse_algorithm(o.alg, o.goal);
  cfg.eps = o.eps;
  cfg.delta = o.delta;
  cfg.noise = parse_noise_kind(o.noise);
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.timing = !o.no_timing;
  if (!o.family.empty()) cfg.family = parse_family(o.family);
  validate(cfg);

  std::ofstream csv(o.out);
  if (!csv) throw Error(ErrorCode::kIoError, "cannot write '" + o.out + "'");
  const auto records = run_trials(cfg);
  write_csv(csv, records);
  csv.close();
  if (!csv) throw Error(ErrorCode::kIoError, "failed writing '" + o.out + "'");

  const std::string summary = summary_json(cfg, records);
  const std::string summary_path = o.summary.empty() ? o.out + ".summary.json" : o.summary;
  std::ofstream sj(summary_path);
  if (!sj) throw Error(ErrorCode::kIoError, "cannot write '" + summary_path + "'");
  sj << summary << '\n';
  out << summary << '\n';
  return 0;
}

struct VerifyOptions {
  std::string family;
  double eps = 0.01;
  double delta = 0.01;
  int grid = 401;
  std::string matrix;
};

int cmd_verify_lb(const VerifyOptions& o, std::ostream& out) {
  const Family family = parse_family(o.family);
  const HardnessTriple t = make_triple(family, load_matrix(o.matrix), o.eps, o.delta);
  const GridVerdict v = family == Family::kNash ? verify_nash_confusion(t, o.grid)
                                                : verify_good_confusion(t, o.grid);
  json j;
  j["family"] = family_name(family);
  j["eps"] = o.eps;
  j["delta_param"] = t.delta_param;
  j["bound"] = v.threshold;
  j["min_max_loss"] = v.min_max_loss;
  j["grid"] = o.grid;
  j["slack"] = v.slack;
  j["strict_pass"] = v.strict_pass;
  j["tau_lower"] = t.tau_lower;
  j["pass"] = v.pass;
  out << j.dump(2) << '\n';
  return v.pass ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Identify good solutions and equilibria of n x 2 zero-sum games from noisy samples"};
  app.require_subcommand(1);

  std::string solve_path, params_path;
  auto* solve = app.add_subcommand("solve", "Print the exact equilibrium of a matrix");
  solve->add_option("matrix", solve_path, "Matrix JSON file or builtin name")->required();
  auto* params = app.add_subcommand("params", "Print the gap quantities of a matrix");
  params->add_option("matrix", params_path, "Matrix JSON file or builtin name")->required();

  RunOptions ro;
  auto* run = app.add_subcommand("run", "Run seeded trials of an identifier");
  run->add_option("--alg", ro.alg, "naive|eps-good|eps-nash|support|pipeline")
      ->check(CLI::IsMember({"naive", "eps-good", "eps-nash", "support", "pipeline"}));
  run->add_option("--goal", ro.goal, "Pipeline target: good|nash")
      ->check(CLI::IsMember({"good", "nash"}));
  run->add_option("--eps", ro.eps)->required();
  run->add_option("--delta", ro.delta)->required();
  run->add_option("--noise", ro.noise)->check(CLI::IsMember({"gaussian", "sign", "none"}));
  run->add_option("--trials", ro.trials);
  run->add_option("--seed", ro.seed);
  run->add_option("--out", ro.out, "CSV output path")->required();
  run->add_option("--summary", ro.summary, "Summary JSON path (default <out>.summary.json)");
  auto* mopt = run->add_option("--matrix", ro.matrix, "Matrix JSON file");
  auto* bopt = run->add_option("--builtin", ro.builtin, "id2|sep2|supp3");
  mopt->excludes(bopt);
  run->add_option("--family", ro.family, "Report this family's lower bound");
  run->add_option("--threads", ro.threads);
  run->add_flag("--no-timing", ro.no_timing, "Write 0 for wall_time_ms");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify-lb", "Grid-check a lower-bound construction");
  verify->add_option("--family", vo.family, "thm1|thm2|multi|thm3|thm4")
      ->required()
      ->check(CLI::IsMember({"thm1", "thm2", "multi", "thm3", "thm4"}));
  verify->add_option("--eps", vo.eps)->required();
  verify->add_option("--delta", vo.delta);
  verify->add_option("--grid", vo.grid);
  verify->add_option("--matrix", vo.matrix)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 2;
  }

  try {
    if (*solve) return cmd_solve(solve_path, out);
    if (*params) return cmd_params(params_path, out);
    if (*run) return cmd_run(ro, out);
    if (*verify) return cmd_verify_lb(vo, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e);
  }
  return 2;
}

}  // namespace samplenash::cli
