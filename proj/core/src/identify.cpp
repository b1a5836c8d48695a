#include "samplenash/identify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "samplenash/error.hpp"

namespace samplenash {

namespace {

void check_args(double eps, double delta) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::kInvalidArgs, "eps must be positive and finite");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgs, "delta must lie in (0,1)");
  }
}

void check_2x2(const SamplingEnv& env) {
  if (env.n() != 2) throw Error(ErrorCode::kWrongShape, "algorithm needs a 2x2 game");
}

std::uint64_t ceil_count(double v) {
  return static_cast<std::uint64_t>(std::ceil(v));
}

RunResult start(const char* name, const SamplingEnv& env, double eps, double delta,
                std::uint64_t horizon) {
  RunResult r;
  r.algorithm = name;
  r.eps = eps;
  r.delta = delta;
  r.seed = env.seed();
  r.horizon = horizon;
  return r;
}

// Fills the strategies from an equilibrium over `rows` of the env, lifting
// them back to all n rows.
void set_strategies(RunResult& r, const NashSolution& s, std::size_t n,
                    std::span<const std::size_t> rows) {
  r.x.assign(n, 0.0);
  for (std::size_t k = 0; k < rows.size(); ++k) r.x[rows[k]] = s.x[k];
  r.y = s.y;
}

RunResult& finish(RunResult& r, const SamplingEnv& env, std::string branch) {
  r.rounds = env.rounds();
  r.total_samples = env.total_samples();
  r.branch = std::move(branch);
  return r;
}

void answer_equilibrium(RunResult& r, const GameMatrix& abar) {
  const NashSolution s = solve_nx2(abar);
  r.kind = OutputKind::kStrategyPair;
  r.x = s.x;
  r.y = s.y;
}

void answer_psne(RunResult& r, const GameMatrix& abar, Cell c) {
  r.kind = OutputKind::kPsne;
  r.psne = c;
  r.x.assign(abar.n(), 0.0);
  r.x[c.row] = 1.0;
  r.y = {0.0, 0.0};
  r.y[c.col] = 1.0;
}

std::size_t argmin_abs(double u0, double u1) {
  return std::abs(u1) < std::abs(u0) ? 1 : 0;
}

}  // namespace

const char* output_kind_name(OutputKind k) {
  switch (k) {
    case OutputKind::kStrategyPair: return "strategy_pair";
    case OutputKind::kSupport: return "support";
    case OutputKind::kPsne: return "psne";
  }
  return "unknown";
}

std::string to_json(const RunResult& r) {
  nlohmann::json out;
  out["kind"] = output_kind_name(r.kind);
  out["x"] = r.x;
  out["y"] = r.y;
  if (r.kind == OutputKind::kSupport) {
    std::vector<std::size_t> rows, cols;
    for (auto i : r.row_support) rows.push_back(i + 1);
    for (auto j : r.col_support) cols.push_back(j + 1);
    out["row_support"] = rows;
    out["col_support"] = cols;
  }
  if (r.psne) out["psne"] = {r.psne->row + 1, r.psne->col + 1};

  nlohmann::json j;
  j["algorithm"] = r.algorithm;
  j["eps"] = r.eps;
  j["delta"] = r.delta;
  j["seed"] = r.seed;
  j["horizon"] = r.horizon;
  j["rounds"] = r.rounds;
  j["total_samples"] = r.total_samples;
  j["branch"] = r.branch;
  j["output"] = out;
  return j.dump();
}

std::uint64_t horizon_2x2(double eps, double delta) {
  check_args(eps, delta);
  return ceil_count(8.0 * std::log(16.0 / delta) / (eps * eps));
}

std::uint64_t horizon_support(std::size_t n, double eps, double delta) {
  check_args(eps, delta);
  return ceil_count(8.0 * std::log(8.0 * static_cast<double>(n) / delta) / (eps * eps));
}

std::uint64_t naive_count(std::size_t n, double eps, double delta) {
  check_args(eps, delta);
  return ceil_count(8.0 * std::log(2.0 * static_cast<double>(n) * 2.0 / delta) /
                    (eps * eps));
}

bool ratio_test(double dmin, double radius) {
  const double den = dmin - 2.0 * radius;
  if (den <= 0.0) return false;
  const double ratio = (dmin + 2.0 * radius) / den;
  return 1.0 <= ratio && ratio <= 1.5;
}

GoodStep classify_good(const GameMatrix& m, double radius, double eps) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  if (!ratio_test(delta_min_2x2(a, b, c, d), radius)) return GoodStep::kContinue;
  if (psne_find(m)) return GoodStep::kPsne;
  return std::abs(signed_d(a, b, c, d)) < 10.0 * eps ? GoodStep::kSmallD
                                                     : GoodStep::kLargeD;
}

NashStep classify_nash(const GameMatrix& m, double radius) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  if (!ratio_test(delta_min_2x2(a, b, c, d), radius)) return NashStep::kContinue;
  if (psne_find(m)) return NashStep::kPsne;
  const double dt = std::abs(signed_d(a, b, c, d));
  return delta_m2_2x2(a, b, c, d) >= dt / 8.0 ? NashStep::kToHorizon
                                               : NashStep::kCorrect;
}

GameMatrix nash_correction(const GameMatrix& m, double delta1) {
  const std::size_t i1 = argmin_abs(m(0, 0) - m(0, 1), m(1, 0) - m(1, 1));
  const std::size_t j1 = argmin_abs(m(0, 0) - m(1, 0), m(0, 1) - m(1, 1));
  const std::size_t i2 = 1 - i1, j2 = 1 - j1;
  std::vector<GameMatrix::Row> b(m.rows());
  b[i1][j2] = m(i1, j2) - 2.0 * delta1;
  b[i2][j1] = m(i2, j1) + 2.0 * delta1;
  return GameMatrix(std::move(b));
}

RunResult naive_identify(SamplingEnv& env, double eps, double delta) {
  const std::uint64_t k = naive_count(env.n(), eps, delta);
  RunResult r = start("naive", env, eps, delta, k);
  env.sample_rounds(k);
  r.empirical = env.empirical();
  answer_equilibrium(r, r.empirical);
  return finish(r, env, "naive:uniform");
}

RunResult alg1_eps_good(SamplingEnv& env, double eps, double delta) {
  check_2x2(env);
  const std::uint64_t T = horizon_2x2(eps, delta);
  const double log_arg = 16.0 * static_cast<double>(T) / delta;
  RunResult r = start("eps-good", env, eps, delta, T);

  for (std::uint64_t t = 1; t <= T; ++t) {
    env.sample_round();
    const double radius = confidence_radius(t, log_arg);
    const GameMatrix abar = env.empirical();
    switch (classify_good(abar, radius, eps)) {
      case GoodStep::kContinue:
        continue;
      case GoodStep::kPsne:
        r.empirical = abar;
        answer_psne(r, abar, *psne_find(abar));
        return finish(r, env, "alg1:line7-psne");
      case GoodStep::kSmallD:
        env.sample_rounds(T - t);
        r.empirical = env.empirical();
        answer_equilibrium(r, r.empirical);
        return finish(r, env, "alg1:line9-smallD");
      case GoodStep::kLargeD: {
        const double dt = std::abs(signed_d(abar(0, 0), abar(0, 1), abar(1, 0), abar(1, 1)));
        const double N = std::ceil(80.0 * std::log(log_arg) / (eps * dt));
        const bool capped = N > static_cast<double>(T - t);
        env.sample_rounds(capped ? T - t : static_cast<std::uint64_t>(N));
        r.empirical = env.empirical();
        answer_equilibrium(r, r.empirical);
        return finish(r, env, capped ? "alg1:line14-capped" : "alg1:line11-N");
      }
    }
  }
  r.empirical = env.empirical();
  answer_equilibrium(r, r.empirical);
  return finish(r, env, "alg1:line21-T");
}

RunResult alg2_eps_nash(SamplingEnv& env, double eps, double delta) {
  check_2x2(env);
  const std::uint64_t T = horizon_2x2(eps, delta);
  const double log_arg = 16.0 * static_cast<double>(T) / delta;
  RunResult r = start("eps-nash", env, eps, delta, T);

  for (std::uint64_t t = 1; t <= T; ++t) {
    env.sample_round();
    const double radius = confidence_radius(t, log_arg);
    const GameMatrix abar = env.empirical();
    switch (classify_nash(abar, radius)) {
      case NashStep::kContinue:
        continue;
      case NashStep::kPsne:
        r.empirical = abar;
        answer_psne(r, abar, *psne_find(abar));
        return finish(r, env, "alg2:line8-psne");
      case NashStep::kToHorizon:
        env.sample_rounds(T - t);
        r.empirical = env.empirical();
        answer_equilibrium(r, r.empirical);
        return finish(r, env, "alg2:line10-toT");
      case NashStep::kCorrect: {
        const double a = abar(0, 0), b = abar(0, 1), c = abar(1, 0), d = abar(1, 1);
        const double dt = std::abs(signed_d(a, b, c, d));
        const double m2 = delta_m2_2x2(a, b, c, d);
        const double N =
            std::ceil(200.0 * m2 * m2 * std::log(log_arg) / (eps * eps * dt * dt));
        if (N > static_cast<double>(T - t)) {
          env.sample_rounds(T - t);
          r.empirical = env.empirical();
          answer_equilibrium(r, r.empirical);
          return finish(r, env, "alg2:line15-capped");
        }
        const auto n_more = static_cast<std::uint64_t>(N);
        const double delta1 = confidence_radius(n_more + t, log_arg);
        env.sample_rounds(n_more);
        r.empirical = env.empirical();
        r.corrected = nash_correction(r.empirical, delta1);
        answer_equilibrium(r, *r.corrected);
        return finish(r, env, "alg2:line13-N");
      }
    }
  }
  r.empirical = env.empirical();
  answer_equilibrium(r, r.empirical);
  return finish(r, env, "alg2:line24-T");
}

RunResult alg3_support(SamplingEnv& env, double eps, double delta) {
  const std::size_t n = env.n();
  const std::uint64_t T = horizon_support(n, eps, delta);
  const double log_arg = 8.0 * static_cast<double>(n) * static_cast<double>(T) / delta;
  RunResult r = start("support", env, eps, delta, T);

  auto stop_with_equilibrium = [&](const char* branch) -> RunResult& {
    const auto rows = env.active_rows();
    r.empirical = env.empirical();
    set_strategies(r, solve_nx2(env.empirical(rows)), n, rows);
    r.kind = OutputKind::kStrategyPair;
    return finish(r, env, branch);
  };

  for (std::uint64_t t = 1; t <= T; ++t) {
    env.sample_round();
    const double radius = confidence_radius(t, log_arg);
    const GameMatrix abar = env.empirical();
    if (!ratio_test(delta_min_nx2(abar), radius)) continue;
    if (auto c = psne_find(abar)) {
      r.empirical = abar;
      answer_psne(r, abar, *c);
      return finish(r, env, "alg3:line7-psne");
    }

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (abar(k, 0) > abar(i, 0) && abar(k, 1) > abar(i, 1)) {
          env.deactivate_row(i);
          break;
        }
      }
    }
    const auto rows = env.active_rows();

    for (std::uint64_t tp = t + 1; tp <= T; ++tp) {
      env.sample_round();
      const double radius_p = confidence_radius(tp, log_arg);
      const GameMatrix sub = env.empirical(rows);
      const NashSolution sol = solve_nx2(sub);
      if (tp == T) return stop_with_equilibrium("alg3:line13-T");
      if (sol.row_support.size() != 2) continue;
      const double gap = gap_terms(sub, sol).value;
      if (gap >= 4.0 * radius_p) {
        r.kind = OutputKind::kSupport;
        r.row_support = {rows[sol.row_support[0]], rows[sol.row_support[1]]};
        r.col_support = {0, 1};
        r.empirical = env.empirical();
        set_strategies(r, sol, n, rows);
        return finish(r, env, "alg3:line19-support");
      }
    }
    // The inner loop only falls through when t = T.
    return stop_with_equilibrium("alg3:line24-T");
  }
  return stop_with_equilibrium("alg3:line24-T");
}

RunResult full_pipeline_nx2(SamplingEnv& env, double eps, double delta, Goal goal) {
  auto two_by_two = [&](SamplingEnv& e, double d) {
    return goal == Goal::kEpsGood ? alg1_eps_good(e, eps, d) : alg2_eps_nash(e, eps, d);
  };
  const char* name = goal == Goal::kEpsGood ? "pipeline-good" : "pipeline-nash";
  if (env.n() == 2) {
    RunResult r = two_by_two(env, delta);
    r.algorithm = name;
    r.delta = delta;
    return r;
  }

  RunResult first = alg3_support(env, eps, delta / 2.0);
  first.algorithm = name;
  first.delta = delta;
  if (first.kind != OutputKind::kSupport) return first;

  const std::vector<std::size_t> rows = first.row_support;
  SamplingEnv view = env.restricted(rows);
  RunResult second = two_by_two(view, delta / 2.0);

  RunResult r = first;
  r.kind = second.kind == OutputKind::kPsne ? OutputKind::kPsne : OutputKind::kStrategyPair;
  r.x.assign(env.n(), 0.0);
  for (std::size_t k = 0; k < rows.size(); ++k) r.x[rows[k]] = second.x[k];
  r.y = second.y;
  if (second.psne) r.psne = Cell{rows[second.psne->row], second.psne->col};
  r.row_support.clear();
  r.col_support.clear();
  r.horizon = first.horizon + second.horizon;
  r.rounds = first.rounds + second.rounds;
  r.total_samples = first.total_samples + second.total_samples;
  r.branch = first.branch + ">" + second.branch;
  r.corrected = second.corrected;
  return r;
}

double upper_rounds_eps_good(const GameMatrix& a, double eps, double delta) {
  const InstanceParams p = params_2x2(a);
  const double T = static_cast<double>(horizon_2x2(eps, delta));
  if (p.delta_min == 0.0) return T;
  const double L = std::log(16.0 * T / delta);
  double bound = 800.0 * L / (p.delta_min * p.delta_min) + 1.0;
  if (!p.has_psne) bound += 96.0 * L / (eps * std::abs(*p.d)) + 1.0;
  return std::min(T, bound);
}

double upper_rounds_eps_nash(const GameMatrix& a, double eps, double delta) {
  const InstanceParams p = params_2x2(a);
  const double T = static_cast<double>(horizon_2x2(eps, delta));
  if (p.delta_min == 0.0) return T;
  const double L = std::log(16.0 * T / delta);
  double bound = 800.0 * L / (p.delta_min * p.delta_min) + 1.0;
  if (!p.has_psne) {
    const double m2 = *p.delta_m2, d = *p.d;
    bound += 450.0 * m2 * m2 * L / (eps * eps * d * d) + 1.0;
  }
  return std::min(T, bound);
}

double upper_rounds_support(const GameMatrix& a, double eps, double delta) {
  const double T = static_cast<double>(horizon_support(a.n(), eps, delta));
  const double dmin = delta_min_nx2(a);
  if (dmin == 0.0) return T;
  const double L = std::log(8.0 * static_cast<double>(a.n()) * T / delta);
  const double t_min = 800.0 * L / (dmin * dmin);
  if (psne_find(a)) return std::min(T, t_min + 1.0);
  double dg = 0.0;
  try {
    dg = delta_g(a);
  } catch (const Error&) {
    return T;
  }
  const double m = std::max(t_min, 722.0 * L / (dg * dg));
  return m < T ? std::min(T, m + 2.0) : T;
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kNaive: return "naive";
    case Algorithm::kEpsGood: return "eps-good";
    case Algorithm::kEpsNash: return "eps-nash";
    case Algorithm::kSupport: return "support";
    case Algorithm::kPipelineGood: return "pipeline-good";
    case Algorithm::kPipelineNash: return "pipeline-nash";
  }
  return "unknown";
}

RunResult run_algorithm(Algorithm alg, SamplingEnv& env, double eps, double delta) {
  switch (alg) {
    case Algorithm::kNaive: return naive_identify(env, eps, delta);
    case Algorithm::kEpsGood: return alg1_eps_good(env, eps, delta);
    case Algorithm::kEpsNash: return alg2_eps_nash(env, eps, delta);
    case Algorithm::kSupport: return alg3_support(env, eps, delta);
    case Algorithm::kPipelineGood: return full_pipeline_nx2(env, eps, delta, Goal::kEpsGood);
    case Algorithm::kPipelineNash: return full_pipeline_nx2(env, eps, delta, Goal::kEpsNash);
  }
  throw Error(ErrorCode::kInvalidArgs, "unknown algorithm");
}

double upper_total_samples(Algorithm alg, const GameMatrix& a, double eps, double delta) {
  const double entries = 2.0 * static_cast<double>(a.n());
  switch (alg) {
    case Algorithm::kNaive:
      return entries * static_cast<double>(naive_count(a.n(), eps, delta));
    case Algorithm::kEpsGood:
      return entries * upper_rounds_eps_good(a, eps, delta);
    case Algorithm::kEpsNash:
      return entries * upper_rounds_eps_nash(a, eps, delta);
    case Algorithm::kSupport:
      return entries * upper_rounds_support(a, eps, delta);
    case Algorithm::kPipelineGood:
    case Algorithm::kPipelineNash: {
      const bool good = alg == Algorithm::kPipelineGood;
      if (a.n() == 2) {
        return 4.0 * (good ? upper_rounds_eps_good(a, eps, delta)
                           : upper_rounds_eps_nash(a, eps, delta));
      }
      double total = entries * upper_rounds_support(a, eps, delta / 2.0);
      const NashSolution s = solve_nx2(a);
      if (s.row_support.size() == 2) {
        const GameMatrix sub = a.select_rows(s.row_support);
        total += 4.0 * (good ? upper_rounds_eps_good(sub, eps, delta / 2.0)
                             : upper_rounds_eps_nash(sub, eps, delta / 2.0));
      }
      return total;
    }
  }
  throw Error(ErrorCode::kInvalidArgs, "unknown algorithm");
}

}  // namespace samplenash
