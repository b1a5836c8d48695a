#include "samplenash/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "samplenash/error.hpp"

namespace samplenash {

namespace {

[[noreturn]] void violated(const std::string& what) {
  throw Error(ErrorCode::kPreconditionViolated, what);
}

void require(bool ok, const std::string& what) {
  if (!ok) violated(what);
}

double log_term(double delta) { return std::log(1.0 / (30.0 * delta)); }

struct Abcd {
  double a, b, c, d;
};

Abcd abcd(const GameMatrix& m) { return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }

// Orientation checks shared by make_triple and canonicalize.
std::optional<std::string> orientation_problem(Family family, const GameMatrix& m) {
  if (family == Family::kSupport) {
    if (m.n() != 3) return "base must be 3x2";
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1), e = m(2, 0),
                 f = m(2, 1);
    if (!(a > b && a > c && a > e && d > b && d > c && f > e && f > b)) {
      return "sign conditions a>b, a>c, a>e, d>b, d>c, f>e, f>b";
    }
    if (psne_find(m)) return "base has a PSNE";
    const NashSolution s = solve_nx2(m);
    if (s.kind != NashKind::kUniqueMixed ||
        s.row_support != std::vector<std::size_t>{0, 1}) {
      return "unique equilibrium supported on rows 1 and 2";
    }
    return std::nullopt;
  }
  if (m.n() != 2) return "base must be 2x2";
  const auto [a, b, c, d] = abcd(m);
  const double dd = signed_d(a, b, c, d);
  switch (family) {
    case Family::kValueD:
      if (psne_find(m)) return "unique equilibrium that is not a PSNE";
      return std::nullopt;
    case Family::kValueMin:
      if (psne_find(m)) return "unique equilibrium that is not a PSNE";
      if (!(dd > 0.0)) return "D > 0";
      if (delta_min_2x2(a, b, c, d) != a - b) return "delta_min = a - b";
      if (!(a - c >= d - b)) return "a - c >= d - b";
      return std::nullopt;
    case Family::kMultiple:
      if (!(a == b && a > c && a < d)) return "a = b, a > c, a < d";
      if (!(a - c >= d - a)) return "a - c >= d - a";
      return std::nullopt;
    case Family::kNash:
      if (psne_find(m)) return "unique equilibrium that is not a PSNE";
      if (!(dd > 0.0)) return "D > 0";
      return std::nullopt;
    case Family::kSupport:
      break;
  }
  return std::nullopt;
}

GameMatrix transform_2x2(const GameMatrix& m, bool swap_rows, bool swap_cols,
                         bool players) {
  auto [a, b, c, d] = abcd(m);
  if (players) {  // A -> -A^T
    const double na = -a, nb = -c, nc = -b, nd = -d;
    a = na, b = nb, c = nc, d = nd;
  }
  if (swap_rows) std::swap(a, c), std::swap(b, d);
  if (swap_cols) std::swap(a, b), std::swap(c, d);
  return GameMatrix{{a, b}, {c, d}};
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::kValueD: return "thm1";
    case Family::kValueMin: return "thm2";
    case Family::kMultiple: return "multi";
    case Family::kNash: return "thm3";
    case Family::kSupport: return "thm4";
  }
  return "unknown";
}

Family parse_family(const std::string& s) {
  for (Family f : {Family::kValueD, Family::kValueMin, Family::kMultiple, Family::kNash,
                   Family::kSupport}) {
    if (s == family_name(f)) return f;
  }
  throw Error(ErrorCode::kInvalidArgs, "unknown family '" + s + "'");
}

GameMatrix family_member(Family family, const GameMatrix& base, double s) {
  if (family == Family::kSupport) {
    if (base.n() != 3) throw Error(ErrorCode::kWrongShape, "family needs a 3x2 base");
    return GameMatrix{{base(0, 0), base(0, 1)},
                      {base(1, 0) - s, base(1, 1) - s},
                      {base(2, 0) + s, base(2, 1) + s}};
  }
  if (base.n() != 2) throw Error(ErrorCode::kWrongShape, "family needs a 2x2 base");
  const auto [a, b, c, d] = abcd(base);
  switch (family) {
    case Family::kValueD:
      return GameMatrix{{a + s, b}, {c, d - s}};
    case Family::kValueMin:
    case Family::kMultiple:
      return GameMatrix{{a + s, b - s}, {c + s, d - s}};
    case Family::kNash:
      return GameMatrix{{a + s, b + s}, {c - s, d - s}};
    case Family::kSupport:
      break;
  }
  throw Error(ErrorCode::kWrongFamily, "unknown family");
}

HardnessTriple make_triple(Family family, const GameMatrix& base, double eps,
                           double delta) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::kInvalidArgs, "eps must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgs, "delta must lie in (0,1)");
  }
  if (base.n() != (family == Family::kSupport ? 3u : 2u)) {
    throw Error(ErrorCode::kWrongShape, "base has the wrong number of rows for this family");
  }
  if (auto problem = orientation_problem(family, base)) violated(*problem);

  HardnessTriple t;
  t.family = family;
  t.base = base;
  t.eps = eps;
  const double lg = log_term(delta);

  if (family == Family::kSupport) {
    const double a = base(0, 0), b = base(0, 1), c = base(1, 0), d = base(1, 1),
                 e = base(2, 0), f = base(2, 1);
    const double d1 = a - b - c + d, d2 = a - b - e + f;
    const double s = ((d - b) * d2 - (f - b) * d1) / (d1 + d2);
    const double lambda = std::min((a - b) * s / d1, (a - b) * s / d2);
    const double dg = delta_g(base);
    require(s > 0.0 && s < dg, "0 < perturbation < delta_g");
    require(eps < lambda / 4.0, "eps < lambda/4");
    t.delta_param = s;
    t.lambda = lambda;
    t.matrices = {family_member(family, base, 0.0), family_member(family, base, s),
                  family_member(family, base, 2.0 * s)};
    t.bound = eps;
    t.tau_lower = lg / (4.0 * dg * dg);
    return t;
  }

  const auto [a, b, c, d] = abcd(base);
  const double dd = signed_d(a, b, c, d);
  const double dmin = delta_min_2x2(a, b, c, d);
  switch (family) {
    case Family::kValueD:
      require(eps < dmin * dmin / (3.0 * std::abs(dd)), "eps < delta_min^2 / (3|D|)");
      t.delta_param = std::sqrt(3.0 * eps * std::abs(dd));
      t.bound = 1.5 * eps;
      t.tau_lower = lg / (3.0 * eps * std::abs(dd));
      break;
    case Family::kValueMin:
      t.delta_param = 6.0 * std::max(eps, dmin);
      t.bound = eps;
      t.tau_lower = std::min(lg / (36.0 * eps * eps), lg / (36.0 * dmin * dmin));
      break;
    case Family::kMultiple:
      t.delta_param = 6.0 * eps;
      t.bound = eps;
      t.tau_lower = lg / (36.0 * eps * eps);
      break;
    case Family::kNash:
      // The top-row gap a - b is the confusion scale; it equals delta_m2 once
      // the base is canonicalized.
      t.delta_param = 3.0 * eps * dd / (a - b);
      t.bound = eps;
      t.tau_lower = lg / (t.delta_param * t.delta_param);
      break;
    case Family::kSupport:
      break;
  }
  const double s = t.delta_param;
  t.matrices = {family_member(family, base, -s), family_member(family, base, 0.0),
                family_member(family, base, s)};
  return t;
}

std::optional<GameMatrix> canonicalize(Family family, const GameMatrix& base) {
  if (family == Family::kSupport) {
    if (base.n() != 3) return std::nullopt;
    std::array<std::size_t, 3> perm{0, 1, 2};
    do {
      for (bool swap_cols : {false, true}) {
        std::vector<GameMatrix::Row> rows;
        for (auto i : perm) {
          GameMatrix::Row r = base.row(i);
          if (swap_cols) std::swap(r[0], r[1]);
          rows.push_back(r);
        }
        GameMatrix m(std::move(rows));
        if (!orientation_problem(family, m)) return m;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
  }
  if (base.n() != 2) return std::nullopt;
  for (bool players : {false, true}) {
    for (bool swap_rows : {false, true}) {
      for (bool swap_cols : {false, true}) {
        GameMatrix m = transform_2x2(base, swap_rows, swap_cols, players);
        if (orientation_problem(family, m)) continue;
        if (family == Family::kNash) {
          const auto [a, b, c, d] = abcd(m);
          if (delta_m2_2x2(a, b, c, d) != a - b) continue;
        }
        return m;
      }
    }
  }
  return std::nullopt;
}

namespace {

void check_grid(int grid_points) {
  if (grid_points < 2) throw Error(ErrorCode::kInvalidArgs, "grid needs at least 2 points");
}

double triple_slack(const HardnessTriple& t, int grid_points) {
  double m = 0.0;
  for (const auto& b : t.matrices) m = std::max(m, b.max_abs());
  return 4.0 * m / grid_points;
}

}  // namespace

GridVerdict verify_good_confusion(const HardnessTriple& t, int grid_points) {
  if (t.family == Family::kNash) {
    throw Error(ErrorCode::kWrongFamily, "value confusion needs a value family");
  }
  check_grid(grid_points);
  const int g = grid_points - 1;
  const std::size_t n = t.base.n();

  std::array<double, 3> value{};
  for (int k = 0; k < 3; ++k) value[k] = solve_nx2(t.matrices[k]).value;

  GridVerdict v;
  v.min_max_loss = std::numeric_limits<double>::infinity();
  std::vector<std::array<double, 3>> ay(n);  // (B y)_i for each B
  for (int qi = 0; qi <= g; ++qi) {
    const double q = static_cast<double>(qi) / g;
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k < 3; ++k) {
        ay[i][k] = q * t.matrices[k](i, 0) + (1.0 - q) * t.matrices[k](i, 1);
      }
    }
    auto consider = [&](const std::vector<double>& x) {
      double worst = 0.0;
      for (int k = 0; k < 3; ++k) {
        double p = 0.0;
        for (std::size_t i = 0; i < n; ++i) p += x[i] * ay[i][k];
        worst = std::max(worst, std::abs(value[k] - p));
      }
      if (worst < v.min_max_loss) {
        v.min_max_loss = worst;
        v.argmin_x = x;
        v.argmin_y = {q, 1.0 - q};
      }
    };
    std::vector<double> x(n);
    if (n == 2) {
      for (int pi = 0; pi <= g; ++pi) {
        x[0] = static_cast<double>(pi) / g;
        x[1] = 1.0 - x[0];
        consider(x);
      }
    } else {
      for (int i = 0; i <= g; ++i) {
        for (int j = 0; i + j <= g; ++j) {
          x[0] = static_cast<double>(i) / g;
          x[1] = static_cast<double>(j) / g;
          x[2] = static_cast<double>(g - i - j) / g;
          consider(x);
        }
      }
    }
  }
  v.slack = triple_slack(t, grid_points);
  v.threshold = t.bound;
  v.pass = v.min_max_loss >= v.threshold - v.slack;
  v.strict_pass = v.min_max_loss >= v.threshold;
  return v;
}

GridVerdict verify_nash_confusion(const HardnessTriple& t, int grid_points,
                                  std::optional<double> eps_check) {
  if (t.family != Family::kNash) {
    throw Error(ErrorCode::kWrongFamily, "Nash confusion needs the Nash family");
  }
  check_grid(grid_points);
  const int g = grid_points - 1;

  GridVerdict v;
  v.min_max_loss = std::numeric_limits<double>::infinity();
  std::array<double, 2> x{}, y{};
  for (int pi = 0; pi <= g; ++pi) {
    x = {static_cast<double>(pi) / g, 1.0 - static_cast<double>(pi) / g};
    for (int qi = 0; qi <= g; ++qi) {
      y = {static_cast<double>(qi) / g, 1.0 - static_cast<double>(qi) / g};
      double worst = 0.0;
      for (const auto& b : t.matrices) {
        const auto gap = best_response_gap(b, x, y);
        worst = std::max({worst, gap.row, gap.col});
      }
      if (worst < v.min_max_loss) {
        v.min_max_loss = worst;
        v.argmin_x = {x[0], x[1]};
        v.argmin_y = y;
      }
    }
  }
  v.slack = triple_slack(t, grid_points);
  v.threshold = eps_check.value_or(t.eps);
  v.pass = v.min_max_loss > v.threshold - v.slack;
  v.strict_pass = v.min_max_loss > v.threshold;
  return v;
}

TauReport empirical_tau_vs_bound(Family family, const GameMatrix& base, double eps,
                                 double delta, Algorithm algorithm, int trials,
                                 NoiseKind noise, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::kInvalidArgs, "trials must be >= 1");
  const HardnessTriple t = make_triple(family, base, eps, delta);
  TauReport rep;
  rep.trials = trials;
  rep.tau_lower = t.tau_lower;
  rep.binding = delta < 1.0 / 30.0;
  double total = 0.0;
  for (int k = 0; k < trials; ++k) {
    SamplingEnv env(base, noise, seed + static_cast<std::uint64_t>(k));
    const RunResult r = run_algorithm(algorithm, env, eps, delta);
    const double tau = static_cast<double>(r.total_samples);
    total += tau;
    rep.max_tau = std::max(rep.max_tau, tau);
  }
  rep.mean_tau = total / trials;
  rep.ratio = rep.tau_lower > 0.0 ? rep.mean_tau / rep.tau_lower : 0.0;
  rep.pass = !rep.binding || rep.mean_tau >= rep.tau_lower;
  return rep;
}

}  // namespace samplenash
