#include "samplenash/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "samplenash/error.hpp"

namespace samplenash {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUndefined: return "Undefined";
    case ErrorCode::kDegenerateD: return "DegenerateD";
    case ErrorCode::kInactiveRow: return "InactiveRow";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kInvalidArgs: return "InvalidArgs";
    case ErrorCode::kWrongShape: return "WrongShape";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kWrongFamily: return "WrongFamily";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

GameMatrix::GameMatrix(std::vector<Row> rows) : rows_(std::move(rows)) {
  if (rows_.size() < 2) {
    throw Error(ErrorCode::kInvalidArgs, "matrix needs at least 2 rows");
  }
  for (const auto& r : rows_) {
    if (!std::isfinite(r[0]) || !std::isfinite(r[1])) {
      throw Error(ErrorCode::kNonFinite, "matrix entry is not finite");
    }
  }
}

GameMatrix::GameMatrix(std::initializer_list<Row> rows)
    : GameMatrix(std::vector<Row>(rows)) {}

double GameMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& r : rows_) m = std::max({m, std::abs(r[0]), std::abs(r[1])});
  return m;
}

GameMatrix GameMatrix::select_rows(std::span<const std::size_t> idx) const {
  std::vector<Row> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(rows_.at(i));
  return GameMatrix(std::move(out));
}

std::vector<std::size_t> support_of(std::span<const double> w) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > kSupportTol) s.push_back(i);
  }
  return s;
}

const char* nash_kind_name(NashKind k) {
  switch (k) {
    case NashKind::kPsne: return "PSNE";
    case NashKind::kUniqueMixed: return "UniqueMixed";
    case NashKind::kDegenerate: return "Degenerate";
  }
  return "Unknown";
}

std::optional<Cell> psne_find(const GameMatrix& a) {
  const std::size_t n = a.n();
  std::array<double, 2> col_max{a(0, 0), a(0, 1)};
  for (std::size_t i = 1; i < n; ++i) {
    col_max[0] = std::max(col_max[0], a(i, 0));
    col_max[1] = std::max(col_max[1], a(i, 1));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double row_min = std::min(a(i, 0), a(i, 1));
    for (std::size_t j = 0; j < 2; ++j) {
      if (a(i, j) == col_max[j] && a(i, j) == row_min) return Cell{i, j};
    }
  }
  return std::nullopt;
}

namespace {

// Minimizer of g(q) = max_i (A_i2 + s_i q), s_i = A_i1 - A_i2, over [0,1].
struct Envelope {
  double q = 0.0;
  double value = 0.0;
  std::vector<std::size_t> active;  // argmax rows at q, ascending
  bool unique = false;              // the game has exactly one equilibrium
};

double slope(const GameMatrix& a, std::size_t i) { return a(i, 0) - a(i, 1); }

Envelope envelope(const GameMatrix& a) {
  const std::size_t n = a.n();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    const double sl = slope(a, l), sr = slope(a, r);
    if (sl != sr) return sl < sr;
    return a(l, 1) > a(r, 1);
  });

  // Upper hull of the lines, slopes increasing from left to right.
  auto cross = [&](std::size_t l, std::size_t r) {
    return (a(l, 1) - a(r, 1)) / (slope(a, r) - slope(a, l));
  };
  std::vector<std::size_t> hull;
  for (auto i : order) {
    if (!hull.empty() && slope(a, hull.back()) == slope(a, i)) continue;
    while (hull.size() >= 2 &&
           cross(hull[hull.size() - 2], i) <=
               cross(hull[hull.size() - 2], hull.back())) {
      hull.pop_back();
    }
    hull.push_back(i);
  }

  Envelope env;
  std::size_t k = 0;
  while (k < hull.size() && slope(a, hull[k]) < 0.0) ++k;
  if (k == hull.size()) {
    env.q = 1.0;
  } else if (k == 0) {
    env.q = 0.0;
  } else {
    env.q = std::clamp(cross(hull[k - 1], hull[k]), 0.0, 1.0);
  }

  auto line = [&](std::size_t i) { return a(i, 1) + slope(a, i) * env.q; };
  env.value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) env.value = std::max(env.value, line(i));
  const double tol = kEnvelopeRelTol * std::max(1.0, a.max_abs());
  for (std::size_t i = 0; i < n; ++i) {
    if (line(i) >= env.value - tol) env.active.push_back(i);
  }

  const auto& r = env.active;
  if (env.q == 0.0) {
    env.unique = r.size() == 1 && slope(a, r[0]) > 0.0;
  } else if (env.q == 1.0) {
    env.unique = r.size() == 1 && slope(a, r[0]) < 0.0;
  } else {
    env.unique = r.size() == 2 && slope(a, r[0]) * slope(a, r[1]) < 0.0;
  }
  return env;
}

NashSolution pure_solution(const GameMatrix& a, Cell c, bool unique) {
  NashSolution s;
  s.x.assign(a.n(), 0.0);
  s.x[c.row] = 1.0;
  s.y = {0.0, 0.0};
  s.y[c.col] = 1.0;
  s.value = a(c.row, c.col);
  s.kind = unique ? NashKind::kPsne : NashKind::kDegenerate;
  s.psne = c;
  s.row_support = {c.row};
  s.col_support = {c.col};
  return s;
}

void fill_supports(NashSolution& s) {
  s.row_support = support_of(s.x);
  s.col_support = support_of(s.y);
}

}  // namespace

NashSolution solve_2x2(const GameMatrix& m) {
  if (m.n() != 2) throw Error(ErrorCode::kWrongShape, "solve_2x2 needs n = 2");
  if (auto c = psne_find(m)) return pure_solution(m, *c, envelope(m).unique);

  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double den = a - b - c + d;
  NashSolution s;
  s.x = {(d - c) / den, (a - b) / den};
  s.y = {(d - b) / den, (a - c) / den};
  s.value = (a * d - b * c) / den;
  s.kind = NashKind::kUniqueMixed;
  fill_supports(s);
  return s;
}

NashSolution solve_nx2(const GameMatrix& a) {
  const Envelope env = envelope(a);
  if (auto c = psne_find(a)) return pure_solution(a, *c, env.unique);

  // Without a saddle point the minimizer is interior. Pick the
  // lexicographically smallest row set that makes the column player
  // indifferent: one flat row, or two rows with slopes of opposite sign.
  std::vector<std::size_t> best;
  for (std::size_t u = 0; u < env.active.size(); ++u) {
    const std::size_t i = env.active[u];
    std::vector<std::size_t> cand;
    if (slope(a, i) == 0.0) {
      cand = {i};
    } else {
      for (std::size_t v = u + 1; v < env.active.size(); ++v) {
        const std::size_t k = env.active[v];
        if (slope(a, i) * slope(a, k) < 0.0) {
          cand = {i, k};
          break;
        }
      }
    }
    if (!cand.empty() && (best.empty() || cand < best)) best = cand;
  }
  if (best.empty()) {
    throw Error(ErrorCode::kUndefined, "envelope has no indifferent row set");
  }

  NashSolution s;
  s.x.assign(a.n(), 0.0);
  if (best.size() == 1) {
    s.x[best[0]] = 1.0;
  } else {
    const double si = slope(a, best[0]), sk = slope(a, best[1]);
    s.x[best[0]] = -sk / (si - sk);
    s.x[best[1]] = si / (si - sk);
  }
  s.y = {env.q, 1.0 - env.q};
  s.value = env.value;
  s.kind = env.unique ? NashKind::kUniqueMixed : NashKind::kDegenerate;
  fill_supports(s);
  return s;
}

double payoff(const GameMatrix& a, std::span<const double> x,
              std::span<const double> y) {
  if (x.size() != a.n() || y.size() != 2) {
    throw Error(ErrorCode::kDimensionMismatch, "strategy length mismatch");
  }
  double v = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) {
    v += x[i] * (a(i, 0) * y[0] + a(i, 1) * y[1]);
  }
  return v;
}

BestResponseGap best_response_gap(const GameMatrix& a,
                                  std::span<const double> x,
                                  std::span<const double> y) {
  const double v = payoff(a, x, y);
  double best_row = -std::numeric_limits<double>::infinity();
  std::array<double, 2> col{0.0, 0.0};
  for (std::size_t i = 0; i < a.n(); ++i) {
    best_row = std::max(best_row, a(i, 0) * y[0] + a(i, 1) * y[1]);
    col[0] += x[i] * a(i, 0);
    col[1] += x[i] * a(i, 1);
  }
  return {std::max(0.0, best_row - v),
          std::max(0.0, v - std::min(col[0], col[1]))};
}

bool is_eps_good(const GameMatrix& a, std::span<const double> x,
                 std::span<const double> y, double eps) {
  if (!(eps >= 0.0)) throw Error(ErrorCode::kInvalidArgs, "eps must be >= 0");
  return std::abs(solve_nx2(a).value - payoff(a, x, y)) <= eps;
}

bool is_eps_nash(const GameMatrix& a, std::span<const double> x,
                 std::span<const double> y, double eps) {
  if (!(eps >= 0.0)) throw Error(ErrorCode::kInvalidArgs, "eps must be >= 0");
  const auto g = best_response_gap(a, x, y);
  return g.row <= eps && g.col <= eps;
}

double signed_d(double a, double b, double c, double d) {
  return a - b - c + d;
}

double delta_min_2x2(double a, double b, double c, double d) {
  return std::min({std::abs(a - b), std::abs(a - c), std::abs(d - b),
                   std::abs(d - c)});
}

double delta_m2_2x2(double a, double b, double c, double d) {
  return std::max(std::min(std::abs(a - b), std::abs(d - c)),
                  std::min(std::abs(a - c), std::abs(d - b)));
}

double delta_min_nx2(const GameMatrix& a) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.n(); ++i) {
    m = std::min(m, std::abs(a(i, 0) - a(i, 1)));
    for (std::size_t k = i + 1; k < a.n(); ++k) {
      m = std::min({m, std::abs(a(i, 0) - a(k, 0)), std::abs(a(i, 1) - a(k, 1))});
    }
  }
  return m;
}

InstanceParams params_2x2(const GameMatrix& m) {
  if (m.n() != 2) throw Error(ErrorCode::kWrongShape, "params_2x2 needs n = 2");
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  InstanceParams p;
  p.d = signed_d(a, b, c, d);
  p.delta_min = delta_min_2x2(a, b, c, d);
  p.delta_m2 = delta_m2_2x2(a, b, c, d);
  p.has_psne = psne_find(m).has_value();
  return p;
}

InstanceParams instance_params(const GameMatrix& a) {
  if (a.n() == 2) return params_2x2(a);
  InstanceParams p;
  p.delta_min = delta_min_nx2(a);
  p.has_psne = psne_find(a).has_value();
  if (!p.has_psne) {
    const NashSolution s = solve_nx2(a);
    if (s.kind == NashKind::kUniqueMixed && s.row_support.size() == 2) {
      GapReport g = gap_terms(a, s);
      p.delta_g = g.value;
      p.r = std::move(g.r);
    }
  }
  return p;
}

GapReport gap_terms(const GameMatrix& a, const NashSolution& sol,
                    std::span<const std::size_t> skip) {
  if (sol.row_support.size() != 2) {
    throw Error(ErrorCode::kUndefined, "row support must have two rows");
  }
  GapReport g;
  g.i1 = sol.row_support[0];
  g.i2 = sol.row_support[1];
  const double base = std::abs(a(g.i1, 0) - a(g.i1, 1)) +
                      std::abs(a(g.i2, 0) - a(g.i2, 1));
  g.value = std::numeric_limits<double>::infinity();
  g.r.resize(a.n());
  g.raw_gap.resize(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) {
    g.r[i] = base / (base + std::abs(a(i, 0) - a(i, 1)));
    g.raw_gap[i] = sol.value - (sol.y[0] * a(i, 0) + sol.y[1] * a(i, 1));
    if (i == g.i1 || i == g.i2) continue;
    if (std::find(skip.begin(), skip.end(), i) != skip.end()) continue;
    g.value = std::min(g.value, g.r[i] * g.raw_gap[i]);
  }
  return g;
}

GapReport delta_g_report(const GameMatrix& a) {
  if (a.n() < 3) throw Error(ErrorCode::kUndefined, "delta_g needs n >= 3");
  if (psne_find(a)) throw Error(ErrorCode::kUndefined, "game has a PSNE");
  const NashSolution s = solve_nx2(a);
  if (s.kind != NashKind::kUniqueMixed || s.row_support.size() != 2) {
    throw Error(ErrorCode::kUndefined,
                "equilibrium is not unique with two supported rows");
  }
  return gap_terms(a, s);
}

double delta_g(const GameMatrix& a) { return delta_g_report(a).value; }

double delta_g_closed_form_check(double a, double b, double c, double d,
                                 double e, double f) {
  const double den = a - b - c + d;
  if (den == 0.0) throw Error(ErrorCode::kDegenerateD, "a-b-c+d is zero");
  return ((a * d - b * c) - (a * f - b * e) + (c * f - d * e)) / den;
}

}  // namespace samplenash
