#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace samplenash {

// An n x 2 payoff matrix. Entries are payoffs to the row player, who
// maximizes. Rows and columns are 0-based in the C++ API.
class GameMatrix {
 public:
  using Row = std::array<double, 2>;

  GameMatrix() = default;
  explicit GameMatrix(std::vector<Row> rows);
  GameMatrix(std::initializer_list<Row> rows);

  std::size_t n() const { return rows_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  const Row& row(std::size_t i) const { return rows_[i]; }
  const std::vector<Row>& rows() const { return rows_; }

  // Largest absolute entry.
  double max_abs() const;

  // Sub-matrix made of the given rows, in the given order.
  GameMatrix select_rows(std::span<const std::size_t> idx) const;

  bool operator==(const GameMatrix& o) const { return rows_ == o.rows_; }

 private:
  std::vector<Row> rows_;
};

inline constexpr double kSupportTol = 1e-9;
inline constexpr double kEnvelopeRelTol = 1e-12;

// Indices i with w_i > kSupportTol.
std::vector<std::size_t> support_of(std::span<const double> w);

struct Cell {
  std::size_t row;
  std::size_t col;
  bool operator==(const Cell&) const = default;
};

enum class NashKind { kPsne, kUniqueMixed, kDegenerate };

const char* nash_kind_name(NashKind k);

struct NashSolution {
  std::vector<double> x;   // row strategy, length n
  std::array<double, 2> y; // column strategy
  double value = 0.0;
  NashKind kind = NashKind::kDegenerate;
  std::optional<Cell> psne;  // set whenever the pair is pure
  std::vector<std::size_t> row_support;
  std::vector<std::size_t> col_support;
};

struct BestResponseGap {
  double row = 0.0;  // gain of the best row deviation
  double col = 0.0;  // gain of the best column deviation
};

// Lexicographically smallest cell that is a column maximum and a row
// minimum (weak inequalities).
std::optional<Cell> psne_find(const GameMatrix& a);

// Closed-form equilibrium for n = 2.
NashSolution solve_2x2(const GameMatrix& a);

// Equilibrium of an n x 2 game from the upper envelope of the row lines
// q -> q*A_i1 + (1-q)*A_i2.
NashSolution solve_nx2(const GameMatrix& a);

double payoff(const GameMatrix& a, std::span<const double> x,
              std::span<const double> y);

BestResponseGap best_response_gap(const GameMatrix& a,
                                  std::span<const double> x,
                                  std::span<const double> y);

bool is_eps_good(const GameMatrix& a, std::span<const double> x,
                 std::span<const double> y, double eps);
bool is_eps_nash(const GameMatrix& a, std::span<const double> x,
                 std::span<const double> y, double eps);

// 2x2 quantities from the entries a=A11, b=A12, c=A21, d=A22.
double signed_d(double a, double b, double c, double d);
double delta_min_2x2(double a, double b, double c, double d);
double delta_m2_2x2(double a, double b, double c, double d);

// min over rows of |A_i1 - A_i2| and over distinct row pairs of the
// within-column differences. Agrees with delta_min_2x2 when n = 2.
double delta_min_nx2(const GameMatrix& a);

struct InstanceParams {
  std::optional<double> d;         // 2x2 only, signed
  double delta_min = 0.0;
  std::optional<double> delta_m2;  // 2x2 only
  std::optional<double> delta_g;   // n >= 3 with a unique two-row support
  bool has_psne = false;
  std::optional<std::vector<double>> r;
};

InstanceParams params_2x2(const GameMatrix& a);

// params_2x2 for n = 2; delta_min and, when defined, delta_g otherwise.
InstanceParams instance_params(const GameMatrix& a);

struct GapReport {
  double value = 0.0;             // min over non-support rows of r_i * gap_i
  std::size_t i1 = 0, i2 = 0;     // support rows, i1 < i2
  std::vector<double> r;          // rescaling factor for every row
  std::vector<double> raw_gap;    // V* - <y*, row_i> for every row
};

// Gap terms of a matrix against a given solution whose row support has two
// rows. Rows listed in `skip` are left out of the minimum. The minimum over
// an empty set is +infinity.
GapReport gap_terms(const GameMatrix& a, const NashSolution& sol,
                    std::span<const std::size_t> skip = {});

// Exact gap of the support. Throws kUndefined unless n >= 3 and the game has
// a unique mixed equilibrium with two supported rows.
GapReport delta_g_report(const GameMatrix& a);
double delta_g(const GameMatrix& a);

// ((ad-bc) - (af-be) + (cf-de)) / (a-b-c+d)
double delta_g_closed_form_check(double a, double b, double c, double d,
                                 double e, double f);

}  // namespace samplenash
