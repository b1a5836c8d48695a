#include "samplenash/sampling.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "samplenash/error.hpp"

namespace samplenash {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t fmix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Word `w` of the SplitMix64 sequence whose state starts at `key`.
std::uint64_t splitmix_at(std::uint64_t key, std::uint64_t w) {
  return fmix(key + (w + 1) * kGolden);
}

std::uint64_t stream_key(std::uint64_t seed, std::size_t row, std::size_t col) {
  return fmix(seed + kGolden) ^ fmix(2 * static_cast<std::uint64_t>(row) + col + 1);
}

// Uniform on the open interval (0,1).
double to_unit(std::uint64_t u) {
  return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

const char* noise_kind_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::kGaussian: return "gaussian";
    case NoiseKind::kSignBernoulli: return "sign";
    case NoiseKind::kNoiseless: return "none";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(const std::string& s) {
  if (s == "gaussian") return NoiseKind::kGaussian;
  if (s == "sign") return NoiseKind::kSignBernoulli;
  if (s == "none") return NoiseKind::kNoiseless;
  throw Error(ErrorCode::kInvalidArgs, "unknown noise model '" + s + "'");
}

double observe(NoiseKind kind, double mean, std::uint64_t seed, std::size_t row,
               std::size_t col, std::uint64_t k) {
  if (kind == NoiseKind::kNoiseless) return mean;
  const std::uint64_t key = stream_key(seed, row, col);
  const double u1 = to_unit(splitmix_at(key, 2 * k));
  if (kind == NoiseKind::kSignBernoulli) {
    return u1 < (1.0 + mean) / 2.0 ? 1.0 : -1.0;
  }
  const double u2 = to_unit(splitmix_at(key, 2 * k + 1));
  return mean + std::sqrt(-2.0 * std::log(u1)) *
                    std::cos(2.0 * std::numbers::pi * u2);
}

double confidence_radius(std::uint64_t t, double log_arg) {
  if (t == 0) throw Error(ErrorCode::kDomainError, "t must be >= 1");
  if (!(log_arg > 1.0)) throw Error(ErrorCode::kDomainError, "log argument must exceed 1");
  return std::sqrt(2.0 * std::log(log_arg) / static_cast<double>(t));
}

SamplingEnv::SamplingEnv(GameMatrix truth, NoiseKind kind, std::uint64_t seed)
    : truth_(std::move(truth)), kind_(kind), seed_(seed) {
  const std::size_t n = truth_.n();
  if (kind_ == NoiseKind::kSignBernoulli && truth_.max_abs() > 1.0) {
    throw Error(ErrorCode::kInvalidArgs, "sign observations need |A_ij| <= 1");
  }
  origin_.resize(n);
  for (std::size_t i = 0; i < n; ++i) origin_[i] = i;
  drawn_.assign(n, {0, 0});
  counts_.assign(n, {0, 0});
  sums_.assign(n, {0.0, 0.0});
  active_.assign(n, true);
}

void SamplingEnv::draw(std::size_t i, std::size_t j, std::uint64_t k) {
  if (k == 0) return;
  const double m = truth_(i, j);
  double s = 0.0;
  if (kind_ == NoiseKind::kNoiseless) {
    s = m * static_cast<double>(k);
  } else {
    const std::uint64_t start = drawn_[i][j];
    for (std::uint64_t c = 0; c < k; ++c) {
      s += observe(kind_, m, seed_, origin_[i], j, start + c);
    }
  }
  drawn_[i][j] += k;
  counts_[i][j] += k;
  sums_[i][j] += s;
  total_samples_ += k;
}

void SamplingEnv::sample_round() { sample_rounds(1); }

void SamplingEnv::sample_rounds(std::uint64_t k) {
  if (k == 0) return;
  bool any = false;
  for (std::size_t i = 0; i < n(); ++i) {
    if (!active_[i]) continue;
    any = true;
    draw(i, 0, k);
    draw(i, 1, k);
  }
  if (!any) throw Error(ErrorCode::kInactiveRow, "no active rows");
  rounds_ += k;
}

void SamplingEnv::sample_entry_batch(std::size_t i, std::size_t j, std::uint64_t k) {
  if (i >= n() || j >= 2) throw Error(ErrorCode::kDimensionMismatch, "entry out of range");
  if (!active_[i]) throw Error(ErrorCode::kInactiveRow, "row is deactivated");
  draw(i, j, k);
}

void SamplingEnv::deactivate_row(std::size_t i) { active_.at(i) = false; }

std::vector<std::size_t> SamplingEnv::active_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n(); ++i) {
    if (active_[i]) out.push_back(i);
  }
  return out;
}

std::uint64_t SamplingEnv::count(std::size_t i, std::size_t j) const {
  return counts_.at(i).at(j);
}

double SamplingEnv::sum(std::size_t i, std::size_t j) const {
  return sums_.at(i).at(j);
}

double SamplingEnv::mean(std::size_t i, std::size_t j) const {
  const std::uint64_t c = count(i, j);
  if (c == 0) throw Error(ErrorCode::kUndefined, "entry has no observations");
  // Identical observations average to themselves; skip the division so that
  // noiseless traces see the exact entries.
  if (kind_ == NoiseKind::kNoiseless) return truth_(i, j);
  return sums_[i][j] / static_cast<double>(c);
}

GameMatrix SamplingEnv::empirical() const {
  std::vector<GameMatrix::Row> rows(n());
  for (std::size_t i = 0; i < n(); ++i) rows[i] = {mean(i, 0), mean(i, 1)};
  return GameMatrix(std::move(rows));
}

GameMatrix SamplingEnv::empirical(std::span<const std::size_t> idx) const {
  std::vector<GameMatrix::Row> rows;
  rows.reserve(idx.size());
  for (auto i : idx) rows.push_back({mean(i, 0), mean(i, 1)});
  return GameMatrix(std::move(rows));
}

SamplingEnv SamplingEnv::restricted(std::span<const std::size_t> rows) const {
  SamplingEnv out(truth_.select_rows(rows), kind_, seed_);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.origin_[k] = origin_.at(rows[k]);
    out.drawn_[k] = drawn_[rows[k]];
  }
  return out;
}

std::string SamplingEnv::to_json() const {
  nlohmann::json j;
  j["seed"] = seed_;
  j["model"] = noise_kind_name(kind_);
  j["rounds"] = rounds_;
  j["total_samples"] = total_samples_;
  j["counts"] = counts_;
  j["sums"] = sums_;
  j["active_rows"] = active_rows();
  j["stream_rows"] = origin_;
  return j.dump();
}

}  // namespace samplenash
