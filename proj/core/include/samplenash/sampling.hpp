#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "samplenash/game.hpp"

namespace samplenash {

enum class NoiseKind {
  kGaussian,       // A_ij + N(0,1)
  kSignBernoulli,  // +1 with probability (1 + A_ij)/2, else -1
  kNoiseless,      // A_ij exactly
};

const char* noise_kind_name(NoiseKind k);
NoiseKind parse_noise_kind(const std::string& s);

// Observation k (0-based) of entry (i,j) is a pure function of
// (seed, i, j, k): the SplitMix64 sequence keyed by (seed, i, j) supplies two
// words per observation. A Gaussian draw uses Box-Muller on both words; a
// sign draw compares the first word with (1 + A_ij)/2.
double observe(NoiseKind kind, double mean, std::uint64_t seed, std::size_t row,
               std::size_t col, std::uint64_t k);

// sqrt(2 ln(log_arg) / t)
double confidence_radius(std::uint64_t t, double log_arg);

// Noisy oracle over the entries of a hidden matrix. Keeps per-entry counts
// and sums, the set of rows still being sampled, and the round counter.
class SamplingEnv {
 public:
  SamplingEnv(GameMatrix truth, NoiseKind kind, std::uint64_t seed);

  std::size_t n() const { return truth_.n(); }
  NoiseKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }

  // One observation for every (active row, column) pair.
  void sample_round();
  // `k` rounds in one call.
  void sample_rounds(std::uint64_t k);
  // `k` observations of a single entry. Does not advance the round counter.
  void sample_entry_batch(std::size_t i, std::size_t j, std::uint64_t k);

  void deactivate_row(std::size_t i);
  bool is_active(std::size_t i) const { return active_.at(i); }
  std::vector<std::size_t> active_rows() const;

  std::uint64_t count(std::size_t i, std::size_t j) const;
  double sum(std::size_t i, std::size_t j) const;
  // Empirical mean; kUndefined when the entry has no observations.
  double mean(std::size_t i, std::size_t j) const;

  // Matrix of empirical means over all rows, or over the given rows.
  GameMatrix empirical() const;
  GameMatrix empirical(std::span<const std::size_t> rows) const;

  std::uint64_t rounds() const { return rounds_; }
  std::uint64_t total_samples() const { return total_samples_; }

  // Fresh statistics over a subset of rows. Observations continue the
  // parent's per-entry sequences, so no draw is ever reused.
  SamplingEnv restricted(std::span<const std::size_t> rows) const;

  // Counts, sums, seed and bookkeeping as a JSON object.
  std::string to_json() const;

  // Ground truth. Identification algorithms never read it.
  const GameMatrix& truth() const { return truth_; }

 private:
  void draw(std::size_t i, std::size_t j, std::uint64_t k);

  GameMatrix truth_;
  NoiseKind kind_;
  std::uint64_t seed_;
  std::vector<std::size_t> origin_;                 // stream row of each row
  std::vector<std::array<std::uint64_t, 2>> drawn_;  // stream positions
  std::vector<std::array<std::uint64_t, 2>> counts_;
  std::vector<std::array<double, 2>> sums_;
  std::vector<bool> active_;
  std::uint64_t rounds_ = 0;
  std::uint64_t total_samples_ = 0;
};

}  // namespace samplenash
