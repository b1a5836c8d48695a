#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "samplenash/game.hpp"
#include "samplenash/sampling.hpp"

namespace samplenash {

enum class OutputKind { kStrategyPair, kSupport, kPsne };

const char* output_kind_name(OutputKind k);

struct RunResult {
  std::string algorithm;
  double eps = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;

  OutputKind kind = OutputKind::kStrategyPair;
  // Strategy pair handed to the caller. For a Support answer this is the
  // equilibrium of the empirical matrix at the stopping round.
  std::vector<double> x;
  std::array<double, 2> y{0.0, 0.0};
  std::vector<std::size_t> row_support;  // Support answers, original rows
  std::vector<std::size_t> col_support;
  std::optional<Cell> psne;               // Psne answers

  std::uint64_t horizon = 0;  // T
  std::uint64_t rounds = 0;
  std::uint64_t total_samples = 0;
  std::string branch;
  GameMatrix empirical;                  // final empirical means
  std::optional<GameMatrix> corrected;   // B of the eps-Nash correction
};

std::string to_json(const RunResult& r);

enum class Goal { kEpsGood, kEpsNash };

// ceil(8 ln(16/delta) / eps^2)
std::uint64_t horizon_2x2(double eps, double delta);
// ceil(8 ln(8n/delta) / eps^2)
std::uint64_t horizon_support(std::size_t n, double eps, double delta);
// ceil(8 ln(2*n*2/delta) / eps^2)
std::uint64_t naive_count(std::size_t n, double eps, double delta);

// 1 <= (dmin + 2r)/(dmin - 2r) <= 3/2, false when the denominator is <= 0.
bool ratio_test(double dmin, double radius);

// What a single round of the 2x2 identifiers decides from the current
// empirical matrix. Exposed so each branch can be exercised directly.
enum class GoodStep { kContinue, kPsne, kSmallD, kLargeD };
enum class NashStep { kContinue, kPsne, kToHorizon, kCorrect };

GoodStep classify_good(const GameMatrix& abar, double radius, double eps);
NashStep classify_nash(const GameMatrix& abar, double radius);

// Corrected matrix of the eps-Nash identifier: the entries off the
// (i1,j1)/(i2,j2) diagonal move by 2*delta1 toward making B mixed.
GameMatrix nash_correction(const GameMatrix& abar, double delta1);

RunResult naive_identify(SamplingEnv& env, double eps, double delta);
RunResult alg1_eps_good(SamplingEnv& env, double eps, double delta);
RunResult alg2_eps_nash(SamplingEnv& env, double eps, double delta);
RunResult alg3_support(SamplingEnv& env, double eps, double delta);
RunResult full_pipeline_nx2(SamplingEnv& env, double eps, double delta, Goal goal);

// Upper bounds on the number of rounds (samples per entry) that hold on the
// high-probability event, with the constants of the analysis. Each is capped
// by the horizon. Multiply by 2n for a bound on total samples.
double upper_rounds_eps_good(const GameMatrix& a, double eps, double delta);
double upper_rounds_eps_nash(const GameMatrix& a, double eps, double delta);
double upper_rounds_support(const GameMatrix& a, double eps, double delta);

enum class Algorithm { kNaive, kEpsGood, kEpsNash, kSupport, kPipelineGood, kPipelineNash };

const char* algorithm_name(Algorithm a);

RunResult run_algorithm(Algorithm alg, SamplingEnv& env, double eps, double delta);

// Bound on total samples for `alg` on `a`.
double upper_total_samples(Algorithm alg, const GameMatrix& a, double eps, double delta);

}  // namespace samplenash
