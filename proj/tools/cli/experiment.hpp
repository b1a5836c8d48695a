#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "samplenash/game.hpp"
#include "samplenash/hardness.hpp"
#include "samplenash/identify.hpp"
#include "samplenash/sampling.hpp"

namespace samplenash::cli {

// Named fixtures: "id2", "sep2", "supp3".
std::optional<GameMatrix> builtin_matrix(const std::string& name);

// {"rows": [[a,b],[c,d],...]}. Throws kParseError or kNonFinite.
GameMatrix parse_matrix_json(const std::string& text);
// A builtin name or a path to a matrix file. Throws kIoError when the file
// cannot be read.
GameMatrix load_matrix(const std::string& path_or_builtin);

std::string solution_json(const NashSolution& s);
std::string params_json(const GameMatrix& a);

struct ExperimentConfig {
  std::string instance_label;
  GameMatrix matrix;
  Algorithm algorithm = Algorithm::kEpsGood;
  double eps = 0.1;
  double delta = 0.1;
  NoiseKind noise = NoiseKind::kGaussian;
  int trials = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  bool timing = true;
  std::optional<Family> family;  // adds the family's lower bound to the summary
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t rounds = 0;
  std::uint64_t total_samples = 0;
  std::string branch;
  bool eps_good = false;
  bool eps_nash = false;
  std::optional<bool> support_correct;
  double wall_time_ms = 0.0;
  bool success = false;  // the guarantee of the algorithm that ran
};

// Throws kInvalidArgs on a bad configuration.
void validate(const ExperimentConfig& cfg);

// Runs one trial on its own env seeded with cfg.seed + trial.
TrialRecord run_trial(const ExperimentConfig& cfg, int trial);

// All trials, in trial order, spread over cfg.threads workers.
std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg);

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records);
std::string summary_json(const ExperimentConfig& cfg,
                         const std::vector<TrialRecord>& records);

Algorithm parse_algorithm(const std::string& alg, const std::string& goal);

// Entry point used by the executable. Returns the process exit code:
// 0 ok/pass, 1 verification failed, 2 usage or parse error, 3 I/O error.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace samplenash::cli
