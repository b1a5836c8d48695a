#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "samplenash/game.hpp"
#include "samplenash/identify.hpp"
#include "samplenash/sampling.hpp"

namespace samplenash {

// Lower-bound constructions. Each family perturbs a base matrix along one
// direction and yields three matrices that no single strategy pair serves
// well at once.
enum class Family {
  kValueD,        // [a+s, b; c, d-s], confusion at 3eps/2
  kValueMin,      // [a+s, b-s; c+s, d-s], confusion at eps
  kMultiple,      // kValueMin shape on a base with a = b
  kNash,          // [a+s, b+s; c-s, d-s], eps-Nash confusion
  kSupport,       // [a, b; c-s, d-s; e+s, f+s] at s = 0, D, 2D
};

const char* family_name(Family f);
// "thm1", "thm2", "multi", "thm3", "thm4"
Family parse_family(const std::string& s);

struct HardnessTriple {
  Family family = Family::kValueD;
  GameMatrix base;
  double eps = 0.0;
  double delta_param = 0.0;             // perturbation size
  std::array<GameMatrix, 3> matrices;   // s = -D, 0, D (or 0, D, 2D)
  double bound = 0.0;                   // loss every pair must reach
  double tau_lower = 0.0;               // bound on expected total samples
  std::optional<double> lambda;         // kSupport only
};

// The perturbed matrix of `family` at offset s.
GameMatrix family_member(Family family, const GameMatrix& base, double s);

// Throws kPreconditionViolated naming the failed assumption.
HardnessTriple make_triple(Family family, const GameMatrix& base, double eps,
                           double delta);

// Relabels rows, columns, or the two players (A -> -A^T) until the base
// meets the orientation the family assumes. Ignores conditions on eps.
std::optional<GameMatrix> canonicalize(Family family, const GameMatrix& base);

struct GridVerdict {
  double min_max_loss = 0.0;  // min over grid of the max over the triple
  std::vector<double> argmin_x;
  std::array<double, 2> argmin_y{0.0, 0.0};
  double slack = 0.0;         // 4 * max|entry| / grid_points
  double threshold = 0.0;     // the bound the loss is compared with
  bool pass = false;          // min_max_loss >= threshold - slack
  bool strict_pass = false;   // min_max_loss >= threshold (> for kNash)
};

// min over a grid of max_B |V_B* - x'By'|. Value families only.
GridVerdict verify_good_confusion(const HardnessTriple& triple, int grid_points);

// min over a grid of max_B (largest best-response gain in B), compared with
// eps, or with `eps_check` when given. kNash only.
GridVerdict verify_nash_confusion(const HardnessTriple& triple, int grid_points,
                                  std::optional<double> eps_check = std::nullopt);

struct TauReport {
  double mean_tau = 0.0;
  double max_tau = 0.0;
  double tau_lower = 0.0;
  double ratio = 0.0;     // mean_tau / tau_lower, 0 when tau_lower <= 0
  bool binding = false;   // delta < 1/30
  bool pass = false;      // mean_tau >= tau_lower, or the bound is not binding
  int trials = 0;
};

TauReport empirical_tau_vs_bound(Family family, const GameMatrix& base, double eps,
                                 double delta, Algorithm algorithm, int trials,
                                 NoiseKind noise = NoiseKind::kGaussian,
                                 std::uint64_t seed = 1);

}  // namespace samplenash
