#include <doctest.h>

#include <cmath>
#include <vector>

#include "samplenash/error.hpp"
#include "samplenash/sampling.hpp"

using namespace samplenash;

namespace {

const GameMatrix kId{{1.0, 0.0}, {0.0, 1.0}};
const GameMatrix kSupp3{{1.0, 0.0}, {0.0, 1.0}, {0.3, 0.2}};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIoError;
}

}  // namespace

TEST_CASE("noiseless round reproduces the truth") {
  SamplingEnv env(kId, NoiseKind::kNoiseless, 1);
  env.sample_round();
  CHECK(env.empirical() == kId);
  CHECK(env.total_samples() == 4);
  CHECK(env.rounds() == 1);
}

TEST_CASE("identical seeds give identical observations") {
  SamplingEnv a(kSupp3, NoiseKind::kGaussian, 42), b(kSupp3, NoiseKind::kGaussian, 42),
      c(kSupp3, NoiseKind::kGaussian, 43);
  a.sample_rounds(3);
  a.sample_rounds(4);
  b.sample_rounds(3);
  b.sample_rounds(4);
  c.sample_rounds(7);
  CHECK(a.empirical() == b.empirical());
  CHECK(a.to_json() == b.to_json());
  // Splitting the same draws differently only changes summation order.
  CHECK(c.count(2, 1) == a.count(2, 1));
  SamplingEnv d(kSupp3, NoiseKind::kGaussian, 43);
  for (int k = 0; k < 7; ++k) d.sample_entry_batch(2, 1, 1);
  CHECK(d.sum(2, 1) == doctest::Approx(c.sum(2, 1)).epsilon(1e-12));
  SamplingEnv e(kSupp3, NoiseKind::kGaussian, 44);
  e.sample_rounds(7);
  CHECK_FALSE(e.empirical() == c.empirical());
}

TEST_CASE("deactivated rows stop being sampled") {
  SamplingEnv env(kSupp3, NoiseKind::kGaussian, 3);
  env.sample_round();
  env.deactivate_row(2);
  auto before = env.total_samples();
  auto c20 = env.count(2, 0);
  env.sample_round();
  CHECK(env.total_samples() == before + 4);
  CHECK(env.count(2, 0) == c20);
  CHECK(env.active_rows() == std::vector<std::size_t>{0, 1});
  CHECK(code_of([&] { env.sample_entry_batch(2, 0, 1); }) == ErrorCode::kInactiveRow);
  env.deactivate_row(0);
  env.deactivate_row(1);
  CHECK(code_of([&] { env.sample_round(); }) == ErrorCode::kInactiveRow);
}

TEST_CASE("entry batches") {
  SamplingEnv env(GameMatrix{{0.3, 0.0}, {0.0, 1.0}}, NoiseKind::kNoiseless, 1);
  env.sample_entry_batch(0, 0, 0);
  CHECK(env.count(0, 0) == 0);
  CHECK(env.total_samples() == 0);
  CHECK(code_of([&] { env.mean(0, 0); }) == ErrorCode::kUndefined);
  env.sample_entry_batch(0, 0, 5);
  CHECK(env.count(0, 0) == 5);
  CHECK(env.mean(0, 0) == 0.3);
  CHECK(env.total_samples() == 5);
  CHECK(env.rounds() == 0);
  CHECK(code_of([&] { env.sample_entry_batch(0, 2, 1); }) == ErrorCode::kDimensionMismatch);

  SamplingEnv g(GameMatrix{{0.0, 0.0}, {0.0, 0.0}}, NoiseKind::kGaussian, 1000);
  g.sample_entry_batch(0, 0, 1000);
  CHECK(std::abs(g.mean(0, 0)) <= 0.1);
}

TEST_CASE("confidence radius") {
  CHECK(confidence_radius(2, std::exp(1.0)) == doctest::Approx(1.0));
  double L = 16.0 * 1845863 / 0.05;
  // t = 200 ln L is not an integer; the identity holds for the real value.
  CHECK(std::sqrt(2.0 * std::log(L) / (200.0 * std::log(L))) == doctest::Approx(0.1));
  CHECK(confidence_radius(static_cast<std::uint64_t>(std::ceil(200.0 * std::log(L))), L) <= 0.1);
  CHECK(code_of([] { confidence_radius(5, 1.0); }) == ErrorCode::kDomainError);
  CHECK(code_of([] { confidence_radius(0, 3.0); }) == ErrorCode::kDomainError);
}

TEST_CASE("observations are unbiased") {
  for (NoiseKind kind : {NoiseKind::kGaussian, NoiseKind::kSignBernoulli}) {
    for (double mu : {-0.6, 0.0, 0.45}) {
      double s = 0.0;
      for (std::uint64_t k = 0; k < 100000; ++k) s += observe(kind, mu, 17, 1, 0, k);
      CHECK(std::abs(s / 100000 - mu) <= 3e-2);
    }
  }
  CHECK(observe(NoiseKind::kNoiseless, 0.123, 1, 0, 0, 9) == 0.123);
}

TEST_CASE("sign observations are +1 or -1") {
  for (std::uint64_t k = 0; k < 20000; ++k) {
    double v = observe(NoiseKind::kSignBernoulli, 0.3, 5, 0, 1, k);
    CHECK((v == 1.0 || v == -1.0));
  }
  CHECK(observe(NoiseKind::kSignBernoulli, 1.0, 5, 0, 0, 3) == 1.0);
  CHECK(observe(NoiseKind::kSignBernoulli, -1.0, 5, 0, 0, 3) == -1.0);
  CHECK(code_of([] { SamplingEnv(GameMatrix{{1.5, 0.0}, {0.0, 1.0}}, NoiseKind::kSignBernoulli, 1); }) ==
        ErrorCode::kInvalidArgs);
}

TEST_CASE("total samples count rounds over active rows plus batches") {
  SamplingEnv env(kSupp3, NoiseKind::kSignBernoulli, 8);
  env.sample_rounds(10);
  env.sample_entry_batch(1, 1, 7);
  env.deactivate_row(0);
  env.sample_rounds(5);
  CHECK(env.total_samples() == 2 * 3 * 10 + 7 + 2 * 2 * 5);
  std::uint64_t by_entry = 0;
  for (std::size_t i = 0; i < 3; ++i) by_entry += env.count(i, 0) + env.count(i, 1);
  CHECK(by_entry == env.total_samples());
}

TEST_CASE("restricted views continue the parent streams") {
  SamplingEnv parent(kSupp3, NoiseKind::kGaussian, 21);
  parent.sample_rounds(4);
  std::vector<std::size_t> rows{2, 0};
  SamplingEnv view = parent.restricted(rows);
  CHECK(view.n() == 2);
  CHECK(view.total_samples() == 0);
  CHECK(view.truth() == kSupp3.select_rows(rows));
  view.sample_round();
  // Observation number 4 of parent row 2 is the first draw of view row 0.
  CHECK(view.sum(0, 1) == observe(NoiseKind::kGaussian, 0.2, 21, 2, 1, 4));
  CHECK(view.sum(1, 0) == observe(NoiseKind::kGaussian, 1.0, 21, 0, 0, 4));
  // A view of a view keeps the original stream rows.
  std::vector<std::size_t> one{0, 1};
  SamplingEnv again = view.restricted(one);
  again.sample_round();
  CHECK(again.sum(0, 0) == observe(NoiseKind::kGaussian, 0.3, 21, 2, 0, 5));
}

TEST_CASE("noise names round-trip") {
  for (NoiseKind k : {NoiseKind::kGaussian, NoiseKind::kSignBernoulli, NoiseKind::kNoiseless})
    CHECK(parse_noise_kind(noise_kind_name(k)) == k);
  CHECK(code_of([] { parse_noise_kind("cauchy"); }) == ErrorCode::kInvalidArgs);
}
