#include <numeric>

#include "doctest.h"
#include "dopt/error.hpp"
#include "dopt/markov.hpp"
#include "support.hpp"

using namespace dopt;
using namespace dopt::testing;

namespace {

Matrix upsilon() { return mat({{-0.2, 0.1, 0.1}, {0.2, -0.6, 0.4}, {0.02, 0.08, -0.1}}); }

}  // namespace

TEST_CASE("generator validation") {
  CHECK_NOTHROW(validate_generator(upsilon()));
  CHECK_NOTHROW(validate_generator(mat({{0}})));
  try {
    validate_generator(mat({{-1, 2}, {0.5, -0.5}}));
    FAIL("expected a generator error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kGenerator);
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
  CHECK_THROWS_AS(validate_generator(mat({{-1, 1, 0}, {-0.5, 0, 0.5}, {0, 0, 0}})), Error);
  CHECK_THROWS_AS(validate_generator(mat({{0, 0}})), Error);
}

TEST_CASE("stationary distribution examples") {
  CHECK((stationary_distribution(validate_generator(mat({{-1, 1}, {1, -1}}))) - vec({0.5, 0.5})).norm() < 1e-14);
  CHECK(stationary_distribution(validate_generator(mat({{0}})))(0) == doctest::Approx(1.0));

  const auto y = validate_generator(upsilon());
  const Vector pi = stationary_distribution(y);
  CHECK((pi - vec({14.0 / 73, 9.0 / 73, 50.0 / 73})).norm() < 1e-12);
  CHECK((pi.transpose() * y.rates()).norm() <= 1e-10);
}

TEST_CASE("reducible chain has no unique stationary distribution") {
  const auto y = validate_generator(mat({{0, 0}, {0, 0}}));
  CHECK_THROWS_AS(stationary_distribution(y), Error);
}

TEST_CASE("initial distribution normalization") {
  bool changed = false;
  const Vector p = normalize_distribution(vec({0.4772, 0.2612, 0.3235}), &changed);
  CHECK(changed);
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-15));
  normalize_distribution(vec({0.25, 0.75}), &changed);
  CHECK_FALSE(changed);
  CHECK_THROWS_AS(normalize_distribution(vec({-0.1, 1.1})), Error);
}

TEST_CASE("single-state path is one segment") {
  const auto path = sample_mode_path(validate_generator(mat({{0}})), vec({1.0}), 37.5, 4);
  CHECK(path.mode_ids.size() == 1);
  CHECK(path.mode_ids[0] == 0);
  CHECK(path.mode_at(30.0) == 0);
}

TEST_CASE("paths are deterministic, alternate modes and fill the horizon") {
  const auto y = validate_generator(upsilon());
  const Vector init = normalize_distribution(vec({0.4772, 0.2612, 0.3235}));
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto a = sample_mode_path(y, init, 200.0, seed);
    const auto b = sample_mode_path(y, init, 200.0, seed);
    CHECK(a.switch_times == b.switch_times);
    CHECK(a.mode_ids == b.mode_ids);
    CHECK(a.switch_times.front() == 0.0);
    const auto d = a.segment_durations();
    CHECK(std::accumulate(d.begin(), d.end(), 0.0) == doctest::Approx(200.0).epsilon(1e-12));
    for (std::size_t k = 1; k < a.mode_ids.size(); ++k) {
      CHECK(a.mode_ids[k] != a.mode_ids[k - 1]);
      CHECK(a.switch_times[k] > a.switch_times[k - 1]);
    }
  }
}

TEST_CASE("long-run statistics of the sampled chain") {
  const auto y = validate_generator(upsilon());
  const auto path = sample_mode_path(y, vec({1, 0, 0}), 1e5, 2024);

  const Vector occ = occupation_fractions(path, 3);
  CHECK((occ - vec({14.0 / 73, 9.0 / 73, 50.0 / 73})).cwiseAbs().maxCoeff() <= 0.02);

  // Mean holding time in state 1 (rate 0.2). Standard error ~ 5/sqrt(n).
  const auto d = path.segment_durations();
  double sum = 0.0;
  int n = 0;
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {  // last segment is truncated
    if (path.mode_ids[k] == 0) {
      sum += d[k];
      ++n;
    }
  }
  REQUIRE(n > 100);
  CHECK(std::abs(sum / n - 5.0) < 4.0 * 5.0 / std::sqrt(n));
}

TEST_CASE("jump frequencies pass a chi-square test at the 1% level") {
  const auto y = validate_generator(upsilon());
  const auto path = sample_mode_path(y, vec({1, 0, 0}), 6e4, 77);
  Matrix counts = Matrix::Zero(3, 3);
  for (std::size_t k = 1; k < path.mode_ids.size(); ++k) counts(path.mode_ids[k - 1], path.mode_ids[k]) += 1.0;
  REQUIRE(counts.sum() >= 1e4);
  // Two destinations per source: one degree of freedom each, three sources
  // pooled into one statistic with 3 degrees of freedom, critical value 11.345.
  double chi2 = 0.0;
  for (int p = 0; p < 3; ++p) {
    const double total = counts.row(p).sum();
    for (int q = 0; q < 3; ++q) {
      if (q == p) continue;
      const double expect = total * y.rates()(p, q) / y.exit_rate(p);
      chi2 += (counts(p, q) - expect) * (counts(p, q) - expect) / expect;
    }
  }
  CHECK(chi2 < 11.345);
}
