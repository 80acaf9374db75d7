#include <doctest.h>

#include <random>

#include "hm/error.hpp"
#include "hm/learn/classifier.hpp"
#include "hm/learn/metrics.hpp"
#include "support.hpp"

using namespace hm;
using namespace hm::learn;

namespace {

const std::vector<std::string> kYesNo{"no", "yes"};

std::vector<std::vector<std::size_t>> random_matrix(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> classes(2, 5);
  std::uniform_int_distribution<std::size_t> count(0, 30);
  std::bernoulli_distribution empty_column(0.2);
  const auto k = classes(rng);
  std::vector<std::vector<std::size_t>> m(k, std::vector<std::size_t>(k));
  for (auto& row : m)
    for (auto& v : row) v = count(rng);
  // Sometimes a class is never predicted, sometimes it has no support.
  if (empty_column(rng)) {
    const auto c = count(rng) % k;
    for (auto& row : m) row[c] = 0;
  }
  if (empty_column(rng)) {
    const auto r = count(rng) % k;
    std::fill(m[r].begin(), m[r].end(), 0);
  }
  m[0][0] += 1; // never all-zero
  return m;
}

std::vector<std::string> names(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back("c" + std::to_string(i));
  return out;
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("perfect model yields a diagonal matrix") {
  Dataset d(kYesNo);
  for (int i = 0; i < 10; ++i) d.add(Features{static_cast<double>(i), 0, 0, 0}, i < 5 ? 0 : 1);
  const auto m = fit(KnnSpec{1}, d);
  const auto cm = confusion(m, d);
  CHECK(cm.rows() == std::vector<std::vector<std::size_t>>{{5, 0}, {0, 5}});
}

TEST_CASE("constant no on 3 yes and 7 no") {
  Dataset d(kYesNo);
  for (int i = 0; i < 7; ++i) d.add(Features{}, 0);
  for (int i = 0; i < 3; ++i) d.add(Features{}, 1);
  const auto cm = confusion(constant_model(kYesNo, 0), d);
  CHECK(cm.rows() == std::vector<std::vector<std::size_t>>{{7, 0}, {3, 0}});
}

TEST_CASE("empty dataset yields an all-zero matrix") {
  const auto cm = confusion(constant_model(kYesNo, 0), Dataset(kYesNo));
  CHECK(cm.total() == 0);
  CHECK_THROWS_AS(weighted_metrics(cm), Error);
}

TEST_CASE("diagonal 20/20 matrix scores perfectly") {
  const auto r = weighted_metrics(ConfusionMatrix::from_rows(kYesNo, {{20, 0}, {0, 20}}));
  CHECK(r.tp_rate == 1.0);
  CHECK(r.fp_rate == 0.0);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == 1.0);
}

TEST_CASE("8 2 / 3 7 by hand") {
  // no: TP 8, FP 3, FN 2, TN 7. yes: TP 7, FP 2, FN 3, TN 8. Equal support.
  const double prec = (8.0 / 11 + 7.0 / 9) / 2;
  const double f_no = 2 * (8.0 / 11) * 0.8 / (8.0 / 11 + 0.8);
  const double f_yes = 2 * (7.0 / 9) * 0.7 / (7.0 / 9 + 0.7);
  const auto r = weighted_metrics(ConfusionMatrix::from_rows(kYesNo, {{8, 2}, {3, 7}}));
  CHECK(r.accuracy == doctest::Approx(0.75));
  CHECK(r.tp_rate == doctest::Approx(0.75));
  CHECK(r.fp_rate == doctest::Approx(0.25));
  REQUIRE(r.precision);
  CHECK(*r.precision == doctest::Approx(prec));
  CHECK(*r.precision == doctest::Approx(0.7525).epsilon(1e-4));
  REQUIRE(r.f1);
  CHECK(*r.f1 == doctest::Approx((f_no + f_yes) / 2));
  CHECK(*r.f1 == doctest::Approx(0.7494).epsilon(1e-4));
}

TEST_CASE("constant majority on 22 no and 18 yes leaves precision undefined") {
  const auto r = weighted_metrics(ConfusionMatrix::from_rows(kYesNo, {{22, 0}, {18, 0}}));
  CHECK(r.accuracy == doctest::Approx(0.55));
  CHECK(r.tp_rate == doctest::Approx(0.55));
  CHECK(r.fp_rate == doctest::Approx(0.55));
  CHECK(r.recall == doctest::Approx(0.55));
  CHECK_FALSE(r.precision.has_value());
  CHECK_FALSE(r.f1.has_value());
}

TEST_CASE("constant majority on 27 no and 13 yes") {
  const auto r = weighted_metrics(ConfusionMatrix::from_rows(kYesNo, {{27, 0}, {13, 0}}));
  CHECK(r.tp_rate == doctest::Approx(0.675));
  CHECK(r.fp_rate == doctest::Approx(0.675));
  CHECK_FALSE(r.precision.has_value());
}

TEST_CASE("weighted metrics agree with the brute-force oracle") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 300; ++i) {
    const auto rows = random_matrix(rng);
    const auto cm = ConfusionMatrix::from_rows(names(rows.size()), rows);
    const auto got = weighted_metrics(cm);
    const auto want = test::oracle::weighted(rows);
    CHECK(got.tp_rate == doctest::Approx(want.tp_rate).epsilon(1e-9));
    CHECK(got.fp_rate == doctest::Approx(want.fp_rate).epsilon(1e-9));
    CHECK(got.recall == doctest::Approx(want.recall).epsilon(1e-9));
    REQUIRE(got.precision.has_value() == want.precision.has_value());
    REQUIRE(got.f1.has_value() == want.f1.has_value());
    if (want.precision) CHECK(*got.precision == doctest::Approx(*want.precision).epsilon(1e-9));
    if (want.f1) CHECK(*got.f1 == doctest::Approx(*want.f1).epsilon(1e-9));
    // Support-weighted TP rate collapses to plain accuracy.
    CHECK(got.tp_rate == doctest::Approx(static_cast<double>(cm.trace()) / cm.total()).epsilon(1e-12));
    CHECK(got.accuracy == doctest::Approx(static_cast<double>(cm.trace()) / cm.total()).epsilon(1e-12));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::size_t sum = 0;
      for (auto v : rows[r]) sum += v;
      CHECK(cm.support(r) == sum);
    }
  }
}

}
