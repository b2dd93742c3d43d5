#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>

#include "boolnet/measures.hpp"
#include "boolnet/rng.hpp"
#include "boolnet/sampler.hpp"
#include "test_support.hpp"

using namespace boolnet;
using namespace boolnet::testing;

TEST_SUITE_BEGIN("sampler");

namespace {

ScalingRegime uniform_regime(double lambda) {
  return ScalingRegime(lambda, Domain::box(3, 1.0), MarkLaw::uniform(0.05, 0.15),
                       ConstantKernel{1.0});
}

}  // namespace

TEST_CASE("lambda zero yields the empty configuration") {
  const auto regime = uniform_regime(0.0);
  const auto config = sample_marked_ppp(regime, regime.domain(), 1);
  CHECK(config.size() == 0);
}

TEST_CASE("same seed gives bit-identical configurations") {
  const auto regime = uniform_regime(50.0);
  const auto a = sample_marked_ppp(regime, regime.domain(), 991);
  const auto b = sample_marked_ppp(regime, regime.domain(), 991);
  CHECK(a.positions == b.positions);
  CHECK(a.radii == b.radii);
  const auto c = sample_marked_ppp(regime, regime.domain(), 992);
  CHECK(a.positions != c.positions);
}

TEST_CASE("point count matches the Poisson mean across seeds") {
  const auto regime = uniform_regime(100.0);
  const int replicas = 10000;
  double sum = 0.0;
  for (int r = 0; r < replicas; ++r) {
    sum += static_cast<double>(
        sample_marked_ppp(regime, regime.domain(), derive_seed(31337, r)).size());
  }
  // 3 sigma of the replica mean: 3 * sqrt(100) / sqrt(10^4) = 0.3.
  CHECK(std::abs(sum / replicas - 100.0) < 0.3);
}

TEST_CASE("cell counts are Poisson with independent cells") {
  const auto regime = uniform_regime(40.0);
  auto part = std::make_shared<Partition>(
      Partition::regular(regime.domain(), {2, 2, 1}, 1, 0.05, 0.15));
  const int replicas = 10000;
  const std::size_t cells = part->cell_count();
  std::vector<std::vector<double>> counts(cells, std::vector<double>(replicas));
  for (int r = 0; r < replicas; ++r) {
    const auto config =
        sample_marked_ppp(regime, regime.domain(), derive_seed(777, r));
    std::vector<double> c(cells, 0.0);
    for (std::size_t i = 0; i < config.size(); ++i) {
      c[part->locate(config.position(i), config.radii[i])] += 1.0;
    }
    for (std::size_t j = 0; j < cells; ++j) counts[j][r] = c[j];
  }
  // Index of dispersion: (n-1) s^2 / mean ~ chi-square(n-1) per cell.
  for (std::size_t j = 0; j < cells; ++j) {
    double mean = 0.0;
    for (double x : counts[j]) mean += x;
    mean /= replicas;
    CHECK(mean == doctest::Approx(10.0).epsilon(0.05));
    double ss = 0.0;
    for (double x : counts[j]) ss += (x - mean) * (x - mean);
    const double dispersion = ss / mean;
    const double df = replicas - 1;
    const double p = gamma_q(df / 2.0, dispersion / 2.0);
    CHECK(p > 0.0005);
    CHECK(p < 0.9995);
  }
  // Pairwise correlations vanish.
  for (std::size_t a = 0; a < cells; ++a) {
    for (std::size_t b = a + 1; b < cells; ++b) {
      double ma = 0.0, mb = 0.0;
      for (int r = 0; r < replicas; ++r) {
        ma += counts[a][r];
        mb += counts[b][r];
      }
      ma /= replicas;
      mb /= replicas;
      double cov = 0.0, va = 0.0, vb = 0.0;
      for (int r = 0; r < replicas; ++r) {
        cov += (counts[a][r] - ma) * (counts[b][r] - mb);
        va += (counts[a][r] - ma) * (counts[a][r] - ma);
        vb += (counts[b][r] - mb) * (counts[b][r] - mb);
      }
      const double corr = cov / std::sqrt(va * vb);
      CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(replicas)));
    }
  }
}

TEST_CASE("radius law passes a Kolmogorov-Smirnov test at 1e5 draws") {
  const auto regime = ScalingRegime(100000.0, Domain::box(3, 1.0),
                                    MarkLaw::power(3.0, 0.0, 1.0), ConstantKernel{1.0});
  const auto config = sample_marked_ppp(regime, regime.domain(), 4242);
  REQUIRE(config.size() > 90000);
  const double d =
      ks_statistic(config.radii, [](double r) { return r * r * r * r; });
  // Critical value at significance 0.01: 1.628 / sqrt(n).
  CHECK(d < 1.628 / std::sqrt(static_cast<double>(config.size())));
}

TEST_CASE("text and json round trips") {
  const auto regime = uniform_regime(20.0);
  const auto config = sample_marked_ppp(regime, regime.domain(), 5);
  SUBCASE("text") {
    std::ostringstream os;
    write_points_text(config, os, "comment line");
    std::istringstream is(os.str());
    const auto back = read_points_text(is);
    CHECK(back.dim == config.dim);
    REQUIRE(back.size() == config.size());
    for (std::size_t i = 0; i < config.size(); ++i) {
      CHECK(back.positions[i * 3] == doctest::Approx(config.positions[i * 3]));
      CHECK(back.radii[i] == doctest::Approx(config.radii[i]));
    }
  }
  SUBCASE("json") {
    const auto back = points_from_json(points_to_json(config));
    CHECK(back.positions == config.positions);
    CHECK(back.radii == config.radii);
    CHECK(back.lambda == config.lambda);
    CHECK(back.seed == config.seed);
  }
}

TEST_SUITE_END();
