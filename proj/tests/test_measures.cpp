#include <doctest.h>

#include <stdexcept>

#include <array>
#include <cmath>
#include <sstream>

#include "boolnet/measures.hpp"
#include "boolnet/rng.hpp"
#include "boolnet/sampler.hpp"
#include "test_support.hpp"

using namespace boolnet;

TEST_SUITE_BEGIN("measures");

namespace {

const Domain kDom = Domain::box(3, 1.0);

ScalingRegime uniform_regime(double lambda) {
  return ScalingRegime(lambda, kDom, MarkLaw::uniform(0.0, 0.2), ConstantKernel{1.0});
}

std::shared_ptr<Partition> grid_partition(int x_bins, int radius_bins) {
  return std::make_shared<Partition>(
      Partition::regular(kDom, {x_bins, 1, 1}, radius_bins, 0.0, 0.2));
}

BooleanNetwork net_of(MarkedConfiguration config, EdgeList edges = {}) {
  BooleanNetwork net;
  net.config = std::move(config);
  net.edges = std::move(edges);
  return net;
}

MarkedConfiguration points_at(std::vector<std::array<double, 4>> rows, double lambda) {
  MarkedConfiguration config;
  config.dim = 3;
  config.lambda = lambda;
  for (const auto& row : rows) {
    config.positions.insert(config.positions.end(), {row[0], row[1], row[2]});
    config.radii.push_back(row[3]);
  }
  return config;
}

}  // namespace

TEST_CASE("partition locate uses half-open bins with a closed last bin") {
  const auto part = grid_partition(2, 2);
  CHECK(part->cell_count() == 4);
  // x in [0, 0.5) -> bin 0; radius in [0, 0.1) -> bin 0.
  CHECK(part->locate(std::vector<double>{0.0, 0.0, 0.0}, 0.0) == 0);
  CHECK(part->locate(std::vector<double>{0.5, 0.0, 0.0}, 0.0) == 2);
  // Upper boundary points land in the final bins.
  CHECK(part->locate(std::vector<double>{1.0, 1.0, 1.0}, 0.2) == 3);
  CHECK_THROWS_AS(part->locate(std::vector<double>{1.1, 0.0, 0.0}, 0.0),
                  std::out_of_range);
  CHECK_THROWS_AS(part->locate(std::vector<double>{0.5, 0.5, 0.5}, 0.3),
                  std::out_of_range);
}

TEST_CASE("empirical mark measure counts points over lambda") {
  const auto part = grid_partition(2, 1);
  SUBCASE("empty network gives the zero measure") {
    const auto m = empirical_mark_measure(net_of(points_at({}, 10.0)), part);
    CHECK(m.total_mass() == 0.0);
  }
  SUBCASE("one point at lambda 10 puts 0.1 in its cell") {
    const auto m = empirical_mark_measure(
        net_of(points_at({{0.25, 0.5, 0.5, 0.1}}, 10.0)), part);
    CHECK(m[part->locate(std::vector<double>{0.25, 0.5, 0.5}, 0.1)] ==
          doctest::Approx(0.1));
    CHECK(m.total_mass() == doctest::Approx(0.1));
  }
  SUBCASE("sampled points recount exactly") {
    const auto regime = uniform_regime(100.0);
    const auto config = sample_marked_ppp(regime, kDom, 31);
    const auto m = empirical_mark_measure(net_of(config), part);
    CHECK(m.total_mass() ==
          doctest::Approx(config.size() / 100.0).epsilon(1e-12));
    double manual = 0.0;
    for (std::size_t i = 0; i < config.size(); ++i) {
      if (config.positions[3 * i] < 0.5) manual += 1.0;
    }
    CHECK(m[0] == doctest::Approx(manual / 100.0).epsilon(1e-12));
  }
}

TEST_CASE("empirical connectivity measure symmetrizes every edge") {
  const auto part = grid_partition(2, 1);
  SUBCASE("no edges means zero pair measure") {
    const auto m = empirical_connectivity_measure(
        net_of(points_at({{0.1, 0.5, 0.5, 0.1}}, 10.0)), part);
    CHECK(m.total_mass() == 0.0);
  }
  SUBCASE("cross-cell edge splits its mass") {
    auto net = net_of(
        points_at({{0.25, 0.5, 0.5, 0.1}, {0.75, 0.5, 0.5, 0.1}}, 10.0), {{0, 1}});
    const auto m = empirical_connectivity_measure(net, part);
    CHECK(m(0, 1) == doctest::Approx(0.1));
    CHECK(m(1, 0) == doctest::Approx(0.1));
    CHECK(m.total_mass() == doctest::Approx(0.2));
    CHECK(m.is_symmetric());
  }
  SUBCASE("within-cell edge lands on the diagonal with both deltas") {
    auto net = net_of(
        points_at({{0.2, 0.5, 0.5, 0.1}, {0.3, 0.5, 0.5, 0.1}}, 10.0), {{0, 1}});
    const auto m = empirical_connectivity_measure(net, part);
    CHECK(m(0, 0) == doctest::Approx(0.2));
    CHECK(m.total_mass() == doctest::Approx(0.2));
  }
}

TEST_CASE("total-mass identities hold exactly") {
  const auto regime = uniform_regime(64.0);
  const auto part = grid_partition(4, 2);
  const auto config = sample_marked_ppp(regime, kDom, 8);
  BooleanNetwork net = build_hard(config, kDom);
  const auto l1 = empirical_mark_measure(net, part);
  const auto l2 = empirical_connectivity_measure(net, part);
  CHECK(l1.total_mass() * 64.0 == doctest::Approx(config.size()).epsilon(1e-12));
  CHECK(l2.total_mass() * 64.0 ==
        doctest::Approx(2.0 * net.edges.size()).epsilon(1e-12));
  CHECK(l2.is_symmetric());
}

TEST_CASE("coarsening") {
  const auto fine = std::make_shared<Partition>(
      Partition::regular(kDom, {4, 1, 1}, 2, 0.0, 0.2));
  const auto mid = std::make_shared<Partition>(
      Partition::regular(kDom, {2, 1, 1}, 2, 0.0, 0.2));
  const auto coarse = std::make_shared<Partition>(
      Partition::regular(kDom, {1, 1, 1}, 1, 0.0, 0.2));

  Rng rng(12);
  std::vector<double> mass(fine->cell_count());
  for (auto& m : mass) m = rng.uniform();
  const BinnedMeasure fine_measure(fine, mass);

  SUBCASE("to the single cell the mass is the total") {
    const auto c = coarsen(fine_measure, coarse);
    CHECK(c[0] == doctest::Approx(fine_measure.total_mass()).epsilon(1e-12));
  }
  SUBCASE("coarsening twice equals coarsening once") {
    const auto once = coarsen(fine_measure, coarse);
    const auto twice = coarsen(coarsen(fine_measure, mid), coarse);
    CHECK(once[0] == doctest::Approx(twice[0]).epsilon(1e-12));
  }
  SUBCASE("two-cell blocks sum by hand") {
    const auto c = coarsen(fine_measure, mid);
    // Fine cells are ordered x-major then radius; mid cell 0 covers fine
    // x-bins 0 and 1.
    CHECK(c[0] == doctest::Approx(mass[0] + mass[2]).epsilon(1e-12));
    CHECK(c[1] == doctest::Approx(mass[1] + mass[3]).epsilon(1e-12));
  }
  SUBCASE("incompatible partitions throw") {
    const auto odd = std::make_shared<Partition>(
        Partition::regular(kDom, {3, 1, 1}, 1, 0.0, 0.2));
    CHECK_THROWS_AS(coarsen(fine_measure, odd), std::invalid_argument);
  }
  SUBCASE("coarsening commutes with empirical construction") {
    const auto regime = uniform_regime(50.0);
    const auto config = sample_marked_ppp(regime, kDom, 77);
    const auto direct = empirical_mark_measure(net_of(config), mid);
    const auto via_fine = coarsen(empirical_mark_measure(net_of(config), fine), mid);
    for (std::size_t c = 0; c < mid->cell_count(); ++c) {
      CHECK(direct[c] == doctest::Approx(via_fine[c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("reference measures") {
  SUBCASE("uniform laws on equal cells") {
    const auto part = grid_partition(2, 2);
    const auto ref = reference_measure(uniform_regime(1.0), part);
    for (std::size_t c = 0; c < 4; ++c) CHECK(ref[c] == doctest::Approx(0.25));
    CHECK(ref.total_mass() == doctest::Approx(1.0));
  }
  SUBCASE("refinement sums back to the parent mass") {
    const auto fine = grid_partition(4, 2);
    const auto coarse = grid_partition(2, 1);
    const auto ref_fine = reference_measure(uniform_regime(1.0), fine);
    const auto ref_coarse = reference_measure(uniform_regime(1.0), coarse);
    const auto summed = coarsen(ref_fine, coarse);
    for (std::size_t c = 0; c < coarse->cell_count(); ++c) {
      CHECK(summed[c] == doctest::Approx(ref_coarse[c]).epsilon(1e-12));
    }
  }
  SUBCASE("cubic mark law splits 1/16 and 15/16") {
    const ScalingRegime regime(1.0, kDom, MarkLaw::power(3.0, 0.0, 1.0),
                               ConstantKernel{1.0});
    const auto part = std::make_shared<Partition>(
        Partition::regular(kDom, {1, 1, 1}, 2, 0.0, 1.0));
    const auto ref = reference_measure(regime, part);
    CHECK(ref[0] == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK(ref[1] == doctest::Approx(15.0 / 16.0).epsilon(1e-12));
  }
}

TEST_CASE("serialization round trips") {
  const auto part = grid_partition(2, 2);
  SUBCASE("measure json") {
    auto m = BinnedMeasure::zero(part);
    m.at(1) = 0.25;
    m.at(3) = 0.5;
    const auto back = measure_from_json(measure_to_json(m, "cafe"), kDom);
    REQUIRE(back.cells() == m.cells());
    for (std::size_t c = 0; c < m.cells(); ++c) {
      CHECK(back[c] == doctest::Approx(m[c]).epsilon(1e-15));
    }
  }
  SUBCASE("pair csv") {
    auto m = BinnedPairMeasure::zero(part);
    m.at(0, 1) = 0.125;
    m.at(1, 0) = 0.125;
    m.at(2, 2) = 0.75;
    std::ostringstream os;
    write_pair_measure_csv(m, os);
    std::istringstream is(os.str());
    const auto back = read_pair_measure_csv(is, part);
    for (std::size_t a = 0; a < m.cells(); ++a) {
      for (std::size_t b = 0; b < m.cells(); ++b) {
        CHECK(back(a, b) == doctest::Approx(m(a, b)).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("points outside the partition raise errors") {
  const auto part = grid_partition(2, 1);  // radii up to 0.2
  auto net = net_of(points_at({{0.5, 0.5, 0.5, 0.5}}, 10.0));
  CHECK_THROWS_AS(empirical_mark_measure(net, part), std::out_of_range);
}

TEST_SUITE_END();
