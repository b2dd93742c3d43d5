// Binned measures on a partition: the empirical mark measure L1 (point
// counts / lambda), the empirical connectivity measure L2 (each edge puts
// 1/lambda on both ordered cell pairs), coarsening, and reference measures.
#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "boolnet/model.hpp"
#include "boolnet/network.hpp"
#include "boolnet/partition.hpp"

namespace boolnet {

class BinnedMeasure {
 public:
  BinnedMeasure(std::shared_ptr<const Partition> partition, std::vector<double> mass);
  static BinnedMeasure zero(std::shared_ptr<const Partition> partition);

  const Partition& partition() const { return *partition_; }
  std::shared_ptr<const Partition> partition_ptr() const { return partition_; }

  std::size_t cells() const { return mass_.size(); }
  double operator[](std::size_t cell) const { return mass_[cell]; }
  double& at(std::size_t cell) { return mass_[cell]; }
  const std::vector<double>& masses() const { return mass_; }

  double total_mass() const;

 private:
  std::shared_ptr<const Partition> partition_;
  std::vector<double> mass_;
};

// Symmetric mass on ordered cell pairs, stored dense row-major.
class BinnedPairMeasure {
 public:
  BinnedPairMeasure(std::shared_ptr<const Partition> partition,
                    std::vector<double> mass);
  static BinnedPairMeasure zero(std::shared_ptr<const Partition> partition);

  const Partition& partition() const { return *partition_; }
  std::shared_ptr<const Partition> partition_ptr() const { return partition_; }

  std::size_t cells() const { return cells_; }
  double operator()(std::size_t a, std::size_t b) const {
    return mass_[a * cells_ + b];
  }
  double& at(std::size_t a, std::size_t b) { return mass_[a * cells_ + b]; }
  const std::vector<double>& masses() const { return mass_; }

  double total_mass() const;
  bool is_symmetric(double rel_tol = 1e-12) const;

 private:
  std::shared_ptr<const Partition> partition_;
  std::size_t cells_;
  std::vector<double> mass_;
};

// L1: mass(A) = #{i : (X_i, R_i) in A} / lambda. Throws std::out_of_range
// for points outside the partition.
BinnedMeasure empirical_mark_measure(const BooleanNetwork& net,
                                     std::shared_ptr<const Partition> partition);

// L2: each edge contributes 1/lambda to (cell_i, cell_j) and to
// (cell_j, cell_i); total mass 2|E|/lambda.
BinnedPairMeasure empirical_connectivity_measure(
    const BooleanNetwork& net, std::shared_ptr<const Partition> partition);

// Sum fine-cell masses into a coarsening partition.
BinnedMeasure coarsen(const BinnedMeasure& m,
                      std::shared_ptr<const Partition> coarse);

// nu_hat (x) Q_hat cell masses: a probability measure in the canonical
// regime (uniform positions, the regime's mark law).
BinnedMeasure reference_measure(const ScalingRegime& regime,
                                std::shared_ptr<const Partition> partition);

// Serialization. Measures embed a partition descriptor; pair measures go to
// sparse (cell_a, cell_b, mass) CSV rows.
std::string partition_to_json(const Partition& partition);
std::shared_ptr<const Partition> partition_from_json(const std::string& text,
                                                     const Domain& dom);

std::string measure_to_json(const BinnedMeasure& m,
                            const std::string& config_digest = "");
BinnedMeasure measure_from_json(const std::string& text, const Domain& dom);

void write_pair_measure_csv(const BinnedPairMeasure& m, std::ostream& os,
                            const std::string& header_comment = "");
BinnedPairMeasure read_pair_measure_csv(std::istream& is,
                                        std::shared_ptr<const Partition> partition);

}  // namespace boolnet
