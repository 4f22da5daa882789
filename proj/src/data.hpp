#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rng.hpp"

namespace dane {

using Index = Eigen::Index;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Example {
  Eigen::VectorXd x;
  double y = 0.0;
};

// Immutable sample store.  Features are kept row-major so per-example access
// in the stochastic loops is contiguous.
class Dataset {
 public:
  Dataset() = default;
  Dataset(RowMatrix X, Eigen::VectorXd y);
  static Dataset from_examples(const std::vector<Example>& examples);

  Index size() const { return X_.rows(); }
  Index dim() const { return X_.cols(); }

  auto x(Index j) const { return X_.row(j).transpose(); }
  double y(Index j) const { return y_[j]; }

  const RowMatrix& features() const { return X_; }
  const Eigen::VectorXd& targets() const { return y_; }
  std::span<const Index> all_indices() const { return all_indices_; }

 private:
  RowMatrix X_;
  Eigen::VectorXd y_;
  std::vector<Index> all_indices_;
};

// Borrowed index-based view over a Dataset; the index storage must outlive it.
class DataView {
 public:
  DataView(const Dataset& data, std::span<const Index> indices)
      : data_(&data), indices_(indices) {}
  static DataView whole(const Dataset& data) { return DataView(data, data.all_indices()); }

  Index size() const { return static_cast<Index>(indices_.size()); }
  auto x(Index k) const { return data_->x(indices_[static_cast<std::size_t>(k)]); }
  double y(Index k) const { return data_->y(indices_[static_cast<std::size_t>(k)]); }
  Index global_index(Index k) const { return indices_[static_cast<std::size_t>(k)]; }
  const Dataset& dataset() const { return *data_; }

 private:
  const Dataset* data_;
  std::span<const Index> indices_;
};

/* Generator for y = <x, w_star> + noise,  x ~ N(0, diag(i^-cov_exponent)).
 * Coordinate indices are 1-based in the variance law, so the first coordinate
 * always has unit variance. */
struct SyntheticSpec {
  Index d = 500;
  Index n_total = 6000;
  double noise_std = 1.0;
  double cov_exponent = 1.2;
  Eigen::VectorXd w_star;  // must hold exactly d entries
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError naming the bad field
};

Dataset generate_synthetic(const SyntheticSpec& spec);

struct Shard {
  int machine_id = 0;
  std::vector<Index> indices;  // positions into the parent Dataset
};

// Random equal split: a seeded permutation of [0,N) cut into m consecutive
// blocks.  Requires m to divide N.
std::vector<Shard> partition(const Dataset& data, int machines, std::uint64_t seed);

// Draws floor(fraction*n) distinct indices from the shard.  Deterministic in
// (seed, shard.machine_id, round).
std::vector<Index> sample_subset(const Shard& shard, double fraction, std::uint64_t seed,
                                 int round);

// Dataset serialization, header "y,x1,...,xd".  Values are written with
// shortest round-trip formatting, so dump -> load reproduces every bit.
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv_file(const std::string& path, const Dataset& data);
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv_file(const std::string& path);

}  // namespace dane
