#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace minimax {

struct Sample {
  Eigen::VectorXd x;
  double y = 0.0;
};

/// One group: rows of `x` are inputs, `y` the matching targets, in sample order.
struct Group {
  std::string id;
  Eigen::MatrixXd x;
  Eigen::VectorXd y;

  Eigen::Index size() const noexcept { return y.size(); }
};

/// Samples partitioned into N >= 1 nonempty groups sharing input dimension d.
class GroupedDataset {
 public:
  /// Validates the invariants; throws EmptyDataError, EmptyGroupError or DimensionError.
  GroupedDataset(std::vector<Group> groups, int input_dim);

  /// Builds one group per entry of `groups`, ids "1".."N".
  static GroupedDataset from_samples(const std::vector<std::vector<Sample>>& groups);

  int input_dim() const noexcept { return input_dim_; }
  std::size_t group_count() const noexcept { return groups_.size(); }
  const std::vector<Group>& groups() const noexcept { return groups_; }
  const Group& group(std::size_t j) const { return groups_.at(j); }
  Eigen::Index sample_count() const noexcept { return sample_count_; }

  /// All samples stacked in group order, then sample order.
  Eigen::MatrixXd pooled_x() const;
  Eigen::VectorXd pooled_y() const;

  bool operator==(const GroupedDataset& other) const;

 private:
  std::vector<Group> groups_;
  int input_dim_;
  Eigen::Index sample_count_ = 0;
};

struct CsvSchema {
  std::string group_column = "group";
  std::string y_column = "y";
  /// Empty: every remaining column, in file order.
  std::vector<std::string> x_columns;
};

GroupedDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
void save_csv(const GroupedDataset& data, const std::filesystem::path& path);

/// 1517 singleton groups: 500 x (0.15, 1.48), 500 x (0.43, 1.45), 500 x (0.04, 1.59),
/// then 17 scattered points.
GroupedDataset generate_example41();

/// The true line behind generate_example41.
inline constexpr double kExample41TrueSlope = 1.75;
inline constexpr double kExample41TrueIntercept = 1.25;

struct UnbalancedConfig {
  std::uint64_t seed = 0;
  int input_dim = 2;
  int groups = 20;
  int group_size = 1000;
  double positive_fraction = 0.05;
};

/// Two unit-covariance Gaussian classes with means -1 and +1 (all coordinates). All
/// floor(N * M * fraction) positives go to group 1; every other group is all negative.
GroupedDataset generate_synthetic_unbalanced(const UnbalancedConfig& config);

/// Single group with `per_class` samples of each label, alternating 0, 1, 0, 1, ...
GroupedDataset generate_balanced_test(std::uint64_t seed, int input_dim, int per_class);

}  // namespace minimax
