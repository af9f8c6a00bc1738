#include "minimax/grouped_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <utility>

#include "minimax/errors.hpp"
#include "minimax/random.hpp"
#include "text_format.hpp"

namespace minimax {

GroupedDataset::GroupedDataset(std::vector<Group> groups, int input_dim)
    : groups_(std::move(groups)), input_dim_(input_dim) {
  if (groups_.empty()) {
    throw EmptyDataError("dataset must contain at least one group");
  }
  if (input_dim_ < 1) {
    throw DimensionError("input dimension must be >= 1");
  }
  for (const Group& g : groups_) {
    if (g.size() == 0) {
      throw EmptyGroupError("group '" + g.id + "' has no samples");
    }
    if (g.x.rows() != g.size() || g.x.cols() != input_dim_) {
      throw DimensionError("group '" + g.id + "' has inconsistent shape");
    }
    if (!g.x.allFinite() || !g.y.allFinite()) {
      throw NumericalError("group '" + g.id + "' contains non-finite values");
    }
    sample_count_ += g.size();
  }
}

GroupedDataset GroupedDataset::from_samples(const std::vector<std::vector<Sample>>& groups) {
  if (groups.empty() || groups.front().empty()) {
    throw EmptyDataError("dataset must contain at least one nonempty group");
  }
  const auto dim = groups.front().front().x.size();
  std::vector<Group> out;
  out.reserve(groups.size());
  for (std::size_t j = 0; j < groups.size(); ++j) {
    Group g;
    g.id = std::to_string(j + 1);
    const auto n = static_cast<Eigen::Index>(groups[j].size());
    g.x.resize(n, dim);
    g.y.resize(n);
    for (Eigen::Index l = 0; l < n; ++l) {
      const Sample& s = groups[j][static_cast<std::size_t>(l)];
      if (s.x.size() != dim) {
        throw DimensionError("sample dimension mismatch in group " + g.id);
      }
      g.x.row(l) = s.x.transpose();
      g.y(l) = s.y;
    }
    out.push_back(std::move(g));
  }
  return GroupedDataset(std::move(out), static_cast<int>(dim));
}

Eigen::MatrixXd GroupedDataset::pooled_x() const {
  Eigen::MatrixXd x(sample_count_, input_dim_);
  Eigen::Index row = 0;
  for (const Group& g : groups_) {
    x.middleRows(row, g.size()) = g.x;
    row += g.size();
  }
  return x;
}

Eigen::VectorXd GroupedDataset::pooled_y() const {
  Eigen::VectorXd y(sample_count_);
  Eigen::Index row = 0;
  for (const Group& g : groups_) {
    y.segment(row, g.size()) = g.y;
    row += g.size();
  }
  return y;
}

bool GroupedDataset::operator==(const GroupedDataset& other) const {
  if (input_dim_ != other.input_dim_ || groups_.size() != other.groups_.size()) return false;
  for (std::size_t j = 0; j < groups_.size(); ++j) {
    const Group& a = groups_[j];
    const Group& b = other.groups_[j];
    if (a.id != b.id || a.size() != b.size() || a.x != b.x || a.y != b.y) return false;
  }
  return true;
}

namespace {

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(detail::trim(line.substr(start)));
      break;
    }
    cells.push_back(detail::trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw SchemaError("missing column '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

GroupedDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line) || detail::trim(line).empty()) {
    throw EmptyDataError("'" + path.string() + "' is empty");
  }
  // UTF-8 byte order mark
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

  std::vector<std::string> header;
  for (auto cell : split_row(line)) header.emplace_back(cell);

  const std::size_t group_col = column_index(header, schema.group_column);
  const std::size_t y_col = column_index(header, schema.y_column);
  std::vector<std::size_t> x_cols;
  if (schema.x_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c != group_col && c != y_col) x_cols.push_back(c);
    }
  } else {
    for (const auto& name : schema.x_columns) x_cols.push_back(column_index(header, name));
  }
  if (x_cols.empty()) {
    throw SchemaError("no input columns");
  }

  std::vector<std::string> ids;
  std::unordered_map<std::string, std::size_t> index_of;
  std::vector<std::vector<Sample>> buckets;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    ++row;
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      throw ParseError(row, "expected " + std::to_string(header.size()) + " cells, got " +
                                std::to_string(cells.size()));
    }
    auto number = [&](std::size_t c) {
      const auto value = detail::parse_double(cells[c]);
      if (!value || !std::isfinite(*value)) {
        throw ParseError(row, "column '" + header[c] + "': '" + std::string(cells[c]) +
                                  "' is not a finite number");
      }
      return *value;
    };
    Sample s;
    s.y = number(y_col);
    s.x.resize(static_cast<Eigen::Index>(x_cols.size()));
    for (std::size_t k = 0; k < x_cols.size(); ++k) {
      s.x(static_cast<Eigen::Index>(k)) = number(x_cols[k]);
    }
    std::string id(cells[group_col]);
    auto [it, inserted] = index_of.try_emplace(id, buckets.size());
    if (inserted) {
      ids.push_back(id);
      buckets.emplace_back();
    }
    buckets[it->second].push_back(std::move(s));
  }
  if (buckets.empty()) {
    throw EmptyDataError("'" + path.string() + "' has no data rows");
  }

  std::vector<Group> groups;
  groups.reserve(buckets.size());
  const auto dim = static_cast<Eigen::Index>(x_cols.size());
  for (std::size_t j = 0; j < buckets.size(); ++j) {
    Group g;
    g.id = ids[j];
    const auto n = static_cast<Eigen::Index>(buckets[j].size());
    g.x.resize(n, dim);
    g.y.resize(n);
    for (Eigen::Index l = 0; l < n; ++l) {
      g.x.row(l) = buckets[j][static_cast<std::size_t>(l)].x.transpose();
      g.y(l) = buckets[j][static_cast<std::size_t>(l)].y;
    }
    groups.push_back(std::move(g));
  }
  return GroupedDataset(std::move(groups), static_cast<int>(dim));
}

void save_csv(const GroupedDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write '" + path.string() + "'");
  }
  out << "group,y";
  for (int k = 1; k <= data.input_dim(); ++k) out << ",x" << k;
  out << '\n';
  for (const Group& g : data.groups()) {
    for (Eigen::Index l = 0; l < g.size(); ++l) {
      out << g.id << ',' << detail::format_double(g.y(l));
      for (Eigen::Index k = 0; k < g.x.cols(); ++k) out << ',' << detail::format_double(g.x(l, k));
      out << '\n';
    }
  }
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

GroupedDataset generate_example41() {
  struct Point {
    double x, y;
  };
  constexpr std::array<Point, 17> scattered = {{{1.23, 3.01},
                                                {0.63, 2.89},
                                                {1.64, 4.54},
                                                {0.98, 3.32},
                                                {1.92, 5.0},
                                                {1.26, 3.96},
                                                {1.77, 3.92},
                                                {1.1, 2.8},
                                                {1.22, 2.84},
                                                {1.48, 4.52},
                                                {0.71, 3.17},
                                                {0.77, 2.59},
                                                {1.89, 5.1},
                                                {1.31, 3.17},
                                                {1.31, 2.91},
                                                {1.63, 4.02},
                                                {0.56, 1.79}}};
  std::vector<Point> points;
  points.reserve(1517);
  points.insert(points.end(), 500, Point{0.15, 1.48});
  points.insert(points.end(), 500, Point{0.43, 1.45});
  points.insert(points.end(), 500, Point{0.04, 1.59});
  points.insert(points.end(), scattered.begin(), scattered.end());

  std::vector<Group> groups;
  groups.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    Group g;
    g.id = std::to_string(i + 1);
    g.x.resize(1, 1);
    g.x(0, 0) = points[i].x;
    g.y.resize(1);
    g.y(0) = points[i].y;
    groups.push_back(std::move(g));
  }
  return GroupedDataset(std::move(groups), 1);
}

namespace {

template <typename Row>
void fill_sample(Rng& rng, double label, Row&& x) {
  const double mean = label > 0.5 ? 1.0 : -1.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = mean + rng.normal();
}

}  // namespace

GroupedDataset generate_synthetic_unbalanced(const UnbalancedConfig& config) {
  if (config.groups < 2 || config.group_size < 1 || config.input_dim < 1) {
    throw ConfigError("unbalanced generator needs groups >= 2, group_size >= 1, input_dim >= 1");
  }
  if (!(config.positive_fraction > 0.0 && config.positive_fraction < 1.0)) {
    throw ConfigError("positive_fraction must lie in (0, 1)");
  }
  const double total = static_cast<double>(config.groups) * config.group_size;
  // Relative slack so that e.g. 20000 * 0.05 counts as 1000 despite binary rounding.
  const auto positives =
      static_cast<long long>(std::floor(total * config.positive_fraction * (1.0 + 1e-12)));
  if (positives < 1) {
    throw ConfigError("groups * group_size * positive_fraction < 1: no positive samples");
  }
  if (positives > config.group_size) {
    throw ConfigError("positives (" + std::to_string(positives) +
                      ") do not fit into group 1 of size " + std::to_string(config.group_size));
  }

  Rng rng(config.seed);
  std::vector<Group> groups;
  groups.reserve(static_cast<std::size_t>(config.groups));
  for (int j = 0; j < config.groups; ++j) {
    Group g;
    g.id = std::to_string(j + 1);
    g.x.resize(config.group_size, config.input_dim);
    g.y.resize(config.group_size);
    for (int l = 0; l < config.group_size; ++l) {
      const double label = (j == 0 && l < positives) ? 1.0 : 0.0;
      g.y(l) = label;
      fill_sample(rng, label, g.x.row(l));
    }
    groups.push_back(std::move(g));
  }
  return GroupedDataset(std::move(groups), config.input_dim);
}

GroupedDataset generate_balanced_test(std::uint64_t seed, int input_dim, int per_class) {
  if (per_class < 1 || input_dim < 1) {
    throw ConfigError("balanced test set needs per_class >= 1 and input_dim >= 1");
  }
  Rng rng(seed);
  Group g;
  g.id = "test";
  g.x.resize(2 * per_class, input_dim);
  g.y.resize(2 * per_class);
  for (int l = 0; l < 2 * per_class; ++l) {
    const double label = static_cast<double>(l % 2);
    g.y(l) = label;
    fill_sample(rng, label, g.x.row(l));
  }
  std::vector<Group> groups;
  groups.push_back(std::move(g));
  return GroupedDataset(std::move(groups), input_dim);
}

}  // namespace minimax
