#include "data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "errors.hpp"

namespace dane {

Dataset::Dataset(RowMatrix X, Eigen::VectorXd y) : X_(std::move(X)), y_(std::move(y)) {
  if (X_.rows() != y_.size())
    throw ContractViolation("Dataset: feature rows and target count differ");
  all_indices_.resize(static_cast<std::size_t>(X_.rows()));
  std::iota(all_indices_.begin(), all_indices_.end(), Index{0});
}

Dataset Dataset::from_examples(const std::vector<Example>& examples) {
  if (examples.empty()) throw ContractViolation("Dataset: no examples");
  const Index d = examples.front().x.size();
  RowMatrix X(static_cast<Index>(examples.size()), d);
  Eigen::VectorXd y(static_cast<Index>(examples.size()));
  for (Index j = 0; j < X.rows(); ++j) {
    const Example& e = examples[static_cast<std::size_t>(j)];
    if (e.x.size() != d) throw ContractViolation("Dataset: inconsistent feature dimension");
    X.row(j) = e.x.transpose();
    y[j] = e.y;
  }
  return Dataset(std::move(X), std::move(y));
}

void SyntheticSpec::validate() const {
  if (d < 1) throw ConfigError("SyntheticSpec.d: must be >= 1");
  if (n_total < 1) throw ConfigError("SyntheticSpec.n_total: must be >= 1");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std))
    throw ConfigError("SyntheticSpec.noise_std: must be finite and >= 0");
  if (!(cov_exponent >= 0.0) || !std::isfinite(cov_exponent))
    throw ConfigError("SyntheticSpec.cov_exponent: must be finite and >= 0");
  if (w_star.size() != d)
    throw ConfigError("SyntheticSpec.w_star: must hold exactly d entries");
  if (!w_star.allFinite()) throw ConfigError("SyntheticSpec.w_star: entries must be finite");
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng = Rng::stream(spec.seed, Rng::Purpose::kDataGen, 0, 0);

  Eigen::VectorXd scale(spec.d);
  for (Index i = 0; i < spec.d; ++i)
    scale[i] = std::pow(static_cast<double>(i + 1), -0.5 * spec.cov_exponent);

  RowMatrix X(spec.n_total, spec.d);
  Eigen::VectorXd y(spec.n_total);
  for (Index j = 0; j < spec.n_total; ++j) {
    for (Index i = 0; i < spec.d; ++i) X(j, i) = scale[i] * rng.next_gaussian();
    y[j] = X.row(j).dot(spec.w_star) + spec.noise_std * rng.next_gaussian();
  }
  return Dataset(std::move(X), std::move(y));
}

std::vector<Shard> partition(const Dataset& data, int machines, std::uint64_t seed) {
  if (machines < 1) throw ConfigError("partition: machines must be >= 1");
  const Index n_total = data.size();
  if (n_total % machines != 0)
    throw ConfigError("partition: machines must divide the number of examples (" +
                      std::to_string(n_total) + " % " + std::to_string(machines) + " != 0)");

  std::vector<Index> perm(static_cast<std::size_t>(n_total));
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng rng = Rng::stream(seed, Rng::Purpose::kPartition, 0, 0);
  for (std::size_t i = perm.size() - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.next_index(i + 1)]);

  const Index n = n_total / machines;
  std::vector<Shard> shards(static_cast<std::size_t>(machines));
  for (int i = 0; i < machines; ++i) {
    shards[static_cast<std::size_t>(i)].machine_id = i;
    shards[static_cast<std::size_t>(i)].indices.assign(
        perm.begin() + static_cast<std::ptrdiff_t>(i) * n,
        perm.begin() + static_cast<std::ptrdiff_t>(i + 1) * n);
  }
  return shards;
}

std::vector<Index> sample_subset(const Shard& shard, double fraction, std::uint64_t seed,
                                 int round) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ConfigError("sample_subset: fraction must lie in (0,1]");
  const std::size_t n = shard.indices.size();
  const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  if (k == 0)
    throw ConfigError("sample_subset: fraction " + std::to_string(fraction) +
                      " of shard size " + std::to_string(n) + " selects no examples");

  Rng rng = Rng::stream(seed, Rng::Purpose::kSubset,
                        static_cast<std::uint64_t>(shard.machine_id),
                        static_cast<std::uint64_t>(round));
  std::vector<Index> pool = shard.indices;
  for (std::size_t i = 0; i < k; ++i)
    std::swap(pool[i], pool[i + rng.next_index(n - i)]);
  pool.resize(k);
  return pool;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

double parse_double_field(std::string_view field, const char* what) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError(std::string("dataset csv: bad ") + what + " value '" +
                      std::string(field) + "'");
  if (!std::isfinite(v))
    throw ConfigError(std::string("dataset csv: non-finite ") + what + " value");
  return v;
}

}  // namespace

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  std::string line = "y";
  for (Index i = 1; i <= data.dim(); ++i) line += ",x" + std::to_string(i);
  line += '\n';
  out << line;
  for (Index j = 0; j < data.size(); ++j) {
    line.clear();
    append_double(line, data.y(j));
    for (Index i = 0; i < data.dim(); ++i) {
      line += ',';
      append_double(line, data.features()(j, i));
    }
    line += '\n';
    out << line;
  }
}

void write_dataset_csv_file(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("dataset csv: cannot open '" + path + "' for writing");
  write_dataset_csv(out, data);
  if (!out) throw ConfigError("dataset csv: write to '" + path + "' failed");
}

Dataset read_dataset_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("dataset csv: empty input");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header.rfind("y,x1", 0) != 0)
    throw ConfigError("dataset csv: header must start with 'y,x1'");
  const Index d = static_cast<Index>(std::count(header.begin(), header.end(), ','));

  std::vector<double> ys;
  std::vector<double> xs;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view rest(line);
    Index field = 0;
    while (true) {
      const std::size_t comma = rest.find(',');
      const std::string_view cell = rest.substr(0, comma);
      if (field == 0)
        ys.push_back(parse_double_field(cell, "target"));
      else
        xs.push_back(parse_double_field(cell, "feature"));
      ++field;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (field != d + 1)
      throw ConfigError("dataset csv: row with " + std::to_string(field) +
                        " fields, expected " + std::to_string(d + 1));
  }
  if (ys.empty()) throw ConfigError("dataset csv: no data rows");

  const Index n = static_cast<Index>(ys.size());
  RowMatrix X(n, d);
  Eigen::VectorXd y(n);
  for (Index j = 0; j < n; ++j) {
    y[j] = ys[static_cast<std::size_t>(j)];
    for (Index i = 0; i < d; ++i)
      X(j, i) = xs[static_cast<std::size_t>(j * d + i)];
  }
  return Dataset(std::move(X), std::move(y));
}

Dataset read_dataset_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("dataset csv: cannot open '" + path + "'");
  return read_dataset_csv(in);
}

}  // namespace dane
