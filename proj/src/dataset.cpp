#include "genedesign/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_map>

#include "genedesign/csv.hpp"
#include "genedesign/errors.hpp"
#include "genedesign/features.hpp"

namespace genedesign {

namespace {

void validate(const Dataset& d) {
  const Eigen::Index n = d.features.rows();
  if (n < 1) throw Error("EmptyDataset", "dataset must contain at least one gene");
  if (d.rates.rows() != n || static_cast<Eigen::Index>(d.ids.size()) != n ||
      d.observed.rows() != n)
    throw DimensionMismatch("dataset ids/features/rates row counts disagree");
  if (d.rates.cols() != kTaskCount)
    throw DimensionMismatch("rates must have exactly 2 columns");
  if (!d.features.allFinite())
    throw Error("NonFiniteData", "features contain non-finite entries");
  for (Eigen::Index i = 0; i < n; ++i)
    for (int l = 0; l < kTaskCount; ++l)
      if (d.observed(i, l) && !std::isfinite(d.rates(i, l)))
        throw Error("NonFiniteData", "observed rate is non-finite for gene '" +
                                         d.ids[static_cast<std::size_t>(i)] + "'");
}

}  // namespace

Dataset Dataset::create(std::vector<std::string> ids, Eigen::MatrixXd features,
                        Eigen::MatrixXd rates) {
  Eigen::Matrix<bool, Eigen::Dynamic, kTaskCount> observed(features.rows(), kTaskCount);
  observed.setConstant(true);
  return create(std::move(ids), std::move(features), std::move(rates), std::move(observed));
}

Dataset Dataset::create(std::vector<std::string> ids, Eigen::MatrixXd features,
                        Eigen::MatrixXd rates,
                        Eigen::Matrix<bool, Eigen::Dynamic, kTaskCount> observed) {
  Dataset d{std::move(ids), std::move(features), std::move(rates), std::move(observed)};
  validate(d);
  return d;
}

std::vector<Eigen::Index> Dataset::observed_rows(int task) const {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < observed.rows(); ++i)
    if (observed(i, task)) rows.push_back(i);
  return rows;
}

bool Dataset::fully_observed() const { return observed.all(); }

void Dataset::append(const std::string& id, const Eigen::VectorXd& x,
                     double y_alpha, double y_beta) {
  if (x.size() != features.cols())
    throw DimensionMismatch("appended feature vector has wrong dimension");
  const Eigen::Index n = features.rows();
  features.conservativeResize(n + 1, Eigen::NoChange);
  rates.conservativeResize(n + 1, Eigen::NoChange);
  observed.conservativeResize(n + 1, Eigen::NoChange);
  features.row(n) = x.transpose();
  rates(n, 0) = y_alpha;
  rates(n, 1) = y_beta;
  observed(n, 0) = observed(n, 1) = true;
  ids.push_back(id);
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.rates.resize(static_cast<Eigen::Index>(rows.size()), kTaskCount);
  out.observed.resize(static_cast<Eigen::Index>(rows.size()), kTaskCount);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Eigen::Index i = rows[k];
    out.features.row(static_cast<Eigen::Index>(k)) = features.row(i);
    out.rates.row(static_cast<Eigen::Index>(k)) = rates.row(i);
    out.observed.row(static_cast<Eigen::Index>(k)) = observed.row(i);
    out.ids.push_back(ids[static_cast<std::size_t>(i)]);
  }
  validate(out);
  return out;
}

double Dataset::best_averaged_rate() const {
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < rates.rows(); ++i)
    if (observed(i, 0) && observed(i, 1))
      best = std::max(best, 0.5 * (rates(i, 0) + rates(i, 1)));
  return best;
}

std::string Dataset::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    mix(ids[static_cast<std::size_t>(i)]);
    mix("|");
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      mix(format_double(features(i, j)));
      mix(",");
    }
    for (int l = 0; l < kTaskCount; ++l) {
      mix(observed(i, l) ? format_double(rates(i, l)) : "-");
      mix(",");
    }
    mix("\n");
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string features_to_csv(const std::vector<std::string>& ids,
                            const Eigen::MatrixXd& features) {
  if (features.cols() != kFeatureDimension)
    throw DimensionMismatch("feature matrix must have 69 columns");
  std::string out = "id";
  for (const auto& name : feature_names()) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    out += ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      out += ',';
      out += format_double(features(i, j));
    }
    out += '\n';
  }
  return out;
}

void read_features_csv(const std::string& path, std::vector<std::string>& ids,
                       Eigen::MatrixXd& features) {
  const CsvTable table = read_csv_file(path);
  if (table.header.empty() || table.header[0] != "id")
    throw Error("CsvShape", "feature CSV must start with an 'id' column: " + path);
  const auto& names = feature_names();
  if (table.header.size() != names.size() + 1)
    throw Error("CsvShape", "feature CSV must have 70 columns (id + 69 features): " + path);
  for (std::size_t j = 0; j < names.size(); ++j)
    if (table.header[j + 1] != names[j])
      throw Error("CsvShape", "feature CSV column " + std::to_string(j + 1) +
                                  " is '" + table.header[j + 1] + "', expected '" +
                                  names[j] + "'");
  ids.clear();
  features.resize(static_cast<Eigen::Index>(table.rows.size()), kFeatureDimension);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ids.push_back(table.rows[i][0]);
    for (int j = 0; j < kFeatureDimension; ++j)
      features(static_cast<Eigen::Index>(i), j) = parse_double_field(
          table.rows[i][static_cast<std::size_t>(j) + 1], "feature CSV row " + std::to_string(i));
  }
  if (ids.empty()) throw EmptyInput("feature CSV has no data rows: " + path);
}

void read_rates_csv(const std::string& path, std::vector<std::string>& ids,
                    Eigen::MatrixXd& rates) {
  const CsvTable table = read_csv_file(path);
  std::size_t id_col, a_col, b_col;
  try {
    id_col = table.column("id");
    a_col = table.column("y_alpha");
    b_col = table.column("y_beta");
  } catch (const Error&) {
    throw Error("CsvShape", "expected columns id,y_alpha,y_beta in " + path);
  }
  ids.clear();
  rates.resize(static_cast<Eigen::Index>(table.rows.size()), kTaskCount);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ids.push_back(table.rows[i][id_col]);
    rates(static_cast<Eigen::Index>(i), 0) =
        parse_double_field(table.rows[i][a_col], "rates CSV row " + std::to_string(i));
    rates(static_cast<Eigen::Index>(i), 1) =
        parse_double_field(table.rows[i][b_col], "rates CSV row " + std::to_string(i));
  }
  if (ids.empty()) throw EmptyInput("rates CSV has no data rows: " + path);
}

Dataset join_features_rates(const std::vector<std::string>& feature_ids,
                            const Eigen::MatrixXd& features,
                            const std::vector<std::string>& rate_ids,
                            const Eigen::MatrixXd& rates,
                            std::vector<std::string>* unmatched) {
  std::unordered_map<std::string, Eigen::Index> rate_row;
  for (std::size_t i = 0; i < rate_ids.size(); ++i)
    rate_row.emplace(rate_ids[i], static_cast<Eigen::Index>(i));

  std::vector<std::string> ids;
  std::vector<Eigen::Index> f_rows, r_rows;
  for (std::size_t i = 0; i < feature_ids.size(); ++i) {
    auto it = rate_row.find(feature_ids[i]);
    if (it == rate_row.end()) {
      if (unmatched) unmatched->push_back(feature_ids[i]);
      continue;
    }
    ids.push_back(feature_ids[i]);
    f_rows.push_back(static_cast<Eigen::Index>(i));
    r_rows.push_back(it->second);
  }
  if (unmatched) {
    std::unordered_map<std::string, bool> kept;
    for (const auto& id : ids) kept.emplace(id, true);
    for (const auto& id : rate_ids)
      if (!kept.count(id)) unmatched->push_back(id);
  }
  if (ids.empty()) throw EmptyInput("no ids shared between feature and rate tables");

  Eigen::MatrixXd X(static_cast<Eigen::Index>(ids.size()), features.cols());
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(ids.size()), kTaskCount);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    X.row(static_cast<Eigen::Index>(k)) = features.row(f_rows[k]);
    Y.row(static_cast<Eigen::Index>(k)) = rates.row(r_rows[k]);
  }
  return Dataset::create(std::move(ids), std::move(X), std::move(Y));
}

}  // namespace genedesign
