#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace genedesign {

inline constexpr int kTaskCount = 2;  // alpha = transcription, beta = translation

// Paired observations: per-gene features plus the two rates. An optional
// observation mask marks which rates were measured; the standard pipeline
// uses fully observed data.
struct Dataset {
  std::vector<std::string> ids;   // N
  Eigen::MatrixXd features;       // N x p
  Eigen::MatrixXd rates;          // N x 2, columns (y_alpha, y_beta)
  Eigen::Matrix<bool, Eigen::Dynamic, kTaskCount> observed;  // N x 2

  static Dataset create(std::vector<std::string> ids, Eigen::MatrixXd features,
                        Eigen::MatrixXd rates);
  static Dataset create(std::vector<std::string> ids, Eigen::MatrixXd features,
                        Eigen::MatrixXd rates,
                        Eigen::Matrix<bool, Eigen::Dynamic, kTaskCount> observed);

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dimension() const { return features.cols(); }

  // Row indices observed for the given task, ascending.
  std::vector<Eigen::Index> observed_rows(int task) const;
  bool fully_observed() const;

  // Appends one gene; the new row is observed for both tasks.
  void append(const std::string& id, const Eigen::VectorXd& x,
              double y_alpha, double y_beta);

  Dataset subset(const std::vector<Eigen::Index>& rows) const;

  // Best observed averaged rate (y_alpha + y_beta) / 2 over rows where both
  // tasks are observed; the expected-improvement incumbent.
  double best_averaged_rate() const;

  // FNV-1a hash over the canonical text serialization of ids, features and
  // rates; persisted with fitted models as an integrity check.
  std::string fingerprint() const;
};

// CSV ingestion/serialization. Feature CSV columns: id plus the 69 feature
// names; rates CSV columns: id,y_alpha,y_beta (extra columns ignored).
std::string features_to_csv(const std::vector<std::string>& ids,
                            const Eigen::MatrixXd& features);
void read_features_csv(const std::string& path, std::vector<std::string>& ids,
                       Eigen::MatrixXd& features);
void read_rates_csv(const std::string& path, std::vector<std::string>& ids,
                    Eigen::MatrixXd& rates);

// Inner join of feature and rate tables by id, preserving feature-file
// order. Ids missing from either side are returned in `unmatched`.
Dataset join_features_rates(const std::vector<std::string>& feature_ids,
                            const Eigen::MatrixXd& features,
                            const std::vector<std::string>& rate_ids,
                            const Eigen::MatrixXd& rates,
                            std::vector<std::string>* unmatched = nullptr);

}  // namespace genedesign
