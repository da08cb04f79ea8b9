#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "wum/common.hpp"
#include "wum/sessionizer.hpp"

namespace wum {

struct UrlSupport {
  // Total occurrences across all sessions.
  std::map<UrlId, std::size_t> access_count;
  // Number of distinct sessions containing the URL.
  std::map<UrlId, std::size_t> session_support;

  std::size_t access(UrlId id) const;
  std::size_t support(UrlId id) const;
};

UrlSupport compute_support(std::span<const Session> sessions);

struct FilterResult {
  std::vector<Session> sessions;
  std::set<UrlId> retained;
};

// Drops URLs whose total access count is below `min_access`.
FilterResult filter_low_access(std::span<const Session> sessions, std::size_t min_access);

// Drops URLs appearing in fewer than `min_session_support` sessions. Sessions
// that lose every URL are kept (empty).
FilterResult filter_low_support(std::span<const Session> sessions,
                                std::size_t min_session_support);

enum class Scheme { binary, frequency };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);

struct SparseEntry {
  std::uint32_t column = 0;
  double value = 0.0;

  bool operator==(const SparseEntry&) const = default;
};

using SparseRow = std::vector<SparseEntry>;

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct SessionMatrix {
  std::size_t columns = 0;
  // url id of each column, ascending.
  std::vector<UrlId> catalog;
  std::vector<SparseRow> rows;
  std::vector<double> weights;
  Scheme scheme = Scheme::binary;

  std::size_t size() const { return rows.size(); }
  DenseMatrix dense() const;
  bool operator==(const SessionMatrix&) const = default;
};

// Columns are the retained URLs in ascending id order; rows follow session
// order. Weights are initialised from each session's `weight`.
SessionMatrix vectorize(std::span<const Session> sessions, const std::set<UrlId>& retained,
                        Scheme scheme);

struct WeightConfig {
  std::size_t lower = 1;
  std::size_t upper = 6;

  void validate() const;
};

// Linear fuzzy membership of a session in the set of significant sessions,
// keyed by its unique URL count: 0 at or below `lower`, 1 at or above `upper`.
double assign_session_weight(std::size_t unique_count, const WeightConfig& cfg);
double assign_session_weight(const Session& session, const WeightConfig& cfg);

void assign_weights(std::span<Session> sessions, const WeightConfig& cfg);

struct FeatureConfig {
  std::size_t min_access = 2;
  std::size_t min_session_support = 2;
  Scheme scheme = Scheme::binary;
  WeightConfig weights;

  void validate() const;
};

struct FeatureResult {
  // Sessions after both support filters, weights assigned.
  std::vector<Session> sessions;
  // Sessions after the access filter only.
  std::vector<Session> access_filtered;
  SessionMatrix matrix;
};

// access filter -> session-support filter -> weights -> vectorize.
FeatureResult build_features(std::span<const Session> sessions, const FeatureConfig& cfg);

}  // namespace wum
