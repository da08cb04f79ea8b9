#include "wum/features.hpp"

#include <algorithm>

namespace wum {

std::size_t UrlSupport::access(UrlId id) const {
  auto it = access_count.find(id);
  return it == access_count.end() ? 0 : it->second;
}

std::size_t UrlSupport::support(UrlId id) const {
  auto it = session_support.find(id);
  return it == session_support.end() ? 0 : it->second;
}

UrlSupport compute_support(std::span<const Session> sessions) {
  UrlSupport support;
  for (const auto& s : sessions) {
    for (const auto& [url, count] : s.url_freqs) {
      if (count == 0) continue;
      support.access_count[url] += count;
      support.session_support[url] += 1;
    }
  }
  return support;
}

namespace {

FilterResult keep_only(std::span<const Session> sessions, const std::set<UrlId>& retained) {
  FilterResult result;
  result.retained = retained;
  result.sessions.reserve(sessions.size());
  for (const auto& s : sessions) {
    Session copy = s;
    std::erase_if(copy.url_freqs, [&](const auto& kv) { return !retained.contains(kv.first); });
    std::erase_if(copy.raw_requests, [&](UrlId id) { return !retained.contains(id); });
    std::erase_if(copy.requests,
                  [&](const CleanedRecord& r) { return !retained.contains(r.url_id); });
    copy.unique_count = copy.url_freqs.size();
    result.sessions.push_back(std::move(copy));
  }
  return result;
}

}  // namespace

FilterResult filter_low_access(std::span<const Session> sessions, std::size_t min_access) {
  const UrlSupport support = compute_support(sessions);
  std::set<UrlId> retained;
  for (const auto& [url, count] : support.access_count) {
    if (count >= min_access) retained.insert(url);
  }
  return keep_only(sessions, retained);
}

FilterResult filter_low_support(std::span<const Session> sessions,
                                std::size_t min_session_support) {
  if (min_session_support < 1) {
    throw ValidationError("min_session_support must be >= 1");
  }
  const UrlSupport support = compute_support(sessions);
  std::set<UrlId> retained;
  for (const auto& [url, count] : support.session_support) {
    if (count >= min_session_support) retained.insert(url);
  }
  return keep_only(sessions, retained);
}

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::binary ? "binary" : "frequency";
}

Scheme parse_scheme(std::string_view text) {
  const std::string lowered = to_lower(text);
  if (lowered == "binary") return Scheme::binary;
  if (lowered == "frequency") return Scheme::frequency;
  throw ValidationError("unknown scheme '" + std::string(text) + "' (expected binary|frequency)");
}

DenseMatrix SessionMatrix::dense() const {
  DenseMatrix out(rows.size(), columns);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& entry : rows[i]) out(i, entry.column) = entry.value;
  }
  return out;
}

SessionMatrix vectorize(std::span<const Session> sessions, const std::set<UrlId>& retained,
                        Scheme scheme) {
  if (retained.empty()) {
    throw RuntimeError("empty feature space");
  }
  SessionMatrix matrix;
  matrix.scheme = scheme;
  matrix.catalog.assign(retained.begin(), retained.end());
  matrix.columns = matrix.catalog.size();

  std::map<UrlId, std::uint32_t> column_of;
  for (std::uint32_t c = 0; c < matrix.catalog.size(); ++c) column_of[matrix.catalog[c]] = c;

  matrix.rows.reserve(sessions.size());
  matrix.weights.reserve(sessions.size());
  for (const auto& s : sessions) {
    SparseRow row;
    for (const auto& [url, count] : s.url_freqs) {
      auto it = column_of.find(url);
      if (it == column_of.end() || count == 0) continue;
      row.push_back({it->second,
                     scheme == Scheme::binary ? 1.0 : static_cast<double>(count)});
    }
    // url_freqs is ordered by url id and columns are ascending in url id.
    matrix.rows.push_back(std::move(row));
    matrix.weights.push_back(s.weight);
  }
  return matrix;
}

void WeightConfig::validate() const {
  if (upper <= lower) {
    throw ValidationError("weight bounds require UB > LB (got LB=" + std::to_string(lower) +
                          ", UB=" + std::to_string(upper) + ")");
  }
}

double assign_session_weight(std::size_t unique_count, const WeightConfig& cfg) {
  if (unique_count <= cfg.lower) return 0.0;
  if (unique_count >= cfg.upper) return 1.0;
  return static_cast<double>(unique_count - cfg.lower) /
         static_cast<double>(cfg.upper - cfg.lower);
}

double assign_session_weight(const Session& session, const WeightConfig& cfg) {
  return assign_session_weight(session.unique_count, cfg);
}

void assign_weights(std::span<Session> sessions, const WeightConfig& cfg) {
  for (auto& s : sessions) s.weight = assign_session_weight(s, cfg);
}

void FeatureConfig::validate() const {
  weights.validate();
  if (min_session_support < 1) {
    throw ValidationError("min_session_support must be >= 1");
  }
}

FeatureResult build_features(std::span<const Session> sessions, const FeatureConfig& cfg) {
  cfg.validate();
  FeatureResult result;
  auto by_access = filter_low_access(sessions, cfg.min_access);
  auto by_support = filter_low_support(by_access.sessions, cfg.min_session_support);
  assign_weights(by_support.sessions, cfg.weights);
  result.matrix = vectorize(by_support.sessions, by_support.retained, cfg.scheme);
  result.sessions = std::move(by_support.sessions);
  result.access_filtered = std::move(by_access.sessions);
  return result;
}

}  // namespace wum
