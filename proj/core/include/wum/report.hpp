#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wum/fcm.hpp"
#include "wum/log_ingest.hpp"
#include "wum/sessionizer.hpp"

namespace wum {

using Histogram = std::map<std::size_t, std::size_t>;

struct SweepSeries {
  std::vector<ValidityEntry> entries;
  std::size_t chosen_c = 0;
};

struct ModelSummary {
  std::size_t clusters = 0;
  std::size_t iterations = 0;
  bool converged = false;
  double objective = 0.0;
  std::size_t center_resets = 0;
  std::size_t excluded_rows = 0;
  // Per cluster: top url ids and member count.
  std::vector<std::vector<UrlId>> top_urls;
  std::vector<std::size_t> member_counts;
};

struct RunReport {
  CleanStats clean;
  std::size_t user_count = 0;
  std::size_t url_count = 0;
  std::string heuristic;
  std::int64_t beta_seconds = 0;
  std::map<std::string, SessionStats> session_stats;
  // access count -> number of URLs (every URL in the cleaned log).
  Histogram url_access;
  // session support -> number of URLs (after the access-count filter).
  Histogram url_session_support;
  // unique URLs per session -> number of sessions (matrix rows).
  Histogram session_size;
  // session weight -> number of sessions.
  std::map<double, std::size_t> weights;
  std::size_t matrix_rows = 0;
  std::size_t matrix_columns = 0;
  SweepSeries weighted;
  SweepSeries unweighted;
  ModelSummary model;
};

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

// url_access_hist.csv, url_session_support.csv, session_size_hist.csv,
// perf_index_vs_c.csv, validity_vs_c.csv and summary.txt.
void emit_report(const RunReport& report, const std::filesystem::path& out_dir);

std::string summary_text(const RunReport& report);

// "c,J_weighted,J_unweighted" (objective) or "c,S_weighted,S_unweighted" over
// the union of both c grids; failed entries are left empty.
std::string validity_series_csv(const SweepSeries& weighted, const SweepSeries& unweighted,
                                bool objective);

inline const std::vector<std::string>& report_files() {
  static const std::vector<std::string> files = {
      "url_access_hist.csv", "url_session_support.csv", "session_size_hist.csv",
      "perf_index_vs_c.csv", "validity_vs_c.csv",       "summary.txt"};
  return files;
}

}  // namespace wum
