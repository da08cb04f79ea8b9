#include "wum/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#include "wum/formats.hpp"

namespace wum {

namespace {

bool parse_bool(std::string_view text) {
  const std::string v = to_lower(trim(text));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("not a boolean: '" + std::string(text) + "'");
}

std::size_t parse_size(std::string_view text) {
  return static_cast<std::size_t>(parse_uint(text));
}

}  // namespace

std::set<int> parse_status_list(std::string_view text) {
  std::set<int> codes;
  for (auto item : split(text, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto code = parse_int(item);
    if (code < 100 || code > 599) {
      throw ValidationError("invalid HTTP status '" + std::string(item) + "'");
    }
    codes.insert(static_cast<int>(code));
  }
  if (codes.empty()) throw ValidationError("empty status list");
  return codes;
}

const std::vector<std::string>& PipelineConfig::keys() {
  static const std::vector<std::string> names = {
      "input",          "output",           "suffixes_file", "robots_file",
      "strip_query",    "keep_status",      "heuristic",     "beta_seconds",
      "min_access",     "min_session_support", "scheme",     "lb",
      "ub",             "q",                "tol",           "max_iter",
      "zero_weight",    "c_min",            "c_max",         "restarts",
      "validity_weighted", "seed",          "threads",       "top_k",
      "member_threshold"};
  return names;
}

void PipelineConfig::set(std::string_view key, std::string_view raw) {
  const std::string k(trim(key));
  const std::string_view value = trim(raw);
  if (std::find(keys().begin(), keys().end(), k) == keys().end()) {
    throw ValidationError("unknown configuration key '" + k + "'");
  }
  try {
    if (k == "input") input = std::string(value);
    else if (k == "output") output = std::string(value);
    else if (k == "suffixes_file") suffixes_file = std::string(value);
    else if (k == "robots_file") robots_file = std::string(value);
    else if (k == "strip_query") strip_query = parse_bool(value);
    else if (k == "keep_status") {
      if (value.empty() || to_lower(value) == "all") keep_status.reset();
      else keep_status = parse_status_list(value);
    }
    else if (k == "heuristic") heuristic = parse_heuristic(value);
    else if (k == "beta_seconds") beta_seconds = parse_int(value);
    else if (k == "min_access") features.min_access = parse_size(value);
    else if (k == "min_session_support") features.min_session_support = parse_size(value);
    else if (k == "scheme") features.scheme = parse_scheme(value);
    else if (k == "lb") features.weights.lower = parse_size(value);
    else if (k == "ub") features.weights.upper = parse_size(value);
    else if (k == "q") fuzziness = parse_double(value);
    else if (k == "tol") tolerance = parse_double(value);
    else if (k == "max_iter") max_iterations = parse_size(value);
    else if (k == "zero_weight") zero_weight = parse_zero_weight_policy(value);
    else if (k == "c_min") c_min = parse_size(value);
    else if (k == "c_max") c_max = parse_size(value);
    else if (k == "restarts") restarts = parse_size(value);
    else if (k == "validity_weighted") validity_weighted = parse_bool(value);
    else if (k == "seed") seed = parse_uint(value);
    else if (k == "threads") threads = parse_size(value);
    else if (k == "top_k") top_k = parse_size(value);
    else if (k == "member_threshold") member_threshold = parse_double(value);
  } catch (const ValidationError& e) {
    throw ValidationError("config key '" + k + "': " + e.what());
  }
}

void PipelineConfig::validate() const {
  if (beta_seconds <= 0) throw ValidationError("beta_seconds must be > 0");
  features.validate();
  if (top_k == 0) throw ValidationError("top_k must be >= 1");
  sweep_config().validate();
}

PipelineConfig PipelineConfig::from_text(std::string_view text) {
  PipelineConfig cfg;
  std::size_t line_number = 0;
  for (auto line : split(text, '\n')) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_number) +
                            ": expected key = value");
    }
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
  return from_text(io::read_file(path));
}

std::string PipelineConfig::to_text() const {
  std::ostringstream out;
  auto status = [&] {
    if (!keep_status) return std::string("all");
    std::string s;
    for (int code : *keep_status) s += (s.empty() ? "" : ",") + std::to_string(code);
    return s;
  };
  out << "suffixes_file = " << suffixes_file << '\n'
      << "robots_file = " << robots_file << '\n'
      << "strip_query = " << (strip_query ? "true" : "false") << '\n'
      << "keep_status = " << status() << '\n'
      << "heuristic = " << to_string(heuristic) << '\n'
      << "beta_seconds = " << beta_seconds << '\n'
      << "min_access = " << features.min_access << '\n'
      << "min_session_support = " << features.min_session_support << '\n'
      << "scheme = " << to_string(features.scheme) << '\n'
      << "lb = " << features.weights.lower << '\n'
      << "ub = " << features.weights.upper << '\n'
      << "q = " << format_double(fuzziness) << '\n'
      << "tol = " << format_double(tolerance) << '\n'
      << "max_iter = " << max_iterations << '\n'
      << "zero_weight = " << to_string(zero_weight) << '\n'
      << "c_min = " << c_min << '\n'
      << "c_max = " << c_max << '\n'
      << "restarts = " << restarts << '\n'
      << "validity_weighted = " << (validity_weighted ? "true" : "false") << '\n'
      << "seed = " << seed << '\n'
      << "top_k = " << top_k << '\n'
      << "member_threshold = " << format_double(member_threshold) << '\n';
  return out.str();
}

CleanPolicy PipelineConfig::clean_policy() const {
  CleanPolicy policy = CleanPolicy::defaults();
  if (!suffixes_file.empty()) {
    const auto words = read_word_list_file(suffixes_file);
    policy.irrelevant_suffixes = std::set<std::string>(words.begin(), words.end());
  }
  if (!robots_file.empty()) policy.robot_agents = read_word_list_file(robots_file);
  policy.strip_query = strip_query;
  policy.status_filter = keep_status;
  return policy;
}

SweepConfig PipelineConfig::sweep_config() const {
  SweepConfig s;
  s.c_min = c_min;
  s.c_max = c_max;
  s.restarts = restarts;
  // Stage seed derived from the root seed.
  s.seed = derive_seed(seed, 0x5357454550ULL);
  s.fcm.fuzziness = fuzziness;
  s.fcm.tolerance = tolerance;
  s.fcm.max_iterations = max_iterations;
  s.fcm.zero_weight = zero_weight;
  s.validity_weighted = validity_weighted;
  s.threads = threads;
  return s;
}

WeightingComparison compare_weighting(const SessionMatrix& matrix, const SweepConfig& cfg) {
  const DenseMatrix data = matrix.dense();
  WeightingComparison result;
  result.weighted = sweep_clusters(data, matrix.weights, cfg);
  const std::vector<double> ones(matrix.size(), 1.0);
  result.unweighted = sweep_clusters(data, ones, cfg);
  return result;
}

std::string compare_heuristics_csv(std::span<const UserActivity> users,
                                   std::span<const std::int64_t> betas) {
  std::ostringstream out;
  out << "beta_seconds,toh1_sessions,toh2_sessions\n";
  for (std::int64_t beta : betas) {
    const Milliseconds b(beta * 1000);
    out << beta << ',' << sessionize_all(users, Heuristic::toh1, b).size() << ','
        << sessionize_all(users, Heuristic::toh2, b).size() << '\n';
  }
  return out.str();
}

namespace {

template <typename Fn>
auto run_stage(const std::string& name, const std::filesystem::path& out_dir,
               std::vector<std::pair<std::string, double>>& timings, Fn&& fn) {
  const auto started = std::chrono::steady_clock::now();
  auto record_failure = [&](StageError::Kind kind, const char* cause) {
    try {
      io::write_file(out_dir / kFailureMarker,
                     "stage: " + name + "\ncause: " + std::string(cause) + "\n");
    } catch (const Error&) {
    }
    throw StageError(name, kind, cause);
  };
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      timings.emplace_back(name, std::chrono::duration<double>(
                                     std::chrono::steady_clock::now() - started)
                                     .count());
      return;
    } else {
      auto result = fn();
      timings.emplace_back(name, std::chrono::duration<double>(
                                     std::chrono::steady_clock::now() - started)
                                     .count());
      return result;
    }
  } catch (const ValidationError& e) {
    record_failure(StageError::Kind::validation, e.what());
  } catch (const IoError& e) {
    record_failure(StageError::Kind::io, e.what());
  } catch (const Error& e) {
    record_failure(StageError::Kind::runtime, e.what());
  } catch (const std::exception& e) {
    record_failure(StageError::Kind::runtime, e.what());
  }
  throw StageError(name, StageError::Kind::runtime, "unreachable");
}

template <typename Writer>
void write_with(const std::filesystem::path& path, Writer&& writer) {
  std::ostringstream out;
  writer(out);
  io::write_file(path, out.str());
}

SweepSeries to_series(const ValidityReport& report) {
  return SweepSeries{report.entries, report.chosen_c};
}

}  // namespace

RunReport run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.input.empty()) throw ValidationError("pipeline: input path is required");
  if (cfg.output.empty()) throw ValidationError("pipeline: output directory is required");
  const CleanPolicy policy = cfg.clean_policy();

  const auto& out = cfg.output;
  io::ensure_directory(out);
  std::filesystem::remove(out / kFailureMarker);
  io::write_file(out / "config.txt", cfg.to_text());

  std::vector<std::pair<std::string, double>> timings;
  RunReport report;
  report.heuristic = std::string(to_string(cfg.heuristic));
  report.beta_seconds = cfg.beta_seconds;

  const CleanResult cleaned = run_stage("clean", out, timings, [&] {
    const auto lines = io::read_lines(cfg.input);
    CleanResult result = clean_log(lines, policy);
    write_with(out / "cleaned.tsv", [&](auto& s) { io::write_cleaned(s, result.records); });
    write_with(out / "url_map.tsv", [&](auto& s) { io::write_url_map(s, result.url_map); });
    write_with(out / "clean_stats.tsv", [&](auto& s) { io::write_clean_stats(s, result.stats); });
    return result;
  });
  report.clean = cleaned.stats;
  report.url_count = cleaned.url_map.size();

  const std::vector<Session> sessions = run_stage("sessionize", out, timings, [&] {
    const auto users = identify_users(cleaned.records);
    report.user_count = users.size();
    const Milliseconds beta(cfg.beta_seconds * 1000);
    std::vector<Session> chosen;
    for (Heuristic h : {Heuristic::toh1, Heuristic::toh2}) {
      auto result = sessionize_all(users, h, beta);
      if (result.empty()) throw RuntimeError("no sessions (every record was dropped)");
      report.session_stats[std::string(to_string(h))] = session_stats(result);
      if (h == cfg.heuristic) chosen = std::move(result);
    }
    write_with(out / "sessions.tsv", [&](auto& s) { io::write_session_blocks(s, chosen); });
    write_with(out / "sessions.txt", [&](auto& s) { io::write_sessions_compact(s, chosen); });
    write_with(out / "session_stats.tsv", [&](auto& s) {
      io::write_session_stats(s, report.session_stats.at(report.heuristic));
    });
    return chosen;
  });

  {
    const UrlSupport access = compute_support(sessions);
    for (const auto& [url, count] : access.access_count) ++report.url_access[count];
  }

  const FeatureResult features = run_stage("features", out, timings, [&] {
    FeatureResult result = build_features(sessions, cfg.features);
    write_with(out / "matrix.txt", [&](auto& s) { io::write_matrix(s, result.matrix); });
    write_with(out / "catalog.tsv",
               [&](auto& s) { io::write_catalog(s, result.matrix, &cleaned.url_map); });
    write_with(out / "rows.tsv", [&](auto& s) { io::write_row_index(s, result.sessions); });
    return result;
  });
  {
    const UrlSupport support = compute_support(features.access_filtered);
    for (const auto& [url, count] : support.session_support) ++report.url_session_support[count];
    for (const auto& s : features.sessions) ++report.session_size[s.unique_count];
    for (double w : features.matrix.weights) ++report.weights[w];
    report.matrix_rows = features.matrix.size();
    report.matrix_columns = features.matrix.columns;
  }

  const WeightingComparison sweeps = run_stage("cluster", out, timings, [&] {
    const SweepConfig sweep = cfg.sweep_config();
    WeightingComparison result = compare_weighting(features.matrix, sweep);
    write_with(out / "validity.csv", [&](auto& s) { io::write_validity_csv(s, result.weighted); });
    write_with(out / "validity_unweighted.csv",
               [&](auto& s) { io::write_validity_csv(s, result.unweighted); });

    const FcmModel& model = *result.weighted.chosen_model;
    FcmConfig model_cfg = sweep.fcm;
    model_cfg.clusters = result.weighted.chosen_c;
    const auto* entry = result.weighted.find(result.weighted.chosen_c);
    model_cfg.seed = sweep_run_seed(sweep.seed, model_cfg.clusters, entry->best_restart);
    io::write_file(out / "model.json", io::model_to_json(model, model_cfg));

    const auto profiles = extract_profiles(model, features.matrix, cfg.top_k, cfg.member_threshold);
    std::vector<std::pair<UrlId, std::string>> catalog;
    for (UrlId id : features.matrix.catalog) catalog.emplace_back(id, cleaned.url_map.url(id));
    std::vector<std::string> rows;
    for (const auto& s : features.sessions) {
      rows.push_back(to_string(s.user) + "#" + std::to_string(s.ordinal));
    }
    write_with(out / "profiles.txt", [&](auto& s) {
      io::write_profiles(s, profiles, io::ProfileLabels{&catalog, &rows});
    });

    report.model.clusters = model.centers.rows();
    report.model.iterations = model.iterations;
    report.model.converged = model.converged;
    report.model.objective = model.objective();
    report.model.center_resets = model.center_resets;
    report.model.excluded_rows = model.excluded_rows.size();
    for (const auto& p : profiles) {
      report.model.top_urls.push_back(p.top_urls);
      report.model.member_counts.push_back(p.members.size());
    }
    return result;
  });
  report.weighted = to_series(sweeps.weighted);
  report.unweighted = to_series(sweeps.unweighted);

  run_stage("report", out, timings, [&] {
    io::write_file(out / "run_report.json", report_to_json(report));
    emit_report(report, out);
  });

  std::ostringstream timing_text;
  for (const auto& [stage, seconds] : timings) {
    timing_text << stage << '\t' << format_double(seconds) << '\n';
  }
  io::write_file(out / "timings.txt", timing_text.str());
  return report;
}

}  // namespace wum
