#include "wum/report.hpp"

#include <set>
#include <sstream>

#include "json.hpp"
#include "wum/formats.hpp"

namespace wum {

using nlohmann::ordered_json;

namespace {

ordered_json histogram_json(const Histogram& h) {
  ordered_json out = ordered_json::array();
  for (const auto& [key, count] : h) out.push_back({key, count});
  return out;
}

Histogram histogram_from(const ordered_json& j) {
  Histogram h;
  for (const auto& item : j) h[item.at(0).get<std::size_t>()] = item.at(1).get<std::size_t>();
  return h;
}

ordered_json stats_json(const SessionStats& s) {
  return {{"session_count", s.session_count}, {"min_raw", s.min_raw},
          {"max_raw", s.max_raw},             {"avg_raw", s.avg_raw},
          {"min_unique", s.min_unique},       {"max_unique", s.max_unique},
          {"avg_unique", s.avg_unique}};
}

SessionStats stats_from(const ordered_json& j) {
  SessionStats s;
  s.session_count = j.at("session_count");
  s.min_raw = j.at("min_raw");
  s.max_raw = j.at("max_raw");
  s.avg_raw = j.at("avg_raw");
  s.min_unique = j.at("min_unique");
  s.max_unique = j.at("max_unique");
  s.avg_unique = j.at("avg_unique");
  return s;
}

ordered_json series_json(const SweepSeries& s) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : s.entries) {
    entries.push_back({{"c", e.clusters},
                       {"ok", e.ok},
                       {"J", e.objective},
                       {"S", e.xie_beni},
                       {"best_restart", e.best_restart},
                       {"error", e.error}});
  }
  return {{"chosen_c", s.chosen_c}, {"entries", std::move(entries)}};
}

SweepSeries series_from(const ordered_json& j) {
  SweepSeries s;
  s.chosen_c = j.at("chosen_c");
  for (const auto& e : j.at("entries")) {
    ValidityEntry v;
    v.clusters = e.at("c");
    v.ok = e.at("ok");
    v.objective = e.at("J");
    v.xie_beni = e.at("S");
    v.best_restart = e.at("best_restart");
    v.error = e.at("error");
    s.entries.push_back(std::move(v));
  }
  return s;
}

std::string cell(const ValidityEntry* e, bool objective) {
  if (e == nullptr || !e->ok) return {};
  return format_double(objective ? e->objective : e->xie_beni);
}

const ValidityEntry* find_entry(const SweepSeries& s, std::size_t c) {
  for (const auto& e : s.entries) {
    if (e.clusters == c) return &e;
  }
  return nullptr;
}

std::string percent(std::size_t part, std::size_t whole) {
  if (whole == 0) return "0";
  return format_double(100.0 * static_cast<double>(part) / static_cast<double>(whole));
}

}  // namespace

std::string validity_series_csv(const SweepSeries& weighted, const SweepSeries& unweighted,
                                bool objective) {
  std::set<std::size_t> grid;
  for (const auto& e : weighted.entries) grid.insert(e.clusters);
  for (const auto& e : unweighted.entries) grid.insert(e.clusters);
  std::ostringstream out;
  out << (objective ? "c,J_weighted,J_unweighted\n" : "c,S_weighted,S_unweighted\n");
  for (std::size_t c : grid) {
    out << c << ',' << cell(find_entry(weighted, c), objective) << ','
        << cell(find_entry(unweighted, c), objective) << '\n';
  }
  return out.str();
}

std::string report_to_json(const RunReport& r) {
  ordered_json doc;
  doc["clean"] = {{"input_lines", r.clean.input_lines},
                  {"parse_errors", r.clean.parse_errors},
                  {"dropped_suffix", r.clean.dropped_suffix},
                  {"dropped_robot", r.clean.dropped_robot},
                  {"dropped_status", r.clean.dropped_status},
                  {"kept", r.clean.kept}};
  doc["user_count"] = r.user_count;
  doc["url_count"] = r.url_count;
  doc["heuristic"] = r.heuristic;
  doc["beta_seconds"] = r.beta_seconds;
  ordered_json stats = ordered_json::object();
  for (const auto& [name, s] : r.session_stats) stats[name] = stats_json(s);
  doc["session_stats"] = std::move(stats);
  doc["url_access"] = histogram_json(r.url_access);
  doc["url_session_support"] = histogram_json(r.url_session_support);
  doc["session_size"] = histogram_json(r.session_size);
  ordered_json weights = ordered_json::array();
  for (const auto& [w, count] : r.weights) weights.push_back({w, count});
  doc["weights"] = std::move(weights);
  doc["matrix"] = {{"rows", r.matrix_rows}, {"columns", r.matrix_columns}};
  doc["weighted"] = series_json(r.weighted);
  doc["unweighted"] = series_json(r.unweighted);
  doc["model"] = {{"clusters", r.model.clusters},
                  {"iterations", r.model.iterations},
                  {"converged", r.model.converged},
                  {"objective", r.model.objective},
                  {"center_resets", r.model.center_resets},
                  {"excluded_rows", r.model.excluded_rows},
                  {"top_urls", r.model.top_urls},
                  {"member_counts", r.model.member_counts}};
  return doc.dump(1) + "\n";
}

RunReport report_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("run report: ") + e.what());
  }
  RunReport r;
  try {
    const auto& c = doc.at("clean");
    r.clean.input_lines = c.at("input_lines");
    r.clean.parse_errors = c.at("parse_errors");
    r.clean.dropped_suffix = c.at("dropped_suffix");
    r.clean.dropped_robot = c.at("dropped_robot");
    r.clean.dropped_status = c.at("dropped_status");
    r.clean.kept = c.at("kept");
    r.user_count = doc.at("user_count");
    r.url_count = doc.at("url_count");
    r.heuristic = doc.at("heuristic");
    r.beta_seconds = doc.at("beta_seconds");
    for (const auto& [name, s] : doc.at("session_stats").items()) {
      r.session_stats[name] = stats_from(s);
    }
    r.url_access = histogram_from(doc.at("url_access"));
    r.url_session_support = histogram_from(doc.at("url_session_support"));
    r.session_size = histogram_from(doc.at("session_size"));
    for (const auto& item : doc.at("weights")) {
      r.weights[item.at(0).get<double>()] = item.at(1).get<std::size_t>();
    }
    r.matrix_rows = doc.at("matrix").at("rows");
    r.matrix_columns = doc.at("matrix").at("columns");
    r.weighted = series_from(doc.at("weighted"));
    r.unweighted = series_from(doc.at("unweighted"));
    const auto& m = doc.at("model");
    r.model.clusters = m.at("clusters");
    r.model.iterations = m.at("iterations");
    r.model.converged = m.at("converged");
    r.model.objective = m.at("objective");
    r.model.center_resets = m.at("center_resets");
    r.model.excluded_rows = m.at("excluded_rows");
    r.model.top_urls = m.at("top_urls").get<std::vector<std::vector<UrlId>>>();
    r.model.member_counts = m.at("member_counts").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("run report: ") + e.what());
  }
  return r;
}

std::string summary_text(const RunReport& r) {
  std::ostringstream out;
  out << "== Cleaning ==\n"
      << "input lines        " << r.clean.input_lines << '\n'
      << "parse errors       " << r.clean.parse_errors << '\n'
      << "dropped (suffix)   " << r.clean.dropped_suffix << '\n'
      << "dropped (robot)    " << r.clean.dropped_robot << '\n'
      << "dropped (status)   " << r.clean.dropped_status << '\n'
      << "kept               " << r.clean.kept << '\n'
      << "distinct URLs      " << r.url_count << '\n'
      << "users (IP+agent)   " << r.user_count << "\n\n";

  out << "== Sessions (beta " << r.beta_seconds << " s, pipeline uses " << r.heuristic
      << ") ==\n";
  for (const auto& [name, s] : r.session_stats) {
    out << name << ": sessions " << s.session_count << "; raw URLs min/avg/max " << s.min_raw
        << '/' << format_double(s.avg_raw) << '/' << s.max_raw << "; unique URLs min/avg/max "
        << s.min_unique << '/' << format_double(s.avg_unique) << '/' << s.max_unique << '\n';
  }

  std::size_t urls = 0;
  std::size_t once = 0;
  for (const auto& [count, n] : r.url_access) {
    urls += n;
    if (count == 1) once += n;
  }
  out << "\n== URL support ==\n"
      << "URLs accessed once " << once << " of " << urls << " (" << percent(once, urls)
      << "%)\n";
  std::size_t support_one = 0;
  if (auto it = r.url_session_support.find(1); it != r.url_session_support.end()) {
    support_one = it->second;
  }
  out << "URLs with session support 1 (after access filter) " << support_one << '\n'
      << "feature matrix     " << r.matrix_rows << " sessions x " << r.matrix_columns
      << " URLs\n";

  out << "\n== Session weights ==\n";
  for (const auto& [w, n] : r.weights) out << "w=" << format_double(w) << "  " << n << '\n';

  out << "\n== Cluster validity ==\n"
      << "chosen c (weighted)   " << r.weighted.chosen_c << '\n'
      << "chosen c (unweighted) " << r.unweighted.chosen_c << '\n';

  out << "\n== Chosen model ==\n"
      << "clusters " << r.model.clusters << ", iterations " << r.model.iterations
      << (r.model.converged ? " (converged)" : " (not converged)") << ", J "
      << format_double(r.model.objective) << ", excluded zero-weight sessions "
      << r.model.excluded_rows << ", center re-seeds " << r.model.center_resets << '\n';
  for (std::size_t j = 0; j < r.model.top_urls.size(); ++j) {
    out << "cluster " << (j + 1) << ": members "
        << (j < r.model.member_counts.size() ? r.model.member_counts[j] : 0) << ", top urls";
    for (UrlId id : r.model.top_urls[j]) out << ' ' << id;
    out << '\n';
  }
  return out.str();
}

void emit_report(const RunReport& r, const std::filesystem::path& out_dir) {
  io::ensure_directory(out_dir);

  std::size_t urls = 0;
  for (const auto& [count, n] : r.url_access) urls += n;
  std::ostringstream access;
  access << "access_count,url_count,percent_of_urls\n";
  for (const auto& [count, n] : r.url_access) {
    access << count << ',' << n << ',' << percent(n, urls) << '\n';
  }
  io::write_file(out_dir / "url_access_hist.csv", access.str());

  std::ostringstream support;
  support << "session_support,url_count\n";
  for (const auto& [s, n] : r.url_session_support) support << s << ',' << n << '\n';
  io::write_file(out_dir / "url_session_support.csv", support.str());

  std::ostringstream sizes;
  sizes << "unique_urls,session_count\n";
  for (const auto& [s, n] : r.session_size) sizes << s << ',' << n << '\n';
  io::write_file(out_dir / "session_size_hist.csv", sizes.str());

  io::write_file(out_dir / "perf_index_vs_c.csv", validity_series_csv(r.weighted, r.unweighted, true));
  io::write_file(out_dir / "validity_vs_c.csv", validity_series_csv(r.weighted, r.unweighted, false));
  io::write_file(out_dir / "summary.txt", summary_text(r));
}

}  // namespace wum
