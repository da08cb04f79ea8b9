#include "wum/formats.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace wum::io {

namespace {

std::vector<std::string> lines_of(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void bad_line(std::string_view what, std::size_t line_number,
                           const std::string& detail) {
  throw ValidationError(std::string(what) + " line " + std::to_string(line_number) + ": " +
                        detail);
}

}  // namespace

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  auto lines = lines_of(in);
  if (in.bad()) throw IoError("error reading " + path.string());
  return lines;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("error writing " + path.string());
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create directory " + dir.string());
  }
}

void write_cleaned(std::ostream& out, std::span<const CleanedRecord> records) {
  out << "Time\tIP\tUserAgent\tElapsedTime\tBytes\tURL\n";
  for (const auto& r : records) {
    out << format_epoch_seconds(r.timestamp) << '\t' << ip_label(r.user.ip) << '\t'
        << ua_label(r.user.ua) << '\t' << r.elapsed_ms << '\t' << r.bytes << '\t' << r.url_id
        << '\n';
  }
}

std::vector<CleanedRecord> read_cleaned(std::istream& in) {
  const auto lines = lines_of(in);
  std::vector<CleanedRecord> records;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i == 0 && lines[i].starts_with("Time\t")) continue;
    if (trim(lines[i]).empty()) continue;
    const auto f = split(lines[i], '\t');
    if (f.size() != 6) bad_line("cleaned", i + 1, "expected 6 columns");
    try {
      CleanedRecord r;
      r.timestamp = parse_epoch_seconds(f[0]);
      r.user = parse_user_key(std::string(f[1]) + "|" + std::string(f[2]));
      r.elapsed_ms = parse_int(f[3]);
      r.bytes = parse_int(f[4]);
      r.url_id = static_cast<UrlId>(parse_uint(f[5]));
      records.push_back(r);
    } catch (const ValidationError& e) {
      bad_line("cleaned", i + 1, e.what());
    }
  }
  return records;
}

void write_url_map(std::ostream& out, const UrlMap& map) {
  for (std::size_t k = 0; k < map.size(); ++k) {
    out << (k + 1) << '\t' << map.urls()[k] << '\n';
  }
}

UrlMap read_url_map(std::istream& in) {
  const auto lines = lines_of(in);
  std::vector<std::pair<UrlId, std::string>> entries;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto tab = lines[i].find('\t');
    if (tab == std::string::npos) bad_line("url map", i + 1, "expected url_id<TAB>url");
    entries.emplace_back(static_cast<UrlId>(parse_uint(lines[i].substr(0, tab))),
                         lines[i].substr(tab + 1));
  }
  return UrlMap::from_entries(std::move(entries));
}

void write_clean_stats(std::ostream& out, const CleanStats& s) {
  out << "input_lines\t" << s.input_lines << '\n'
      << "parse_errors\t" << s.parse_errors << '\n'
      << "dropped_suffix\t" << s.dropped_suffix << '\n'
      << "dropped_robot\t" << s.dropped_robot << '\n'
      << "dropped_status\t" << s.dropped_status << '\n'
      << "kept\t" << s.kept << '\n';
}

CleanStats read_clean_stats(std::istream& in) {
  CleanStats s;
  for (const auto& line : lines_of(in)) {
    const auto f = split(line, '\t');
    if (f.size() != 2) continue;
    const auto value = static_cast<std::size_t>(parse_uint(f[1]));
    if (f[0] == "input_lines") s.input_lines = value;
    else if (f[0] == "parse_errors") s.parse_errors = value;
    else if (f[0] == "dropped_suffix") s.dropped_suffix = value;
    else if (f[0] == "dropped_robot") s.dropped_robot = value;
    else if (f[0] == "dropped_status") s.dropped_status = value;
    else if (f[0] == "kept") s.kept = value;
  }
  return s;
}

void write_session_blocks(std::ostream& out, std::span<const Session> sessions) {
  out << "User Session\tTime\tElapsed Time\tBytes\tURL\n";
  std::map<UserKey, std::size_t> user_number;
  for (const auto& s : sessions) {
    auto [it, inserted] = user_number.try_emplace(s.user, user_number.size() + 1);
    const std::string label = "U" + std::to_string(it->second) + "-S" + std::to_string(s.ordinal);
    bool first = true;
    for (const auto& r : s.requests) {
      out << (first ? label : std::string()) << '\t' << format_compact_utc(r.timestamp) << '\t'
          << r.elapsed_ms << '\t' << r.bytes << '\t' << r.url_id << '\n';
      first = false;
    }
    if (first) out << label << "\t\t\t\t\n";
  }
}

void write_sessions_compact(std::ostream& out, std::span<const Session> sessions) {
  for (const auto& s : sessions) {
    out << to_string(s.user) << '\t' << s.ordinal << '\t';
    bool first = true;
    for (const auto& [url, count] : s.url_freqs) {
      if (!first) out << ',';
      out << url << ':' << count;
      first = false;
    }
    out << '\n';
  }
}

std::vector<Session> read_sessions_compact(std::istream& in) {
  const auto lines = lines_of(in);
  std::vector<Session> sessions;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto f = split(lines[i], '\t');
    if (f.size() != 3) bad_line("sessions", i + 1, "expected 3 columns");
    try {
      Session s;
      s.user = parse_user_key(f[0]);
      s.ordinal = static_cast<std::uint32_t>(parse_uint(f[1]));
      if (!f[2].empty()) {
        for (auto item : split(f[2], ',')) {
          const auto colon = item.find(':');
          if (colon == std::string_view::npos) bad_line("sessions", i + 1, "expected url:freq");
          const auto url = static_cast<UrlId>(parse_uint(item.substr(0, colon)));
          const auto freq = static_cast<std::uint32_t>(parse_uint(item.substr(colon + 1)));
          if (!s.url_freqs.emplace(url, freq).second) {
            bad_line("sessions", i + 1, "duplicate url id");
          }
        }
      }
      s.unique_count = s.url_freqs.size();
      sessions.push_back(std::move(s));
    } catch (const ValidationError& e) {
      bad_line("sessions", i + 1, e.what());
    }
  }
  return sessions;
}

void write_session_stats(std::ostream& out, const SessionStats& s) {
  out << "session_count\t" << s.session_count << '\n'
      << "min_raw_urls\t" << s.min_raw << '\n'
      << "max_raw_urls\t" << s.max_raw << '\n'
      << "avg_raw_urls\t" << format_double(s.avg_raw) << '\n'
      << "min_unique_urls\t" << s.min_unique << '\n'
      << "max_unique_urls\t" << s.max_unique << '\n'
      << "avg_unique_urls\t" << format_double(s.avg_unique) << '\n';
}

void write_matrix(std::ostream& out, const SessionMatrix& m) {
  out << m.size() << ' ' << m.columns << ' ' << to_string(m.scheme) << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << format_double(m.weights[i]) << '\t';
    bool first = true;
    for (const auto& e : m.rows[i]) {
      if (!first) out << ',';
      out << (e.column + 1) << ':' << format_double(e.value);
      first = false;
    }
    out << '\n';
  }
}

SessionMatrix read_matrix(std::istream& in) {
  const auto lines = lines_of(in);
  if (lines.empty()) throw ValidationError("matrix: missing header");
  const auto header = split_whitespace(lines[0]);
  if (header.size() != 3) throw ValidationError("matrix: header must be 'm n scheme'");
  SessionMatrix m;
  const auto rows = static_cast<std::size_t>(parse_uint(header[0]));
  m.columns = static_cast<std::size_t>(parse_uint(header[1]));
  m.scheme = parse_scheme(header[2]);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto tab = lines[i].find('\t');
    if (tab == std::string::npos) bad_line("matrix", i + 1, "expected weight<TAB>entries");
    try {
      const double w = parse_double(std::string_view(lines[i]).substr(0, tab));
      if (!(w >= 0.0) || !std::isfinite(w)) bad_line("matrix", i + 1, "bad weight");
      SparseRow row;
      const std::string_view body = std::string_view(lines[i]).substr(tab + 1);
      if (!body.empty()) {
        for (auto item : split(body, ',')) {
          const auto colon = item.find(':');
          if (colon == std::string_view::npos) bad_line("matrix", i + 1, "expected col:val");
          const auto col = parse_uint(item.substr(0, colon));
          if (col == 0 || col > m.columns) bad_line("matrix", i + 1, "column out of range");
          row.push_back({static_cast<std::uint32_t>(col - 1), parse_double(item.substr(colon + 1))});
        }
      }
      m.rows.push_back(std::move(row));
      m.weights.push_back(w);
    } catch (const ValidationError& e) {
      bad_line("matrix", i + 1, e.what());
    }
  }
  if (m.rows.size() != rows) {
    throw ValidationError("matrix: header declares " + std::to_string(rows) + " rows, found " +
                          std::to_string(m.rows.size()));
  }
  return m;
}

void write_catalog(std::ostream& out, const SessionMatrix& matrix, const UrlMap* urls) {
  for (std::size_t c = 0; c < matrix.catalog.size(); ++c) {
    const UrlId id = matrix.catalog[c];
    out << (c + 1) << '\t' << id << '\t'
        << (urls && id >= 1 && id <= urls->size() ? urls->url(id) : std::string("-")) << '\n';
  }
}

std::vector<std::pair<UrlId, std::string>> read_catalog(std::istream& in) {
  std::vector<std::pair<UrlId, std::string>> catalog;
  const auto lines = lines_of(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split(lines[i], '\t');
    if (f.size() != 3) bad_line("catalog", i + 1, "expected 3 columns");
    if (parse_uint(f[0]) != catalog.size() + 1) bad_line("catalog", i + 1, "columns not dense");
    catalog.emplace_back(static_cast<UrlId>(parse_uint(f[1])), std::string(f[2]));
  }
  return catalog;
}

void write_row_index(std::ostream& out, std::span<const Session> sessions) {
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    out << (i + 1) << '\t' << to_string(sessions[i].user) << '\t' << sessions[i].ordinal << '\n';
  }
}

std::vector<std::string> read_row_index(std::istream& in) {
  std::vector<std::string> labels;
  for (const auto& line : lines_of(in)) {
    const auto f = split(line, '\t');
    if (f.size() != 3) continue;
    labels.push_back(std::string(f[1]) + "#" + std::string(f[2]));
  }
  return labels;
}

void write_validity_csv(std::ostream& out, const ValidityReport& report) {
  out << "c,J,S\n";
  for (const auto& e : report.entries) {
    out << e.clusters << ',';
    if (e.ok) out << format_double(e.objective) << ',' << format_double(e.xie_beni);
    else out << ',';
    out << '\n';
  }
}

std::string model_to_json(const FcmModel& model, const FcmConfig& cfg) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["config"] = {{"c", cfg.clusters},
                   {"q", cfg.fuzziness},
                   {"tol", cfg.tolerance},
                   {"max_iter", cfg.max_iterations},
                   {"seed", cfg.seed},
                   {"zero_weight", std::string(to_string(cfg.zero_weight))}};
  doc["iterations"] = model.iterations;
  doc["converged"] = model.converged;
  doc["center_resets"] = model.center_resets;
  doc["objective"] = model.objective();
  doc["objective_trace"] = model.objective_trace;
  doc["excluded_rows"] = model.excluded_rows;

  ordered_json centers = ordered_json::array();
  for (std::size_t j = 0; j < model.centers.rows(); ++j) {
    const auto row = model.centers.row(j);
    centers.push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["centers"] = std::move(centers);

  ordered_json u = ordered_json::array();
  for (std::size_t i = 0; i < model.memberships.rows(); ++i) {
    ordered_json entries = ordered_json::array();
    for (std::size_t j = 0; j < model.memberships.cols(); ++j) {
      const double value = model.memberships(i, j);
      if (value > 1e-4) entries.push_back({j, value});
    }
    u.push_back(std::move(entries));
  }
  doc["memberships"] = {{"rows", model.memberships.rows()},
                        {"cols", model.memberships.cols()},
                        {"threshold", 1e-4},
                        {"entries", std::move(u)}};
  return doc.dump(1) + "\n";
}

void write_profiles(std::ostream& out, std::span<const Profile> profiles,
                    const ProfileLabels& labels) {
  for (const auto& p : profiles) {
    out << "Cluster " << (p.cluster + 1) << " (" << p.members.size() << " sessions)\n";
    out << "  top URLs:\n";
    for (std::size_t k = 0; k < p.top_columns.size(); ++k) {
      const std::size_t col = p.top_columns[k];
      out << "    " << std::setw(3) << (k + 1) << ". [" << format_double(p.center[col]) << "] "
          << "url " << p.top_urls[k];
      if (labels.catalog && col < labels.catalog->size()) {
        out << ' ' << (*labels.catalog)[col].second;
      }
      out << '\n';
    }
    out << "  members:";
    if (p.members.empty()) out << " none";
    out << '\n';
    for (const auto& m : p.members) {
      out << "    row " << (m.row + 1);
      if (labels.row_labels && m.row < labels.row_labels->size()) {
        out << ' ' << (*labels.row_labels)[m.row];
      }
      out << " u=" << format_double(m.membership) << '\n';
    }
  }
}

}  // namespace wum::io
