#include "wum/log_ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>

namespace wum {

namespace {

constexpr std::size_t kFixedFields = 9;

ParseError fail(std::size_t line_number, std::string reason) {
  return ParseError{line_number, std::move(reason)};
}

bool contains(std::string_view haystack, std::string_view needle) {
  return !needle.empty() && haystack.find(needle) != std::string_view::npos;
}

}  // namespace

ParseResult parse_log_line(std::string_view line, std::size_t line_number) {
  const auto fields = split_whitespace(line);
  if (fields.empty()) {
    return fail(line_number, "empty");
  }
  if (fields.size() < kFixedFields + 1) {
    return fail(line_number, "field count");
  }

  LogRecord rec;
  try {
    rec.timestamp = parse_epoch_seconds(fields[0]);
  } catch (const Error&) {
    return fail(line_number, "timestamp");
  }
  if (rec.timestamp.time_since_epoch().count() <= 0) {
    return fail(line_number, "timestamp");
  }

  try {
    rec.elapsed_ms = parse_int(fields[1]);
    rec.bytes = parse_int(fields[4]);
  } catch (const Error&) {
    return fail(line_number, "numeric field");
  }
  if (rec.elapsed_ms < 0 || rec.bytes < 0) {
    return fail(line_number, "negative numeric field");
  }

  rec.client_ip = std::string(fields[2]);

  const std::string_view tag_status = fields[3];
  const auto slash = tag_status.rfind('/');
  if (slash == std::string_view::npos) {
    return fail(line_number, "status field");
  }
  rec.result_tag = std::string(tag_status.substr(0, slash));
  try {
    rec.status_code = static_cast<int>(parse_int(tag_status.substr(slash + 1)));
  } catch (const Error&) {
    return fail(line_number, "status field");
  }

  rec.method = std::string(fields[5]);
  rec.url = std::string(fields[6]);
  if (rec.url.empty() || rec.url == "-") {
    return fail(line_number, "url");
  }
  rec.ident = std::string(fields[7]);
  rec.hierarchy = std::string(fields[8]);

  // User agents may contain spaces; everything after the hierarchy field is
  // the agent, rejoined with single spaces.
  std::string agent;
  for (std::size_t k = kFixedFields; k < fields.size(); ++k) {
    if (!agent.empty()) agent += ' ';
    agent += fields[k];
  }
  if (agent.size() >= 2 && agent.front() == '"' && agent.back() == '"') {
    agent = agent.substr(1, agent.size() - 2);
  }
  rec.user_agent = std::move(agent);
  return rec;
}

std::string format_log_line(const LogRecord& r) {
  std::string line = format_epoch_seconds(r.timestamp);
  line += ' ' + std::to_string(r.elapsed_ms);
  line += ' ' + r.client_ip;
  line += ' ' + r.result_tag + '/' + std::to_string(r.status_code);
  line += ' ' + std::to_string(r.bytes);
  line += ' ' + r.method;
  line += ' ' + r.url;
  line += ' ' + r.ident;
  line += ' ' + r.hierarchy;
  line += ' ' + (r.user_agent.empty() ? std::string("-") : r.user_agent);
  return line;
}

std::set<std::string> CleanPolicy::default_suffixes() {
  return {"gif", "jpeg", "GIF", "JPEG", "jpg", "JPG", "map", "css", "js", "png", "ico"};
}

std::vector<std::string> CleanPolicy::default_robot_agents() {
  return {"bot",        "crawler",    "spider",     "slurp",      "googlebot",
          "bingbot",    "msnbot",     "yandex",     "baiduspider", "duckduckbot",
          "teoma",      "ia_archiver", "archive.org", "facebookexternalhit",
          "ahrefs",     "semrush",    "mj12bot",    "wget",       "curl",
          "libwww-perl", "python-requests", "scrapy"};
}

CleanPolicy CleanPolicy::defaults() {
  CleanPolicy policy;
  policy.irrelevant_suffixes = default_suffixes();
  policy.robot_agents = default_robot_agents();
  policy.robot_url_markers = {"robots.txt"};
  return policy;
}

std::vector<std::string> read_word_list(std::istream& in) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (!view.empty()) words.emplace_back(view);
  }
  return words;
}

std::vector<std::string> read_word_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read list file: " + path);
  }
  return read_word_list(in);
}

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::suffix: return "suffix";
    case DropReason::robot: return "robot";
    case DropReason::status: return "status";
  }
  return "unknown";
}

std::string_view strip_query_string(std::string_view url) {
  const auto pos = url.find_first_of("?#");
  return pos == std::string_view::npos ? url : url.substr(0, pos);
}

std::string_view url_suffix(std::string_view url) {
  std::string_view path = strip_query_string(url);
  // Skip the scheme+authority so "http://host.com" has no suffix.
  if (const auto scheme = path.find("://"); scheme != std::string_view::npos) {
    const auto slash = path.find('/', scheme + 3);
    path = slash == std::string_view::npos ? std::string_view{} : path.substr(slash);
  }
  const auto last_slash = path.rfind('/');
  const std::string_view segment =
      last_slash == std::string_view::npos ? path : path.substr(last_slash + 1);
  const auto dot = segment.rfind('.');
  if (dot == std::string_view::npos) return {};
  return segment.substr(dot + 1);
}

CleanDecision clean_record(LogRecord record, const CleanPolicy& policy) {
  if (policy.strip_query) {
    record.url = std::string(strip_query_string(record.url));
  }

  const std::string_view suffix = url_suffix(record.url);
  if (!suffix.empty() && policy.irrelevant_suffixes.contains(std::string(suffix))) {
    return DropReason::suffix;
  }

  const std::string agent = to_lower(record.user_agent);
  for (const auto& token : policy.robot_agents) {
    if (contains(agent, to_lower(token))) return DropReason::robot;
  }
  for (const auto& marker : policy.robot_url_markers) {
    if (contains(record.url, marker)) return DropReason::robot;
  }

  if (policy.status_filter && !policy.status_filter->contains(record.status_code)) {
    return DropReason::status;
  }
  return record;
}

UrlId UrlMap::intern(std::string_view url) {
  if (auto it = ids_.find(std::string(url)); it != ids_.end()) {
    return it->second;
  }
  const auto id = static_cast<UrlId>(urls_.size() + 1);
  urls_.emplace_back(url);
  ids_.emplace(urls_.back(), id);
  return id;
}

std::optional<UrlId> UrlMap::find(std::string_view url) const {
  if (auto it = ids_.find(std::string(url)); it != ids_.end()) {
    return it->second;
  }
  return std::nullopt;
}

const std::string& UrlMap::url(UrlId id) const {
  if (id == 0 || id > urls_.size()) {
    throw ValidationError("unknown url id " + std::to_string(id));
  }
  return urls_[id - 1];
}

UrlMap UrlMap::from_entries(std::vector<std::pair<UrlId, std::string>> entries) {
  std::sort(entries.begin(), entries.end());
  UrlMap map;
  for (auto& [id, url] : entries) {
    if (id != map.size() + 1) {
      throw ValidationError("url map ids must be dense from 1; got " + std::to_string(id));
    }
    if (map.find(url)) {
      throw ValidationError("duplicate url in url map: " + url);
    }
    map.intern(url);
  }
  return map;
}

std::uint32_t AliasTable::alias(std::string_view value) {
  auto [it, inserted] =
      ids_.try_emplace(std::string(value), static_cast<std::uint32_t>(ids_.size() + 1));
  return it->second;
}

std::string ip_label(std::uint32_t alias) { return "IP" + std::to_string(alias); }
std::string ua_label(std::uint32_t alias) { return "UA" + std::to_string(alias); }

std::string to_string(UserKey key) { return ip_label(key.ip) + "|" + ua_label(key.ua); }

namespace {

std::uint32_t parse_label(std::string_view text, std::string_view prefix) {
  if (!text.starts_with(prefix)) {
    throw ValidationError("bad alias '" + std::string(text) + "'");
  }
  const auto value = parse_uint(text.substr(prefix.size()));
  if (value == 0 || value > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("bad alias '" + std::string(text) + "'");
  }
  return static_cast<std::uint32_t>(value);
}

}  // namespace

UserKey parse_user_key(std::string_view text) {
  const auto parts = split(text, '|');
  if (parts.size() != 2) {
    throw ValidationError("bad user key '" + std::string(text) + "'");
  }
  return UserKey{parse_label(parts[0], "IP"), parse_label(parts[1], "UA")};
}

CleanedRecord Anonymizer::apply(const LogRecord& record) {
  CleanedRecord out;
  out.timestamp = record.timestamp;
  out.user = UserKey{ips_.alias(record.client_ip), agents_.alias(record.user_agent)};
  out.elapsed_ms = record.elapsed_ms;
  out.bytes = record.bytes;
  out.url_id = urls_.intern(record.url);
  return out;
}

CleanResult clean_log(const std::vector<std::string>& lines, const CleanPolicy& policy) {
  CleanResult result;
  result.stats.input_lines = lines.size();

  struct Candidate {
    LogRecord record;
    std::string raw_user;
  };
  std::vector<Candidate> candidates;
  std::set<std::string> marker_users;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto parsed = parse_log_line(lines[i], i + 1);
    if (auto* err = std::get_if<ParseError>(&parsed)) {
      ++result.stats.parse_errors;
      result.errors.push_back(std::move(*err));
      continue;
    }
    auto& record = std::get<LogRecord>(parsed);
    std::string raw_user = record.client_ip + '\t' + record.user_agent;
    for (const auto& marker : policy.robot_url_markers) {
      if (contains(record.url, marker)) marker_users.insert(raw_user);
    }
    auto decision = clean_record(std::move(record), policy);
    if (auto* reason = std::get_if<DropReason>(&decision)) {
      switch (*reason) {
        case DropReason::suffix: ++result.stats.dropped_suffix; break;
        case DropReason::robot: ++result.stats.dropped_robot; break;
        case DropReason::status: ++result.stats.dropped_status; break;
      }
      continue;
    }
    candidates.push_back({std::get<LogRecord>(std::move(decision)), std::move(raw_user)});
  }

  // A client that ever fetched a robot marker is a robot for all its requests.
  if (!marker_users.empty()) {
    std::erase_if(candidates, [&](const Candidate& c) {
      if (marker_users.contains(c.raw_user)) {
        ++result.stats.dropped_robot;
        return true;
      }
      return false;
    });
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.record.timestamp < b.record.timestamp;
                   });

  Anonymizer anonymizer;
  result.records.reserve(candidates.size());
  result.kept.reserve(candidates.size());
  for (auto& candidate : candidates) {
    result.records.push_back(anonymizer.apply(candidate.record));
    result.kept.push_back(std::move(candidate.record));
  }
  result.url_map = std::move(anonymizer.url_map());
  result.stats.kept = result.records.size();
  return result;
}

CleanResult clean_log(std::istream& in, const CleanPolicy& policy) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) {
    throw IoError("error reading access log");
  }
  return clean_log(lines, policy);
}

}  // namespace wum
