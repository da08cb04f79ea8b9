#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "wum/common.hpp"

namespace wum {

// One squid-native access-log line:
//   time elapsed client tag/status bytes method url ident hierarchy user-agent...
struct LogRecord {
  TimePoint timestamp{};
  std::int64_t elapsed_ms = 0;
  std::string client_ip;
  int status_code = 0;
  std::int64_t bytes = 0;
  std::string method;
  std::string url;
  std::string user_agent;
  std::string result_tag;
  std::string ident = "-";
  std::string hierarchy = "-";
};

struct ParseError {
  std::size_t line_number = 0;
  std::string reason;
};

using ParseResult = std::variant<LogRecord, ParseError>;

ParseResult parse_log_line(std::string_view line, std::size_t line_number = 0);

// Inverse of parse_log_line for well-formed records.
std::string format_log_line(const LogRecord& record);

struct CleanPolicy {
  std::set<std::string> irrelevant_suffixes;
  // Matched case-insensitively as substrings of the user agent.
  std::vector<std::string> robot_agents;
  std::vector<std::string> robot_url_markers;
  bool strip_query = false;
  std::optional<std::set<int>> status_filter;

  static CleanPolicy defaults();
  static std::set<std::string> default_suffixes();
  static std::vector<std::string> default_robot_agents();
};

// Word lists: one entry per line, '#' starts a comment, blanks ignored.
std::vector<std::string> read_word_list(std::istream& in);
std::vector<std::string> read_word_list_file(const std::string& path);

enum class DropReason { suffix, robot, status };

std::string_view to_string(DropReason reason);

using CleanDecision = std::variant<LogRecord, DropReason>;

// Extension of the last path segment of `url`, ignoring query and fragment.
std::string_view url_suffix(std::string_view url);
std::string_view strip_query_string(std::string_view url);

CleanDecision clean_record(LogRecord record, const CleanPolicy& policy);

// Bidirectional url <-> id map with dense ids assigned in first-seen order
// starting at 1.
class UrlMap {
 public:
  UrlId intern(std::string_view url);
  std::optional<UrlId> find(std::string_view url) const;
  const std::string& url(UrlId id) const;
  std::size_t size() const { return urls_.size(); }
  const std::vector<std::string>& urls() const { return urls_; }

  // Rebuilds a map from (id, url) pairs; ids must be exactly 1..n.
  static UrlMap from_entries(std::vector<std::pair<UrlId, std::string>> entries);

 private:
  std::vector<std::string> urls_;
  std::unordered_map<std::string, UrlId> ids_;
};

// First-seen sequential aliasing: the k-th distinct value becomes k.
class AliasTable {
 public:
  std::uint32_t alias(std::string_view value);
  std::size_t size() const { return ids_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
};

struct UserKey {
  std::uint32_t ip = 0;
  std::uint32_t ua = 0;

  auto operator<=>(const UserKey&) const = default;
};

std::string ip_label(std::uint32_t alias);
std::string ua_label(std::uint32_t alias);
// "IP<k>|UA<k>"
std::string to_string(UserKey key);
UserKey parse_user_key(std::string_view text);

struct CleanedRecord {
  TimePoint timestamp{};
  UserKey user;
  std::int64_t elapsed_ms = 0;
  std::int64_t bytes = 0;
  UrlId url_id = 0;

  bool operator==(const CleanedRecord&) const = default;
};

class Anonymizer {
 public:
  CleanedRecord apply(const LogRecord& record);
  const UrlMap& url_map() const { return urls_; }
  UrlMap& url_map() { return urls_; }

 private:
  AliasTable ips_;
  AliasTable agents_;
  UrlMap urls_;
};

struct CleanStats {
  std::size_t input_lines = 0;
  std::size_t parse_errors = 0;
  std::size_t dropped_suffix = 0;
  std::size_t dropped_robot = 0;
  std::size_t dropped_status = 0;
  std::size_t kept = 0;

  std::size_t dropped() const { return dropped_suffix + dropped_robot + dropped_status; }
  bool balanced() const { return input_lines == parse_errors + dropped() + kept; }
  bool operator==(const CleanStats&) const = default;
};

struct CleanResult {
  // Sorted by timestamp, stable on ties.
  std::vector<CleanedRecord> records;
  // Kept raw records (query-stripped if requested), aligned with `records`.
  std::vector<LogRecord> kept;
  UrlMap url_map;
  CleanStats stats;
  std::vector<ParseError> errors;
};

CleanResult clean_log(const std::vector<std::string>& lines, const CleanPolicy& policy);
CleanResult clean_log(std::istream& in, const CleanPolicy& policy);

}  // namespace wum
