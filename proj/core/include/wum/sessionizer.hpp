#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "wum/common.hpp"
#include "wum/log_ingest.hpp"

namespace wum {

struct UserActivity {
  UserKey user;
  std::vector<CleanedRecord> requests;
};

// One UserActivity per distinct (ip alias, ua alias), in first-seen order.
std::vector<UserActivity> identify_users(std::span<const CleanedRecord> records);

enum class Heuristic {
  // Total session duration bounded by beta.
  toh1,
  // Gap between consecutive requests bounded by beta.
  toh2,
};

std::string_view to_string(Heuristic heuristic);
Heuristic parse_heuristic(std::string_view text);

struct Session {
  UserKey user;
  std::uint32_t ordinal = 1;
  TimePoint first_ts{};
  TimePoint last_ts{};
  std::vector<UrlId> raw_requests;
  std::map<UrlId, std::uint32_t> url_freqs;
  std::size_t unique_count = 0;
  double weight = 1.0;
  // Full records when sessionized from a cleaned log; empty when loaded from
  // the compact session file.
  std::vector<CleanedRecord> requests;

  std::size_t total_requests() const;
};

std::vector<Session> sessionize(const UserActivity& user, Heuristic heuristic,
                                Milliseconds beta);

// Sessionizes every user; output is grouped by user in first-seen order.
std::vector<Session> sessionize_all(std::span<const UserActivity> users, Heuristic heuristic,
                                    Milliseconds beta);

Session dedup_session(Session session);

struct SessionStats {
  std::size_t session_count = 0;
  std::size_t min_raw = 0;
  std::size_t max_raw = 0;
  double avg_raw = 0.0;
  std::size_t min_unique = 0;
  std::size_t max_unique = 0;
  double avg_unique = 0.0;
};

SessionStats session_stats(std::span<const Session> sessions);

}  // namespace wum
