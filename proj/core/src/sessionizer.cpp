#include "wum/sessionizer.hpp"

#include <algorithm>
#include <numeric>

namespace wum {

std::vector<UserActivity> identify_users(std::span<const CleanedRecord> records) {
  std::vector<UserActivity> users;
  std::map<UserKey, std::size_t> index;
  for (const auto& record : records) {
    auto [it, inserted] = index.try_emplace(record.user, users.size());
    if (inserted) {
      users.push_back(UserActivity{record.user, {}});
    }
    users[it->second].requests.push_back(record);
  }
  return users;
}

std::string_view to_string(Heuristic heuristic) {
  return heuristic == Heuristic::toh1 ? "toh1" : "toh2";
}

Heuristic parse_heuristic(std::string_view text) {
  const std::string lowered = to_lower(text);
  if (lowered == "toh1") return Heuristic::toh1;
  if (lowered == "toh2") return Heuristic::toh2;
  throw ValidationError("unknown heuristic '" + std::string(text) + "' (expected toh1|toh2)");
}

std::size_t Session::total_requests() const {
  std::size_t total = 0;
  for (const auto& [url, count] : url_freqs) total += count;
  return total;
}

std::vector<Session> sessionize(const UserActivity& user, Heuristic heuristic,
                                Milliseconds beta) {
  if (beta <= Milliseconds::zero()) {
    throw ValidationError("beta must be positive");
  }
  std::vector<Session> sessions;
  if (user.requests.empty()) return sessions;

  auto open = [&](const CleanedRecord& first) {
    Session s;
    s.user = user.user;
    s.ordinal = static_cast<std::uint32_t>(sessions.size() + 1);
    s.first_ts = first.timestamp;
    s.last_ts = first.timestamp;
    sessions.push_back(std::move(s));
  };

  open(user.requests.front());
  for (const auto& request : user.requests) {
    Session& current = sessions.back();
    if (!current.requests.empty()) {
      const TimePoint reference =
          heuristic == Heuristic::toh1 ? current.first_ts : current.last_ts;
      if (request.timestamp - reference > beta) {
        open(request);
      }
    }
    Session& target = sessions.back();
    target.requests.push_back(request);
    target.raw_requests.push_back(request.url_id);
    target.last_ts = request.timestamp;
  }

  for (auto& s : sessions) s = dedup_session(std::move(s));
  return sessions;
}

std::vector<Session> sessionize_all(std::span<const UserActivity> users, Heuristic heuristic,
                                    Milliseconds beta) {
  std::vector<Session> all;
  for (const auto& user : users) {
    auto sessions = sessionize(user, heuristic, beta);
    std::move(sessions.begin(), sessions.end(), std::back_inserter(all));
  }
  return all;
}

Session dedup_session(Session session) {
  if (!session.raw_requests.empty()) {
    session.url_freqs.clear();
    for (UrlId id : session.raw_requests) ++session.url_freqs[id];
  }
  session.unique_count = session.url_freqs.size();
  return session;
}

SessionStats session_stats(std::span<const Session> sessions) {
  if (sessions.empty()) {
    throw RuntimeError("no sessions");
  }
  SessionStats stats;
  stats.session_count = sessions.size();
  stats.min_raw = stats.min_unique = std::numeric_limits<std::size_t>::max();
  std::size_t sum_raw = 0;
  std::size_t sum_unique = 0;
  for (const auto& s : sessions) {
    const std::size_t raw = s.total_requests();
    stats.min_raw = std::min(stats.min_raw, raw);
    stats.max_raw = std::max(stats.max_raw, raw);
    stats.min_unique = std::min(stats.min_unique, s.unique_count);
    stats.max_unique = std::max(stats.max_unique, s.unique_count);
    sum_raw += raw;
    sum_unique += s.unique_count;
  }
  const auto n = static_cast<double>(sessions.size());
  stats.avg_raw = static_cast<double>(sum_raw) / n;
  stats.avg_unique = static_cast<double>(sum_unique) / n;
  return stats;
}

}  // namespace wum
