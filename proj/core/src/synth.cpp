#include "wum/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "wum/log_ingest.hpp"

namespace wum::synth {

std::vector<std::string> cleaning_fixture_lines() {
  const std::string parent = " - DEFAULT_PARENT/192.168.20.1 ";
  const std::string none = " - NONE/- ";
  const std::string site = "http://www.pace.edu.in/";
  const std::string msie = "Mozilla/4.0 (compatible; MSIE 7.0)";
  return {
      "1212265085.247 741 192.168.23.62 TCP_MISS/200 10858 GET " + site + "index.php" + parent + "Mozilla/5.0",
      "1212265086.100 1735 192.168.23.62 TCP_MISS/200 19247 GET " + site + "courses.php?dept=cse" + parent + "Mozilla/5.0",
      "1212265086.300 120 192.168.23.62 TCP_HIT/200 2301 GET " + site + "images/logo.gif" + none + "Mozilla/5.0",
      "1212265088.000 239 192.168.23.70 TCP_MISS/200 209 GET " + site + "index.php" + parent + "Opera/9.80",
      "1212265088.500 98 192.168.23.70 TCP_HIT/200 5120 GET " + site + "images/banner.JPEG" + none + "Opera/9.80",
      "1212265089.000 674 192.168.23.62 TCP_MISS/200 156 GET " + site + "faculty.php" + parent + msie,
      "1212265090.000 45 66.249.71.10 TCP_MISS/200 3300 GET " + site + "index.php" + parent + "Googlebot/2.1 (+http://www.google.com/bot.html)",
      "1212265090.500 12 192.168.23.99 GET",
      "1212265093.000 680 192.168.23.70 TCP_MISS/200 179 GET " + site + "research.php" + parent + "Opera/9.80",
      "1212265091.000 88 192.168.23.70 TCP_HIT/304 0 GET " + site + "images/photo.jpg" + none + "Opera/9.80",
      "1212265094.000 50 66.249.71.10 TCP_MISS/200 4100 GET " + site + "courses.php" + parent + "Googlebot/2.1 (+http://www.google.com/bot.html)",
      "1212265095.000 30 10.0.0.5 TCP_MISS/200 24 GET " + site + "robots.txt" + parent + "Mozilla/5.0",
      "1212265096.000 210 192.168.23.62 TCP_MISS/200 4410 GET " + site + "index.php?lang=en" + parent + "Mozilla/5.0",
      "1212265097.000 75 192.168.23.62 TCP_HIT/200 800 GET " + site + "images/icon.GIF" + none + "Mozilla/5.0",
      "1212265087.000 64 192.168.23.62 TCP_HIT/200 1500 GET " + site + "img/campus.jpeg" + none + msie,
      "1212265098.000 510 192.168.23.62 TCP_MISS/200 9000 GET " + site + "admissions.php" + parent + msie,
      "1212265099.000 400 192.168.23.70 TCP_MISS/200 7000 GET " + site + "faculty.php" + parent + "Opera/9.80",
      "1212265100.000 77 192.168.23.70 TCP_HIT/200 300 GET " + site + "images/bg.JPG" + none + "Opera/9.80",
      "1212265101.000 300 192.168.23.62 TCP_MISS/200 5000 GET " + site + "courses.php" + parent + "Mozilla/5.0",
      "1212265092.000 640 192.168.23.62 TCP_MISS/404 312 GET " + site + "contact.php" + parent + "Mozilla/5.0",
  };
}

namespace {

const std::vector<std::string>& browser_agents() {
  static const std::vector<std::string> agents = {
      "Mozilla/5.0 (Windows NT 6.1; rv:2.0) Gecko/20100101 Firefox/4.0",
      "Mozilla/4.0 (compatible; MSIE 8.0; Windows NT 5.1)",
      "Opera/9.80 (Windows NT 6.1; U; en) Presto/2.7.62 Version/11.01",
      "Mozilla/5.0 (X11; Linux i686) AppleWebKit/534.16 Chrome/10.0.648.133 Safari/534.16",
      "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_6_6) AppleWebKit/533.19.4 Safari/533.19.4",
      "Mozilla/4.0 (compatible; MSIE 7.0; Windows NT 6.0)",
  };
  return agents;
}

struct Event {
  std::int64_t millis;
  std::string line;
};

LogRecord make_record(Rng& rng, std::int64_t millis, const std::string& ip,
                      const std::string& agent, const std::string& url, bool cached) {
  LogRecord r;
  r.timestamp = TimePoint(Milliseconds(millis));
  r.elapsed_ms = static_cast<std::int64_t>(10 + rng.index(2000));
  r.client_ip = ip;
  const auto roll = rng.index(100);
  r.status_code = roll < 90 ? 200 : (roll < 97 ? 304 : 404);
  r.result_tag = cached ? "TCP_HIT" : "TCP_MISS";
  r.bytes = r.status_code == 304 ? 0 : static_cast<std::int64_t>(100 + rng.index(40000));
  r.method = "GET";
  r.url = url;
  r.hierarchy = cached ? "NONE/-" : "DEFAULT_PARENT/10.0.0.1";
  r.user_agent = agent;
  return r;
}

}  // namespace

std::vector<std::string> generate_access_log(const CorpusSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const std::string site = "http://www.example.edu/";
  const std::vector<std::string> group_names = {"cse", "ece", "mech", "civil", "mba", "library",
                                                "hostel", "alumni"};
  auto group_name = [&](std::size_t g) {
    return g < group_names.size() ? group_names[g] : "group" + std::to_string(g + 1);
  };
  auto page_url = [&](std::size_t g, std::size_t p) {
    return site + group_name(g) + "/page" + std::to_string(p + 1) + ".php";
  };
  const std::vector<std::string> embedded_suffixes = {"gif", "jpg", "png", "GIF", "JPEG", "css",
                                                      "js"};
  const std::int64_t span_ms = 28LL * 24 * 3600 * 1000;
  const std::int64_t start_ms = spec.start_epoch * 1000;

  std::vector<Event> events;
  std::size_t one_offs_left = spec.one_off_urls;

  for (std::size_t u = 0; u < spec.users; ++u) {
    // Pairs of users share an address but not a browser.
    const std::string ip = "10.1." + std::to_string(u / 2 / 250) + "." +
                           std::to_string(u / 2 % 250 + 1);
    const std::string& agent = browser_agents()[u % browser_agents().size()];
    const std::size_t home = u % std::max<std::size_t>(spec.groups, 1);

    for (std::size_t v = 0; v < spec.visits_per_user; ++v) {
      std::int64_t t = start_ms + static_cast<std::int64_t>(rng.index(span_ms));
      const std::size_t group = rng.uniform() < 0.8 ? home : rng.index(spec.groups);
      // Visit lengths skew short.
      std::size_t pages = 1;
      while (pages < spec.max_pages_per_visit && rng.uniform() < 0.75) ++pages;

      auto emit = [&](const std::string& url, bool cached) {
        events.push_back({t, format_log_line(make_record(rng, t, ip, agent, url, cached))});
      };

      emit(site + "index.php", false);
      for (std::size_t k = 1; k < pages; ++k) {
        t += static_cast<std::int64_t>(5000 + rng.index(240000));
        std::string url = page_url(group, rng.index(spec.pages_per_group));
        if (rng.uniform() < spec.query_probability) {
          url += "?ref=" + std::to_string(rng.index(50));
        }
        emit(url, false);
        if (rng.uniform() < spec.embedded_probability) {
          const std::string& suffix = embedded_suffixes[rng.index(embedded_suffixes.size())];
          const std::int64_t page_t = t;
          t += 150;
          emit(site + group_name(group) + "/static/asset" + std::to_string(rng.index(6)) + "." +
                   suffix,
               true);
          t = page_t;
        }
      }
      if (one_offs_left > 0 && rng.uniform() < 0.3) {
        t += static_cast<std::int64_t>(5000 + rng.index(60000));
        emit(site + "misc/notice" + std::to_string(one_offs_left) + ".php", false);
        --one_offs_left;
      }
    }
  }

  for (std::size_t b = 0; b < spec.robots; ++b) {
    const std::string ip = "66.249.66." + std::to_string(b + 1);
    // The first crawler announces itself; the rest only reveal themselves by
    // fetching robots.txt.
    const std::string agent =
        b == 0 ? "Googlebot/2.1 (+http://www.google.com/bot.html)" : "Mozilla/5.0 (compatible)";
    std::int64_t t = start_ms + static_cast<std::int64_t>(rng.index(span_ms));
    events.push_back({t, format_log_line(make_record(rng, t, ip, agent, site + "robots.txt", false))});
    for (std::size_t g = 0; g < spec.groups; ++g) {
      for (std::size_t p = 0; p < spec.pages_per_group; ++p) {
        t += 500;
        events.push_back(
            {t, format_log_line(make_record(rng, t, ip, agent, page_url(g, p), false))});
      }
    }
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.millis < b.millis; });

  std::vector<std::string> lines;
  lines.reserve(events.size() + spec.malformed);
  for (auto& e : events) lines.push_back(std::move(e.line));
  for (std::size_t k = 0; k < spec.malformed; ++k) {
    const auto pos = static_cast<std::ptrdiff_t>(rng.index(lines.size() + 1));
    lines.insert(lines.begin() + pos, k % 2 == 0 ? std::string("truncated 12 10.9.9.9")
                                                 : std::string());
  }
  return lines;
}

Blobs planted_blobs(std::size_t clusters, std::size_t per_cluster, double separation,
                    double radius, std::uint64_t seed) {
  Rng rng(seed);
  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(clusters))));
  Blobs blobs{DenseMatrix(clusters * per_cluster, 2), {}};
  std::size_t row = 0;
  for (std::size_t k = 0; k < clusters; ++k) {
    const double cx = separation * static_cast<double>(k % side);
    const double cy = separation * static_cast<double>(k / side);
    for (std::size_t p = 0; p < per_cluster; ++p, ++row) {
      const double r = radius * std::sqrt(rng.uniform());
      const double angle = 2.0 * std::numbers::pi * rng.uniform();
      blobs.points(row, 0) = cx + r * std::cos(angle);
      blobs.points(row, 1) = cy + r * std::sin(angle);
      blobs.labels.push_back(k);
    }
  }
  return blobs;
}

std::vector<Session> planted_sessions(const PlantedSessionSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t total_urls = spec.groups * spec.urls_per_group;
  std::vector<Session> sessions;
  auto add = [&](std::vector<UrlId> urls) {
    Session s;
    s.user = UserKey{static_cast<std::uint32_t>(sessions.size() + 1), 1};
    s.ordinal = 1;
    for (UrlId id : urls) s.url_freqs[id] += 1 + static_cast<std::uint32_t>(rng.index(3));
    s.unique_count = s.url_freqs.size();
    sessions.push_back(std::move(s));
  };

  for (std::size_t k = 0; k < spec.group_sessions; ++k) {
    const std::size_t group = k % spec.groups;
    const std::size_t span = spec.max_group_urls - spec.min_group_urls + 1;
    const std::size_t count =
        std::min(spec.min_group_urls + rng.index(span), spec.urls_per_group);
    std::vector<UrlId> pool(spec.urls_per_group);
    std::iota(pool.begin(), pool.end(), static_cast<UrlId>(group * spec.urls_per_group + 1));
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(pool[i], pool[i + rng.index(pool.size() - i)]);
    }
    pool.resize(count);
    add(std::move(pool));
  }
  for (std::size_t k = 0; k < spec.noise_sessions; ++k) {
    std::vector<UrlId> urls{static_cast<UrlId>(1 + rng.index(total_urls))};
    if (rng.uniform() < 0.5) {
      UrlId other = 0;
      do {
        other = static_cast<UrlId>(1 + rng.index(total_urls));
      } while (other == urls.front());
      urls.push_back(other);
    }
    add(std::move(urls));
  }

  for (std::size_t i = sessions.size(); i > 1; --i) {
    std::swap(sessions[i - 1], sessions[rng.index(i)]);
  }
  return sessions;
}

}  // namespace wum::synth
