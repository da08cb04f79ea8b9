#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wum/features.hpp"
#include "wum/sessionizer.hpp"

namespace wum::synth {

// Hand-authored 20-line access log: 6 embedded-image requests, 3 robot
// requests (two by agent, one robots.txt fetch), 1 malformed line and 10
// page requests from three users.
std::vector<std::string> cleaning_fixture_lines();

struct CorpusSpec {
  std::size_t users = 24;
  std::size_t groups = 4;
  std::size_t pages_per_group = 8;
  std::size_t visits_per_user = 12;
  std::size_t max_pages_per_visit = 9;
  // Probability that a page view pulls embedded objects (images, css, js).
  double embedded_probability = 0.6;
  double query_probability = 0.15;
  // One-off URLs that are accessed exactly once.
  std::size_t one_off_urls = 30;
  std::size_t robots = 2;
  std::size_t malformed = 5;
  std::int64_t start_epoch = 1296518400;  // 2011-02-01T00:00:00Z
};

// Synthetic squid-native access log with planted navigation groups,
// returned as lines in timestamp order.
std::vector<std::string> generate_access_log(const CorpusSpec& spec, std::uint64_t seed);

struct Blobs {
  DenseMatrix points;
  std::vector<std::size_t> labels;
};

// `clusters` blobs of `per_cluster` points, uniform in discs of `radius`,
// centers on a grid with spacing `separation`.
Blobs planted_blobs(std::size_t clusters, std::size_t per_cluster, double separation,
                    double radius, std::uint64_t seed);

struct PlantedSessionSpec {
  std::size_t groups = 4;
  std::size_t urls_per_group = 10;
  std::size_t group_sessions = 200;
  std::size_t min_group_urls = 4;
  std::size_t max_group_urls = 8;
  // Sessions with 1-2 URLs drawn from the whole site.
  std::size_t noise_sessions = 150;
};

// Deduplicated sessions with planted group structure plus short noise
// sessions; url ids are 1..groups*urls_per_group. Session order is shuffled.
std::vector<Session> planted_sessions(const PlantedSessionSpec& spec, std::uint64_t seed);

}  // namespace wum::synth
