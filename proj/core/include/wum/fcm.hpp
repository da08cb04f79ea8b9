#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wum/common.hpp"
#include "wum/features.hpp"

namespace wum {

enum class ZeroWeightPolicy {
  // Zero-weight rows take no part in U, V, J or S.
  exclude,
  // Zero weights are replaced by kEpsilonWeight.
  epsilon,
};

inline constexpr double kEpsilonWeight = 1e-6;

std::string_view to_string(ZeroWeightPolicy policy);
ZeroWeightPolicy parse_zero_weight_policy(std::string_view text);

struct FcmConfig {
  std::size_t clusters = 2;
  double fuzziness = 2.0;
  double tolerance = 1e-5;
  std::size_t max_iterations = 300;
  std::uint64_t seed = 0;
  ZeroWeightPolicy zero_weight = ZeroWeightPolicy::exclude;

  void validate() const;
};

struct FcmModel {
  // m x c; rows of excluded sessions are all zero.
  DenseMatrix memberships;
  // c x n
  DenseMatrix centers;
  std::vector<double> objective_trace;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<std::size_t> excluded_rows;
  // Number of times an empty cluster was re-seeded from a data row.
  std::size_t center_resets = 0;
  double fuzziness = 2.0;

  double objective() const { return objective_trace.empty() ? 0.0 : objective_trace.back(); }
  std::vector<std::size_t> included_rows() const;
};

// w * ||x - v||^2
double weighted_distance_sq(std::span<const double> x, std::span<const double> v, double w);

// Memberships for every row of `data` given fixed centers. Rows at zero
// distance from some center get full membership in the first such center.
DenseMatrix update_memberships(const DenseMatrix& data, const DenseMatrix& centers,
                               std::span<const double> weights, double fuzziness);

struct CenterUpdate {
  DenseMatrix centers;
  // Clusters whose weighted membership mass was zero; re-seeded from a data row.
  std::vector<std::size_t> reseeded;
};

// v_j = sum_i w_i u_ij^q x_i / sum_i w_i u_ij^q
CenterUpdate update_centers(const DenseMatrix& data, const DenseMatrix& memberships,
                            std::span<const double> weights, double fuzziness, Rng& rng);

// J = sum_j sum_i u_ij^q w_i ||x_i - v_j||^2
double objective(const DenseMatrix& data, const DenseMatrix& memberships,
                 const DenseMatrix& centers, std::span<const double> weights, double fuzziness);

// Compactness over separation with squared memberships and unweighted
// distances. With `weights`, the numerator terms are scaled by w_i.
double xie_beni(const DenseMatrix& data, const DenseMatrix& memberships,
                const DenseMatrix& centers);
double xie_beni(const DenseMatrix& data, const DenseMatrix& memberships,
                const DenseMatrix& centers, std::span<const double> weights);

// Called once per iteration with the current (U, V) over included rows.
using FcmObserver =
    std::function<void(std::size_t iteration, const DenseMatrix& memberships,
                        const DenseMatrix& centers, double objective)>;

// Seeded initialization: c centers drawn without replacement from distinct rows.
DenseMatrix initial_centers(const DenseMatrix& data, std::size_t clusters, Rng& rng);

FcmModel run_fcm(const DenseMatrix& data, std::span<const double> weights,
                 const FcmConfig& cfg, const FcmObserver& observer = {});
FcmModel run_fcm(const SessionMatrix& matrix, const FcmConfig& cfg);

// Starts from the given centers instead of the seeded draw.
FcmModel run_fcm_from(const DenseMatrix& data, std::span<const double> weights,
                      const FcmConfig& cfg, const DenseMatrix& start_centers,
                      const FcmObserver& observer = {});

struct SweepConfig {
  std::size_t c_min = 2;
  std::size_t c_max = 60;
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  // q, tolerance, max_iterations and zero-weight policy are taken from here.
  FcmConfig fcm;
  bool validity_weighted = false;
  // 0 = hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
};

struct ValidityEntry {
  std::size_t clusters = 0;
  bool ok = false;
  // Best (lowest) objective over restarts and its Xie-Beni value.
  double objective = 0.0;
  double xie_beni = 0.0;
  std::size_t best_restart = 0;
  std::string error;
};

struct ValidityReport {
  std::vector<ValidityEntry> entries;
  std::size_t chosen_c = 0;
  std::optional<FcmModel> chosen_model;

  const ValidityEntry* find(std::size_t clusters) const;
};

// Seed for one (c, restart) run of a sweep; independent of scheduling.
std::uint64_t sweep_run_seed(std::uint64_t root, std::size_t clusters, std::size_t restart);

ValidityReport sweep_clusters(const DenseMatrix& data, std::span<const double> weights,
                              const SweepConfig& cfg);
ValidityReport sweep_clusters(const SessionMatrix& matrix, const SweepConfig& cfg);

struct ProfileMember {
  std::size_t row = 0;
  double membership = 0.0;
};

struct Profile {
  std::size_t cluster = 0;
  std::vector<double> center;
  // Column indices ranked by descending center value.
  std::vector<std::size_t> top_columns;
  std::vector<UrlId> top_urls;
  std::vector<ProfileMember> members;
};

std::vector<Profile> extract_profiles(const FcmModel& model, const SessionMatrix& matrix,
                                      std::size_t top_k, double membership_threshold);

}  // namespace wum
