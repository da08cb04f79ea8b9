#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wum/fcm.hpp"
#include "wum/features.hpp"
#include "wum/log_ingest.hpp"
#include "wum/report.hpp"
#include "wum/sessionizer.hpp"

namespace wum {

// Every tunable of the batch pipeline. Loaded from a flat "key = value" file,
// then overridden by command-line flags.
struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path output;

  std::string suffixes_file;
  std::string robots_file;
  bool strip_query = true;
  std::optional<std::set<int>> keep_status;

  Heuristic heuristic = Heuristic::toh1;
  std::int64_t beta_seconds = 1800;

  FeatureConfig features;

  double fuzziness = 2.0;
  double tolerance = 1e-5;
  std::size_t max_iterations = 300;
  ZeroWeightPolicy zero_weight = ZeroWeightPolicy::exclude;
  std::size_t c_min = 2;
  std::size_t c_max = 60;
  std::size_t restarts = 5;
  bool validity_weighted = false;
  std::uint64_t seed = 0;
  std::size_t threads = 0;

  std::size_t top_k = 10;
  double member_threshold = 0.5;

  // Applies one "key = value" setting; unknown keys are rejected.
  void set(std::string_view key, std::string_view value);
  void validate() const;

  static PipelineConfig from_text(std::string_view text);
  static PipelineConfig from_file(const std::filesystem::path& path);
  static const std::vector<std::string>& keys();

  // Canonical "key = value" rendering (inputs/outputs omitted).
  std::string to_text() const;

  CleanPolicy clean_policy() const;
  SweepConfig sweep_config() const;
};

std::set<int> parse_status_list(std::string_view text);

// Failure inside a named pipeline stage.
class StageError : public Error {
 public:
  enum class Kind { validation, runtime, io };
  StageError(std::string stage, Kind kind, const std::string& cause)
      : Error("stage '" + stage + "' failed: " + cause), stage_(std::move(stage)), kind_(kind) {}
  const std::string& stage() const { return stage_; }
  Kind kind() const { return kind_; }

 private:
  std::string stage_;
  Kind kind_;
};

inline constexpr const char* kFailureMarker = "FAILED";

// Runs clean -> sessionize -> features -> sweep (weighted and all-ones) ->
// report, persisting every intermediate artifact under cfg.output. On a stage
// failure a FAILED marker file names the stage and cause, and StageError is
// thrown.
RunReport run_pipeline(const PipelineConfig& cfg);

// Both sweeps on the same matrix and seed: fuzzy session weights vs all-ones.
struct WeightingComparison {
  ValidityReport weighted;
  ValidityReport unweighted;
};

WeightingComparison compare_weighting(const SessionMatrix& matrix, const SweepConfig& cfg);

// beta_seconds,toh1_sessions,toh2_sessions
std::string compare_heuristics_csv(std::span<const UserActivity> users,
                                   std::span<const std::int64_t> betas);

}  // namespace wum
