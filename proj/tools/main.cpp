// wum: web-usage-mining batch pipeline.
//
//   wum clean --input access.log --output out/
//   wum sessionize --input out/cleaned.tsv --output out/
//   wum features --input out/sessions.txt --url-map out/url_map.tsv --output out/
//   wum sweep --input out/matrix.txt --output out/
//   wum pipeline --config run.cfg --input access.log --output run/

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "wum/fcm.hpp"
#include "wum/features.hpp"
#include "wum/formats.hpp"
#include "wum/log_ingest.hpp"
#include "wum/pipeline.hpp"
#include "wum/report.hpp"
#include "wum/sessionizer.hpp"
#include "wum/synth.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2, kIo = 3 };

template <typename Writer>
void write_to(const fs::path& path, Writer&& writer) {
  std::ostringstream out;
  writer(out);
  wum::io::write_file(path, out.str());
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw wum::IoError("cannot open " + path.string());
  return in;
}

struct FcmFlags {
  std::size_t clusters = 2;
  double q = 2.0;
  double tol = 1e-5;
  std::size_t max_iter = 300;
  std::uint64_t seed = 0;
  std::string zero_weight = "exclude";

  void attach(CLI::App* cmd, bool with_c) {
    if (with_c) cmd->add_option("--c", clusters, "Number of clusters (>= 2)");
    cmd->add_option("--q", q, "Fuzziness index (> 1)");
    cmd->add_option("--tol", tol, "Convergence threshold on max membership change");
    cmd->add_option("--max-iter", max_iter, "Iteration cap");
    cmd->add_option("--seed", seed, "Root RNG seed");
    cmd->add_option("--zero-weight", zero_weight, "Zero-weight sessions: exclude|epsilon");
  }

  wum::FcmConfig config() const {
    wum::FcmConfig cfg;
    cfg.clusters = clusters;
    cfg.fuzziness = q;
    cfg.tolerance = tol;
    cfg.max_iterations = max_iter;
    cfg.seed = seed;
    cfg.zero_weight = wum::parse_zero_weight_policy(zero_weight);
    return cfg;
  }
};

struct SweepFlags {
  std::size_t c_min = 2;
  std::size_t c_max = 60;
  std::size_t restarts = 5;
  bool validity_weighted = false;
  std::size_t threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--c-min", c_min, "Smallest cluster count");
    cmd->add_option("--c-max", c_max, "Largest cluster count");
    cmd->add_option("--restarts", restarts, "Seeded restarts per cluster count");
    cmd->add_flag("--validity-weighted", validity_weighted,
                  "Scale Xie-Beni compactness terms by session weight");
    cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  }

  wum::SweepConfig config(const FcmFlags& fcm) const {
    wum::SweepConfig cfg;
    cfg.c_min = c_min;
    cfg.c_max = c_max;
    cfg.restarts = restarts;
    cfg.seed = fcm.seed;
    cfg.fcm = fcm.config();
    cfg.fcm.clusters = c_min;
    cfg.validity_weighted = validity_weighted;
    cfg.threads = threads;
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Web usage mining: access-log cleaning, sessionization and weighted fuzzy c-means"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // clean
  auto* clean = app.add_subcommand("clean", "Parse, clean and anonymize a raw access log");
  fs::path clean_input, clean_output;
  std::string suffix_file, robot_file, keep_status;
  bool strip_query = false;
  clean->add_option("--input", clean_input, "Raw access log")->required();
  clean->add_option("--output", clean_output, "Output directory")->required();
  clean->add_option("--suffixes", suffix_file, "Irrelevant suffix list (one per line)");
  clean->add_option("--robots", robot_file, "Robot user-agent tokens (one per line)");
  clean->add_flag("--strip-query", strip_query, "Remove query strings from URLs");
  clean->add_option("--keep-status", keep_status, "Comma-separated HTTP status codes to keep");

  // sessionize
  auto* sessionize = app.add_subcommand("sessionize", "Identify users and split sessions");
  fs::path sess_input, sess_output;
  std::string heuristic = "toh1";
  std::int64_t beta_seconds = 1800;
  sessionize->add_option("--input", sess_input, "cleaned.tsv")->required();
  sessionize->add_option("--output", sess_output, "Output directory")->required();
  sessionize->add_option("--heuristic", heuristic, "toh1 (session duration) | toh2 (page gap)");
  sessionize->add_option("--beta-seconds", beta_seconds, "Time threshold in seconds");

  // compare-heuristics
  auto* cmp_h = app.add_subcommand("compare-heuristics", "Session counts under both heuristics");
  fs::path cmp_h_input, cmp_h_output;
  std::string betas = "1800";
  cmp_h->add_option("--input", cmp_h_input, "cleaned.tsv")->required();
  cmp_h->add_option("--output", cmp_h_output, "CSV file (stdout if omitted)");
  cmp_h->add_option("--betas", betas, "Comma-separated thresholds in seconds");

  // features
  auto* feats = app.add_subcommand("features", "Filter URLs, weight sessions, build the matrix");
  fs::path feat_input, feat_output, feat_urls;
  wum::FeatureConfig feature_cfg;
  std::string scheme = "binary";
  feats->add_option("--input", feat_input, "sessions.txt (compact form)")->required();
  feats->add_option("--output", feat_output, "Output directory")->required();
  feats->add_option("--url-map", feat_urls, "url_map.tsv, for readable catalog entries");
  feats->add_option("--min-access", feature_cfg.min_access, "Drop URLs accessed fewer times");
  feats->add_option("--min-session-support", feature_cfg.min_session_support,
                    "Drop URLs present in fewer sessions");
  feats->add_option("--scheme", scheme, "binary|frequency");
  feats->add_option("--lb", feature_cfg.weights.lower, "Weight lower bound (URL count)");
  feats->add_option("--ub", feature_cfg.weights.upper, "Weight upper bound (URL count)");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Weighted fuzzy c-means at a fixed c");
  fs::path cl_input, cl_output, cl_catalog, cl_rows;
  FcmFlags cl_fcm;
  std::size_t top_k = 10;
  double member_threshold = 0.5;
  cluster->add_option("--input", cl_input, "matrix.txt")->required();
  cluster->add_option("--output", cl_output, "Output directory")->required();
  cluster->add_option("--catalog", cl_catalog, "catalog.tsv for URL labels");
  cluster->add_option("--rows", cl_rows, "rows.tsv for session labels");
  cluster->add_option("--top-k", top_k, "URLs listed per profile");
  cluster->add_option("--member-threshold", member_threshold, "Membership needed to list a session");
  cl_fcm.attach(cluster, true);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Xie-Beni sweep over a range of cluster counts");
  fs::path sw_input, sw_output;
  FcmFlags sw_fcm;
  SweepFlags sw_flags;
  bool sw_unweighted = false;
  sweep->add_option("--input", sw_input, "matrix.txt")->required();
  sweep->add_option("--output", sw_output, "Output directory")->required();
  sweep->add_flag("--unweighted", sw_unweighted, "Treat every session weight as 1");
  sw_fcm.attach(sweep, false);
  sw_flags.attach(sweep);

  // compare-weighting
  auto* cmp_w = app.add_subcommand("compare-weighting", "Sweep with fuzzy weights and with all-ones");
  fs::path cw_input, cw_output;
  FcmFlags cw_fcm;
  SweepFlags cw_flags;
  cmp_w->add_option("--input", cw_input, "matrix.txt")->required();
  cmp_w->add_option("--output", cw_output, "Output directory")->required();
  cw_fcm.attach(cmp_w, false);
  cw_flags.attach(cmp_w);

  // report
  auto* report = app.add_subcommand("report", "Emit plot-ready CSVs and summary from a run report");
  fs::path rep_input, rep_output;
  report->add_option("--input", rep_input, "run_report.json")->required();
  report->add_option("--output", rep_output, "Output directory")->required();

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage end to end");
  fs::path config_file;
  pipeline->add_option("--config", config_file, "Flat key = value configuration file");
  std::map<std::string, std::string> overrides;
  for (const auto& key : wum::PipelineConfig::keys()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    pipeline->add_option(flag, overrides[key], "Overrides config key '" + key + "'");
  }

  // gen-fixture
  auto* gen = app.add_subcommand("gen-fixture", "Write a synthetic access log");
  std::string kind = "corpus";
  fs::path gen_output;
  std::uint64_t gen_seed = 1;
  wum::synth::CorpusSpec corpus;
  gen->add_option("--kind", kind, "cleaning (20-line hand-counted log) | corpus")
      ->check(CLI::IsMember({"cleaning", "corpus"}));
  gen->add_option("--output", gen_output, "Output file")->required();
  gen->add_option("--seed", gen_seed, "RNG seed for the corpus");
  gen->add_option("--users", corpus.users, "Users in the corpus");
  gen->add_option("--visits", corpus.visits_per_user, "Visits per user");
  gen->add_option("--groups", corpus.groups, "Planted navigation groups");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*clean) {
      wum::CleanPolicy policy = wum::CleanPolicy::defaults();
      if (!suffix_file.empty()) {
        const auto words = wum::read_word_list_file(suffix_file);
        policy.irrelevant_suffixes = {words.begin(), words.end()};
      }
      if (!robot_file.empty()) policy.robot_agents = wum::read_word_list_file(robot_file);
      policy.strip_query = strip_query;
      if (!keep_status.empty()) policy.status_filter = wum::parse_status_list(keep_status);
      auto in = open_input(clean_input);
      const auto result = wum::clean_log(in, policy);
      wum::io::ensure_directory(clean_output);
      write_to(clean_output / "cleaned.tsv",
               [&](auto& s) { wum::io::write_cleaned(s, result.records); });
      write_to(clean_output / "url_map.tsv",
               [&](auto& s) { wum::io::write_url_map(s, result.url_map); });
      write_to(clean_output / "clean_stats.tsv",
               [&](auto& s) { wum::io::write_clean_stats(s, result.stats); });
      for (const auto& err : result.errors) {
        std::cerr << "line " << err.line_number << ": " << err.reason << '\n';
      }
      wum::io::write_clean_stats(std::cout, result.stats);
    } else if (*sessionize) {
      auto in = open_input(sess_input);
      const auto records = wum::io::read_cleaned(in);
      const auto users = wum::identify_users(records);
      const auto sessions = wum::sessionize_all(users, wum::parse_heuristic(heuristic),
                                                wum::Milliseconds(beta_seconds * 1000));
      wum::io::ensure_directory(sess_output);
      write_to(sess_output / "sessions.tsv",
               [&](auto& s) { wum::io::write_session_blocks(s, sessions); });
      write_to(sess_output / "sessions.txt",
               [&](auto& s) { wum::io::write_sessions_compact(s, sessions); });
      const auto stats = wum::session_stats(sessions);
      write_to(sess_output / "session_stats.tsv",
               [&](auto& s) { wum::io::write_session_stats(s, stats); });
      std::cout << "users\t" << users.size() << '\n';
      wum::io::write_session_stats(std::cout, stats);
    } else if (*cmp_h) {
      auto in = open_input(cmp_h_input);
      const auto records = wum::io::read_cleaned(in);
      const auto users = wum::identify_users(records);
      std::vector<std::int64_t> beta_list;
      for (auto item : wum::split(betas, ',')) {
        const auto b = wum::parse_int(item);
        if (b <= 0) throw wum::ValidationError("betas must be positive");
        beta_list.push_back(b);
      }
      const std::string csv = wum::compare_heuristics_csv(users, beta_list);
      if (cmp_h_output.empty()) std::cout << csv;
      else wum::io::write_file(cmp_h_output, csv);
    } else if (*feats) {
      feature_cfg.scheme = wum::parse_scheme(scheme);
      auto in = open_input(feat_input);
      const auto sessions = wum::io::read_sessions_compact(in);
      std::optional<wum::UrlMap> urls;
      if (!feat_urls.empty()) {
        auto url_in = open_input(feat_urls);
        urls = wum::io::read_url_map(url_in);
      }
      const auto result = wum::build_features(sessions, feature_cfg);
      wum::io::ensure_directory(feat_output);
      write_to(feat_output / "matrix.txt", [&](auto& s) { wum::io::write_matrix(s, result.matrix); });
      write_to(feat_output / "catalog.tsv", [&](auto& s) {
        wum::io::write_catalog(s, result.matrix, urls ? &*urls : nullptr);
      });
      write_to(feat_output / "rows.tsv",
               [&](auto& s) { wum::io::write_row_index(s, result.sessions); });
      std::cout << "sessions\t" << result.matrix.size() << "\nurls\t" << result.matrix.columns
                << '\n';
    } else if (*cluster) {
      auto in = open_input(cl_input);
      const auto matrix = wum::io::read_matrix(in);
      const auto cfg = cl_fcm.config();
      const auto model = wum::run_fcm(matrix, cfg);
      wum::io::ensure_directory(cl_output);
      wum::io::write_file(cl_output / "model.json", wum::io::model_to_json(model, cfg));

      std::vector<std::pair<wum::UrlId, std::string>> catalog;
      std::vector<std::string> rows;
      if (!cl_catalog.empty()) {
        auto cat_in = open_input(cl_catalog);
        catalog = wum::io::read_catalog(cat_in);
      }
      if (!cl_rows.empty()) {
        auto rows_in = open_input(cl_rows);
        rows = wum::io::read_row_index(rows_in);
      }
      const auto profiles = wum::extract_profiles(model, matrix, top_k, member_threshold);
      write_to(cl_output / "profiles.txt", [&](auto& s) {
        wum::io::write_profiles(s, profiles,
                                {cl_catalog.empty() ? nullptr : &catalog,
                                 cl_rows.empty() ? nullptr : &rows});
      });
      std::cout << "iterations\t" << model.iterations << "\nconverged\t"
                << (model.converged ? "true" : "false") << "\nJ\t"
                << wum::format_double(model.objective()) << '\n';
    } else if (*sweep) {
      auto in = open_input(sw_input);
      auto matrix = wum::io::read_matrix(in);
      if (sw_unweighted) std::fill(matrix.weights.begin(), matrix.weights.end(), 1.0);
      const auto result = wum::sweep_clusters(matrix, sw_flags.config(sw_fcm));
      wum::io::ensure_directory(sw_output);
      write_to(sw_output / "validity.csv", [&](auto& s) { wum::io::write_validity_csv(s, result); });
      std::cout << "chosen_c\t" << result.chosen_c << '\n';
    } else if (*cmp_w) {
      auto in = open_input(cw_input);
      const auto matrix = wum::io::read_matrix(in);
      const auto result = wum::compare_weighting(matrix, cw_flags.config(cw_fcm));
      wum::io::ensure_directory(cw_output);
      write_to(cw_output / "validity_weighted.csv",
               [&](auto& s) { wum::io::write_validity_csv(s, result.weighted); });
      write_to(cw_output / "validity_unweighted.csv",
               [&](auto& s) { wum::io::write_validity_csv(s, result.unweighted); });
      const wum::SweepSeries weighted{result.weighted.entries, result.weighted.chosen_c};
      const wum::SweepSeries unweighted{result.unweighted.entries, result.unweighted.chosen_c};
      wum::io::write_file(cw_output / "perf_index_vs_c.csv",
                          wum::validity_series_csv(weighted, unweighted, true));
      wum::io::write_file(cw_output / "validity_vs_c.csv",
                          wum::validity_series_csv(weighted, unweighted, false));
      std::cout << "chosen_c_weighted\t" << result.weighted.chosen_c << "\nchosen_c_unweighted\t"
                << result.unweighted.chosen_c << '\n';
    } else if (*report) {
      const auto run = wum::report_from_json(wum::io::read_file(rep_input));
      wum::emit_report(run, rep_output);
    } else if (*pipeline) {
      wum::PipelineConfig cfg;
      if (!config_file.empty()) cfg = wum::PipelineConfig::from_file(config_file);
      for (const auto& key : wum::PipelineConfig::keys()) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (pipeline->count(flag) > 0) cfg.set(key, overrides[key]);
      }
      const auto run = wum::run_pipeline(cfg);
      std::cout << wum::summary_text(run);
    } else if (*gen) {
      const auto lines = kind == "cleaning" ? wum::synth::cleaning_fixture_lines()
                                            : wum::synth::generate_access_log(corpus, gen_seed);
      std::string text;
      for (const auto& line : lines) text += line + '\n';
      wum::io::write_file(gen_output, text);
    }
  } catch (const wum::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case wum::StageError::Kind::validation: return kValidation;
      case wum::StageError::Kind::io: return kIo;
      case wum::StageError::Kind::runtime: return kRuntime;
    }
    return kRuntime;
  } catch (const wum::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const wum::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
