#include "wum/fcm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace wum {

std::string_view to_string(ZeroWeightPolicy policy) {
  return policy == ZeroWeightPolicy::exclude ? "exclude" : "epsilon";
}

ZeroWeightPolicy parse_zero_weight_policy(std::string_view text) {
  const std::string lowered = to_lower(text);
  if (lowered == "exclude") return ZeroWeightPolicy::exclude;
  if (lowered == "epsilon") return ZeroWeightPolicy::epsilon;
  throw ValidationError("unknown zero-weight policy '" + std::string(text) +
                        "' (expected exclude|epsilon)");
}

void FcmConfig::validate() const {
  if (clusters < 2) throw ValidationError("cluster count must be >= 2");
  if (!(fuzziness > 1.0) || !std::isfinite(fuzziness)) {
    throw ValidationError("fuzziness q must be a finite value > 1");
  }
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be > 0");
  if (max_iterations == 0) throw ValidationError("max_iterations must be > 0");
}

std::vector<std::size_t> FcmModel::included_rows() const {
  std::vector<std::size_t> rows;
  std::size_t next_excluded = 0;
  for (std::size_t i = 0; i < memberships.rows(); ++i) {
    if (next_excluded < excluded_rows.size() && excluded_rows[next_excluded] == i) {
      ++next_excluded;
      continue;
    }
    rows.push_back(i);
  }
  return rows;
}

double weighted_distance_sq(std::span<const double> x, std::span<const double> v, double w) {
  if (x.size() != v.size()) {
    throw ValidationError("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                          std::to_string(v.size()));
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - v[k];
    sum += diff * diff;
  }
  return w * sum;
}

namespace {

void check_shapes(const DenseMatrix& data, const DenseMatrix& centers,
                  std::span<const double> weights) {
  if (centers.cols() != data.cols()) {
    throw ValidationError("center dimension does not match data dimension");
  }
  if (weights.size() != data.rows()) {
    throw ValidationError("weight count does not match row count");
  }
}

DenseMatrix select_rows(const DenseMatrix& m, std::span<const std::size_t> rows) {
  DenseMatrix out(rows.size(), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(m.row(rows[r]).begin(), m.row(rows[r]).end(), out.row(r).begin());
  }
  return out;
}

}  // namespace

DenseMatrix update_memberships(const DenseMatrix& data, const DenseMatrix& centers,
                               std::span<const double> weights, double fuzziness) {
  check_shapes(data, centers, weights);
  const std::size_t c = centers.rows();
  const double exponent = 1.0 / (fuzziness - 1.0);
  DenseMatrix u(data.rows(), c);
  std::vector<double> dist(c);

  for (std::size_t i = 0; i < data.rows(); ++i) {
    std::size_t nearest = 0;
    for (std::size_t j = 0; j < c; ++j) {
      dist[j] = weighted_distance_sq(data.row(i), centers.row(j), weights[i]);
      if (dist[j] < dist[nearest]) nearest = j;
    }
    const auto coincident = std::find(dist.begin(), dist.end(), 0.0);
    if (coincident != dist.end()) {
      u(i, static_cast<std::size_t>(coincident - dist.begin())) = 1.0;
      continue;
    }
    // (1/d_ij)^e / sum_l (1/d_il)^e, scaled by the smallest distance so every
    // term lies in (0, 1].
    const double closest = dist[nearest];
    double total = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      const double term = std::pow(closest / dist[j], exponent);
      u(i, j) = term;
      total += term;
    }
    for (std::size_t j = 0; j < c; ++j) u(i, j) /= total;
  }
  return u;
}

CenterUpdate update_centers(const DenseMatrix& data, const DenseMatrix& memberships,
                            std::span<const double> weights, double fuzziness, Rng& rng) {
  if (memberships.rows() != data.rows()) {
    throw ValidationError("membership row count does not match data");
  }
  if (weights.size() != data.rows()) {
    throw ValidationError("weight count does not match row count");
  }
  const std::size_t c = memberships.cols();
  const std::size_t n = data.cols();
  CenterUpdate result{DenseMatrix(c, n), {}};
  std::vector<double> mass(c, 0.0);

  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto x = data.row(i);
    for (std::size_t j = 0; j < c; ++j) {
      const double coef = weights[i] * std::pow(memberships(i, j), fuzziness);
      if (coef == 0.0) continue;
      mass[j] += coef;
      auto v = result.centers.row(j);
      for (std::size_t k = 0; k < n; ++k) v[k] += coef * x[k];
    }
  }

  for (std::size_t j = 0; j < c; ++j) {
    auto v = result.centers.row(j);
    if (mass[j] > 0.0) {
      for (double& value : v) value /= mass[j];
      continue;
    }
    if (data.rows() == 0) {
      throw RuntimeError("cannot re-seed an empty cluster without data");
    }
    const auto source = data.row(static_cast<std::size_t>(rng.index(data.rows())));
    std::copy(source.begin(), source.end(), v.begin());
    result.reseeded.push_back(j);
  }
  return result;
}

double objective(const DenseMatrix& data, const DenseMatrix& memberships,
                 const DenseMatrix& centers, std::span<const double> weights,
                 double fuzziness) {
  check_shapes(data, centers, weights);
  double total = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < centers.rows(); ++j) {
      const double u = memberships(i, j);
      if (u == 0.0) continue;
      total += std::pow(u, fuzziness) *
               weighted_distance_sq(data.row(i), centers.row(j), weights[i]);
    }
  }
  return total;
}

namespace {

double xie_beni_impl(const DenseMatrix& data, const DenseMatrix& memberships,
                     const DenseMatrix& centers, std::span<const double> weights) {
  const std::size_t c = centers.rows();
  if (c < 2) throw ValidationError("Xie-Beni index needs at least 2 clusters");
  if (data.rows() == 0) throw ValidationError("Xie-Beni index needs data");
  if (centers.cols() != data.cols() || memberships.rows() != data.rows() ||
      memberships.cols() != c) {
    throw ValidationError("Xie-Beni shape mismatch");
  }

  double compactness = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    for (std::size_t j = 0; j < c; ++j) {
      const double u = memberships(i, j);
      compactness += u * u * weighted_distance_sq(data.row(i), centers.row(j), w);
    }
  }

  double separation = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < c; ++l) {
    for (std::size_t k = l + 1; k < c; ++k) {
      separation =
          std::min(separation, weighted_distance_sq(centers.row(l), centers.row(k), 1.0));
    }
  }
  if (separation == 0.0) {
    throw RuntimeError("zero separation");
  }
  return compactness / (static_cast<double>(data.rows()) * separation);
}

}  // namespace

double xie_beni(const DenseMatrix& data, const DenseMatrix& memberships,
                const DenseMatrix& centers) {
  return xie_beni_impl(data, memberships, centers, {});
}

double xie_beni(const DenseMatrix& data, const DenseMatrix& memberships,
                const DenseMatrix& centers, std::span<const double> weights) {
  if (weights.size() != data.rows()) {
    throw ValidationError("weight count does not match row count");
  }
  return xie_beni_impl(data, memberships, centers, weights);
}

DenseMatrix initial_centers(const DenseMatrix& data, std::size_t clusters, Rng& rng) {
  if (data.rows() == 0) throw RuntimeError("no data rows to initialise centers");
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.index(i))]);
  }

  std::vector<std::size_t> picked;
  for (std::size_t idx : order) {
    if (picked.size() == clusters) break;
    const auto row = data.row(idx);
    const bool duplicate = std::any_of(picked.begin(), picked.end(), [&](std::size_t p) {
      return std::equal(row.begin(), row.end(), data.row(p).begin());
    });
    if (!duplicate) picked.push_back(idx);
  }
  // Fewer distinct rows than clusters: coincident centers, resolved later by
  // the empty-cluster re-seed.
  for (std::size_t k = 0; picked.size() < clusters; ++k) {
    picked.push_back(order[k % order.size()]);
  }
  return select_rows(data, picked);
}

namespace {

struct Prepared {
  std::vector<std::size_t> included;
  std::vector<std::size_t> excluded;
  DenseMatrix data;
  std::vector<double> weights;
};

Prepared prepare(const DenseMatrix& data, std::span<const double> weights,
                 ZeroWeightPolicy policy) {
  if (weights.size() != data.rows()) {
    throw ValidationError("weight count does not match row count");
  }
  Prepared p;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ValidationError("session weights must be finite and non-negative");
    }
    if (w == 0.0 && policy == ZeroWeightPolicy::exclude) {
      p.excluded.push_back(i);
      continue;
    }
    p.included.push_back(i);
    p.weights.push_back(w == 0.0 ? kEpsilonWeight : w);
  }
  p.data = select_rows(data, p.included);
  return p;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double delta = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    delta = std::max(delta, std::abs(a.data()[k] - b.data()[k]));
  }
  return delta;
}

FcmModel iterate(const Prepared& p, std::size_t full_rows, const FcmConfig& cfg,
                 DenseMatrix centers, Rng& rng, const FcmObserver& observer) {
  const double q = cfg.fuzziness;
  FcmModel model;
  model.fuzziness = q;
  model.excluded_rows = p.excluded;

  DenseMatrix u = update_memberships(p.data, centers, p.weights, q);
  model.objective_trace.push_back(objective(p.data, u, centers, p.weights, q));

  for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
    auto update = update_centers(p.data, u, p.weights, q, rng);
    model.center_resets += update.reseeded.size();
    centers = std::move(update.centers);

    DenseMatrix next = update_memberships(p.data, centers, p.weights, q);
    const double delta = max_abs_diff(next, u);
    u = std::move(next);
    const double j = objective(p.data, u, centers, p.weights, q);
    model.objective_trace.push_back(j);
    model.iterations = iter;
    if (observer) observer(iter, u, centers, j);
    if (delta < cfg.tolerance) {
      model.converged = true;
      break;
    }
  }

  model.centers = std::move(centers);
  model.memberships = DenseMatrix(full_rows, cfg.clusters);
  for (std::size_t r = 0; r < p.included.size(); ++r) {
    std::copy(u.row(r).begin(), u.row(r).end(), model.memberships.row(p.included[r]).begin());
  }
  return model;
}

}  // namespace

FcmModel run_fcm(const DenseMatrix& data, std::span<const double> weights,
                 const FcmConfig& cfg, const FcmObserver& observer) {
  cfg.validate();
  const Prepared p = prepare(data, weights, cfg.zero_weight);
  if (p.included.size() < cfg.clusters) {
    throw RuntimeError("fewer sessions than clusters");
  }
  Rng rng(cfg.seed);
  DenseMatrix start = initial_centers(p.data, cfg.clusters, rng);
  return iterate(p, data.rows(), cfg, std::move(start), rng, observer);
}

FcmModel run_fcm(const SessionMatrix& matrix, const FcmConfig& cfg) {
  return run_fcm(matrix.dense(), matrix.weights, cfg);
}

FcmModel run_fcm_from(const DenseMatrix& data, std::span<const double> weights,
                      const FcmConfig& cfg, const DenseMatrix& start_centers,
                      const FcmObserver& observer) {
  cfg.validate();
  if (start_centers.rows() != cfg.clusters || start_centers.cols() != data.cols()) {
    throw ValidationError("start centers do not match cluster count / dimension");
  }
  const Prepared p = prepare(data, weights, cfg.zero_weight);
  if (p.included.size() < cfg.clusters) {
    throw RuntimeError("fewer sessions than clusters");
  }
  Rng rng(cfg.seed);
  return iterate(p, data.rows(), cfg, start_centers, rng, observer);
}

void SweepConfig::validate() const {
  if (c_min < 2) throw ValidationError("c_min must be >= 2");
  if (c_max < c_min) throw ValidationError("c_max must be >= c_min");
  if (restarts == 0) throw ValidationError("restarts must be >= 1");
  FcmConfig probe = fcm;
  probe.clusters = c_min;
  probe.validate();
}

const ValidityEntry* ValidityReport::find(std::size_t clusters) const {
  for (const auto& e : entries) {
    if (e.clusters == clusters) return &e;
  }
  return nullptr;
}

std::uint64_t sweep_run_seed(std::uint64_t root, std::size_t clusters, std::size_t restart) {
  return derive_seed(root, clusters, restart);
}

ValidityReport sweep_clusters(const DenseMatrix& data, std::span<const double> weights,
                              const SweepConfig& cfg) {
  cfg.validate();
  const Prepared p = prepare(data, weights, cfg.fcm.zero_weight);
  const std::size_t count = cfg.c_max - cfg.c_min + 1;

  std::vector<ValidityEntry> entries(count);
  std::vector<std::optional<FcmModel>> best(count);

  auto evaluate = [&](std::size_t slot) {
    const std::size_t c = cfg.c_min + slot;
    ValidityEntry& entry = entries[slot];
    entry.clusters = c;
    std::vector<std::string> failures;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
      FcmConfig run = cfg.fcm;
      run.clusters = c;
      run.seed = sweep_run_seed(cfg.seed, c, r);
      try {
        FcmModel model = run_fcm(data, weights, run);
        if (!best[slot] || model.objective() < best[slot]->objective()) {
          best[slot] = std::move(model);
          entry.best_restart = r;
        }
      } catch (const Error& e) {
        failures.emplace_back(e.what());
      }
    }
    if (!best[slot]) {
      entry.error = failures.empty() ? "no successful run" : failures.front();
      return;
    }
    entry.objective = best[slot]->objective();
    const DenseMatrix u = select_rows(best[slot]->memberships, p.included);
    try {
      entry.xie_beni = cfg.validity_weighted
                           ? xie_beni(p.data, u, best[slot]->centers, p.weights)
                           : xie_beni(p.data, u, best[slot]->centers);
      entry.ok = true;
    } catch (const Error& e) {
      entry.error = e.what();
    }
  };

  std::size_t threads = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
  threads = std::clamp<std::size_t>(threads, 1, count);
  if (threads == 1) {
    for (std::size_t slot = 0; slot < count; ++slot) evaluate(slot);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t slot = next++; slot < count; slot = next++) evaluate(slot);
      });
    }
  }

  ValidityReport report;
  report.entries = std::move(entries);
  std::optional<std::size_t> chosen;
  for (std::size_t slot = 0; slot < count; ++slot) {
    const auto& e = report.entries[slot];
    if (!e.ok) continue;
    if (!chosen || e.xie_beni < report.entries[*chosen].xie_beni) chosen = slot;
  }
  if (!chosen) {
    throw RuntimeError("no cluster count in [" + std::to_string(cfg.c_min) + ", " +
                       std::to_string(cfg.c_max) + "] produced a valid clustering");
  }
  report.chosen_c = report.entries[*chosen].clusters;
  report.chosen_model = std::move(best[*chosen]);
  return report;
}

ValidityReport sweep_clusters(const SessionMatrix& matrix, const SweepConfig& cfg) {
  return sweep_clusters(matrix.dense(), matrix.weights, cfg);
}

std::vector<Profile> extract_profiles(const FcmModel& model, const SessionMatrix& matrix,
                                      std::size_t top_k, double membership_threshold) {
  const std::size_t c = model.centers.rows();
  const auto included = model.included_rows();
  std::vector<Profile> profiles;
  profiles.reserve(c);
  for (std::size_t j = 0; j < c; ++j) {
    Profile profile;
    profile.cluster = j;
    const auto center = model.centers.row(j);
    profile.center.assign(center.begin(), center.end());

    std::vector<std::size_t> columns(center.size());
    std::iota(columns.begin(), columns.end(), std::size_t{0});
    std::stable_sort(columns.begin(), columns.end(),
                     [&](std::size_t a, std::size_t b) { return center[a] > center[b]; });
    columns.resize(std::min(top_k, columns.size()));
    profile.top_columns = columns;
    for (std::size_t col : columns) {
      profile.top_urls.push_back(col < matrix.catalog.size() ? matrix.catalog[col] : 0);
    }

    for (std::size_t row : included) {
      const double u = model.memberships(row, j);
      if (u >= membership_threshold) profile.members.push_back({row, u});
    }
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

}  // namespace wum
