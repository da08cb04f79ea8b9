#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "support/helpers.hpp"
#include "wum/fcm.hpp"
#include "wum/synth.hpp"

using testing_util::from_rows;
using testing_util::to_rows;

namespace {

wum::DenseMatrix column(std::vector<double> values) {
  oracle::Matrix rows;
  for (double v : values) rows.push_back({v});
  return from_rows(rows);
}

wum::DenseMatrix random_matrix(wum::Rng& rng, std::size_t m, std::size_t n, double scale = 10.0) {
  wum::DenseMatrix x(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < n; ++k) x(i, k) = rng.uniform(-scale, scale);
  }
  return x;
}

std::vector<double> random_weights(wum::Rng& rng, std::size_t m) {
  std::vector<double> w(m);
  for (auto& v : w) v = rng.uniform(0.05, 1.0);
  return w;
}

struct Snapshot {
  wum::DenseMatrix u;
  wum::DenseMatrix v;
  double j = 0.0;
};

std::vector<Snapshot> record_run(const wum::DenseMatrix& x, const std::vector<double>& w,
                                 const wum::FcmConfig& cfg) {
  std::vector<Snapshot> trace;
  wum::run_fcm(x, w, cfg, [&](std::size_t, const wum::DenseMatrix& u, const wum::DenseMatrix& v,
                              double j) { trace.push_back({u, v, j}); });
  return trace;
}

double max_diff(const wum::DenseMatrix& a, const wum::DenseMatrix& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) d = std::max(d, std::abs(a.data()[k] - b.data()[k]));
  return d;
}

}  // namespace

TEST(WeightedDistance, Examples) {
  const std::vector<double> a{1, 0}, o{0, 0}, b{1, 1};
  EXPECT_EQ(wum::weighted_distance_sq(a, o, 1.0), 1.0);
  EXPECT_EQ(wum::weighted_distance_sq(b, b, 3.0), 0.0);
  EXPECT_EQ(wum::weighted_distance_sq(b, o, 0.5), 1.0);
  const std::vector<double> three{1, 2, 3};
  EXPECT_THROW(wum::weighted_distance_sq(a, three, 1.0), wum::ValidationError);
}

TEST(UpdateMemberships, Equidistant) {
  const auto x = column({5});
  const auto v = column({0, 10});
  for (double q : {1.2, 2.0, 3.5}) {
    const auto u = wum::update_memberships(x, v, std::vector<double>{1.0}, q);
    EXPECT_DOUBLE_EQ(u(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(u(0, 1), 0.5);
  }
}

TEST(UpdateMemberships, SingularityGoesToFirstCoincidentCenter) {
  const auto x = column({3});
  const auto u = wum::update_memberships(x, column({3, 7, 9}), std::vector<double>{1.0}, 2.0);
  EXPECT_EQ(u(0, 0), 1.0);
  EXPECT_EQ(u(0, 1), 0.0);
  EXPECT_EQ(u(0, 2), 0.0);
  const auto tie = wum::update_memberships(x, column({1, 3, 3}), std::vector<double>{1.0}, 2.0);
  EXPECT_EQ(tie(0, 0), 0.0);
  EXPECT_EQ(tie(0, 1), 1.0);
  EXPECT_EQ(tie(0, 2), 0.0);
}

TEST(UpdateMemberships, HandEvaluatedOneDimensional) {
  const auto u = wum::update_memberships(column({2}), column({0, 10}), std::vector<double>{1.0}, 2.0);
  EXPECT_NEAR(u(0, 0), 16.0 / 17.0, 1e-15);
  EXPECT_NEAR(u(0, 1), 1.0 / 17.0, 1e-15);
}

TEST(UpdateMemberships, WeightIndependence) {
  wum::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_matrix(rng, 30, 4);
    const auto v = random_matrix(rng, 5, 4);
    const auto w = random_weights(rng, 30);
    const auto weighted = wum::update_memberships(x, v, w, 2.0);
    const auto plain = wum::update_memberships(x, v, std::vector<double>(30, 1.0), 2.0);
    EXPECT_LE(max_diff(weighted, plain), 1e-14);
  }
}

TEST(UpdateCenters, SingleClusterMean) {
  const auto x = from_rows({{1, 2}, {3, 4}, {5, 9}});
  wum::Rng rng(1);
  const auto r = wum::update_centers(x, wum::DenseMatrix(3, 1, 1.0), std::vector<double>(3, 1.0), 2.0, rng);
  EXPECT_DOUBLE_EQ(r.centers(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(r.centers(0, 1), 5.0);
  EXPECT_TRUE(r.reseeded.empty());
}

TEST(UpdateCenters, WeightedMean) {
  wum::Rng rng(1);
  const auto r = wum::update_centers(column({0, 4}), wum::DenseMatrix(2, 1, 1.0),
                                     std::vector<double>{1.0, 3.0}, 2.0, rng);
  EXPECT_DOUBLE_EQ(r.centers(0, 0), 3.0);
}

TEST(UpdateCenters, CrispMemberships) {
  wum::Rng rng(1);
  const auto u = from_rows({{1, 0}, {0, 1}});
  const auto r = wum::update_centers(column({0, 10}), u, std::vector<double>{1.0, 1.0}, 2.0, rng);
  EXPECT_EQ(r.centers(0, 0), 0.0);
  EXPECT_EQ(r.centers(1, 0), 10.0);
}

TEST(UpdateCenters, EmptyClusterIsReseeded) {
  wum::Rng rng(1);
  const auto u = from_rows({{1, 0}, {1, 0}});
  const auto x = column({2, 8});
  const auto r = wum::update_centers(x, u, std::vector<double>{1.0, 1.0}, 2.0, rng);
  ASSERT_EQ(r.reseeded, (std::vector<std::size_t>{1}));
  EXPECT_TRUE(r.centers(1, 0) == 2.0 || r.centers(1, 0) == 8.0);
}

TEST(Objective, Examples) {
  const auto x = column({0, 10});
  const auto u = from_rows({{1, 0}, {0, 1}});
  EXPECT_EQ(wum::objective(x, u, column({0, 10}), std::vector<double>{1, 1}, 2.0), 0.0);
  const auto soft = from_rows({{0.7, 0.3}, {0.4, 0.6}});
  EXPECT_EQ(wum::objective(x, soft, column({3, 5}), std::vector<double>{0, 0}, 2.0), 0.0);
}

TEST(Objective, MatchesDoubleLoop) {
  wum::Rng rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    const auto x = random_matrix(rng, 3, 2);
    const auto v = random_matrix(rng, 2, 2);
    const auto w = random_weights(rng, 3);
    const double q = rng.uniform(1.1, 3.0);
    const auto u = wum::update_memberships(x, v, w, q);
    const double expected = oracle::objective(to_rows(x), w, to_rows(u), to_rows(v), q);
    EXPECT_NEAR(wum::objective(x, u, v, w, q), expected, 1e-12 * std::max(1.0, expected));
  }
}

TEST(XieBeni, Examples) {
  const auto x = column({0, 0.1, 10, 10.1});
  const auto crisp2 = from_rows({{1, 0}, {1, 0}, {0, 1}, {0, 1}});
  const double s2 = wum::xie_beni(x, crisp2, column({0.05, 10.05}));
  EXPECT_NEAR(s2, 2.5e-5, 1e-15);

  const auto crisp3 = from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 1}});
  const double s3 = wum::xie_beni(x, crisp3, column({0, 0.1, 10.05}));
  EXPECT_NEAR(s3, 0.125, 1e-12);
  EXPECT_GT(s3, s2);

  const auto exact = column({0, 0, 10, 10});
  EXPECT_EQ(wum::xie_beni(exact, crisp2, column({0, 10})), 0.0);

  EXPECT_THROW(wum::xie_beni(x, crisp2, column({4, 4})), wum::RuntimeError);
}

TEST(XieBeni, MatchesOracleAndWeightedVariant) {
  wum::Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_matrix(rng, 12, 3);
    const auto v = random_matrix(rng, 3, 3);
    const auto u = wum::update_memberships(x, v, std::vector<double>(12, 1.0), 2.0);
    const double s = wum::xie_beni(x, u, v);
    EXPECT_NEAR(s, oracle::xie_beni(to_rows(x), to_rows(u), to_rows(v)), 1e-12 * s);
    EXPECT_DOUBLE_EQ(wum::xie_beni(x, u, v, std::vector<double>(12, 1.0)), s);
    EXPECT_LT(wum::xie_beni(x, u, v, std::vector<double>(12, 0.5)), s);
  }
}

TEST(FcmConfig, Validation) {
  wum::FcmConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.fuzziness = 1.0;
  EXPECT_THROW(cfg.validate(), wum::ValidationError);
  cfg = {};
  cfg.tolerance = 0.0;
  EXPECT_THROW(cfg.validate(), wum::ValidationError);
  cfg = {};
  cfg.clusters = 1;
  EXPECT_THROW(cfg.validate(), wum::ValidationError);
  cfg = {};
  cfg.max_iterations = 0;
  EXPECT_THROW(cfg.validate(), wum::ValidationError);
  EXPECT_EQ(wum::parse_zero_weight_policy("epsilon"), wum::ZeroWeightPolicy::epsilon);
  EXPECT_THROW(wum::parse_zero_weight_policy("drop"), wum::ValidationError);
}

TEST(RunFcm, TwoPointPairs) {
  const auto x = column({0, 0, 10, 10});
  wum::FcmConfig cfg;
  cfg.seed = 17;
  const auto model = wum::run_fcm(x, std::vector<double>(4, 1.0), cfg);
  EXPECT_TRUE(model.converged);
  std::vector<double> centers = {model.centers(0, 0), model.centers(1, 0)};
  std::sort(centers.begin(), centers.end());
  EXPECT_NEAR(centers[0], 0.0, 0.5);
  EXPECT_NEAR(centers[1], 10.0, 0.5);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_GT(std::max(model.memberships(i, 0), model.memberships(i, 1)), 0.95);
  }
}

TEST(RunFcm, DegenerateIdenticalPoints) {
  const auto x = column({4, 4});
  wum::FcmConfig cfg;
  wum::FcmModel model;
  ASSERT_NO_THROW(model = wum::run_fcm(x, std::vector<double>(2, 1.0), cfg));
  EXPECT_EQ(model.centers(0, 0), 4.0);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(model.memberships(i, 0) + model.memberships(i, 1), 1.0, 1e-12);
  }
  EXPECT_THROW(wum::xie_beni(x, model.memberships, model.centers), wum::RuntimeError);
}

TEST(RunFcm, Deterministic) {
  wum::Rng rng(5);
  const auto x = random_matrix(rng, 60, 5);
  const auto w = random_weights(rng, 60);
  wum::FcmConfig cfg;
  cfg.clusters = 4;
  cfg.seed = 99;
  const auto a = wum::run_fcm(x, w, cfg);
  const auto b = wum::run_fcm(x, w, cfg);
  EXPECT_EQ(a.memberships, b.memberships);
  EXPECT_EQ(a.centers, b.centers);
  EXPECT_EQ(a.objective_trace, b.objective_trace);
}

TEST(RunFcm, FewerSessionsThanClusters) {
  wum::FcmConfig cfg;
  cfg.clusters = 3;
  EXPECT_THROW(wum::run_fcm(column({1, 2, 3}), std::vector<double>{1, 0, 0}, cfg), wum::RuntimeError);
  EXPECT_THROW(wum::run_fcm(column({1, 2}), std::vector<double>{1, 1}, cfg), wum::RuntimeError);
  EXPECT_THROW(wum::run_fcm(column({1, 2, 3}), std::vector<double>{1, 1}, cfg), wum::ValidationError);
  EXPECT_THROW(wum::run_fcm(column({1, 2, 3}), std::vector<double>{1, -1, 1}, cfg),
               wum::ValidationError);
}

TEST(RunFcm, MaxIterationsCap) {
  wum::Rng rng(2);
  const auto x = random_matrix(rng, 50, 3);
  wum::FcmConfig cfg;
  cfg.clusters = 5;
  cfg.max_iterations = 3;
  cfg.tolerance = 1e-300;
  const auto model = wum::run_fcm(x, std::vector<double>(50, 1.0), cfg);
  EXPECT_EQ(model.iterations, 3u);
  EXPECT_FALSE(model.converged);
  EXPECT_EQ(model.objective_trace.size(), 4u);
}

class FcmProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(FcmProperties, RowStochasticAndDescent) {
  wum::Rng rng(GetParam());
  const std::size_t m = 20 + rng.index(100);
  const std::size_t n = 1 + rng.index(10);
  const auto x = random_matrix(rng, m, n);
  const auto w = random_weights(rng, m);
  wum::FcmConfig cfg;
  cfg.clusters = 2 + rng.index(5);
  cfg.fuzziness = rng.uniform(1.3, 3.0);
  cfg.seed = GetParam();
  std::size_t seen = 0;
  wum::run_fcm(x, w, cfg, [&](std::size_t, const wum::DenseMatrix& u, const wum::DenseMatrix&, double) {
    ++seen;
    for (std::size_t i = 0; i < u.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < u.cols(); ++j) {
        EXPECT_GE(u(i, j), 0.0);
        EXPECT_LE(u(i, j), 1.0);
        s += u(i, j);
      }
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
  });
  EXPECT_GT(seen, 0u);
  const auto model = wum::run_fcm(x, w, cfg);
  for (std::size_t t = 1; t < model.objective_trace.size(); ++t) {
    EXPECT_LE(model.objective_trace[t], model.objective_trace[t - 1] + 1e-12);
  }
}

TEST_P(FcmProperties, WeightScalingInvariance) {
  wum::Rng rng(GetParam() + 50);
  const auto x = random_matrix(rng, 40, 3);
  const auto w = random_weights(rng, 40);
  wum::FcmConfig cfg;
  cfg.clusters = 3;
  cfg.seed = GetParam();
  const auto base = record_run(x, w, cfg);
  for (double alpha : {0.1, 3.0, 10.0}) {
    std::vector<double> scaled(w);
    for (auto& v : scaled) v *= alpha;
    const auto run = record_run(x, scaled, cfg);
    ASSERT_EQ(run.size(), base.size());
    for (std::size_t t = 0; t < run.size(); ++t) {
      EXPECT_LE(max_diff(run[t].u, base[t].u), 1e-12);
      EXPECT_LE(max_diff(run[t].v, base[t].v), 1e-12);
      EXPECT_NEAR(run[t].j, alpha * base[t].j, 1e-9 * std::max(1.0, alpha * base[t].j));
    }
  }
}

TEST_P(FcmProperties, OneIterationMatchesOracle) {
  wum::Rng rng(GetParam() + 1000);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = 2 + rng.index(4);
    const std::size_t n = 1 + rng.index(2);
    const auto x = random_matrix(rng, m, n);
    const auto w = random_weights(rng, m);
    const auto v0 = random_matrix(rng, 2, n);
    wum::FcmConfig cfg;
    cfg.max_iterations = 1;
    cfg.fuzziness = rng.uniform(1.2, 3.0);
    std::vector<Snapshot> trace;
    wum::run_fcm_from(x, w, cfg, v0, [&](std::size_t, const wum::DenseMatrix& u,
                                         const wum::DenseMatrix& v, double j) {
      trace.push_back({u, v, j});
    });
    ASSERT_EQ(trace.size(), 1u);
    const auto X = to_rows(x);
    const auto u0 = oracle::memberships(X, w, to_rows(v0), cfg.fuzziness);
    const auto v1 = oracle::centers(X, w, u0, cfg.fuzziness);
    const auto u1 = oracle::memberships(X, w, v1, cfg.fuzziness);
    EXPECT_LE(max_diff(trace[0].v, from_rows(v1)), 1e-10);
    EXPECT_LE(max_diff(trace[0].u, from_rows(u1)), 1e-10);
    EXPECT_NEAR(trace[0].j, oracle::objective(X, w, u1, v1, cfg.fuzziness), 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, FcmProperties, ::testing::Range<std::uint64_t>(1, 11));

TEST(RunFcm, HardRemovalEquivalence) {
  wum::Rng rng(31);
  const auto x = random_matrix(rng, 50, 4);
  auto w = random_weights(rng, 50);
  for (std::size_t i = 0; i < 50; i += 3) w[i] = 0.0;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < 50; ++i) {
    if (w[i] != 0.0) kept.push_back(i);
  }
  wum::DenseMatrix reduced(kept.size(), 4);
  std::vector<double> reduced_w;
  for (std::size_t r = 0; r < kept.size(); ++r) {
    std::copy(x.row(kept[r]).begin(), x.row(kept[r]).end(), reduced.row(r).begin());
    reduced_w.push_back(w[kept[r]]);
  }
  wum::FcmConfig cfg;
  cfg.clusters = 3;
  cfg.seed = 4;
  const auto full = wum::run_fcm(x, w, cfg);
  const auto small = wum::run_fcm(reduced, reduced_w, cfg);
  EXPECT_EQ(full.centers, small.centers);
  EXPECT_EQ(full.objective_trace, small.objective_trace);
  for (std::size_t r = 0; r < kept.size(); ++r) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(full.memberships(kept[r], j), small.memberships(r, j));
  }
  for (std::size_t i : full.excluded_rows) {
    EXPECT_EQ(w[i], 0.0);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(full.memberships(i, j), 0.0);
  }
  EXPECT_EQ(full.excluded_rows.size(), 50 - kept.size());
}

TEST(RunFcm, EpsilonPolicyKeepsZeroWeightRows) {
  wum::Rng rng(32);
  const auto x = random_matrix(rng, 20, 2);
  auto w = random_weights(rng, 20);
  w[0] = 0.0;
  wum::FcmConfig cfg;
  cfg.zero_weight = wum::ZeroWeightPolicy::epsilon;
  const auto model = wum::run_fcm(x, w, cfg);
  EXPECT_TRUE(model.excluded_rows.empty());
  EXPECT_NEAR(model.memberships(0, 0) + model.memberships(0, 1), 1.0, 1e-12);
}

TEST(RunFcm, NearCrispLimit) {
  const auto blobs = wum::synth::planted_blobs(4, 20, 20.0, 1.0, 6);
  wum::FcmConfig cfg;
  cfg.clusters = 4;
  cfg.fuzziness = 1.05;
  wum::SweepConfig sweep;
  sweep.c_min = sweep.c_max = 4;
  sweep.fcm = cfg;
  sweep.seed = 6;
  const auto report = wum::sweep_clusters(blobs.points, std::vector<double>(80, 1.0), sweep);
  ASSERT_TRUE(report.chosen_model.has_value());
  const auto& u = report.chosen_model->memberships;
  for (std::size_t i = 0; i < u.rows(); ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j < 4; ++j) best = std::max(best, u(i, j));
    EXPECT_GT(best, 0.99);
  }
}

TEST(RunFcm, PermutationEquivariance) {
  wum::Rng rng(40);
  const auto x = random_matrix(rng, 30, 3);
  const auto w = random_weights(rng, 30);
  const auto v0 = random_matrix(rng, 3, 3);
  std::vector<std::size_t> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
  wum::DenseMatrix px(30, 3);
  std::vector<double> pw(30);
  for (std::size_t i = 0; i < 30; ++i) {
    std::copy(x.row(perm[i]).begin(), x.row(perm[i]).end(), px.row(i).begin());
    pw[i] = w[perm[i]];
  }
  wum::FcmConfig cfg;
  cfg.clusters = 3;
  const auto a = wum::run_fcm_from(x, w, cfg, v0);
  const auto b = wum::run_fcm_from(px, pw, cfg, v0);
  EXPECT_EQ(a.iterations, b.iterations);
  for (std::size_t i = 0; i < 30; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(b.memberships(i, j), a.memberships(perm[i], j), 1e-9);
  }
  EXPECT_LE(max_diff(a.centers, b.centers), 1e-9);
}

TEST(RunFcm, PartitionColumnSums) {
  const auto blobs = wum::synth::planted_blobs(3, 15, 12.0, 1.0, 2);
  wum::FcmConfig cfg;
  cfg.clusters = 3;
  cfg.seed = 2;
  const auto model = wum::run_fcm(blobs.points, std::vector<double>(45, 1.0), cfg);
  ASSERT_TRUE(model.converged);
  for (std::size_t j = 0; j < 3; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < 45; ++i) col += model.memberships(i, j);
    EXPECT_GT(col, 0.0);
    EXPECT_LT(col, 45.0);
  }
}

TEST(InitialCenters, DistinctRowsWhenAvailable) {
  const auto x = column({1, 1, 1, 2, 3});
  wum::Rng rng(9);
  const auto v = wum::initial_centers(x, 3, rng);
  std::vector<double> got = {v(0, 0), v(1, 0), v(2, 0)};
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<double>{1, 2, 3}));
}

TEST(Sweep, RecoversFourBlobs) {
  const auto blobs = wum::synth::planted_blobs(4, 20, 20.0, 1.0, 11);
  wum::SweepConfig cfg;
  cfg.c_min = 2;
  cfg.c_max = 8;
  cfg.seed = 11;
  const auto report = wum::sweep_clusters(blobs.points, std::vector<double>(80, 1.0), cfg);
  EXPECT_EQ(report.chosen_c, 4u);
  ASSERT_EQ(report.entries.size(), 7u);
  for (const auto& e : report.entries) {
    EXPECT_TRUE(e.ok);
    EXPECT_GT(e.xie_beni, 0.0);
    EXPECT_LT(e.best_restart, cfg.restarts);
  }
  ASSERT_TRUE(report.chosen_model.has_value());
  EXPECT_EQ(report.chosen_model->centers.rows(), 4u);
}

TEST(Sweep, SingleValueRangeAndDeterminism) {
  const auto blobs = wum::synth::planted_blobs(3, 10, 10.0, 1.0, 12);
  wum::SweepConfig cfg;
  cfg.c_min = cfg.c_max = 5;
  cfg.seed = 3;
  const std::vector<double> w(30, 1.0);
  const auto a = wum::sweep_clusters(blobs.points, w, cfg);
  EXPECT_EQ(a.chosen_c, 5u);

  cfg.c_min = 2;
  cfg.c_max = 6;
  cfg.threads = 1;
  const auto serial = wum::sweep_clusters(blobs.points, w, cfg);
  cfg.threads = 4;
  const auto parallel = wum::sweep_clusters(blobs.points, w, cfg);
  ASSERT_EQ(serial.entries.size(), parallel.entries.size());
  for (std::size_t k = 0; k < serial.entries.size(); ++k) {
    EXPECT_EQ(serial.entries[k].objective, parallel.entries[k].objective);
    EXPECT_EQ(serial.entries[k].xie_beni, parallel.entries[k].xie_beni);
    EXPECT_EQ(serial.entries[k].best_restart, parallel.entries[k].best_restart);
  }
  EXPECT_EQ(serial.chosen_c, parallel.chosen_c);
  EXPECT_EQ(serial.chosen_model->memberships, parallel.chosen_model->memberships);
}

TEST(Sweep, RecordsFailedClusterCounts) {
  const auto x = column({0, 1, 10, 11});
  wum::SweepConfig cfg;
  cfg.c_min = 2;
  cfg.c_max = 3;
  const auto ok = wum::sweep_clusters(x, std::vector<double>(4, 1.0), cfg);
  EXPECT_TRUE(ok.find(2)->ok);

  const auto too_few = wum::sweep_clusters(x, std::vector<double>{1, 1, 0, 0}, cfg);
  ASSERT_NE(too_few.find(3), nullptr);
  EXPECT_FALSE(too_few.find(3)->ok);
  EXPECT_EQ(too_few.find(3)->error, "fewer sessions than clusters");
  EXPECT_EQ(too_few.chosen_c, 2u);

  cfg.c_min = 3;
  cfg.c_max = 2;
  EXPECT_THROW(cfg.validate(), wum::ValidationError);
}

TEST(Sweep, RunSeedsAreDistinct) {
  std::set<std::uint64_t> seeds;
  for (std::size_t c = 2; c <= 60; ++c) {
    for (std::size_t r = 0; r < 5; ++r) seeds.insert(wum::sweep_run_seed(7, c, r));
  }
  EXPECT_EQ(seeds.size(), 59u * 5u);
}

TEST(Profiles, TopUrlsAndThresholds) {
  wum::SessionMatrix matrix;
  matrix.columns = 3;
  matrix.catalog = {10, 20, 30};
  matrix.rows = {{{0, 1.0}}, {{2, 1.0}}};
  matrix.weights = {1.0, 1.0};
  wum::FcmModel model;
  model.centers = from_rows({{0.9, 0.1, 0.8}, {0.2, 0.7, 0.3}});
  model.memberships = from_rows({{0.6, 0.4}, {0.3, 0.7}});

  const auto p = wum::extract_profiles(model, matrix, 2, 0.5);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].top_columns, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(p[0].top_urls, (std::vector<wum::UrlId>{10, 30}));
  ASSERT_EQ(p[0].members.size(), 1u);
  EXPECT_EQ(p[0].members[0].row, 0u);

  const auto all = wum::extract_profiles(model, matrix, 2, 0.0);
  for (const auto& profile : all) EXPECT_EQ(profile.members.size(), 2u);
  const auto none = wum::extract_profiles(model, matrix, 2, 1.01);
  for (const auto& profile : none) EXPECT_TRUE(profile.members.empty());
}
