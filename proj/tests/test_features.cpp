#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "support/helpers.hpp"
#include "wum/features.hpp"
#include "wum/synth.hpp"

using testing_util::make_session;

TEST(SessionWeight, TableValuesExact) {
  const wum::WeightConfig cfg{1, 6};
  const double expected[] = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  for (std::size_t n = 1; n <= 6; ++n) {
    EXPECT_EQ(wum::assign_session_weight(n, cfg), expected[n - 1]) << n;
  }
  EXPECT_EQ(wum::assign_session_weight(100, cfg), 1.0);
  EXPECT_EQ(wum::assign_session_weight(0, cfg), 0.0);
}

TEST(SessionWeight, MonotonePiecewiseLinear) {
  for (std::size_t lb = 0; lb < 5; ++lb) {
    for (std::size_t ub = lb + 1; ub < 12; ++ub) {
      const wum::WeightConfig cfg{lb, ub};
      EXPECT_EQ(wum::assign_session_weight(lb, cfg), 0.0);
      EXPECT_EQ(wum::assign_session_weight(ub, cfg), 1.0);
      double prev = 0.0;
      for (std::size_t n = 0; n < 20; ++n) {
        const double w = wum::assign_session_weight(n, cfg);
        EXPECT_GE(w, prev);
        EXPECT_GE(w, 0.0);
        EXPECT_LE(w, 1.0);
        EXPECT_DOUBLE_EQ(w, oracle::session_weight(n, lb, ub));
        prev = w;
      }
    }
  }
}

TEST(SessionWeight, InvalidBounds) {
  EXPECT_THROW((wum::WeightConfig{6, 6}.validate()), wum::ValidationError);
  EXPECT_THROW((wum::WeightConfig{6, 1}.validate()), wum::ValidationError);
  EXPECT_NO_THROW((wum::WeightConfig{0, 1}.validate()));
}

TEST(SessionWeight, AssignsFromUniqueCount) {
  std::vector<wum::Session> sessions = {make_session({1, 1, 1, 1}), make_session({1, 2, 3})};
  wum::assign_weights(sessions, {1, 6});
  EXPECT_EQ(sessions[0].weight, 0.0);
  EXPECT_EQ(sessions[1].weight, 0.4);
}

TEST(ComputeSupport, Counting) {
  const std::vector<wum::Session> sessions = {make_session({1, 1, 2}), make_session({2, 3})};
  const auto s = wum::compute_support(sessions);
  EXPECT_EQ(s.access_count, (std::map<wum::UrlId, std::size_t>{{1, 2}, {2, 2}, {3, 1}}));
  EXPECT_EQ(s.session_support, (std::map<wum::UrlId, std::size_t>{{1, 1}, {2, 2}, {3, 1}}));
  EXPECT_EQ(s.support(99), 0u);
  EXPECT_EQ(s.access(99), 0u);
  EXPECT_TRUE(wum::compute_support({}).access_count.empty());
}

TEST(ComputeSupport, MatchesRecountOnPlantedCorpus) {
  const auto sessions = wum::synth::planted_sessions({}, 3);
  const auto s = wum::compute_support(sessions);
  std::map<wum::UrlId, std::size_t> access, support;
  for (const auto& sess : sessions) {
    for (const auto& [id, n] : sess.url_freqs) {
      access[id] += n;
      ++support[id];
    }
  }
  EXPECT_EQ(s.access_count, access);
  EXPECT_EQ(s.session_support, support);
  for (const auto& [id, n] : s.session_support) EXPECT_LE(n, s.access(id));
}

TEST(FilterLowSupport, RemovesUrlEverywhere) {
  std::vector<wum::Session> sessions;
  for (int i = 0; i < 5; ++i) sessions.push_back(make_session({1}));
  sessions[0] = make_session({1, 2});
  const auto f = wum::filter_low_support(sessions, 2);
  EXPECT_EQ(f.retained, (std::set<wum::UrlId>{1}));
  EXPECT_EQ(f.sessions[0].url_freqs.count(2), 0u);
  EXPECT_EQ(f.sessions[0].unique_count, 1u);
}

TEST(FilterLowSupport, ThresholdOneIsIdentity) {
  const std::vector<wum::Session> sessions = {make_session({1, 2, 2}), make_session({3})};
  const auto f = wum::filter_low_support(sessions, 1);
  ASSERT_EQ(f.sessions.size(), 2u);
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    EXPECT_EQ(f.sessions[i].url_freqs, sessions[i].url_freqs);
    EXPECT_EQ(f.sessions[i].unique_count, sessions[i].unique_count);
  }
  EXPECT_EQ(f.retained, (std::set<wum::UrlId>{1, 2, 3}));
  EXPECT_THROW(wum::filter_low_support(sessions, 0), wum::ValidationError);
}

TEST(FilterLowSupport, EmptiedSessionsAreKept) {
  const std::vector<wum::Session> sessions = {make_session({9}), make_session({1}), make_session({1})};
  const auto f = wum::filter_low_support(sessions, 2);
  ASSERT_EQ(f.sessions.size(), 3u);
  EXPECT_TRUE(f.sessions[0].url_freqs.empty());
  EXPECT_EQ(f.sessions[0].unique_count, 0u);
}

TEST(FilterLowSupport, RetainsOnlySharedUrls) {
  // n URLs of which exactly k appear in a single session.
  const std::size_t shared = 20, singletons = 37;
  std::vector<wum::Session> sessions;
  for (wum::UrlId id = 1; id <= shared; ++id) {
    sessions.push_back(make_session({id, static_cast<wum::UrlId>(1 + id % shared)}));
  }
  for (std::size_t k = 0; k < singletons; ++k) {
    sessions[k % sessions.size()].raw_requests.push_back(static_cast<wum::UrlId>(1000 + k));
    sessions[k % sessions.size()] = wum::dedup_session(sessions[k % sessions.size()]);
  }
  const auto f = wum::filter_low_support(sessions, 2);
  EXPECT_EQ(f.retained.size(), shared);
  const auto s = wum::compute_support(f.sessions);
  for (const auto& [id, n] : s.session_support) EXPECT_GE(n, 2u);
}

TEST(FilterLowAccess, DropsRareUrls) {
  const std::vector<wum::Session> sessions = {make_session({1, 1, 2}), make_session({3, 4}),
                                              make_session({4})};
  const auto f = wum::filter_low_access(sessions, 2);
  EXPECT_EQ(f.retained, (std::set<wum::UrlId>{1, 4}));
  EXPECT_EQ(f.sessions[0].url_freqs, (std::map<wum::UrlId, std::uint32_t>{{1, 2}}));
}

TEST(Vectorize, BinaryAndFrequencyRows) {
  const std::vector<wum::Session> sessions = {make_session({1, 1, 1, 4}), make_session({})};
  const std::set<wum::UrlId> catalog = {1, 4, 9};
  const auto b = wum::vectorize(sessions, catalog, wum::Scheme::binary);
  EXPECT_EQ(b.catalog, (std::vector<wum::UrlId>{1, 4, 9}));
  const auto bd = b.dense();
  EXPECT_EQ(std::vector<double>(bd.row(0).begin(), bd.row(0).end()), (std::vector<double>{1, 1, 0}));
  EXPECT_EQ(std::vector<double>(bd.row(1).begin(), bd.row(1).end()), (std::vector<double>{0, 0, 0}));

  const auto f = wum::vectorize(sessions, catalog, wum::Scheme::frequency);
  const auto fd = f.dense();
  EXPECT_EQ(std::vector<double>(fd.row(0).begin(), fd.row(0).end()), (std::vector<double>{3, 1, 0}));
  EXPECT_EQ(f.scheme, wum::Scheme::frequency);

  EXPECT_THROW(wum::vectorize(sessions, {}, wum::Scheme::binary), wum::RuntimeError);
}

TEST(Vectorize, SchemeNames) {
  EXPECT_EQ(wum::parse_scheme("binary"), wum::Scheme::binary);
  EXPECT_EQ(wum::parse_scheme("frequency"), wum::Scheme::frequency);
  EXPECT_THROW(wum::parse_scheme("tfidf"), wum::ValidationError);
}

TEST(BuildFeatures, InvariantsOnPlantedCorpus) {
  const auto sessions = wum::synth::planted_sessions({}, 9);
  wum::FeatureConfig cfg;
  const auto r = wum::build_features(sessions, cfg);
  const auto& m = r.matrix;
  ASSERT_EQ(m.size(), r.sessions.size());
  ASSERT_EQ(m.weights.size(), m.size());
  EXPECT_TRUE(std::is_sorted(m.catalog.begin(), m.catalog.end()));
  const auto dense = m.dense();
  std::vector<std::size_t> column_support(m.columns, 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::size_t ones = 0;
    for (std::size_t k = 0; k < m.columns; ++k) {
      const double v = dense(i, k);
      EXPECT_TRUE(v == 0.0 || v == 1.0);
      if (v == 1.0) {
        ++ones;
        ++column_support[k];
      }
    }
    EXPECT_EQ(ones, r.sessions[i].unique_count);
    EXPECT_EQ(m.weights[i], wum::assign_session_weight(r.sessions[i].unique_count, cfg.weights));
  }
  for (std::size_t k = 0; k < m.columns; ++k) EXPECT_GE(column_support[k], cfg.min_session_support);
}

TEST(BuildFeatures, RowPermutationEquivariance) {
  const auto sessions = wum::synth::planted_sessions({}, 4);
  wum::FeatureConfig cfg;
  const auto base = wum::build_features(sessions, cfg);

  std::vector<std::size_t> perm(sessions.size());
  std::iota(perm.begin(), perm.end(), 0);
  wum::Rng rng(77);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
  std::vector<wum::Session> shuffled;
  for (auto p : perm) shuffled.push_back(sessions[p]);
  const auto moved = wum::build_features(shuffled, cfg);

  ASSERT_EQ(moved.matrix.catalog, base.matrix.catalog);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    EXPECT_EQ(moved.matrix.rows[i], base.matrix.rows[perm[i]]);
    EXPECT_EQ(moved.matrix.weights[i], base.matrix.weights[perm[i]]);
  }
}

TEST(BuildFeatures, ValidatesConfig) {
  wum::FeatureConfig cfg;
  cfg.weights = {3, 2};
  EXPECT_THROW(wum::build_features({}, cfg), wum::ValidationError);
}
