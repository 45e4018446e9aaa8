#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "fhspec/bcs.hpp"
#include "fhspec/metrics.hpp"
#include "fhspec/tfcore.hpp"

using namespace fhspec;
using namespace fhspec::metrics;

namespace {
bcs::SpectrumEstimate make_est(const IMat& support, const Mat& amps) {
  bcs::SpectrumEstimate e;
  e.support = support;
  e.w_hat = CMat::Zero(support.rows(), support.cols());
  for (Eigen::Index t = 0; t < support.cols(); ++t)
    for (Eigen::Index k = 0; k < support.rows(); ++k)
      if (support(k, t)) e.w_hat(k, t) = Complex(amps(k, t), 0.0);
  return e;
}

// piecewise-constant single-emitter support: bins[d] occupied on dwell d
IMat dwell_support(int n_bins, const std::vector<int>& bins, const std::vector<int>& hops,
                   int n_cols) {
  IMat s = IMat::Zero(n_bins, n_cols);
  int d = 0;
  for (int t = 0; t < n_cols; ++t) {
    while (d < static_cast<int>(hops.size()) && t > hops[d]) ++d;
    s(bins[d], t) = 1;
  }
  return s;
}
}  // namespace

TEST_CASE("hop_statistic: frozen arithmetic and invariances") {
  // constant estimate -> all-zero
  IMat sup = IMat::Zero(10, 6);
  sup.row(4).setOnes();
  Mat amp = Mat::Ones(10, 6);
  CHECK(hop_statistic(make_est(sup, amp)).cwiseAbs().maxCoeff() == 0.0);

  // unit-amplitude jump between columns 7 and 8 -> delta[7] = 2
  IMat sup2 = IMat::Zero(10, 16);
  for (int t = 0; t < 16; ++t) sup2(t <= 7 ? 2 : 6, t) = 1;
  const Vec d = hop_statistic(make_est(sup2, Mat::Ones(10, 16)));
  REQUIRE(d.size() == 15);
  CHECK(d[7] == 2.0);
  CHECK(d.sum() == 2.0);

  // invariant to one global permutation of frequency bins
  std::mt19937 g(3);
  std::vector<int> perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), g);
  Mat m = Mat::Random(10, 16).cwiseAbs();
  Mat mp(10, 16);
  for (int k = 0; k < 10; ++k) mp.row(perm[k]) = m.row(k);
  CHECK((hop_statistic(m) - hop_statistic(mp)).cwiseAbs().maxCoeff() < 1e-12);

  // phase changes with constant modulus are not hops
  bcs::SpectrumEstimate e = make_est(sup, amp);
  for (Eigen::Index t = 0; t < 6; ++t)
    e.w_hat(4, t) = std::polar(1.0, 0.9 * static_cast<double>(t));
  CHECK(hop_statistic(e).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(hop_statistic(Mat::Ones(4, 1)), std::invalid_argument);
}

TEST_CASE("detect_hops by count: K largest local maxima") {
  Vec d = Vec::Zero(20);
  d[3] = 5.0;
  d[9] = 7.0;
  d[15] = 6.0;
  auto hops = detect_hops(d, 3);
  CHECK(hops == std::vector<int>{3, 9, 15});

  // smaller K keeps the largest peaks
  CHECK(detect_hops(d, 2) == std::vector<int>{9, 15});
  CHECK(detect_hops(d, 0).empty());

  // fewer qualifying maxima than requested: return what exists
  CHECK(detect_hops(d, 10) == std::vector<int>{3, 9, 15});

  // plateaus are not local maxima, so a flat vector yields nothing
  CHECK(detect_hops(Vec::Ones(8), 4).empty());

  CHECK_THROWS_AS(detect_hops(d, 21), std::invalid_argument);
  CHECK_THROWS_AS(detect_hops(d, -1), std::invalid_argument);

  // endpoints are not eligible: a first/last difference has only one
  // neighbor, so a spike there reflects the record boundary, not a
  // transition inside the data
  Vec e(5);
  e << 9, 1, 0, 2, 1;
  CHECK(detect_hops(e, 2) == std::vector<int>{3});
}

TEST_CASE("detect_hops by threshold") {
  Vec d = Vec::Zero(20);
  d[3] = 1.0;
  d[9] = 10.0;
  d[15] = 6.0;
  CHECK(detect_hops(d, 0.5) == std::vector<int>{9, 15});
  CHECK(detect_hops(d, 0.05) == std::vector<int>{3, 9, 15});
  CHECK(detect_hops(Vec::Ones(8), 0.5).empty());
  CHECK(detect_hops(Vec::Zero(8), 0.5).empty());
}

TEST_CASE("score_trial: exact match, misses, and the +-3 matching rule") {
  const int n_bins = 20, n_cols = 64;
  const std::vector<int> bins{4, 11, 17, 7};
  const std::vector<int> hops{15, 31, 47};
  const IMat truth = dwell_support(n_bins, bins, hops, n_cols);

  // estimate identical to truth
  TrialScore s = score_trial(make_est(truth, Mat::Ones(n_bins, n_cols)), truth, hops);
  CHECK(s.d_t == 1.0);
  CHECK(s.d_f == 1.0);

  // empty estimate
  s = score_trial(make_est(IMat::Zero(n_bins, n_cols), Mat::Ones(n_bins, n_cols)), truth, hops);
  CHECK(s.d_t == 0.0);
  CHECK(s.d_f == 0.0);

  // hops detected 3 samples away still count; 4 samples away do not
  for (int off : {3, 4}) {
    std::vector<int> shifted{15 + off, 31 + off, 47 + off};
    const IMat est_sup = dwell_support(n_bins, bins, shifted, n_cols);
    s = score_trial(make_est(est_sup, Mat::Ones(n_bins, n_cols)), truth, hops);
    CHECK(s.d_t == (off == 3 ? 1.0 : 0.0));
  }

  // one-bin frequency offsets are tolerated, two-bin offsets are not
  std::vector<int> off1{5, 12, 18, 8}, off2{6, 13, 19, 9};
  s = score_trial(make_est(dwell_support(n_bins, off1, hops, n_cols), Mat::Ones(n_bins, n_cols)),
                  truth, hops);
  CHECK(s.d_f == 1.0);
  s = score_trial(make_est(dwell_support(n_bins, off2, hops, n_cols), Mat::Ones(n_bins, n_cols)),
                  truth, hops);
  CHECK(s.d_f == 0.0);

  CHECK_THROWS_AS(score_trial(make_est(IMat::Zero(5, 5), Mat::Ones(5, 5)), truth, hops),
                  std::invalid_argument);
}

TEST_CASE("score_trial: greedy matching is one-to-one, nearest pair first") {
  // two true hops close together, estimate shows a single transition: only one
  // true hop may claim the detected peak
  const int n_bins = 12, n_cols = 32;
  const IMat truth = dwell_support(n_bins, {2, 7, 3}, {14, 16}, n_cols);
  const IMat est_sup = dwell_support(n_bins, {2, 3}, {15}, n_cols);
  const TrialScore s =
      score_trial(make_est(est_sup, Mat::Ones(n_bins, n_cols)), truth, {14, 16});
  CHECK(s.d_t == 0.5);
}

TEST_CASE("score_trial: invariant under simultaneous time shift") {
  const int n_bins = 16, n_cols = 48, shift = 5;
  const std::vector<int> bins{3, 9, 14};
  const IMat truth = dwell_support(n_bins, bins, {11, 27}, n_cols);
  const IMat est_sup = dwell_support(n_bins, {4, 9, 13}, {13, 26}, n_cols);

  IMat truth_s = IMat::Zero(n_bins, n_cols + shift);
  IMat est_s = IMat::Zero(n_bins, n_cols + shift);
  truth_s.rightCols(n_cols) = truth;
  est_s.rightCols(n_cols) = est_sup;

  const TrialScore a =
      score_trial(make_est(est_sup, Mat::Ones(n_bins, n_cols)), truth, {11, 27});
  const TrialScore b = score_trial(make_est(est_s, Mat::Ones(n_bins, n_cols + shift)), truth_s,
                                   {11 + shift, 27 + shift});
  CHECK(a.d_t == b.d_t);
  CHECK(a.d_f == b.d_f);
}

TEST_CASE("aggregate: means and bounds") {
  TrialScore perfect;
  perfect.d_t = perfect.d_f = 1.0;
  EvalReport r = aggregate({perfect, perfect, perfect});
  CHECK(r.p_t == 1.0);
  CHECK(r.e_f == 0.0);

  TrialScore zero;
  zero.d_t = 0.0;
  zero.d_f = 0.4;
  r = aggregate({perfect, zero});
  CHECK(r.p_t == 0.5);
  CHECK(r.e_f == doctest::Approx(1.0 - 0.7));
  CHECK(r.trials.size() == 2);

  CHECK_THROWS_AS(aggregate({}), std::invalid_argument);

  std::mt19937 g(9);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<TrialScore> ts;
  for (int i = 0; i < 37; ++i) {
    TrialScore t;
    t.d_t = u(g);
    t.d_f = u(g);
    ts.push_back(t);
  }
  r = aggregate(ts);
  CHECK(r.p_t >= 0.0);
  CHECK(r.p_t <= 1.0);
  CHECK(r.e_f >= 0.0);
  CHECK(r.e_f <= 1.0);
}

TEST_CASE("planted sparse-reconstruction trials score p_t in [0.9, 1]") {
  // two-dwell planted spectrum, noise-free measurement columns; the sparse
  // estimator must localize the single hop for nearly every seed
  const int T = 8;
  const Vec lags = tfcore::lag_grid(16);
  const int L = static_cast<int>(lags.size());
  const bcs::Dictionary dict = bcs::build_dictionary(L, lags);

  CMat w = CMat::Zero(L, T);
  IMat truth = IMat::Zero(L, T);
  for (int t = 0; t < T; ++t) {
    const int bin = t < 4 ? 3 : 9;
    w(bin, t) = Complex(1.0, -0.4);
    truth(bin, t) = 1;
  }

  kernels::KernelledRep rep;
  rep.lag_grid = lags;
  rep.freq_grid = tfcore::freq_grid(L);
  rep.iaf = dict.lambda * w;
  rep.tfr = Mat::Zero(L, T);
  rep.w_len = 0;
  rep.alpha_volume = 0;

  std::vector<TrialScore> trials;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    bcs::BcsConfig cfg;
    cfg.seed = seed;
    const bcs::SpectrumEstimate est = bcs::reconstruct(rep, cfg);
    trials.push_back(score_trial(est, truth, {3}));
  }
  const EvalReport r = aggregate(trials);
  CHECK(r.p_t >= 0.9);
  CHECK(r.p_t <= 1.0);
  CHECK(r.e_f <= 0.1);
}
