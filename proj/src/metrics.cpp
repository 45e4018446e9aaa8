#include "fhspec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace fhspec::metrics {

Vec hop_statistic(const Mat& tfr_magnitude) {
  const Eigen::Index t = tfr_magnitude.cols();
  if (t < 2) throw std::invalid_argument("hop_statistic: need at least 2 columns");
  Vec delta(t - 1);
  for (Eigen::Index n = 0; n + 1 < t; ++n)
    delta[n] = (tfr_magnitude.col(n + 1) - tfr_magnitude.col(n)).squaredNorm();
  return delta;
}

Vec hop_statistic(const bcs::SpectrumEstimate& est) {
  return hop_statistic(est.w_hat.cwiseAbs());
}

namespace {

// Interior indices whose value is >= both neighbors and > at least one.
// Endpoints are not eligible: a first/last difference has only one neighbor,
// so it reflects the record boundary rather than a transition in the data.
std::vector<int> local_maxima(const Vec& delta) {
  std::vector<int> out;
  const int n = static_cast<int>(delta.size());
  for (int i = 1; i + 1 < n; ++i) {
    if (delta[i] >= delta[i - 1] && delta[i] >= delta[i + 1] &&
        (delta[i] > delta[i - 1] || delta[i] > delta[i + 1]))
      out.push_back(i);
  }
  return out;
}

}  // namespace

std::vector<int> detect_hops(const Vec& delta, int expected_count) {
  if (expected_count < 0 || expected_count > delta.size())
    throw std::invalid_argument("detect_hops: expected_count out of range");
  std::vector<int> peaks = local_maxima(delta);
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) {
    if (delta[a] != delta[b]) return delta[a] > delta[b];
    return a < b;
  });
  if (static_cast<int>(peaks.size()) > expected_count) peaks.resize(expected_count);
  std::sort(peaks.begin(), peaks.end());
  return peaks;
}

std::vector<int> detect_hops(const Vec& delta, double threshold_frac) {
  if (delta.size() == 0) return {};
  const double cut = threshold_frac * delta.maxCoeff();
  std::vector<int> out;
  for (int i : local_maxima(delta))
    if (delta[i] > cut) out.push_back(i);
  return out;
}

TrialScore score_trial(const bcs::SpectrumEstimate& est, const IMat& truth,
                       const std::vector<int>& hop_truth) {
  if (est.support.rows() != truth.rows() || est.support.cols() != truth.cols())
    throw std::invalid_argument("score_trial: estimate/truth shape mismatch");

  TrialScore s;

  // hop-time score: one-to-one greedy matching, nearest pair first, +-3 rule
  if (hop_truth.empty()) {
    s.d_t = 1.0;
  } else {
    const Vec delta = hop_statistic(est);
    const std::vector<int> det =
        detect_hops(delta, std::min<int>(static_cast<int>(hop_truth.size()),
                                         static_cast<int>(delta.size())));
    struct Pair {
      int dist, ti, di;
    };
    std::vector<Pair> pairs;
    for (int ti = 0; ti < static_cast<int>(hop_truth.size()); ++ti)
      for (int di = 0; di < static_cast<int>(det.size()); ++di)
        pairs.push_back({std::abs(hop_truth[ti] - det[di]), ti, di});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      if (a.dist != b.dist) return a.dist < b.dist;
      if (a.ti != b.ti) return a.ti < b.ti;
      return a.di < b.di;
    });
    std::vector<char> used_t(hop_truth.size(), 0), used_d(det.size(), 0);
    int matched = 0;
    for (const Pair& p : pairs) {
      if (p.dist > 3) break;
      if (used_t[p.ti] || used_d[p.di]) continue;
      used_t[p.ti] = used_d[p.di] = 1;
      ++matched;
    }
    s.d_t = static_cast<double>(matched) / static_cast<double>(hop_truth.size());
  }

  // frequency score: each true (column, bin) pair needs estimated support
  // within one bin in the same column
  long total = 0, hit = 0;
  for (Eigen::Index t = 0; t < truth.cols(); ++t)
    for (Eigen::Index k = 0; k < truth.rows(); ++k) {
      if (!truth(k, t)) continue;
      ++total;
      for (Eigen::Index dk = -1; dk <= 1; ++dk) {
        const Eigen::Index kk = k + dk;
        if (kk >= 0 && kk < truth.rows() && est.support(kk, t)) {
          ++hit;
          break;
        }
      }
    }
  s.d_f = total == 0 ? 1.0 : static_cast<double>(hit) / static_cast<double>(total);
  return s;
}

EvalReport aggregate(const std::vector<TrialScore>& trials) {
  if (trials.empty()) throw std::invalid_argument("aggregate: no trials");
  EvalReport r;
  r.trials = trials;
  double st = 0.0, sf = 0.0;
  for (const TrialScore& t : trials) {
    st += t.d_t;
    sf += t.d_f;
  }
  r.p_t = st / static_cast<double>(trials.size());
  r.e_f = 1.0 - sf / static_cast<double>(trials.size());
  return r;
}

}  // namespace fhspec::metrics
