#pragma once

// Hop-time and instantaneous-frequency detection statistics for estimated
// time-frequency spectra: the column-change statistic, peak picking over it,
// per-trial scoring against ground truth, and Monte Carlo aggregation.

#include <cstdint>
#include <vector>

#include "fhspec/bcs.hpp"
#include "fhspec/types.hpp"

namespace fhspec::metrics {

// Delta[n] = squared l2 distance between consecutive magnitude columns of the
// estimated spectrum, length cols-1. Peaks mark hop instants. Throws if the
// input has fewer than 2 columns.
Vec hop_statistic(const Mat& tfr_magnitude);

// Convenience overload on a spectrum estimate: uses |w_hat| columns.
Vec hop_statistic(const bcs::SpectrumEstimate& est);

// The K largest local maxima of delta, returned as ascending indices. A local
// maximum is >= both existing neighbors and > at least one of them, so flat
// stretches yield none. Fewer qualifying maxima than K returns all of them.
// Throws if K < 0 or K > delta.size(). Ties broken by value then lower index.
std::vector<int> detect_hops(const Vec& delta, int expected_count);

// All local maxima exceeding threshold_frac * max(delta), ascending indices.
std::vector<int> detect_hops(const Vec& delta, double threshold_frac);

// Per-trial detection scores against ground truth.
//   d_t: fraction of true hop instants matched one-to-one (nearest pair
//        first) by a detected hop within +-3 samples. Detected hops are the
//        |hop_truth| largest peaks of the estimate's hop statistic.
//   d_f: fraction of (column, true bin) support pairs with an estimated
//        support bin within +-1 frequency bin in the same column.
// Vacuously-empty denominators score 1. Throws on shape mismatch.
struct TrialScore {
  double d_t = 0.0;
  double d_f = 0.0;
  double snr_db = 0.0;
  double missing_rate = 0.0;
  std::uint64_t seed = 0;
};
TrialScore score_trial(const bcs::SpectrumEstimate& est, const IMat& truth,
                       const std::vector<int>& hop_truth);

// Monte Carlo aggregate: p_t = mean(d_t), e_f = 1 - mean(d_f).
struct EvalReport {
  double p_t = 0.0;
  double e_f = 0.0;
  std::vector<TrialScore> trials;
};
EvalReport aggregate(const std::vector<TrialScore>& trials);

}  // namespace fhspec::metrics
