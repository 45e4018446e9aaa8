#pragma once

#include <vector>

#include "fhspec/rng.hpp"
#include "fhspec/types.hpp"

namespace fhspec::fhsig {

// One constant-frequency dwell of one emitter over sample indexes [start, end).
struct HopSegment {
  int emitter = 0;
  int start = 0;
  int end = 0;  // exclusive
  double freq_hz = 0.0;
  Complex amp = Complex(1.0, 0.0);
};

struct FhScenario {
  double fs_hz = 0.0;
  int n_samples = 0;
  std::vector<HopSegment> segments;
};

struct ObservedSignal {
  CVec samples;
  double fs_hz = 0.0;
  std::vector<int> missing;  // sorted sample indexes that were zeroed
  double noise_var = 0.0;    // complex noise variance actually applied
};

// Throws std::invalid_argument when the scenario violates its contract.
void validate(const FhScenario& sc);

// Noise-free superposition of all segments, e^{j 2 pi f n / fs} carriers.
// Result has an empty missing set and zero noise variance.
ObservedSignal synthesize(const FhScenario& sc);

// Adds circularly symmetric complex Gaussian noise at the requested SNR
// (sigma^2 = ||x||^2 / (N * 10^(snr/10))).  snr_db = +inf disables noise.
ObservedSignal add_noise(const ObservedSignal& x, double snr_db, RngStream& rng);

// Zeroes round(rate * N) samples drawn uniformly without replacement.
ObservedSignal apply_missing(const ObservedSignal& x, double rate, RngStream& rng);

// One nonzero bin per active emitter per time column.  freq_grid holds the
// representation's bin frequencies in cycles/sample; carriers are mapped by
// nu = (f/fs) mod 1/2 and matched to the nearest bin under the periodic
// (period 1/2) metric, mirroring the bilinear transform convention.
IMat ground_truth_support(const FhScenario& sc, const Vec& freq_grid);

// Indexes n where the ground-truth support of column n+1 differs from
// column n (the same convention the hop statistic uses).
std::vector<int> true_hop_indices(const FhScenario& sc, const Vec& freq_grid);

// Bundled three-emitter demo: 64 samples at fs = 64 kHz, hops at samples
// 16 (13 -> 18 kHz), 32 (28 -> 23 kHz) and 48 (35 -> 6 kHz).
FhScenario builtin_scenario();

}  // namespace fhspec::fhsig
