#include "fhspec/fhsig.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace fhspec::fhsig {

void validate(const FhScenario& sc) {
  if (!(sc.fs_hz > 0.0) || !std::isfinite(sc.fs_hz))
    throw std::invalid_argument("scenario: fs_hz must be finite and positive");
  if (sc.n_samples <= 0) throw std::invalid_argument("scenario: n_samples must be positive");
  for (const auto& seg : sc.segments) {
    if (seg.start < 0 || seg.end > sc.n_samples || seg.start >= seg.end)
      throw std::invalid_argument("scenario: segment bounds must satisfy 0 <= start < end <= n_samples");
    if (!std::isfinite(seg.freq_hz) || seg.freq_hz < 0.0)
      throw std::invalid_argument("scenario: carrier frequency must be finite and nonnegative");
    if (!std::isfinite(seg.amp.real()) || !std::isfinite(seg.amp.imag()))
      throw std::invalid_argument("scenario: amplitude must be finite");
  }
  // same-emitter segments must not overlap in time
  for (size_t i = 0; i < sc.segments.size(); ++i)
    for (size_t j = i + 1; j < sc.segments.size(); ++j) {
      const auto& a = sc.segments[i];
      const auto& b = sc.segments[j];
      if (a.emitter == b.emitter && a.start < b.end && b.start < a.end)
        throw std::invalid_argument("scenario: overlapping segments for one emitter");
    }
}

ObservedSignal synthesize(const FhScenario& sc) {
  validate(sc);
  CVec x = CVec::Zero(sc.n_samples);
  for (const auto& seg : sc.segments) {
    const double nu = seg.freq_hz / sc.fs_hz;
    for (int n = seg.start; n < seg.end; ++n)
      x[n] += seg.amp * std::polar(1.0, 2.0 * kPi * nu * n);
  }
  ObservedSignal o;
  o.samples = std::move(x);
  o.fs_hz = sc.fs_hz;
  return o;
}

ObservedSignal add_noise(const ObservedSignal& x, double snr_db, RngStream& rng) {
  if (std::isinf(snr_db) && snr_db > 0.0) return x;  // noise disabled
  if (!std::isfinite(snr_db)) throw std::invalid_argument("add_noise: snr_db must be finite or +inf");
  const int n = static_cast<int>(x.samples.size());
  if (n == 0) throw std::invalid_argument("add_noise: empty signal");
  const double energy = x.samples.squaredNorm();
  const double sigma2 = energy / (n * std::pow(10.0, snr_db / 10.0));
  const double s = std::sqrt(sigma2 / 2.0);
  ObservedSignal out = x;
  out.noise_var = sigma2;
  for (int i = 0; i < n; ++i) out.samples[i] += Complex(s * rng.normal(), s * rng.normal());
  return out;
}

ObservedSignal apply_missing(const ObservedSignal& x, double rate, RngStream& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw std::invalid_argument("apply_missing: rate must be in [0, 1)");
  const int n = static_cast<int>(x.samples.size());
  const int m = static_cast<int>(std::lround(rate * n));
  // partial Fisher-Yates: first m entries of a shuffled index vector
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int i = 0; i < m; ++i) std::swap(idx[i], idx[i + rng.uniform_int(n - i)]);
  ObservedSignal out = x;
  out.missing.assign(idx.begin(), idx.begin() + m);
  std::sort(out.missing.begin(), out.missing.end());
  for (int i : out.missing) out.samples[i] = Complex(0.0, 0.0);
  return out;
}

namespace {
int nearest_bin_periodic(double nu, const Vec& grid) {
  // distance on the circle of circumference 1/2
  double best = 1e300;
  int arg = 0;
  for (int k = 0; k < grid.size(); ++k) {
    double d = std::fabs(nu - grid[k]);
    d = std::fmod(d, 0.5);
    d = std::min(d, 0.5 - d);
    if (d < best) {
      best = d;
      arg = k;
    }
  }
  return arg;
}
}  // namespace

IMat ground_truth_support(const FhScenario& sc, const Vec& freq_grid) {
  validate(sc);
  if (freq_grid.size() == 0) throw std::invalid_argument("ground_truth_support: empty frequency grid");
  IMat s = IMat::Zero(freq_grid.size(), sc.n_samples);
  for (const auto& seg : sc.segments) {
    double nu = std::fmod(seg.freq_hz / sc.fs_hz, 0.5);
    const int k = nearest_bin_periodic(nu, freq_grid);
    for (int n = seg.start; n < seg.end; ++n) s(k, n) = 1;
  }
  return s;
}

std::vector<int> true_hop_indices(const FhScenario& sc, const Vec& freq_grid) {
  const IMat s = ground_truth_support(sc, freq_grid);
  std::vector<int> hops;
  for (int n = 0; n + 1 < s.cols(); ++n)
    if ((s.col(n + 1).array() != s.col(n).array()).any()) hops.push_back(n);
  return hops;
}

FhScenario builtin_scenario() {
  FhScenario sc;
  sc.fs_hz = 64000.0;
  sc.n_samples = 64;
  sc.segments = {
      {1, 0, 16, 13000.0, {1.0, 0.0}},
      {1, 16, 64, 18000.0, {1.0, 0.0}},
      {2, 0, 32, 28000.0, {1.0, 0.0}},
      {2, 32, 64, 23000.0, {1.0, 0.0}},
      {3, 0, 48, 35000.0, {1.0, 0.0}},
      {3, 48, 64, 6000.0, {1.0, 0.0}},
  };
  return sc;
}

}  // namespace fhspec::fhsig
