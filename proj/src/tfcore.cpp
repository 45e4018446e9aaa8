#include "fhspec/tfcore.hpp"

#include <cmath>
#include <stdexcept>

namespace fhspec::tfcore {

namespace {

inline Complex cis(double phase) { return Complex(std::cos(phase), std::sin(phase)); }

Vec time_grid(int n) {
  Vec g(n);
  for (int i = 0; i < n; ++i) g[i] = i;
  return g;
}

}  // namespace

Vec lag_grid(int n_samples) {
  const int l = lag_half_span(n_samples);
  Vec g(2 * l + 1);
  for (int i = 0; i < g.size(); ++i) g[i] = i - l;
  return g;
}

Vec doppler_grid(int n_samples) {
  Vec g(n_samples);
  for (int k = 0; k < n_samples; ++k) g[k] = static_cast<double>(k) / n_samples;
  return g;
}

Vec freq_grid(int n_bins) {
  Vec g(n_bins);
  for (int k = 0; k < n_bins; ++k) g[k] = static_cast<double>(k) / (2.0 * n_bins);
  return g;
}

JointRep iaf(const CVec& x) {
  const int n = static_cast<int>(x.size());
  if (n < 3) throw std::invalid_argument("iaf: need at least 3 samples");
  const int l = lag_half_span(n);
  CMat c = CMat::Zero(2 * l + 1, n);
  for (int ti = 0; ti < 2 * l + 1; ++ti) {
    const int tau = ti - l;
    const int lo = std::max(0, std::max(-tau, tau));
    const int hi = std::min(n - 1, std::min(n - 1 - tau, n - 1 + tau));
    for (int t = lo; t <= hi; ++t) c(ti, t) = x[t + tau] * std::conj(x[t - tau]);
  }
  return {std::move(c), {Axis::Lag, lag_grid(n)}, {Axis::Time, time_grid(n)}, "iaf"};
}

JointRep iaf(const ObservedSignal& x) { return iaf(x.samples); }

JointRep af_from_iaf(const JointRep& c) {
  const int n = static_cast<int>(c.data.cols());
  CMat e(n, n);
  for (int t = 0; t < n; ++t)
    for (int k = 0; k < n; ++k) e(t, k) = cis(2.0 * kPi * k * t / n);
  return {c.data * e, c.row_axis, {Axis::Doppler, doppler_grid(n)}, "af-idft"};
}

JointRep iaf_from_af(const JointRep& a) {
  const int n = static_cast<int>(a.data.cols());
  CMat einv(n, n);
  for (int k = 0; k < n; ++k)
    for (int t = 0; t < n; ++t) einv(k, t) = cis(-2.0 * kPi * k * t / n) / static_cast<double>(n);
  return {a.data * einv, a.row_axis, {Axis::Time, time_grid(n)}, "iaf"};
}

JointRep wvd_from_iaf(const JointRep& c, int n_bins) {
  const int n_lag = static_cast<int>(c.data.rows());
  const int l = (n_bins <= 0) ? static_cast<int>(c.data.cols()) : n_bins;
  if (l < n_lag) throw std::invalid_argument("wvd_from_iaf: n_bins must be >= lag count");
  CMat f(l, n_lag);
  for (int k = 0; k < l; ++k)
    for (int ti = 0; ti < n_lag; ++ti) {
      const double tau = c.row_axis.grid[ti];
      f(k, ti) = cis(-4.0 * kPi * (static_cast<double>(k) / (2.0 * l)) * tau);
    }
  return {f * c.data, {Axis::Frequency, freq_grid(l)}, c.col_axis, "wvd-4pi"};
}

JointRep iaf_from_wvd(const JointRep& w) {
  const int l = static_cast<int>(w.data.rows());
  const int n = static_cast<int>(w.data.cols());
  const int half = lag_half_span(n);
  const int n_lag = 2 * half + 1;
  if (l < n_lag) throw std::invalid_argument("iaf_from_wvd: too few frequency bins to invert");
  CMat finv(n_lag, l);
  for (int ti = 0; ti < n_lag; ++ti) {
    const double tau = ti - half;
    for (int k = 0; k < l; ++k)
      finv(ti, k) = cis(4.0 * kPi * (static_cast<double>(k) / (2.0 * l)) * tau) / static_cast<double>(l);
  }
  return {finv * w.data, {Axis::Lag, lag_grid(n)}, w.col_axis, "iaf"};
}

StAfSlice short_time_af(const CVec& x, int center_n, int w_len) {
  const int n = static_cast<int>(x.size());
  if (w_len < 3 || w_len % 2 == 0 || w_len > n)
    throw std::invalid_argument("short_time_af: w_len must be odd and in [3, N]");
  const int hw = (w_len - 1) / 2;
  CVec seg = CVec::Zero(w_len);
  for (int m = 0; m < w_len; ++m) {
    const int src = center_n - hw + m;
    if (src >= 0 && src < n) seg[m] = x[src];
  }
  // IAF of the windowed segment
  CMat c = CMat::Zero(w_len, w_len);
  for (int ti = 0; ti < w_len; ++ti) {
    const int tau = ti - hw;
    for (int m = 0; m < w_len; ++m) {
      const int p = m + tau, q = m - tau;
      if (p >= 0 && p < w_len && q >= 0 && q < w_len) c(ti, m) = seg[p] * std::conj(seg[q]);
    }
  }
  // Doppler transform, signed centered bins -hw..hw
  CMat e(w_len, w_len);
  for (int m = 0; m < w_len; ++m)
    for (int ki = 0; ki < w_len; ++ki) {
      const int ks = ki - hw;
      e(m, ki) = cis(2.0 * kPi * ks * m / w_len);
    }
  StAfSlice s;
  s.center_n = center_n;
  s.w_len = w_len;
  s.n_record = n;
  s.data = c * e;
  return s;
}

JointRep spectrogram(const CVec& x, int w_len, int n_bins) {
  const int n = static_cast<int>(x.size());
  if (w_len < 3 || w_len % 2 == 0) throw std::invalid_argument("spectrogram: w_len must be odd, >= 3");
  const int l = (n_bins <= 0) ? n : n_bins;
  const int hw = (w_len - 1) / 2;
  CMat s(l, n);
  for (int t = 0; t < n; ++t)
    for (int k = 0; k < l; ++k) {
      Complex acc(0.0, 0.0);
      const double nu = static_cast<double>(k) / (2.0 * l);
      for (int m = 0; m < w_len; ++m) {
        const int src = t - hw + m;
        if (src >= 0 && src < n) acc += x[src] * cis(-2.0 * kPi * nu * m);
      }
      s(k, t) = Complex(std::norm(acc), 0.0);
    }
  return {std::move(s), {Axis::Frequency, freq_grid(l)}, {Axis::Time, time_grid(n)}, "spectrogram"};
}

std::vector<JointRep> missing_af_terms(const ObservedSignal& s_full, const std::vector<int>& mask) {
  if (!s_full.missing.empty())
    throw std::invalid_argument("missing_af_terms: s_full must be the full-data signal");
  const CVec& s = s_full.samples;
  const int n = static_cast<int>(s.size());
  const int half = lag_half_span(n);
  const int n_lag = 2 * half + 1;
  auto s_at = [&](int i) -> Complex { return (i >= 0 && i < n) ? s[i] : Complex(0.0, 0.0); };

  const JointRep a_ss = af_from_iaf(iaf(s));
  CMat cross_a = CMat::Zero(n_lag, n);
  CMat cross_b = CMat::Zero(n_lag, n);
  CMat miss_auto = CMat::Zero(n_lag, n);
  CMat miss_cross = CMat::Zero(n_lag, n);

  // precompute Doppler phase rows e^{j 2 pi kappa t / N} for anchor t
  CMat phase(n, n);
  for (int t = 0; t < n; ++t)
    for (int k = 0; k < n; ++k) phase(t, k) = cis(2.0 * kPi * k * t / n);
  auto anchor_row = [&](int t) { return phase.row(((t % n) + n) % n); };  // t-tau stays in [0,N) when nonzero

  for (int nm : mask) {
    if (nm < 0 || nm >= n) throw std::invalid_argument("missing_af_terms: mask index out of range");
    for (int ti = 0; ti < n_lag; ++ti) {
      const int tau = ti - half;
      const Complex va = s[nm] * std::conj(s_at(nm - 2 * tau));
      if (va != Complex(0.0, 0.0)) cross_a.row(ti) -= va * anchor_row(nm - tau);
      const Complex vb = s_at(nm + 2 * tau) * std::conj(s[nm]);
      if (vb != Complex(0.0, 0.0)) cross_b.row(ti) -= vb * anchor_row(nm + tau);
      if (tau != 0) {
        const int nl = nm - 2 * tau;
        if (std::find(mask.begin(), mask.end(), nl) != mask.end()) {
          const Complex vc = s[nm] * std::conj(s_at(nl));
          if (vc != Complex(0.0, 0.0)) miss_cross.row(ti) += vc * anchor_row(nm - tau);
        }
      }
    }
    miss_auto.row(half) += std::norm(s[nm]) * anchor_row(nm);
  }

  std::vector<JointRep> out;
  out.push_back(a_ss);
  const AxisGrid rows{Axis::Lag, lag_grid(n)};
  const AxisGrid cols{Axis::Doppler, doppler_grid(n)};
  out.push_back({std::move(cross_a), rows, cols, "af-idft"});
  out.push_back({std::move(cross_b), rows, cols, "af-idft"});
  out.push_back({std::move(miss_auto), rows, cols, "af-idft"});
  out.push_back({std::move(miss_cross), rows, cols, "af-idft"});
  return out;
}

}  // namespace fhspec::tfcore
