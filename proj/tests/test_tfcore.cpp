#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fhspec/tfcore.hpp"

using namespace fhspec;
using namespace fhspec::tfcore;

namespace {

Complex cis(double p) { return {std::cos(p), std::sin(p)}; }

CVec random_signal(int n, uint64_t seed) {
  RngStream r(seed);
  CVec x(n);
  for (int i = 0; i < n; ++i) x[i] = Complex(r.normal(), r.normal());
  return x;
}

// ---- independent oracles: literal per-entry loops over the defining sums ----

CMat brute_iaf(const CVec& x) {
  const int n = static_cast<int>(x.size());
  const int h = (n - 1) / 2;
  CMat c = CMat::Zero(2 * h + 1, n);
  for (int tau = -h; tau <= h; ++tau)
    for (int t = 0; t < n; ++t) {
      const int p = t + tau, q = t - tau;
      if (p < 0 || p >= n || q < 0 || q >= n) continue;
      c(tau + h, t) = x[p] * std::conj(x[q]);
    }
  return c;
}

CMat brute_af(const CVec& x) {
  const CMat c = brute_iaf(x);
  const int n = static_cast<int>(x.size());
  CMat a = CMat::Zero(c.rows(), n);
  for (int ti = 0; ti < c.rows(); ++ti)
    for (int k = 0; k < n; ++k)
      for (int t = 0; t < n; ++t) a(ti, k) += c(ti, t) * cis(2.0 * kPi * k * t / n);
  return a;
}

CMat brute_wvd(const CVec& x, int l) {
  const CMat c = brute_iaf(x);
  const int n = static_cast<int>(x.size());
  const int h = (n - 1) / 2;
  CMat w = CMat::Zero(l, n);
  for (int k = 0; k < l; ++k)
    for (int t = 0; t < n; ++t)
      for (int tau = -h; tau <= h; ++tau)
        w(k, t) += c(tau + h, t) * cis(-4.0 * kPi * (static_cast<double>(k) / (2.0 * l)) * tau);
  return w;
}

}  // namespace

TEST_CASE("iaf: unit impulse") {
  CVec x = CVec::Zero(9);
  x[4] = Complex(1.0, 0.0);
  const auto c = iaf(x);
  const int h = 4;
  for (int ti = 0; ti < c.data.rows(); ++ti)
    for (int t = 0; t < c.data.cols(); ++t) {
      if (ti == h && t == 4)
        CHECK(c.data(ti, t) == Complex(1.0, 0.0));
      else
        CHECK(std::abs(c.data(ti, t)) == 0.0);
    }
}

TEST_CASE("iaf: all-ones length 8 occupies exactly the valid diamond") {
  CVec x = CVec::Ones(8);
  const auto c = iaf(x);
  const int h = 3;
  REQUIRE(c.data.rows() == 7);
  for (int tau = -h; tau <= h; ++tau)
    for (int t = 0; t < 8; ++t) {
      const bool valid = (t + tau >= 0 && t + tau < 8 && t - tau >= 0 && t - tau < 8);
      CHECK(c.data(tau + h, t) == (valid ? Complex(1, 0) : Complex(0, 0)));
    }
}

TEST_CASE("iaf: tone gives e^{j4 pi nu tau} on its support (brute-force check)") {
  const int n = 16;
  const double nu = 1.0 / 8.0;
  CVec x(n);
  for (int i = 0; i < n; ++i) x[i] = cis(2.0 * kPi * nu * i);
  const auto c = iaf(x);
  const CMat ref = brute_iaf(x);
  CHECK((c.data - ref).cwiseAbs().maxCoeff() < 1e-12);
  const int h = (n - 1) / 2;
  for (int tau = -h; tau <= h; ++tau) {
    const int t = n / 2;  // interior column, all lags valid for |tau| <= h
    if (t + tau < n && t - tau >= 0 && t - tau < n && t + tau >= 0)
      CHECK(std::abs(c.data(tau + h, t) - cis(4.0 * kPi * nu * tau)) < 1e-12);
  }
}

TEST_CASE("iaf: Hermitian lag symmetry on random signals") {
  for (uint64_t s : {1ull, 2ull, 3ull}) {
    const CVec x = random_signal(17, s);
    const auto c = iaf(x);
    const int h = 8;
    for (int tau = 1; tau <= h; ++tau)
      for (int t = 0; t < 17; ++t)
        CHECK(std::abs(c.data(h + tau, t) - std::conj(c.data(h - tau, t))) < 1e-14);
  }
}

TEST_CASE("af_from_iaf: constant row transforms to N delta[kappa]") {
  JointRep c;
  c.data = CMat::Zero(5, 12);
  c.data.row(2).setOnes();
  c.row_axis = {Axis::Lag, lag_grid(12).segment(3, 5)};
  c.col_axis = {Axis::Time, Vec::LinSpaced(12, 0, 11)};
  const auto a = af_from_iaf(c);
  CHECK(std::abs(a.data(2, 0) - Complex(12, 0)) < 1e-10);
  for (int k = 1; k < 12; ++k) CHECK(std::abs(a.data(2, k)) < 1e-10);
}

TEST_CASE("af_from_iaf matches direct summation; tone AF peaks at kappa 0") {
  const int n = 16;
  CVec x(n);
  for (int i = 0; i < n; ++i) x[i] = cis(2.0 * kPi * 0.21 * i);
  const auto a = af_from_iaf(iaf(x));
  const CMat ref = brute_af(x);
  CHECK((a.data - ref).cwiseAbs().maxCoeff() < 1e-10);
  for (int ti = 0; ti < a.data.rows(); ++ti) {
    if (a.data.row(ti).cwiseAbs().maxCoeff() == 0.0) continue;
    int arg = 0;
    a.data.row(ti).cwiseAbs().maxCoeff(&arg);
    CHECK(arg == 0);
  }
}

TEST_CASE("af round trip recovers the IAF to 1e-10") {
  for (int n : {12, 16, 17, 33}) {
    const CVec x = random_signal(n, 77 + n);
    const auto c = iaf(x);
    const auto back = iaf_from_af(af_from_iaf(c));
    CHECK((back.data - c.data).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("wvd: tone nu=1/8 with L=8 peaks at bin 2") {
  const int n = 8;
  CVec x(n);
  for (int i = 0; i < n; ++i) x[i] = cis(2.0 * kPi * i / 8.0);
  const auto w = wvd_from_iaf(iaf(x), 8);
  const CMat ref = brute_wvd(x, 8);
  CHECK((w.data - ref).cwiseAbs().maxCoeff() < 1e-10);
  for (int t = 2; t <= 5; ++t) {  // interior columns
    int arg = 0;
    w.data.col(t).cwiseAbs().maxCoeff(&arg);
    CHECK(arg == 2);
  }
  // real up to residue
  CHECK(w.data.imag().cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("wvd: zero signal, and random-signal agreement with the direct sum") {
  CHECK(wvd_from_iaf(iaf(CVec::Zero(10))).data.norm() == 0.0);
  const CVec x = random_signal(14, 5);
  const auto w = wvd_from_iaf(iaf(x));  // default L = N = 14
  CHECK((w.data - brute_wvd(x, 14)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("wvd: two-tone cross-term appears at the mid-frequency bin") {
  const int n = 16, l = 16;
  const double nu1 = 2.0 / 32.0, nu2 = 6.0 / 32.0;  // on-grid; midpoint bin 4
  CVec x(n);
  for (int i = 0; i < n; ++i) x[i] = cis(2.0 * kPi * nu1 * i) + cis(2.0 * kPi * nu2 * i);
  const auto w = wvd_from_iaf(iaf(x), l);
  CHECK((w.data - brute_wvd(x, l)).cwiseAbs().maxCoeff() < 1e-10);
  // columns where the oscillating cross term peaks: magnitude at bin 4
  // comparable to the auto-term bins 2 and 6
  double best_mid = 0.0;
  for (int t = 4; t < 12; ++t) best_mid = std::max(best_mid, std::abs(w.data(4, t)));
  CHECK(best_mid > 0.5 * std::abs(w.data(2, 8)));
}

TEST_CASE("wvd round trips against iaf_from_wvd") {
  for (int n : {12, 15, 16}) {
    const CVec x = random_signal(n, 900 + n);
    const auto c = iaf(x);
    for (int l : {n, n + 5}) {
      const auto back = iaf_from_wvd(wvd_from_iaf(c, l));
      CHECK((back.data - c.data).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  const auto c = iaf(random_signal(16, 3));
  CHECK_THROWS_AS(wvd_from_iaf(c, 8), std::invalid_argument);  // fewer bins than lags
}

TEST_CASE("wvd tone concentration: central columns keep >= 0.9 of energy in the peak bin") {
  // zero-extension thins the lag support near the edges, so the bound is
  // asserted where the lag window is essentially full (central quarter)
  const int n = 64;
  CVec x(n);
  for (int i = 0; i < n; ++i) x[i] = cis(2.0 * kPi * (26.0 / 128.0) * i);  // on-grid bin 26
  const auto w = wvd_from_iaf(iaf(x), 64);
  // peak share is (2m+1)/64 with m = min(t, 63-t, 31), >= 0.9 for t in [29, 34]
  for (int t = 29; t <= 34; ++t) {
    const Vec col = w.data.col(t).cwiseAbs2().real();
    int arg = 0;
    const double peak = col.maxCoeff(&arg);
    CHECK(arg == 26);
    CHECK(peak / col.sum() >= 0.9);
  }
}

TEST_CASE("short_time_af: full-length window equals the global AF (reordered bins)") {
  const int n = 15;
  const CVec x = random_signal(n, 21);
  const auto global = af_from_iaf(iaf(x));
  const auto slice = short_time_af(x, n / 2, n);
  const int hw = (n - 1) / 2;
  for (int ti = 0; ti < n; ++ti)
    for (int ki = 0; ki < n; ++ki) {
      const int ks = ki - hw;                 // signed bin of the slice
      const int k = ((ks % n) + n) % n;       // DFT-order bin of the global AF
      CHECK(std::abs(slice.data(ti, ki) - global.data(ti, k)) < 1e-10);
    }
}

TEST_CASE("short_time_af: constant signal concentrates on the kappa=0 column") {
  CVec x = CVec::Ones(64);
  const auto s = short_time_af(x, 32, 15);
  const int hw = 7;
  double e0 = 0.0, etot = 0.0;
  for (int ti = 0; ti < 15; ++ti) {
    const int support = 15 - 2 * std::abs(ti - hw);
    if (support > 1) {  // single-sample rows have flat Doppler magnitude
      int arg = 0;
      s.data.row(ti).cwiseAbs().maxCoeff(&arg);
      CHECK(arg == hw);
    }
    e0 += std::norm(s.data(ti, hw));
    etot += s.data.row(ti).squaredNorm();
  }
  CHECK(e0 / etot > 0.6);
}

TEST_CASE("short_time_af: brute-force windowed evaluation at n=32 of the builtin scenario") {
  const auto sc = fhsig::builtin_scenario();
  const CVec x = fhsig::synthesize(sc).samples;
  const int w = 15, hw = 7, center = 32;
  const auto slice = short_time_af(x, center, w);

  // oracle: literal window product x[u+tau] w[u-n+tau] x*[u-tau] w*[u-n-tau],
  // segment-relative phase
  for (int tau = -hw; tau <= hw; ++tau)
    for (int ks = -hw; ks <= hw; ++ks) {
      Complex acc(0.0, 0.0);
      for (int u = 0; u < static_cast<int>(x.size()); ++u) {
        const int a = u - center + tau, b = u - center - tau;
        if (std::abs(a) > hw || std::abs(b) > hw) continue;  // rectangular window
        const int p = u + tau, q = u - tau;
        const Complex xp = (p >= 0 && p < 64) ? x[p] : Complex(0, 0);
        const Complex xq = (q >= 0 && q < 64) ? x[q] : Complex(0, 0);
        acc += xp * std::conj(xq) * cis(2.0 * kPi * ks * (u - center + hw) / w);
      }
      CHECK(std::abs(slice.data(tau + hw, ks + hw) - acc) < 1e-10);
    }
}

TEST_CASE("spectrogram: zero signal and single-tone argmax") {
  CHECK(spectrogram(CVec::Zero(32), 15).data.norm() == 0.0);
  const int n = 64;
  CVec x(n);
  for (int i = 0; i < n; ++i) x[i] = cis(2.0 * kPi * (26.0 / 128.0) * i);
  const auto s = spectrogram(x, 15, 64);
  for (int t = 8; t < 56; ++t) {
    int arg = 0;
    s.data.col(t).real().maxCoeff(&arg);
    CHECK(arg == 26);
  }
  CHECK(s.data.imag().norm() == 0.0);
}

TEST_CASE("missing_af_terms: empty mask leaves only the full-data AF") {
  const auto sc = fhsig::builtin_scenario();
  const auto s = fhsig::synthesize(sc);
  const auto terms = missing_af_terms(s, {});
  REQUIRE(terms.size() == 5);
  CHECK((terms[0].data - af_from_iaf(iaf(s)).data).cwiseAbs().maxCoeff() < 1e-12);
  for (int i = 1; i < 5; ++i) CHECK(terms[i].data.norm() == 0.0);
}

TEST_CASE("missing_af_terms: decomposition sums to the masked AF (constant signal, one gap)") {
  fhsig::ObservedSignal s;
  s.samples = CVec::Ones(16);
  s.fs_hz = 1.0;
  const std::vector<int> mask = {5};
  const auto terms = missing_af_terms(s, mask);
  CVec masked = s.samples;
  masked[5] = Complex(0, 0);
  const auto direct = af_from_iaf(iaf(masked));
  CMat sum = terms[0].data;
  for (int i = 1; i < 5; ++i) sum += terms[i].data;
  CHECK((sum - direct.data).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("missing_af_terms: random signals and masks; tau=0 support of the third artifact") {
  RngStream rng(314);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 8 + rng.uniform_int(25);
    fhsig::ObservedSignal s;
    s.samples = random_signal(n, 1000 + trial);
    s.fs_hz = 1.0;
    const int m = rng.uniform_int(n / 2);
    std::vector<int> mask;
    for (int i = 0; i < m; ++i) {
      int idx = rng.uniform_int(n);
      if (std::find(mask.begin(), mask.end(), idx) == mask.end()) mask.push_back(idx);
    }
    const auto terms = missing_af_terms(s, mask);
    CVec masked = s.samples;
    for (int i : mask) masked[i] = Complex(0, 0);
    const auto direct = af_from_iaf(iaf(masked));
    CMat sum = terms[0].data;
    for (int i = 1; i < 5; ++i) sum += terms[i].data;
    CHECK((sum - direct.data).cwiseAbs().maxCoeff() < 1e-10);

    // third artifact term only occupies the tau = 0 row
    const int half = (n - 1) / 2;
    for (int ti = 0; ti < terms[3].data.rows(); ++ti)
      if (ti != half) CHECK(terms[3].data.row(ti).norm() == 0.0);
  }
}
