#include "fhspec/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace fhspec::kernels {

namespace {

inline Complex cis(double phase) { return Complex(std::cos(phase), std::sin(phase)); }

double branch(double u, double rho, double xi) {
  if (std::fabs(u) >= xi) return 0.0;
  const double xi2 = xi * xi;
  // factored so the u = 0 exponent is exactly rho * (1 - 1) = 0
  return std::exp(rho * (1.0 + xi2 / (u * u - xi2)));
}

// bilinear read of a centered w x w surface at fractional offsets from center;
// outside the grid reads 0
double bilinear(const Mat& m, double x, double y) {
  const int hw = (static_cast<int>(m.rows()) - 1) / 2;
  const double fx = x + hw, fy = y + hw;
  const int x0 = static_cast<int>(std::floor(fx)), y0 = static_cast<int>(std::floor(fy));
  const double ax = fx - x0, ay = fy - y0;
  auto at = [&](int i, int j) -> double {
    if (i < 0 || j < 0 || i >= m.rows() || j >= m.cols()) return 0.0;
    return m(i, j);
  };
  return (1 - ax) * (1 - ay) * at(x0, y0) + ax * (1 - ay) * at(x0 + 1, y0) +
         (1 - ax) * ay * at(x0, y0 + 1) + ax * ay * at(x0 + 1, y0 + 1);
}

}  // namespace

void validate(const EcskParams& p) {
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!in(p.rho1, 0.01, 10.0) || !in(p.rho2, 0.01, 10.0) || !in(p.xi1, 0.01, 0.5) ||
      !in(p.xi2, 0.01, 0.5))
    throw std::invalid_argument("EcskParams out of bounds: rho in [0.01,10], xi in [0.01,0.5]");
}

double ecsk_weight(double tau_norm, double kappa_norm, const EcskParams& p) {
  validate(p);
  return branch(tau_norm, p.rho1, p.xi1) * branch(kappa_norm, p.rho2, p.xi2);
}

Mat ecsk_surface(int w_len, const EcskParams& p, int norm_len) {
  validate(p);
  if (norm_len == 0) norm_len = w_len;
  if (norm_len < w_len)
    throw std::invalid_argument("ecsk_surface: norm_len must be >= w_len");
  const int hw = (w_len - 1) / 2;
  Vec g1(w_len), g2(w_len);
  for (int i = 0; i < w_len; ++i) {
    const double u = static_cast<double>(i - hw) / norm_len;
    g1[i] = branch(u, p.rho1, p.xi1);
    g2[i] = branch(u, p.rho2, p.xi2);
  }
  return g1 * g2.transpose();  // separable: rows lag, cols Doppler
}

StAfSlice apply_prefilter(const StAfSlice& slice, const EcskParams& p) {
  StAfSlice out = slice;
  out.data = slice.data.cwiseProduct(ecsk_surface(slice.w_len, p, slice.n_record).cast<Complex>());
  return out;
}

double concentration_measure(const Mat& tfd_slice, double exponent) {
  if (!(exponent > 0.0)) throw std::invalid_argument("concentration_measure: exponent must be positive");
  const double energy = tfd_slice.norm();
  if (energy <= 0.0) throw std::invalid_argument("concentration_measure: zero-energy slice");
  const double s = tfd_slice.array().abs().pow(exponent).sum() / std::pow(energy, exponent);
  return std::pow(s, 1.0 / exponent);
}

Mat slice_tfd_abs(const StAfSlice& slice) {
  const int w = slice.w_len, hw = (w - 1) / 2;
  // inverse Doppler: C[tau, m] = (1/w) sum_ks A[tau, ks] e^{-j 2 pi ks m / w}
  CMat einv(w, w);
  for (int ki = 0; ki < w; ++ki)
    for (int m = 0; m < w; ++m) einv(ki, m) = cis(-2.0 * kPi * (ki - hw) * m / w) / static_cast<double>(w);
  const CMat c = slice.data * einv;
  // frequency transform: W[k, m] = sum_tau C[tau, m] e^{-j 4 pi (k/(2w)) tau}
  CMat f(w, w);
  for (int k = 0; k < w; ++k)
    for (int ti = 0; ti < w; ++ti) f(k, ti) = cis(-2.0 * kPi * k * (ti - hw) / w);
  return (f * c).cwiseAbs();
}

Vec slice_center_spectrum(const StAfSlice& slice) {
  const int w = slice.w_len, hw = (w - 1) / 2;
  // inverse Doppler at the window-center time m = hw only
  CVec c_center(w);
  for (int ti = 0; ti < w; ++ti) {
    Complex acc = 0;
    for (int ki = 0; ki < w; ++ki)
      acc += slice.data(ti, ki) * cis(-2.0 * kPi * (ki - hw) * hw / w);
    c_center[ti] = acc / static_cast<double>(w);
  }
  Vec out(w);
  for (int k = 0; k < w; ++k) {
    Complex acc = 0;
    for (int ti = 0; ti < w; ++ti) acc += c_center[ti] * cis(-2.0 * kPi * k * (ti - hw) / w);
    out[k] = std::abs(acc);
  }
  return out;
}

AokResult aok_optimize(const StAfSlice& slice, double alpha_volume, int iters) {
  if (!(alpha_volume > 0.0)) throw std::invalid_argument("aok_optimize: alpha_volume must be positive");
  const int w = slice.w_len, hw = (w - 1) / 2;
  const int n_ang = 64, n_rad = w;
  const double r_max = std::sqrt(2.0) * std::max(hw, 1);
  const double dr = r_max / (n_rad - 1);
  const double dpsi = 2.0 * kPi / n_ang;

  const Mat p_rect = slice.data.cwiseAbs2();

  // |A|^2 resampled onto the polar grid
  Mat p_pol(n_rad, n_ang);
  Vec radii(n_rad);
  for (int i = 0; i < n_rad; ++i) radii[i] = i * dr;
  for (int a = 0; a < n_ang; ++a) {
    const double ca = std::cos(a * dpsi), sa = std::sin(a * dpsi);
    for (int i = 0; i < n_rad; ++i)
      p_pol(i, a) = bilinear(p_rect, radii[i] * ca, radii[i] * sa);
  }

  // row weights r dr dpsi of the passband integral
  Vec wgt = radii * dr * dpsi;

  const double s_max = alpha_volume * 4.0 * kPi * kPi / dpsi;  // sum bound on sigma^2
  auto project = [&](Vec s) {
    s = s.cwiseMax(1e-9);
    const double tot = s.sum();
    if (tot > s_max) s *= s_max / tot;
    return s;
  };
  auto objective = [&](const Vec& s2) {
    double j = 0.0;
    for (int a = 0; a < n_ang; ++a)
      for (int i = 0; i < n_rad; ++i)
        j += p_pol(i, a) * std::exp(-radii[i] * radii[i] / s2[a]) * wgt[i];
    return j;
  };

  Vec s2 = Vec::Constant(n_ang, s_max / n_ang);  // start on the volume bound
  double j_cur = objective(s2);
  std::vector<double> trace{j_cur};
  double step = 0.5 * s_max / n_ang;
  bool converged = false;

  for (int it = 0; it < iters; ++it) {
    Vec grad(n_ang);
    for (int a = 0; a < n_ang; ++a) {
      double g = 0.0;
      const double s = s2[a];
      for (int i = 0; i < n_rad; ++i) {
        const double r2 = radii[i] * radii[i];
        g += p_pol(i, a) * std::exp(-r2 / s) * (r2 / (s * s)) * wgt[i];
      }
      grad[a] = g;
    }
    const double gmax = grad.cwiseAbs().maxCoeff();
    if (gmax <= 0.0) {
      converged = true;  // flat objective (e.g. all energy at the origin)
      break;
    }
    bool accepted = false;
    for (int h = 0; h < 30; ++h) {
      const Vec trial = project(s2 + (step / gmax) * grad);
      const double j_new = objective(trial);
      if (j_new >= j_cur) {
        if (j_new - j_cur < 1e-12 * std::max(1.0, std::fabs(j_cur))) {
          converged = true;
        }
        s2 = trial;
        j_cur = j_new;
        trace.push_back(j_cur);
        step *= 1.3;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || converged) {
      converged = true;
      break;
    }
  }

  AokResult out;
  out.state.sigma2_psi = s2;
  out.state.alpha_volume = alpha_volume;
  out.state.radii = radii;
  out.state.volume = s2.sum() * dpsi / (4.0 * kPi * kPi);
  out.converged = converged;
  out.objective_trace = Eigen::Map<const Vec>(trace.data(), static_cast<long>(trace.size()));

  // kernel back on the rectangular grid; angle linearly interpolated
  out.mask = Mat(w, w);
  for (int ti = 0; ti < w; ++ti)
    for (int ki = 0; ki < w; ++ki) {
      const double x = ti - hw, y = ki - hw;
      const double r2 = x * x + y * y;
      if (r2 == 0.0) {
        out.mask(ti, ki) = 1.0;
        continue;
      }
      double psi = std::atan2(y, x);
      if (psi < 0) psi += 2.0 * kPi;
      const double fa = psi / dpsi;
      const int a0 = static_cast<int>(std::floor(fa)) % n_ang;
      const int a1 = (a0 + 1) % n_ang;
      const double t = fa - std::floor(fa);
      const double s = (1 - t) * s2[a0] + t * s2[a1];
      out.mask(ti, ki) = std::exp(-r2 / (2.0 * s));
    }
  return out;
}

KernelledRep kernelled_tfd(const ObservedSignal& x, const EcskParams& p, double alpha_volume,
                           int w_len, bool use_ecsk) {
  validate(p);
  const int n = static_cast<int>(x.samples.size());
  const int hw = (w_len - 1) / 2;
  const int half = tfcore::lag_half_span(n);
  const int n_lag = 2 * half + 1;

  KernelledRep rep;
  rep.params_used = p;
  rep.alpha_volume = alpha_volume;
  rep.w_len = w_len;
  rep.lag_grid = tfcore::lag_grid(n);
  rep.freq_grid = tfcore::freq_grid(n_lag);
  rep.iaf = CMat::Zero(n_lag, n);
  rep.tfr = Mat::Zero(n_lag, n);
  rep.aok_converged.assign(n, 1);

  const Mat ecsk = ecsk_surface(w_len, p, n);

  // frequency transform of a centered short lag window, n_lag bins
  CMat fmat(n_lag, w_len);
  for (int k = 0; k < n_lag; ++k)
    for (int ti = 0; ti < w_len; ++ti)
      fmat(k, ti) = cis(-4.0 * kPi * (static_cast<double>(k) / (2.0 * n_lag)) * (ti - hw));

  for (int t = 0; t < n; ++t) {
    StAfSlice slice = tfcore::short_time_af(x.samples, t, w_len);
    if (use_ecsk) slice.data = slice.data.cwiseProduct(ecsk.cast<Complex>());
    if (slice.data.norm() == 0.0) continue;  // empty window: zero column

    const AokResult aok = aok_optimize(slice, alpha_volume);
    rep.aok_converged[t] = aok.converged ? 1 : 0;
    const CMat kern = slice.data.cwiseProduct(aok.mask.cast<Complex>());

    // kernelled IAF column: centered inverse Doppler at the window middle
    CVec c_col = CVec::Zero(w_len);
    for (int ti = 0; ti < w_len; ++ti) {
      Complex acc(0.0, 0.0);
      for (int ki = 0; ki < w_len; ++ki)
        acc += kern(ti, ki) * cis(-2.0 * kPi * (ki - hw) * hw / w_len);
      c_col[ti] = acc / static_cast<double>(w_len);
    }
    rep.iaf.col(t).segment(half - hw, w_len) = c_col;
    rep.tfr.col(t) = (fmat * c_col).real();
  }
  return rep;
}

}  // namespace fhspec::kernels
