#include "fhspec/prefopt.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fhspec/rng.hpp"
#include "fhspec/tfcore.hpp"

namespace fhspec::prefopt {

Mat default_bounds() {
  Mat b(4, 2);
  b << 0.01, 10.0, 0.01, 10.0, 0.01, 0.5, 0.01, 0.5;
  return b;
}

namespace {

void validate(const DeConfig& cfg) {
  if (cfg.pop_size < 4) throw std::invalid_argument("DeConfig: pop_size must be >= 4");
  if (cfg.generations < 1) throw std::invalid_argument("DeConfig: generations must be >= 1");
  if (cfg.bounds.cols() != 2 || cfg.bounds.rows() < 1)
    throw std::invalid_argument("DeConfig: bounds must be dim x 2");
  for (int d = 0; d < cfg.bounds.rows(); ++d)
    if (!(cfg.bounds(d, 0) <= cfg.bounds(d, 1)))
      throw std::invalid_argument("DeConfig: bounds rows must satisfy lo <= hi");
  if (!(cfg.adapt_c > 0.0 && cfg.adapt_c <= 1.0))
    throw std::invalid_argument("DeConfig: adapt_c must lie in (0, 1]");
}

Vec clip_to_box(Vec v, const Mat& b) {
  for (int d = 0; d < v.size(); ++d) v[d] = std::min(std::max(v[d], b(d, 0)), b(d, 1));
  return v;
}

kernels::EcskParams params_from_vector(const Vec& v) {
  return kernels::EcskParams{v[0], v[1], v[2], v[3]};
}

}  // namespace

DeResult de_minimize(const std::function<double(const Vec&)>& cost_fn, const DeConfig& cfg) {
  validate(cfg);
  const int dim = static_cast<int>(cfg.bounds.rows());
  const int np = cfg.pop_size;
  RngStream rng(cfg.seed);

  Mat pop(np, dim);
  Vec fit(np);
  for (int i = 0; i < np; ++i) {
    for (int d = 0; d < dim; ++d)
      pop(i, d) = cfg.bounds(d, 0) + rng.uniform() * (cfg.bounds(d, 1) - cfg.bounds(d, 0));
    fit[i] = cost_fn(pop.row(i).transpose());
  }

  int best_i = 0;
  fit.minCoeff(&best_i);
  Vec best_x = pop.row(best_i).transpose();
  double best_f = fit[best_i];

  double mu_f = 0.5, mu_cr = 0.5;
  Vec history(cfg.generations);

  for (int g = 0; g < cfg.generations; ++g) {
    double sf_num = 0.0, sf_den = 0.0, scr_sum = 0.0;
    int n_success = 0;
    for (int i = 0; i < np; ++i) {
      double f = rng.cauchy(mu_f, 0.1);
      while (f <= 0.0) f = rng.cauchy(mu_f, 0.1);
      if (f > 1.0) f = 1.0;
      double cr = mu_cr + 0.1 * rng.normal();
      cr = std::min(std::max(cr, 0.0), 1.0);

      int r1 = rng.uniform_int(np);
      while (r1 == i) r1 = rng.uniform_int(np);
      int r2 = rng.uniform_int(np);
      while (r2 == i || r2 == r1) r2 = rng.uniform_int(np);

      const Vec xi = pop.row(i).transpose();
      Vec v = xi + f * (best_x - xi) +
              f * (pop.row(r1).transpose() - pop.row(r2).transpose());
      const int j_rand = rng.uniform_int(dim);
      Vec u = xi;
      for (int d = 0; d < dim; ++d)
        if (d == j_rand || rng.uniform() < cr) u[d] = v[d];
      u = clip_to_box(std::move(u), cfg.bounds);

      const double fu = cost_fn(u);
      if (fu <= fit[i]) {
        if (fu < fit[i]) {
          sf_num += f * f;
          sf_den += f;
          scr_sum += cr;
          ++n_success;
        }
        pop.row(i) = u.transpose();
        fit[i] = fu;
        if (fu < best_f) {
          best_f = fu;
          best_x = u;
        }
      }
    }
    if (n_success > 0) {
      mu_f = (1.0 - cfg.adapt_c) * mu_f + cfg.adapt_c * (sf_num / sf_den);
      mu_cr = (1.0 - cfg.adapt_c) * mu_cr + cfg.adapt_c * (scr_sum / n_success);
    }
    history[g] = best_f;
  }

  DeResult out;
  out.best_vector = best_x;
  out.best_cost = best_f;
  out.history = history;
  out.population_final = pop;
  if (dim == 4) out.best_params = params_from_vector(best_x);
  return out;
}

namespace {

struct CostContext {
  std::vector<tfcore::StAfSlice> slices;
  int w_len;
  int n_record;
};

CostContext make_context(const fhsig::ObservedSignal& x, int w_len) {
  CostContext ctx;
  ctx.w_len = w_len;
  const int n = static_cast<int>(x.samples.size());
  ctx.n_record = n;
  ctx.slices.reserve((n + 1) / 2);
  for (int t = 0; t < n; t += 2) ctx.slices.push_back(tfcore::short_time_af(x.samples, t, w_len));
  return ctx;
}

// Per sampled instant: apply the pre-filter to the short-time AF slice, take
// the instant's own TFD column (window-center frequency profile), and measure
// its concentration. Measuring the per-instant column rather than the whole
// w x w patch keeps the cost insensitive to time-domain gaps from missing
// samples, which would otherwise reward kernels that blank the lag axis and
// flatten every spectrum.
double eval_cost(const CostContext& ctx, const kernels::EcskParams& p) {
  const CMat g = kernels::ecsk_surface(ctx.w_len, p, ctx.n_record).cast<Complex>();
  double acc = 0.0;
  int used = 0;
  for (const auto& s : ctx.slices) {
    tfcore::StAfSlice filtered = s;
    filtered.data = s.data.cwiseProduct(g);
    const Vec column = kernels::slice_center_spectrum(filtered);
    if (column.norm() == 0.0) continue;
    acc += kernels::concentration_measure(column);
    ++used;
  }
  if (used == 0) throw std::runtime_error("prefilter cost: every slice has zero energy");
  return acc / used;
}

}  // namespace

double cost(const fhsig::ObservedSignal& x, const kernels::EcskParams& p, int w_len) {
  kernels::validate(p);
  return eval_cost(make_context(x, w_len), p);
}

DeResult optimize(const fhsig::ObservedSignal& x, const DeConfig& cfg, int w_len) {
  DeConfig local = cfg;
  if (local.bounds.size() == 0) local.bounds = default_bounds();
  if (local.bounds.rows() != 4)
    throw std::invalid_argument("optimize: ECSK tuning needs 4-parameter bounds");
  const CostContext ctx = make_context(x, w_len);
  auto fn = [&ctx](const Vec& v) { return eval_cost(ctx, params_from_vector(v)); };
  return de_minimize(fn, local);
}

std::string scatter_dump(const std::vector<DeResult>& results) {
  if (results.empty()) throw std::invalid_argument("scatter_dump: no results");
  std::ostringstream os;
  os.precision(17);
  os << "rho1,rho2,xi1,xi2,cost\n";
  for (const auto& r : results) {
    os << r.best_params.rho1 << ',' << r.best_params.rho2 << ',' << r.best_params.xi1 << ','
       << r.best_params.xi2 << ',' << r.best_cost << '\n';
  }
  return os.str();
}

}  // namespace fhspec::prefopt
