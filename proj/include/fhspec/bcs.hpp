#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fhspec/kernels.hpp"
#include "fhspec/rng.hpp"
#include "fhspec/types.hpp"

namespace fhspec::bcs {

// c = lambda * w maps a sparse frequency column w to an IAF lag column c.
// The forward frequency transform of the tfcore convention applied to
// lambda's columns gives the identity, so lambda is its exact inverse.
struct Dictionary {
  CMat lambda;            // n_lag x n_freq (square)
  double col_norm2 = 0.0; // lambda_i^H lambda_i, identical for all columns
  std::string convention = "c = lambda*w; freq transform of lambda = I";
};

Dictionary build_dictionary(int n_freq, const Vec& lag_grid);

// 3x5 neighborhood of one time-frequency cell: rows are frequency offsets
// -1..1, columns time offsets -2..2. `window` holds z values (out-of-grid
// cells read 0), `valid` marks in-grid cells for clipped counts.
struct StructureContext {
  IMat window;
  IMat valid;
  double e = 0.5, f = 0.5;
};

// (z_ver, z_hor): vertical-structure weight (direct frequency neighbors count
// 1, diagonals 1/2) and horizontal run-length sum (0 when both immediate
// horizontal neighbors are absent).
std::pair<double, double> structure_factors(const IMat& window);

double varpi(double z_ver, double z_hor);

// Clamps varpi into [1/n, 1-1/n] to produce f; e = 1 - f.
std::pair<double, double> beta_hyper(double varpi_val, int n);

// Count of set cells (and of in-grid cells) in the distance-<=2 clipped
// neighborhood, center included: offsets (df, dn) with |df|<=1, |dn|<=2,
// df^2+dn^2 <= 4 (11 cells in the interior).
std::pair<int, int> neighborhood_counts(const StructureContext& ctx);

double sample_pi(const StructureContext& ctx, RngStream& rng);

struct EntrySample {
  int z = 0;
  Complex theta{0.0, 0.0};
};

// One spike-and-slab draw for a single entry given the residual with that
// entry's contribution removed. lam_h_resid = lambda_i^H c_{\i}.
EntrySample gibbs_entry(Complex lam_h_resid, double lam_norm2, double pi_i, double alpha_i,
                        double alpha_0, RngStream& rng);

struct BcsHyper {
  double a = 1e-6, b = 1e-6, c = 1e-6, d = 1e-6;
};

double update_alpha_i(const BcsHyper& h, int z_count, double theta_energy, RngStream& rng);
double update_alpha_0(const BcsHyper& h, int rank, double resid_norm2, RngStream& rng);

struct BcsConfig {
  int sweeps = 3;
  int burn_in = 100;
  int samples_kept = 100;
  BcsHyper hyper;
  std::uint64_t seed = 0;
};

struct SpectrumEstimate {
  CMat w_hat;    // freq x time, zero where support is 0
  IMat support;  // binary
  Vec freq_grid;  // frequency grid of the estimate's rows (may be coarser
                  // than the record grid when the kernel stage is short-time)
  Vec log_posterior_trace;  // per sweep, summed over columns
  int zero_columns = 0;
  Vec alpha0_final;  // per column noise precision after the last sweep
};

// Collapsed per-column score: residual Student term plus per-entry
// log-Gamma and log-Beta normalizers. The center column's support comes from
// w; neighbor columns read z_grid/theta_grid.
double log_posterior(const CVec& w, const CVec& c, const Dictionary& dict, const BcsHyper& hyper,
                     const IMat& z_grid, const CMat& theta_grid, int t_col);

// Column-by-column sparse spectrum estimation from the kernelled IAF. When
// kern.w_len indicates a short-time kernel (0 < w_len < lag rows), each
// column carries only the measured lag window |tau| <= (w_len-1)/2 — rows
// outside it are structural zeros of the assembly, not observations — so the
// estimate is formed on that window's native frequency grid (w_len bins,
// square invertible dictionary on the window's own lag grid). The estimate's
// freq_grid field carries the grid its rows live on.
SpectrumEstimate reconstruct(const kernels::KernelledRep& kern, const BcsConfig& cfg);

}  // namespace fhspec::bcs
