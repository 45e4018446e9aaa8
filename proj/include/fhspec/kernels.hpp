#pragma once

#include <vector>

#include "fhspec/tfcore.hpp"
#include "fhspec/types.hpp"

namespace fhspec::kernels {

using fhsig::ObservedSignal;
using tfcore::StAfSlice;

// Separable exponential-cutoff kernel, one branch per joint variable.
struct EcskParams {
  double rho1 = 1.0;
  double rho2 = 1.0;
  double xi1 = 0.5;
  double xi2 = 0.5;
};

// Throws std::invalid_argument when outside 0.01 <= rho <= 10, 0.01 <= xi <= 0.5.
void validate(const EcskParams& p);

// Branch product exp(rho + rho xi^2/(u^2 - xi^2)) on |u| < xi, else 0; both
// arguments in normalized units (grid index / grid length, in [-0.5, 0.5]).
double ecsk_weight(double tau_norm, double kappa_norm, const EcskParams& p);

// Weight surface on a w x w slice grid (lag rows -hw..hw, signed Doppler
// columns -hw..hw, both normalized by w).
// Separable weight surface on the w_len x w_len (lag, Doppler) index grid.
// Index offsets from center are normalized by norm_len (the record length;
// 0 means normalize by w_len, i.e. treat the slice as a full record).
Mat ecsk_surface(int w_len, const EcskParams& p, int norm_len = 0);

StAfSlice apply_prefilter(const StAfSlice& slice, const EcskParams& p);

// Energy concentration of an l2-normalized magnitude slice:
// M(p) = (sum |v|^p)^(1/p).  Default p = 1/2 gives (sum sqrt|v|)^2, which is
// 1 for a one-hot slice and grows as mass spreads; p = 2 is constant 1 under
// the normalization (kept selectable for fidelity experiments).
double concentration_measure(const Mat& tfd_slice, double exponent = 0.5);

// Magnitude of the 2-D (Doppler -> time, lag -> frequency) transform of a
// slice, on the slice's own w x w grid.
Mat slice_tfd_abs(const StAfSlice& slice);

// Magnitude frequency profile of a slice at its window-center instant: the
// center time column of slice_tfd_abs, computed directly.
Vec slice_center_spectrum(const StAfSlice& slice);

struct AokState {
  Vec sigma2_psi;          // spread^2 per angle node (uniform on [0, 2pi))
  double alpha_volume = 0; // volume bound
  Vec radii;               // polar radius nodes (grid index units)
  double volume = 0;       // achieved (1/4pi^2) integral of sigma^2
};

struct AokResult {
  AokState state;
  Mat mask;            // Phi on the rectangular slice grid, mask(0,0)=1 at center
  Vec objective_trace; // objective after init and each accepted step
  bool converged = false;
};

// Projected gradient ascent of the radially Gaussian kernel passband energy
// under the volume constraint (1/4pi^2) integral sigma^2(psi) dpsi <= alpha.
AokResult aok_optimize(const StAfSlice& slice, double alpha_volume, int iters = 50);

struct KernelledRep {
  Mat tfr;   // real freq x time
  CMat iaf;  // complex lag x time (full symmetric lag grid)
  EcskParams params_used;
  double alpha_volume = 0;
  int w_len = 0;
  Vec freq_grid;  // nu_k = k/(2 L), L = lag count
  Vec lag_grid;
  std::vector<uint8_t> aok_converged;  // per column
};

// Per time instant: short-time AF -> ECSK pre-filter -> AOK -> centered
// inverse Doppler (kernelled IAF column) -> frequency transform (TFD column).
// use_ecsk = false skips the pre-filter (kernel identical to 1).
KernelledRep kernelled_tfd(const ObservedSignal& x, const EcskParams& p, double alpha_volume,
                           int w_len, bool use_ecsk = true);

}  // namespace fhspec::kernels
