#pragma once

#include <vector>

#include "fhspec/fhsig.hpp"
#include "fhspec/types.hpp"

namespace fhspec::tfcore {

using fhsig::ObservedSignal;

// Symmetric integer lag grid {-L_tau .. +L_tau}, L_tau = floor((N-1)/2).
inline int lag_half_span(int n) { return (n - 1) / 2; }
Vec lag_grid(int n_samples);

// Doppler grid kappa/N cycles/sample, kappa = 0..N-1 (DFT order).
Vec doppler_grid(int n_samples);

// Frequency grid nu_k = k/(2L); the e^{-j4pi f tau} transform makes the
// representation 1/2-periodic in nu, so everything above fs/2 aliases.
Vec freq_grid(int n_bins);

// A short-time ambiguity slice.  Rows: lag -hw..hw; columns: Doppler in
// signed centered order -hw..hw (cycles/sample value = index / w_len).
struct StAfSlice {
  int center_n = 0;
  int w_len = 0;
  int n_record = 0;  // length of the record the slice was cut from
  CMat data;
};

// C[tau, n] = x[n+tau] conj(x[n-tau]), zero outside [0, N).
JointRep iaf(const CVec& x);
JointRep iaf(const ObservedSignal& x);

// A[tau, kappa] = sum_n C[tau, n] e^{+j 2 pi kappa n / N} (no 1/N factor).
JointRep af_from_iaf(const JointRep& c);
JointRep iaf_from_af(const JointRep& a);

// W[k, n] = sum_tau C[tau, n] e^{-j 4 pi nu_k tau}, nu_k = k/(2L).
// n_bins < number of lags is rejected (transform would not be invertible).
JointRep wvd_from_iaf(const JointRep& c, int n_bins = -1);
JointRep iaf_from_wvd(const JointRep& w);

StAfSlice short_time_af(const CVec& x, int center_n, int w_len);

// Squared-magnitude sliding-window Fourier transform on the freq_grid(L)
// frequency axis (default L = N).
JointRep spectrogram(const CVec& x, int w_len, int n_bins = -1);

// Missing-sample AF decomposition. Returns five lag x doppler terms, signs
// baked in so that terms[0] + ... + terms[4] equals the AF of the masked
// signal exactly:
//   [0] full-data AF of s
//   [1] signal x missing cross term anchored at n_m - tau
//   [2] signal x missing cross term anchored at n_m + tau
//   [3] missing auto term, supported only on the tau = 0 row
//   [4] missing x missing cross term (distinct missing pairs, tau != 0)
std::vector<JointRep> missing_af_terms(const ObservedSignal& s_full,
                                       const std::vector<int>& mask);

}  // namespace fhspec::tfcore
