#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fhspec/fhsig.hpp"
#include "fhspec/kernels.hpp"
#include "fhspec/types.hpp"

namespace fhspec::prefopt {

// Adaptive differential evolution configuration. `bounds` is a dim x 2 matrix
// of [lo, hi] rows; an empty matrix means the ECSK parameter box.
struct DeConfig {
  int pop_size = 20;
  int generations = 50;
  std::uint64_t seed = 0;
  Mat bounds;
  double adapt_c = 0.1;  // mixing rate for the mutation/crossover means
};

struct DeResult {
  kernels::EcskParams best_params;  // filled when the problem is the ECSK box
  Vec best_vector;
  double best_cost = 0.0;
  Vec history;          // best-ever cost after each generation (non-increasing)
  Mat population_final; // pop_size x dim
};

// The ECSK search box: rho1, rho2 in [0.01, 10]; xi1, xi2 in [0.01, 0.5].
Mat default_bounds();

// Minimizes cost_fn over the box in cfg.bounds with current-to-best/1 adaptive
// DE (success-history adapted mutation factor and crossover rate). Every
// candidate passed to cost_fn lies inside the box.
DeResult de_minimize(const std::function<double(const Vec&)>& cost_fn, const DeConfig& cfg);

// Mean concentration of the ECSK-filtered short-time TFD slices taken at every
// 2nd time instant. Zero-energy slices are skipped; throws if all are skipped.
double cost(const fhsig::ObservedSignal& x, const kernels::EcskParams& p, int w_len = 15);

// Tunes the four ECSK parameters for the given observation.
DeResult optimize(const fhsig::ObservedSignal& x, const DeConfig& cfg, int w_len = 15);

// CSV table "rho1,rho2,xi1,xi2,cost" with one row per result.
std::string scatter_dump(const std::vector<DeResult>& results);

}  // namespace fhspec::prefopt
