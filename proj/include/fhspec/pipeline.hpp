#pragma once

// Configuration-driven pipeline runner: single-trial artifact bundles, Monte
// Carlo sweeps over SNR x missing-rate x method grids with deterministic
// child seeds and resumable per-trial caching, and raster plot emission.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fhspec/bcs.hpp"
#include "fhspec/fhsig.hpp"
#include "fhspec/io.hpp"
#include "fhspec/kernels.hpp"
#include "fhspec/metrics.hpp"
#include "fhspec/prefopt.hpp"

namespace fhspec::pipeline {

inline constexpr const char* kMethods[] = {"proposed", "spectrogram-baseline", "wvd-raw",
                                           "aok-only"};

struct RunConfig {
  std::string scenario_path;  // empty -> built-in three-emitter scenario
  std::vector<double> snr_db{0.0, 5.0, 10.0, 15.0};
  std::vector<double> missing_rate{0.25};
  std::vector<std::string> methods{"proposed"};
  int trials = 50;
  int first_trial = 1;  // trial indices run first_trial .. first_trial+trials-1
  std::uint64_t root_seed = 1;
  std::string out_dir = "out";

  int w_len = 15;
  double alpha_volume = 3.0;
  bool use_ecsk = true;
  bool optimize = true;        // tune the pre-filter per (snr, rate) cell
  kernels::EcskParams ecsk;    // used when optimize is false
  prefopt::DeConfig de;        // population/generations for the tuner
  bcs::BcsConfig bcs;
  int wvd_bins = 0;  // 0 -> lag count of the scenario record
  int n_threads = 1;
};

void validate(const RunConfig& cfg);

// JSON round trip; absent keys keep defaults. Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

fhsig::FhScenario load_scenario(const RunConfig& cfg);

// Deterministic seed split: hash of "root=<r>|snr=<s>|rate=<m>|method=<m>|trial=<t>".
std::uint64_t child_seed(std::uint64_t root, double snr_db, double rate,
                         const std::string& method, int trial);

// Pre-filter parameters for one sweep cell: tuned by the optimizer on the
// cell's tuning realization when cfg.optimize, else cfg.ecsk verbatim.
kernels::EcskParams cell_params(const RunConfig& cfg, const fhsig::FhScenario& sc, double snr_db,
                                double rate);

// One method applied to one observed realization.
struct MethodOutput {
  bcs::SpectrumEstimate estimate;
  Mat tfr;        // magnitude image actually thresholded/estimated from
  Vec freq_grid;  // bin frequencies of tfr rows
  kernels::KernelledRep rep;  // filled for proposed/aok-only
  bool has_rep = false;
};
MethodOutput run_method(const RunConfig& cfg, const fhsig::FhScenario& sc,
                        const fhsig::ObservedSignal& observed, const std::string& method,
                        const kernels::EcskParams& params, std::uint64_t estimator_seed);

// Synthesize -> noise -> mask for one trial, seeded by the child seed.
fhsig::ObservedSignal observe(const fhsig::FhScenario& sc, double snr_db, double rate,
                              std::uint64_t seed);

// Full trial: observe, run the method, score against ground truth.
metrics::TrialScore run_trial(const RunConfig& cfg, const fhsig::FhScenario& sc, double snr_db,
                              double rate, const std::string& method, int trial,
                              const kernels::EcskParams& params);

// Writes the single-trial artifact bundle (signal, joint representations,
// TFR, estimate, hop statistic, report, manifest) into
// <out_dir>/single_<method>_snr<s>_rate<r>_t<trial>/. Returns 0 on success,
// 3 on stage failure (partial artifacts plus a failed-stage manifest remain).
int run_single(const RunConfig& cfg, double snr_db, double rate, const std::string& method,
               int trial);

// Runs the full Cartesian sweep with per-trial resume, writes
// <out_dir>/sweep/sweep.csv (+ per-trial cache and manifest). Returns 0, or
// 3 if any trial failed (failed cells are reported and skipped in the CSV).
int run_sweep(const RunConfig& cfg);

// Renders PGM images for the artifacts found in dir (single-trial bundle or
// sweep directory). Missing artifacts are skipped with a warning on stderr.
int emit_plots(const std::string& dir);

}  // namespace fhspec::pipeline
