// Command-line driver: configuration-driven pipeline runner and Monte Carlo
// harness for time-frequency spectrum estimation of frequency-hopping signals
// observed with noise and missing samples.
//
// Exit codes: 0 success, 2 configuration/validation error, 3 stage failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "fhspec/io.hpp"
#include "fhspec/pipeline.hpp"
#include "fhspec/prefopt.hpp"
#include "fhspec/tfcore.hpp"

using namespace fhspec;

namespace {

struct Cli {
  std::string config_path;
  std::string plot_dir;

  // override holders; applied only when the flag was passed
  std::vector<double> snr, rate;
  std::vector<std::string> methods;
  std::string scenario, out_dir;
  std::uint64_t root_seed = 0;
  int trials = 0, first_trial = 0, w_len = 0, wvd_bins = 0, n_threads = 0;
  int de_pop = 0, de_gens = 0, bcs_sweeps = 0, bcs_burn = 0, bcs_kept = 0;
  double alpha = 0.0;
  bool no_ecsk = false, no_optimize = false;
};

pipeline::RunConfig build_config(const CLI::App& app, const Cli& cli) {
  pipeline::RunConfig cfg;
  if (!cli.config_path.empty()) cfg = pipeline::config_from_json(io::load_json(cli.config_path));
  if (app.count("--snr")) cfg.snr_db = cli.snr;
  if (app.count("--rate")) cfg.missing_rate = cli.rate;
  if (app.count("--method")) cfg.methods = cli.methods;
  if (app.count("--scenario")) cfg.scenario_path = cli.scenario;
  if (app.count("--out")) cfg.out_dir = cli.out_dir;
  if (app.count("--seed")) cfg.root_seed = cli.root_seed;
  if (app.count("--trials")) cfg.trials = cli.trials;
  if (app.count("--first-trial")) cfg.first_trial = cli.first_trial;
  if (app.count("--w-len")) cfg.w_len = cli.w_len;
  if (app.count("--alpha")) cfg.alpha_volume = cli.alpha;
  if (app.count("--wvd-bins")) cfg.wvd_bins = cli.wvd_bins;
  if (app.count("--threads")) cfg.n_threads = cli.n_threads;
  if (app.count("--de-pop")) cfg.de.pop_size = cli.de_pop;
  if (app.count("--de-gens")) cfg.de.generations = cli.de_gens;
  if (app.count("--bcs-sweeps")) cfg.bcs.sweeps = cli.bcs_sweeps;
  if (app.count("--bcs-burn")) cfg.bcs.burn_in = cli.bcs_burn;
  if (app.count("--bcs-kept")) cfg.bcs.samples_kept = cli.bcs_kept;
  if (cli.no_ecsk) cfg.use_ecsk = false;
  if (cli.no_optimize) cfg.optimize = false;
  pipeline::validate(cfg);
  return cfg;
}

// the single-realization subcommands operate on the first grid entry
void announce_point(const pipeline::RunConfig& cfg) {
  std::fprintf(stderr, "using snr=%s dB, rate=%s, method=%s, trial=%d\n",
               io::fmt(cfg.snr_db[0]).c_str(), io::fmt(cfg.missing_rate[0]).c_str(),
               cfg.methods[0].c_str(), cfg.first_trial);
}

int cmd_generate(const pipeline::RunConfig& cfg) {
  announce_point(cfg);
  const fhsig::FhScenario sc = pipeline::load_scenario(cfg);
  const std::string dir = cfg.out_dir + "/generate";
  io::ensure_dir(dir);
  io::Manifest man;
  const std::uint64_t seed = pipeline::child_seed(cfg.root_seed, cfg.snr_db[0],
                                                  cfg.missing_rate[0], cfg.methods[0],
                                                  cfg.first_trial);
  const fhsig::ObservedSignal x =
      pipeline::observe(sc, cfg.snr_db[0], cfg.missing_rate[0], seed);
  io::add_artifact(man, dir, "scenario.json", io::scenario_to_json(sc).dump(2) + "\n");
  io::add_artifact(man, dir, "signal.csv", io::signal_csv(x));
  io::write_manifest(dir, man);
  std::fprintf(stderr, "generate: %s (n=%d, %zu missing, noise_var=%s)\n", dir.c_str(),
               sc.n_samples, x.missing.size(), io::fmt(x.noise_var).c_str());
  return 0;
}

int cmd_transform(const pipeline::RunConfig& cfg) {
  announce_point(cfg);
  const fhsig::FhScenario sc = pipeline::load_scenario(cfg);
  const std::string dir = cfg.out_dir + "/transform";
  io::ensure_dir(dir);
  io::Manifest man;
  const std::uint64_t seed = pipeline::child_seed(cfg.root_seed, cfg.snr_db[0],
                                                  cfg.missing_rate[0], cfg.methods[0],
                                                  cfg.first_trial);
  const fhsig::ObservedSignal x =
      pipeline::observe(sc, cfg.snr_db[0], cfg.missing_rate[0], seed);
  const JointRep c = tfcore::iaf(x);
  const int bins = cfg.wvd_bins > 0 ? cfg.wvd_bins : 2 * tfcore::lag_half_span(sc.n_samples) + 1;
  io::add_artifact(man, dir, "signal.csv", io::signal_csv(x));
  io::add_artifact(man, dir, "iaf.csv", io::joint_rep_csv(c));
  io::add_artifact(man, dir, "af.csv", io::joint_rep_csv(tfcore::af_from_iaf(c)));
  io::add_artifact(man, dir, "wvd.csv", io::joint_rep_csv(tfcore::wvd_from_iaf(c, bins)));
  io::write_manifest(dir, man);
  std::fprintf(stderr, "transform: wrote iaf/af/wvd to %s\n", dir.c_str());
  return 0;
}

int cmd_kernel(const pipeline::RunConfig& cfg) {
  announce_point(cfg);
  const fhsig::FhScenario sc = pipeline::load_scenario(cfg);
  const std::string dir = cfg.out_dir + "/kernel";
  io::ensure_dir(dir);
  io::Manifest man;
  const std::uint64_t seed = pipeline::child_seed(cfg.root_seed, cfg.snr_db[0],
                                                  cfg.missing_rate[0], cfg.methods[0],
                                                  cfg.first_trial);
  const fhsig::ObservedSignal x =
      pipeline::observe(sc, cfg.snr_db[0], cfg.missing_rate[0], seed);
  const kernels::EcskParams params =
      pipeline::cell_params(cfg, sc, cfg.snr_db[0], cfg.missing_rate[0]);
  const kernels::KernelledRep rep =
      kernels::kernelled_tfd(x, params, cfg.alpha_volume, cfg.w_len, cfg.use_ecsk);
  io::add_artifact(man, dir, "tfr.csv",
                   io::matrix_csv(rep.tfr.cwiseAbs(), rep.freq_grid,
                                  Vec::LinSpaced(rep.tfr.cols(), 0.0,
                                                 static_cast<double>(rep.tfr.cols() - 1)),
                                  "frequency", "time"));
  nlohmann::json pj = {{"rho1", params.rho1},
                       {"rho2", params.rho2},
                       {"xi1", params.xi1},
                       {"xi2", params.xi2},
                       {"tuned", cfg.optimize && cfg.use_ecsk}};
  io::add_artifact(man, dir, "ecsk_params.json", pj.dump(2) + "\n");
  io::write_manifest(dir, man);
  std::fprintf(stderr, "kernel: wrote tfr.csv to %s\n", dir.c_str());
  return 0;
}

int cmd_optimize(const pipeline::RunConfig& cfg) {
  announce_point(cfg);
  const fhsig::FhScenario sc = pipeline::load_scenario(cfg);
  const std::string dir = cfg.out_dir + "/optimize";
  io::ensure_dir(dir);
  io::Manifest man;
  const std::uint64_t seed = pipeline::child_seed(cfg.root_seed, cfg.snr_db[0],
                                                  cfg.missing_rate[0], "de-tune", 0);
  const fhsig::ObservedSignal x =
      pipeline::observe(sc, cfg.snr_db[0], cfg.missing_rate[0], seed);
  prefopt::DeConfig de = cfg.de;
  de.seed = seed;
  const prefopt::DeResult res = prefopt::optimize(x, de, cfg.w_len);
  nlohmann::json pj = {{"rho1", res.best_params.rho1},
                       {"rho2", res.best_params.rho2},
                       {"xi1", res.best_params.xi1},
                       {"xi2", res.best_params.xi2},
                       {"best_cost", res.best_cost},
                       {"generations", cfg.de.generations},
                       {"pop_size", cfg.de.pop_size},
                       {"seed", seed}};
  io::add_artifact(man, dir, "ecsk_params.json", pj.dump(2) + "\n");
  io::add_artifact(man, dir, "ecsk_scatter.csv", prefopt::scatter_dump({res}));
  io::write_manifest(dir, man);
  std::printf("best pre-filter: rho1=%s rho2=%s xi1=%s xi2=%s (cost %s)\n",
              io::fmt(res.best_params.rho1).c_str(), io::fmt(res.best_params.rho2).c_str(),
              io::fmt(res.best_params.xi1).c_str(), io::fmt(res.best_params.xi2).c_str(),
              io::fmt(res.best_cost).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fhspec: structure-aware time-frequency spectrum estimation for "
      "frequency-hopping signals with noisy, missing observations"};
  app.require_subcommand(1);

  Cli cli;
  app.add_option("--config", cli.config_path, "JSON configuration file");
  app.add_option("--snr", cli.snr, "SNR grid in dB (single-point commands use the first)");
  app.add_option("--rate", cli.rate, "missing-sample rate grid in [0,1)");
  app.add_option("--method", cli.methods,
                 "methods: proposed, spectrogram-baseline, wvd-raw, aok-only");
  app.add_option("--scenario", cli.scenario, "scenario JSON path (default: built-in)");
  app.add_option("--out", cli.out_dir, "output root directory")
      ->envname("FHSPEC_OUT");
  app.add_option("--seed", cli.root_seed, "root seed for the deterministic seed tree");
  app.add_option("--trials", cli.trials, "Monte Carlo trials per cell");
  app.add_option("--first-trial", cli.first_trial, "first trial index");
  app.add_option("--w-len", cli.w_len, "short-time window length (odd)");
  app.add_option("--alpha", cli.alpha, "kernel volume bound");
  app.add_option("--wvd-bins", cli.wvd_bins, "frequency bins (0 = lag count)");
  app.add_option("--threads", cli.n_threads, "worker threads for sweep trials");
  app.add_option("--de-pop", cli.de_pop, "optimizer population size");
  app.add_option("--de-gens", cli.de_gens, "optimizer generations");
  app.add_option("--bcs-sweeps", cli.bcs_sweeps, "estimator column sweeps");
  app.add_option("--bcs-burn", cli.bcs_burn, "estimator burn-in per column");
  app.add_option("--bcs-kept", cli.bcs_kept, "estimator kept samples per column");
  app.add_flag("--no-ecsk", cli.no_ecsk, "skip the pre-filter stage");
  app.add_flag("--no-optimize", cli.no_optimize, "use fixed pre-filter parameters");

  CLI::App* sub_generate =
      app.add_subcommand("generate", "synthesize + degrade one realization, write signal.csv");
  CLI::App* sub_transform =
      app.add_subcommand("transform", "write IAF/AF/WVD of one realization");
  CLI::App* sub_kernel =
      app.add_subcommand("kernel", "write the kernelled TFR of one realization");
  CLI::App* sub_optimize =
      app.add_subcommand("optimize", "tune pre-filter parameters, write params + scatter");
  CLI::App* sub_reconstruct = app.add_subcommand(
      "reconstruct", "full single-trial artifact bundle (signal .. estimate .. report)");
  CLI::App* sub_evaluate =
      app.add_subcommand("evaluate", "Monte Carlo scores for the first grid cell");
  CLI::App* sub_sweep =
      app.add_subcommand("sweep", "full SNR x rate x method Monte Carlo sweep");
  CLI::App* sub_plot = app.add_subcommand("plot", "render PGM images for a run directory");
  sub_plot->add_option("dir", cli.plot_dir, "artifact directory (default: <out>/sweep)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  pipeline::RunConfig cfg;
  try {
    cfg = build_config(app, cli);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  }

  try {
    if (sub_generate->parsed()) return cmd_generate(cfg);
    if (sub_transform->parsed()) return cmd_transform(cfg);
    if (sub_kernel->parsed()) return cmd_kernel(cfg);
    if (sub_optimize->parsed()) return cmd_optimize(cfg);
    if (sub_reconstruct->parsed())
      return pipeline::run_single(cfg, cfg.snr_db[0], cfg.missing_rate[0], cfg.methods[0],
                                  cfg.first_trial);
    if (sub_evaluate->parsed()) {
      pipeline::RunConfig one = cfg;
      one.snr_db = {cfg.snr_db[0]};
      one.missing_rate = {cfg.missing_rate[0]};
      one.methods = {cfg.methods[0]};
      return pipeline::run_sweep(one);
    }
    if (sub_sweep->parsed()) return pipeline::run_sweep(cfg);
    if (sub_plot->parsed())
      return pipeline::emit_plots(cli.plot_dir.empty() ? cfg.out_dir + "/sweep" : cli.plot_dir);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "stage failure: %s\n", e.what());
    return 3;
  }
  return 2;
}
