#include "fhspec/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "fhspec/tfcore.hpp"

namespace fhspec::pipeline {

namespace {

bool known_method(const std::string& m) {
  for (const char* k : kMethods)
    if (m == k) return true;
  return false;
}

Vec index_grid(Eigen::Index n) { return Vec::LinSpaced(n, 0.0, static_cast<double>(n - 1)); }

int lag_count(const fhsig::FhScenario& sc) {
  return 2 * tfcore::lag_half_span(sc.n_samples) + 1;
}

// per-column threshold support at half the column maximum
bcs::SpectrumEstimate threshold_estimate(const Mat& tfr) {
  bcs::SpectrumEstimate est;
  est.support = IMat::Zero(tfr.rows(), tfr.cols());
  est.w_hat = CMat::Zero(tfr.rows(), tfr.cols());
  est.zero_columns = 0;
  for (Eigen::Index t = 0; t < tfr.cols(); ++t) {
    const double mx = tfr.col(t).maxCoeff();
    if (mx <= 0.0) {
      ++est.zero_columns;
      continue;
    }
    for (Eigen::Index k = 0; k < tfr.rows(); ++k)
      if (tfr(k, t) >= 0.5 * mx) {
        est.support(k, t) = 1;
        est.w_hat(k, t) = Complex(tfr(k, t), 0.0);
      }
  }
  return est;
}

std::string cell_tag(double snr_db, double rate, const std::string& method) {
  return method + "_snr" + io::fmt(snr_db) + "_rate" + io::fmt(rate);
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (cfg.snr_db.empty() || cfg.missing_rate.empty() || cfg.methods.empty())
    throw std::invalid_argument("config: snr_db, missing_rate and methods must be non-empty");
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  for (const std::string& m : cfg.methods)
    if (!known_method(m)) throw std::invalid_argument("config: unknown method '" + m + "'");
  for (double s : cfg.snr_db)
    if (std::isnan(s) || s == -std::numeric_limits<double>::infinity())
      throw std::invalid_argument("config: snr_db must be finite or +inf");
  for (double r : cfg.missing_rate)
    if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("config: missing_rate must be in [0,1)");
  if (cfg.w_len < 3 || cfg.w_len % 2 == 0)
    throw std::invalid_argument("config: w_len must be odd and >= 3");
  if (!(cfg.alpha_volume > 0.0)) throw std::invalid_argument("config: alpha_volume must be > 0");
  if (cfg.n_threads < 1) throw std::invalid_argument("config: n_threads must be >= 1");
  if (cfg.out_dir.empty()) throw std::invalid_argument("config: out_dir must be set");
}

RunConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{
      "scenario",  "snr_db", "missing_rate", "methods",  "trials",   "first_trial",
      "root_seed", "out_dir", "w_len",       "alpha_volume", "use_ecsk", "optimize",
      "ecsk",      "de",      "bcs",         "wvd_bins", "n_threads"};
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (!known.count(k)) throw std::invalid_argument("config: unknown key '" + k + "'");
  }
  RunConfig cfg;
  cfg.scenario_path = j.value("scenario", cfg.scenario_path);
  if (j.contains("snr_db")) cfg.snr_db = j.at("snr_db").get<std::vector<double>>();
  if (j.contains("missing_rate"))
    cfg.missing_rate = j.at("missing_rate").get<std::vector<double>>();
  if (j.contains("methods")) cfg.methods = j.at("methods").get<std::vector<std::string>>();
  cfg.trials = j.value("trials", cfg.trials);
  cfg.first_trial = j.value("first_trial", cfg.first_trial);
  cfg.root_seed = j.value("root_seed", cfg.root_seed);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  cfg.w_len = j.value("w_len", cfg.w_len);
  cfg.alpha_volume = j.value("alpha_volume", cfg.alpha_volume);
  cfg.use_ecsk = j.value("use_ecsk", cfg.use_ecsk);
  cfg.optimize = j.value("optimize", cfg.optimize);
  if (j.contains("ecsk")) {
    const auto& e = j.at("ecsk");
    cfg.ecsk.rho1 = e.value("rho1", cfg.ecsk.rho1);
    cfg.ecsk.rho2 = e.value("rho2", cfg.ecsk.rho2);
    cfg.ecsk.xi1 = e.value("xi1", cfg.ecsk.xi1);
    cfg.ecsk.xi2 = e.value("xi2", cfg.ecsk.xi2);
  }
  if (j.contains("de")) {
    const auto& d = j.at("de");
    cfg.de.pop_size = d.value("pop_size", cfg.de.pop_size);
    cfg.de.generations = d.value("generations", cfg.de.generations);
  }
  if (j.contains("bcs")) {
    const auto& b = j.at("bcs");
    cfg.bcs.sweeps = b.value("sweeps", cfg.bcs.sweeps);
    cfg.bcs.burn_in = b.value("burn_in", cfg.bcs.burn_in);
    cfg.bcs.samples_kept = b.value("samples_kept", cfg.bcs.samples_kept);
  }
  cfg.wvd_bins = j.value("wvd_bins", cfg.wvd_bins);
  cfg.n_threads = j.value("n_threads", cfg.n_threads);
  validate(cfg);
  return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["scenario"] = cfg.scenario_path;
  j["snr_db"] = cfg.snr_db;
  j["missing_rate"] = cfg.missing_rate;
  j["methods"] = cfg.methods;
  j["trials"] = cfg.trials;
  j["first_trial"] = cfg.first_trial;
  j["root_seed"] = cfg.root_seed;
  j["out_dir"] = cfg.out_dir;
  j["w_len"] = cfg.w_len;
  j["alpha_volume"] = cfg.alpha_volume;
  j["use_ecsk"] = cfg.use_ecsk;
  j["optimize"] = cfg.optimize;
  j["ecsk"] = {{"rho1", cfg.ecsk.rho1},
               {"rho2", cfg.ecsk.rho2},
               {"xi1", cfg.ecsk.xi1},
               {"xi2", cfg.ecsk.xi2}};
  j["de"] = {{"pop_size", cfg.de.pop_size}, {"generations", cfg.de.generations}};
  j["bcs"] = {{"sweeps", cfg.bcs.sweeps},
              {"burn_in", cfg.bcs.burn_in},
              {"samples_kept", cfg.bcs.samples_kept}};
  j["wvd_bins"] = cfg.wvd_bins;
  j["n_threads"] = cfg.n_threads;
  return j;
}

fhsig::FhScenario load_scenario(const RunConfig& cfg) {
  if (cfg.scenario_path.empty()) return fhsig::builtin_scenario();
  return io::scenario_from_json(io::load_json(cfg.scenario_path));
}

std::uint64_t child_seed(std::uint64_t root, double snr_db, double rate,
                         const std::string& method, int trial) {
  const std::string key = "root=" + std::to_string(root) + "|snr=" + io::fmt(snr_db) +
                          "|rate=" + io::fmt(rate) + "|method=" + method +
                          "|trial=" + std::to_string(trial);
  return io::fnv1a64(key);
}

fhsig::ObservedSignal observe(const fhsig::FhScenario& sc, double snr_db, double rate,
                              std::uint64_t seed) {
  RngStream rng(seed);
  fhsig::ObservedSignal x = fhsig::synthesize(sc);
  x = fhsig::add_noise(x, snr_db, rng);
  return fhsig::apply_missing(x, rate, rng);
}

kernels::EcskParams cell_params(const RunConfig& cfg, const fhsig::FhScenario& sc, double snr_db,
                                double rate) {
  if (!cfg.optimize || !cfg.use_ecsk) return cfg.ecsk;
  const std::uint64_t seed = child_seed(cfg.root_seed, snr_db, rate, "de-tune", 0);
  const fhsig::ObservedSignal tuning = observe(sc, snr_db, rate, seed);
  prefopt::DeConfig de = cfg.de;
  de.seed = seed;
  return prefopt::optimize(tuning, de, cfg.w_len).best_params;
}

MethodOutput run_method(const RunConfig& cfg, const fhsig::FhScenario& sc,
                        const fhsig::ObservedSignal& observed, const std::string& method,
                        const kernels::EcskParams& params, std::uint64_t estimator_seed) {
  if (!known_method(method)) throw std::invalid_argument("unknown method '" + method + "'");
  MethodOutput out;
  const int bins = cfg.wvd_bins > 0 ? cfg.wvd_bins : lag_count(sc);

  if (method == "proposed" || method == "aok-only") {
    const bool use_ecsk = cfg.use_ecsk && method == "proposed";
    out.rep = kernels::kernelled_tfd(observed, params, cfg.alpha_volume, cfg.w_len, use_ecsk);
    out.has_rep = true;
    out.tfr = out.rep.tfr.cwiseAbs();
    bcs::BcsConfig bc = cfg.bcs;
    bc.seed = estimator_seed;
    out.estimate = bcs::reconstruct(out.rep, bc);
    // score on the estimate's own grid (native window resolution)
    out.freq_grid = out.estimate.freq_grid.size() > 0 ? out.estimate.freq_grid : out.rep.freq_grid;
    return out;
  }

  if (method == "wvd-raw") {
    const JointRep w = tfcore::wvd_from_iaf(tfcore::iaf(observed), bins);
    out.tfr = w.data.cwiseAbs();
    out.freq_grid = w.row_axis.grid;
  } else {  // spectrogram-baseline
    const JointRep s = tfcore::spectrogram(observed.samples, cfg.w_len, bins);
    out.tfr = s.data.real();
    out.freq_grid = s.row_axis.grid;
  }
  out.estimate = threshold_estimate(out.tfr);
  return out;
}

metrics::TrialScore run_trial(const RunConfig& cfg, const fhsig::FhScenario& sc, double snr_db,
                              double rate, const std::string& method, int trial,
                              const kernels::EcskParams& params) {
  const std::uint64_t seed = child_seed(cfg.root_seed, snr_db, rate, method, trial);
  const std::uint64_t est_seed =
      child_seed(cfg.root_seed, snr_db, rate, method + "+estimator", trial);
  const fhsig::ObservedSignal observed = observe(sc, snr_db, rate, seed);
  const MethodOutput out = run_method(cfg, sc, observed, method, params, est_seed);

  const IMat truth = fhsig::ground_truth_support(sc, out.freq_grid);
  const std::vector<int> hops = fhsig::true_hop_indices(sc, out.freq_grid);
  metrics::TrialScore score = metrics::score_trial(out.estimate, truth, hops);
  score.snr_db = snr_db;
  score.missing_rate = rate;
  score.seed = seed;
  return score;
}

int run_single(const RunConfig& cfg, double snr_db, double rate, const std::string& method,
               int trial) {
  validate(cfg);
  const std::string dir =
      cfg.out_dir + "/single_" + cell_tag(snr_db, rate, method) + "_t" + std::to_string(trial);
  io::ensure_dir(dir);
  io::Manifest man;
  std::string stage = "setup";
  try {
    const fhsig::FhScenario sc = load_scenario(cfg);
    const std::uint64_t seed = child_seed(cfg.root_seed, snr_db, rate, method, trial);
    const std::uint64_t est_seed =
        child_seed(cfg.root_seed, snr_db, rate, method + "+estimator", trial);

    stage = "observe";
    const fhsig::ObservedSignal observed = observe(sc, snr_db, rate, seed);
    io::add_artifact(man, dir, "signal.csv", io::signal_csv(observed));

    stage = "transforms";
    const JointRep c = tfcore::iaf(observed);
    io::add_artifact(man, dir, "iaf.csv", io::joint_rep_csv(c));
    io::add_artifact(man, dir, "af.csv", io::joint_rep_csv(tfcore::af_from_iaf(c)));
    const int bins = cfg.wvd_bins > 0 ? cfg.wvd_bins : lag_count(sc);
    io::add_artifact(man, dir, "wvd.csv", io::joint_rep_csv(tfcore::wvd_from_iaf(c, bins)));

    stage = "tune";
    kernels::EcskParams params = cfg.ecsk;
    const bool tuned = method == "proposed" && cfg.use_ecsk && cfg.optimize;
    if (tuned) params = cell_params(cfg, sc, snr_db, rate);

    stage = "method";
    const MethodOutput out = run_method(cfg, sc, observed, method, params, est_seed);
    io::add_artifact(man, dir, "tfr.csv",
                     io::matrix_csv(out.tfr, out.freq_grid, index_grid(out.tfr.cols()),
                                    "frequency", "time"));
    const JointRep est_rep{out.estimate.w_hat,
                           {Axis::Frequency, out.freq_grid},
                           {Axis::Time, index_grid(out.estimate.w_hat.cols())},
                           "spectrum-estimate"};
    io::add_artifact(man, dir, "estimate_w.csv", io::joint_rep_csv(est_rep));
    io::add_artifact(man, dir, "support.csv", io::support_csv(out.estimate.support));

    stage = "metrics";
    const Vec delta = metrics::hop_statistic(out.estimate);
    io::add_artifact(man, dir, "delta.csv", io::delta_csv(delta));
    const IMat truth = fhsig::ground_truth_support(sc, out.freq_grid);
    const std::vector<int> hops = fhsig::true_hop_indices(sc, out.freq_grid);
    metrics::TrialScore score = metrics::score_trial(out.estimate, truth, hops);

    nlohmann::json rep;
    rep["method"] = method;
    rep["snr_db"] = snr_db;
    rep["missing_rate"] = rate;
    rep["trial"] = trial;
    rep["seed"] = seed;
    rep["estimator_seed"] = est_seed;
    rep["d_t"] = score.d_t;
    rep["d_f"] = score.d_f;
    rep["true_hops"] = hops;
    rep["n_missing"] = observed.missing.size();
    rep["noise_var"] = observed.noise_var;
    rep["params_used"] = {{"rho1", params.rho1},
                          {"rho2", params.rho2},
                          {"xi1", params.xi1},
                          {"xi2", params.xi2}};
    rep["tuned"] = tuned;
    rep["config"] = config_to_json(cfg);
    const std::string rep_text = rep.dump(2) + "\n";
    io::add_artifact(man, dir, "report.json", rep_text);

    io::write_manifest(dir, man);
    return 0;
  } catch (const std::exception& e) {
    man.status = "failed";
    man.failed_stage = stage;
    io::write_manifest(dir, man);
    std::fprintf(stderr, "run_single: stage '%s' failed: %s\n", stage.c_str(), e.what());
    return 3;
  }
}

namespace {

struct CellKey {
  double snr;
  double rate;
  std::string method;
};

std::string trial_file(const CellKey& c, int trial) {
  return cell_tag(c.snr, c.rate, c.method) + "_t" + std::to_string(trial) + ".json";
}

}  // namespace

int run_sweep(const RunConfig& cfg) {
  validate(cfg);
  const fhsig::FhScenario sc = load_scenario(cfg);
  const std::string dir = cfg.out_dir + "/sweep";
  const std::string tdir = dir + "/trials";
  io::ensure_dir(tdir);

  // resume bookkeeping: distrust any cached file whose manifest digest is stale
  std::set<std::string> distrusted;
  if (io::file_exists(dir + "/MANIFEST.json")) {
    try {
      const io::Manifest prev = io::read_manifest(dir);
      for (const std::string& bad : io::verify_manifest(dir, prev)) distrusted.insert(bad);
    } catch (const std::exception&) {
      // unreadable manifest: fall back to per-file validation below
    }
  }

  std::vector<CellKey> cells;
  for (double s : cfg.snr_db)
    for (double r : cfg.missing_rate)
      for (const std::string& m : cfg.methods) cells.push_back({s, r, m});
  std::sort(cells.begin(), cells.end(), [](const CellKey& a, const CellKey& b) {
    if (a.snr != b.snr) return a.snr < b.snr;
    if (a.rate != b.rate) return a.rate < b.rate;
    return a.method < b.method;
  });

  io::Manifest man;
  std::string csv = "snr_db,missing_rate,method,n_trials,p_t,e_f\n";
  bool any_failed = false;
  const auto t_start = std::chrono::steady_clock::now();

  for (const CellKey& cell : cells) {
    std::vector<metrics::TrialScore> scores(static_cast<std::size_t>(cfg.trials));
    std::vector<int> todo;
    for (int i = 0; i < cfg.trials; ++i) {
      const int trial = cfg.first_trial + i;
      const std::string fname = trial_file(cell, trial);
      const std::uint64_t expect_seed =
          child_seed(cfg.root_seed, cell.snr, cell.rate, cell.method, trial);
      bool cached = false;
      if (!distrusted.count("trials/" + fname) && io::file_exists(tdir + "/" + fname)) {
        try {
          const nlohmann::json j = io::load_json(tdir + "/" + fname);
          if (j.at("seed").get<std::uint64_t>() == expect_seed &&
              j.at("trial").get<int>() == trial) {
            metrics::TrialScore& ts = scores[static_cast<std::size_t>(i)];
            ts.d_t = j.at("d_t").get<double>();
            ts.d_f = j.at("d_f").get<double>();
            ts.snr_db = cell.snr;
            ts.missing_rate = cell.rate;
            ts.seed = expect_seed;
            cached = true;
          }
        } catch (const std::exception&) {
          cached = false;
        }
      }
      if (!cached) todo.push_back(i);
    }

    try {
      if (!todo.empty()) {
        const kernels::EcskParams params =
            cell.method == "proposed" ? cell_params(cfg, sc, cell.snr, cell.rate) : cfg.ecsk;
        std::atomic<std::size_t> cursor{0};
        std::exception_ptr err;
        std::mutex err_mu;
        auto worker = [&]() {
          for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= todo.size()) return;
            const int i = todo[k];
            try {
              scores[static_cast<std::size_t>(i)] = run_trial(
                  cfg, sc, cell.snr, cell.rate, cell.method, cfg.first_trial + i, params);
            } catch (...) {
              std::lock_guard<std::mutex> lk(err_mu);
              if (!err) err = std::current_exception();
              return;
            }
          }
        };
        const int n_workers = std::min<int>(cfg.n_threads, static_cast<int>(todo.size()));
        if (n_workers <= 1) {
          worker();
        } else {
          std::vector<std::thread> pool;
          for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
          for (std::thread& th : pool) th.join();
        }
        if (err) std::rethrow_exception(err);

        // single-writer: persist fresh trials from the main thread only
        for (const int i : todo) {
          const int trial = cfg.first_trial + i;
          const metrics::TrialScore& ts = scores[static_cast<std::size_t>(i)];
          nlohmann::json j;
          j["method"] = cell.method;
          j["snr_db"] = cell.snr;
          j["missing_rate"] = cell.rate;
          j["trial"] = trial;
          j["seed"] = ts.seed;
          j["d_t"] = ts.d_t;
          j["d_f"] = ts.d_f;
          io::save_json(tdir + "/" + trial_file(cell, trial), j);
        }
      }

      const metrics::EvalReport report = metrics::aggregate(scores);
      csv += io::fmt(cell.snr) + "," + io::fmt(cell.rate) + "," + cell.method + "," +
             std::to_string(cfg.trials) + "," + io::fmt(report.p_t) + "," + io::fmt(report.e_f) +
             "\n";
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
      std::fprintf(stderr, "sweep: %s done (%zu fresh, p_t=%.3f, e_f=%.3f, %.1fs elapsed)\n",
                   cell_tag(cell.snr, cell.rate, cell.method).c_str(), todo.size(), report.p_t,
                   report.e_f, elapsed);
    } catch (const std::exception& e) {
      any_failed = true;
      std::fprintf(stderr, "sweep: cell %s failed: %s\n",
                   cell_tag(cell.snr, cell.rate, cell.method).c_str(), e.what());
    }
  }

  io::add_artifact(man, dir, "sweep.csv", csv);
  // manifest covers the per-trial cache so resume can verify it
  for (const CellKey& cell : cells)
    for (int i = 0; i < cfg.trials; ++i) {
      const std::string fname = trial_file(cell, cfg.first_trial + i);
      if (io::file_exists(tdir + "/" + fname))
        man.digests["trials/" + fname] =
            "fnv1a64:" + io::hex64(io::fnv1a64(io::read_file(tdir + "/" + fname)));
    }
  if (any_failed) {
    man.status = "failed";
    man.failed_stage = "sweep";
  }
  io::write_manifest(dir, man);
  return any_failed ? 3 : 0;
}

int emit_plots(const std::string& dir) {
  int made = 0;
  auto warn = [](const std::string& what) {
    std::fprintf(stderr, "plot: skipping %s\n", what.c_str());
  };

  for (const std::string base : {"af", "iaf", "wvd", "tfr", "estimate_w", "support"}) {
    const std::string path = dir + "/" + base + ".csv";
    if (!io::file_exists(path)) {
      warn(base + ".csv (not found)");
      continue;
    }
    try {
      const io::ParsedMatrix pm = io::parse_matrix_csv(io::read_file(path));
      io::write_file(dir + "/" + base + ".pgm", io::pgm_image(pm.values));
      nlohmann::json side;
      side["source"] = base + ".csv";
      side["row_label"] = pm.row_label;
      side["col_label"] = pm.col_label;
      side["row_grid"] = std::vector<double>(pm.row_grid.data(), pm.row_grid.data() + pm.row_grid.size());
      side["col_grid"] = std::vector<double>(pm.col_grid.data(), pm.col_grid.data() + pm.col_grid.size());
      side["pixel_max_is_value"] = pm.values.cwiseAbs().maxCoeff();
      io::save_json(dir + "/" + base + "_axes.json", side);
      ++made;
    } catch (const std::exception& e) {
      warn(base + ".csv (" + e.what() + ")");
    }
  }

  const std::string delta_path = dir + "/delta.csv";
  if (io::file_exists(delta_path)) {
    try {
      const io::ParsedTable t = io::parse_table_csv(io::read_file(delta_path));
      Vec d(static_cast<Eigen::Index>(t.rows.size()));
      for (std::size_t i = 0; i < t.rows.size(); ++i)
        d[static_cast<Eigen::Index>(i)] = std::strtod(t.rows[i].at(1).c_str(), nullptr);
      if (d.size() == 0) throw std::runtime_error("empty");
      io::write_file(dir + "/delta.pgm", io::line_chart_pgm({d}));
      ++made;
    } catch (const std::exception& e) {
      warn(std::string("delta.csv (") + e.what() + ")");
    }
  } else {
    warn("delta.csv (not found)");
  }

  const std::string sweep_path = dir + "/sweep.csv";
  if (io::file_exists(sweep_path)) {
    try {
      const io::ParsedTable t = io::parse_table_csv(io::read_file(sweep_path));
      if (t.rows.empty()) throw std::runtime_error("no data rows");
      // one chart pair per missing rate: p_t (and e_f) vs SNR, one series per method
      std::set<std::string> rates, methods;
      for (const auto& row : t.rows) {
        rates.insert(row.at(1));
        methods.insert(row.at(2));
      }
      for (const std::string& rate : rates) {
        std::vector<Vec> pt_series, ef_series;
        nlohmann::json side;
        side["rate"] = rate;
        side["series"] = nlohmann::json::array();
        for (const std::string& m : methods) {
          std::vector<std::pair<double, std::pair<double, double>>> pts;
          for (const auto& row : t.rows)
            if (row.at(1) == rate && row.at(2) == m)
              pts.push_back({std::strtod(row.at(0).c_str(), nullptr),
                             {std::strtod(row.at(4).c_str(), nullptr),
                              std::strtod(row.at(5).c_str(), nullptr)}});
          if (pts.empty()) continue;
          std::sort(pts.begin(), pts.end());
          Vec pt(static_cast<Eigen::Index>(pts.size())), ef(static_cast<Eigen::Index>(pts.size()));
          nlohmann::json snrs = nlohmann::json::array();
          for (std::size_t i = 0; i < pts.size(); ++i) {
            pt[static_cast<Eigen::Index>(i)] = pts[i].second.first;
            ef[static_cast<Eigen::Index>(i)] = pts[i].second.second;
            snrs.push_back(pts[i].first);
          }
          pt_series.push_back(pt);
          ef_series.push_back(ef);
          side["series"].push_back({{"method", m}, {"snr_db", snrs}});
        }
        if (pt_series.empty()) continue;
        io::write_file(dir + "/pt_rate" + rate + ".pgm", io::line_chart_pgm(pt_series));
        io::write_file(dir + "/ef_rate" + rate + ".pgm", io::line_chart_pgm(ef_series));
        io::save_json(dir + "/charts_rate" + rate + "_axes.json", side);
        made += 2;
      }
    } catch (const std::exception& e) {
      warn(std::string("sweep.csv (") + e.what() + ")");
    }
  } else {
    warn("sweep.csv (not found)");
  }

  std::fprintf(stderr, "plot: %d image(s) written to %s\n", made, dir.c_str());
  return 0;
}

}  // namespace fhspec::pipeline
