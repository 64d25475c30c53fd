// Command line front end. Every number printed here comes straight from a
// library call; this file only parses flags and formats results.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "trajbound/ball.hpp"
#include "trajbound/bound.hpp"
#include "trajbound/error.hpp"
#include "trajbound/fbm.hpp"
#include "trajbound/fractal.hpp"
#include "trajbound/hurst.hpp"
#include "trajbound/indicators.hpp"
#include "trajbound/io.hpp"
#include "trajbound/pipeline.hpp"
#include "trajbound/sde.hpp"
#include "trajbound/stats.hpp"
#include "trajbound/trainer.hpp"

namespace tb = trajbound;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  bool verbose = false;
};

Globals g;

void note(const std::string& msg) {
  if (g.verbose) std::cerr << "[trajbound] " << msg << '\n';
}

class Stopwatch {
 public:
  explicit Stopwatch(std::string what) : what_(std::move(what)), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    note(what_ + " took " + tb::format_double(std::round(s * 1000) / 1000) + " s");
  }

 private:
  std::string what_;
  std::chrono::steady_clock::time_point start_;
};

void print(const tb::KeyValues& kv) { std::cout << tb::format_key_values(kv); }

tb::LogDtype parse_dtype(const std::string& s) {
  if (s == "f64") return tb::LogDtype::f64;
  if (s == "f32") return tb::LogDtype::f32;
  throw tb::DomainError("unknown dtype '" + s + "' (expected f64 or f32)");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw tb::FormatError("cannot write " + path);
  out << text;
}

// ---- fbm -----------------------------------------------------------------

struct FbmArgs {
  std::size_t n = 1024, d = 1;
  double hurst = 0.5, dt = 1.0;
  std::string method = "davies_harte", out, dtype = "f64";
};

void add_fbm(CLI::App& app) {
  auto a = std::make_shared<FbmArgs>();
  auto* cmd = app.add_subcommand("fbm", "sample a d-dimensional fractional Brownian motion path");
  cmd->add_option("--n", a->n, "number of steps")->capture_default_str();
  cmd->add_option("--d", a->d, "number of independent components")->capture_default_str();
  cmd->add_option("--hurst", a->hurst, "Hurst parameter in (0, 1)")->capture_default_str();
  cmd->add_option("--dt", a->dt, "time step")->capture_default_str();
  cmd->add_option("--method", a->method, "davies_harte | hosking | cholesky")->capture_default_str();
  cmd->add_option("--dtype", a->dtype, "f64 | f32")->capture_default_str();
  cmd->add_option("--out", a->out, "output trajectory log (.trjl or .csv)")->required();
  cmd->callback([a] {
    Stopwatch sw("fbm");
    const auto path = tb::sample_fbm_multi(a->n, a->d, tb::HurstParam(a->hurst), a->dt,
                                           tb::parse_fgn_method(a->method), g.seed);
    tb::write_log(path.values, a->out, parse_dtype(a->dtype));
    print({{"rows", std::to_string(path.values.rows())},
           {"cols", std::to_string(path.values.cols())},
           {"hurst", tb::format_double(a->hurst)},
           {"method", std::string(tb::to_string(tb::parse_fgn_method(a->method)))},
           {"seed", std::to_string(g.seed)},
           {"out", a->out}});
  });
}

// ---- hurst ---------------------------------------------------------------

struct HurstArgs {
  std::string in, strategy = "per_coordinate_mean", dump_fit;
  std::size_t subsample_count = 0, min_window = tb::kDefaultMinWindow;
};

tb::VectorHurstOptions hurst_options(const std::string& strategy, std::size_t count, std::size_t min_window) {
  tb::VectorHurstOptions o;
  o.min_window = min_window;
  if (strategy == "subsample") {
    if (count == 0) throw tb::DomainError("--strategy subsample needs --subsample-count");
    o.subsample = tb::Subsample{count, g.seed};
  } else if (strategy != "per_coordinate_mean") {
    throw tb::DomainError("unknown strategy '" + strategy + "' (expected per_coordinate_mean or subsample)");
  }
  return o;
}

void add_hurst(CLI::App& app) {
  auto a = std::make_shared<HurstArgs>();
  auto* cmd = app.add_subcommand("hurst", "estimate the Hurst parameter of each column by rescaled range");
  cmd->add_option("--in", a->in, "trajectory log, one column per coordinate")->required();
  cmd->add_option("--strategy", a->strategy, "per_coordinate_mean | subsample")->capture_default_str();
  cmd->add_option("--subsample-count", a->subsample_count, "coordinates drawn under --strategy subsample");
  cmd->add_option("--min-window", a->min_window, "smallest R/S window")->capture_default_str();
  cmd->add_option("--dump-fit", a->dump_fit, "write coordinate,log_window,log_rs CSV of the per-column fits");
  cmd->callback([a] {
    Stopwatch sw("hurst");
    auto m = tb::read_log(a->in);
    const auto est = tb::estimate_hurst_from_vectors(m, hurst_options(a->strategy, a->subsample_count, a->min_window));
    print({{"h_hat", tb::format_double(est.h_hat)},
           {"stderr", tb::format_double(est.stderr)},
           {"n_windows", std::to_string(est.n_windows)},
           {"coordinates", std::to_string(est.per_coordinate.size())}});
    if (!a->dump_fit.empty()) {
      std::string csv = "coordinate,log_window,log_rs\n";
      for (std::size_t c = 0; c < m.cols(); ++c) {
        const auto col = m.column(c);
        try {
          const auto fit = tb::estimate_hurst_rs(col, a->min_window);
          for (std::size_t i = 0; i < fit.log_windows.size(); ++i)
            csv += std::to_string(c) + ',' + tb::format_double(fit.log_windows[i]) + ',' +
                   tb::format_double(fit.log_rs[i]) + '\n';
        } catch (const tb::EstimationError&) {
          note("column " + std::to_string(c) + " has no usable fit");
        }
      }
      write_text(a->dump_fit, csv);
    }
  });
}

// ---- boxdim --------------------------------------------------------------

struct BoxdimArgs {
  std::string in, dump_scales, regime = "auto";
  double delta_min = 0.0, delta_max = 0.0;
  std::size_t scales = 12, project_dim = 0;
};

void add_boxdim(CLI::App& app) {
  auto a = std::make_shared<BoxdimArgs>();
  auto* cmd = app.add_subcommand("boxdim", "box-counting dimension of a point cloud (rows are points)");
  cmd->add_option("--in", a->in, "trajectory log")->required();
  cmd->add_option("--delta-min", a->delta_min, "smallest cell side (default from --regime)");
  cmd->add_option("--delta-max", a->delta_max, "largest cell side (default from --regime)");
  cmd->add_option("--regime", a->regime, "auto | trajectory: default scale range when deltas are omitted")
      ->capture_default_str();
  cmd->add_option("--scales", a->scales, "number of geometric scales")->capture_default_str();
  cmd->add_option("--project-dim", a->project_dim, "random projection target (0 = automatic above 64 dims)");
  cmd->add_option("--dump-scales", a->dump_scales, "write log_inv_delta,log_count CSV");
  cmd->callback([a] {
    Stopwatch sw("boxdim");
    const tb::PointCloud cloud(tb::read_log(a->in));
    std::pair<double, double> range;
    if (a->regime == "auto") {
      range = tb::auto_scaling_regime(cloud);
    } else if (a->regime == "trajectory") {
      range = tb::trajectory_scaling_regime(cloud);
    } else {
      throw tb::DomainError("unknown regime '" + a->regime + "'");
    }
    if (a->delta_min > 0) range.first = a->delta_min;
    if (a->delta_max > 0) range.second = a->delta_max;
    const auto est = tb::estimate_boxdim(cloud, range.first, range.second, {a->scales, a->project_dim, g.seed});
    print({{"dim_hat", tb::format_double(est.dim_hat)},
           {"r_squared", tb::format_double(est.r_squared)},
           {"delta_min", tb::format_double(range.first)},
           {"delta_max", tb::format_double(range.second)},
           {"projected_dim", std::to_string(est.projected_dim)},
           {"projection_seed", std::to_string(est.projection_seed)}});
    if (!a->dump_scales.empty()) {
      std::string csv = "log_inv_delta,log_count\n";
      for (const auto& s : est.scales)
        csv += tb::format_double(-std::log(s.delta)) + ',' + tb::format_double(std::log(static_cast<double>(s.count))) + '\n';
      write_text(a->dump_scales, csv);
    }
  });
}

// ---- diam ----------------------------------------------------------------

struct DiamArgs {
  std::string in;
  double eps = 1e-3;
  bool exact = false;
};

void add_diam(CLI::App& app) {
  auto a = std::make_shared<DiamArgs>();
  auto* cmd = app.add_subcommand("diam", "enclosing-ball diameter of a point cloud (rows are points)");
  cmd->add_option("--in", a->in, "trajectory log")->required();
  cmd->add_option("--eps", a->eps, "core-set approximation slack")->capture_default_str();
  cmd->add_flag("--exact", a->exact, "exact ball instead (dimension <= 3 only)");
  cmd->callback([a] {
    Stopwatch sw("diam");
    const tb::PointCloud cloud(tb::read_log(a->in));
    const auto ball = a->exact ? tb::exact_ball_welzl(cloud) : tb::miniball_core_set(cloud, a->eps);
    double center_sq = 0;
    for (double c : ball.center) center_sq += c * c;
    tb::KeyValues kv{{"center_norm", tb::format_double(std::sqrt(center_sq))},
                     {"radius", tb::format_double(ball.radius)},
                     {"diameter", tb::format_double(ball.diameter())},
                     {"eps", tb::format_double(ball.eps)},
                     {"iterations", std::to_string(ball.iterations)}};
    if (cloud.size() >= 2) kv.emplace_back("lower_bound", tb::format_double(tb::diameter_lower_bound(cloud)));
    print(kv);
  });
}

// ---- bound ---------------------------------------------------------------

struct BoundArgs {
  double diam = 0, hurst = 0.5, zeta = 1, beta = 0, tau = 0.05, risk = 0;
  std::size_t m = 0;
};

void add_bound(CLI::App& app) {
  auto a = std::make_shared<BoundArgs>();
  auto* cmd = app.add_subcommand("bound", "evaluate the trajectory generalization bound");
  cmd->add_option("--diam", a->diam, "diameter of the loss-evaluation set")->required();
  cmd->add_option("--m", a->m, "training set size")->required();
  cmd->add_option("--hurst", a->hurst, "Hurst estimate; values outside (0, 1) are clamped")->capture_default_str();
  cmd->add_option("--zeta", a->zeta, "loss upper bound")->capture_default_str();
  cmd->add_option("--beta", a->beta, "hypothesis-set stability")->capture_default_str();
  cmd->add_option("--tau", a->tau, "failure probability")->capture_default_str();
  cmd->add_option("--risk", a->risk, "empirical risk")->capture_default_str();
  cmd->callback([a] {
    const auto h = tb::clamp_hurst(a->hurst);
    auto report = tb::full_bound({a->diam, a->m, h.h, a->zeta, a->beta, a->tau, a->risk});
    report.clamped = h.clamped;
    print({{"hurst_used", tb::format_double(h.h.value())},
           {"rademacher", tb::format_double(tb::rademacher_bound(a->diam, a->m, h.h))},
           {"rademacher_term", tb::format_double(report.rademacher_term)},
           {"concentration_term", tb::format_double(report.concentration_term)},
           {"total", tb::format_double(report.total)},
           {"clamped", report.clamped ? "1" : "0"}});
  });
}

// ---- indicators ----------------------------------------------------------

struct IndicatorArgs {
  std::string sgn_in, weights_in;
  std::size_t k1 = 0;
  double tail_fraction = 0.1;
};

void add_indicators(CLI::App& app) {
  auto a = std::make_shared<IndicatorArgs>();
  auto* cmd = app.add_subcommand("indicators", "tail index, power-law index and norm measures");
  cmd->add_option("--sgn-in", a->sgn_in, "gradient-noise trajectory log");
  cmd->add_option("--weights-in", a->weights_in, "weight archive (text, or .trjl records)");
  cmd->add_option("--k1", a->k1, "block size of the tail-index estimator (0 = sqrt of length)");
  cmd->add_option("--tail-fraction", a->tail_fraction, "eigenvalue tail used by the Hill fit")->capture_default_str();
  cmd->callback([a] {
    if (a->sgn_in.empty() && a->weights_in.empty()) throw tb::DomainError("need --sgn-in and/or --weights-in");
    Stopwatch sw("indicators");
    tb::KeyValues kv;
    std::vector<std::string> failures;
    auto guarded = [&](const char* key, auto&& fn) {
      try {
        fn();
      } catch (const tb::EstimationError& e) {
        kv.emplace_back(key, "absent");
        failures.push_back(std::string(key) + ": " + e.what());
      } catch (const tb::NumericalError& e) {
        kv.emplace_back(key, "absent");
        failures.push_back(std::string(key) + ": " + e.what());
      }
    };
    if (!a->sgn_in.empty()) {
      const auto sgn = tb::read_log(a->sgn_in);
      guarded("bg_index", [&] { kv.emplace_back("bg_index", tb::format_double(tb::bg_index_from_vectors(sgn, a->k1))); });
    }
    if (!a->weights_in.empty()) {
      const auto layers = tb::read_weights(a->weights_in);
      guarded("power_law_index", [&] {
        kv.emplace_back("power_law_index", tb::format_double(tb::power_law_index_from_layers(layers, a->tail_fraction)));
      });
      guarded("norms", [&] {
        const auto n = tb::norm_measures(layers);
        kv.emplace_back("spectral_product", n.overflow ? "overflow" : tb::format_double(n.spectral_product));
        kv.emplace_back("frobenius_product", n.overflow ? "overflow" : tb::format_double(n.frobenius_product));
        kv.emplace_back("spectral_sum_log", tb::format_double(n.spectral_sum_log));
        kv.emplace_back("frobenius_sum_log", tb::format_double(n.frobenius_sum_log));
      });
    }
    print(kv);
    if (!failures.empty()) {
      for (const auto& f : failures) std::cerr << "trajbound: " << f << '\n';
      throw tb::EstimationError(std::to_string(failures.size()) + " indicator(s) could not be estimated");
    }
  });
}

// ---- sde -----------------------------------------------------------------

struct SdeArgs {
  std::string drift = "zero", out, method = "davies_harte", dtype = "f64";
  double rate = 1, a = 1, b = 1, sigma = 1, hurst = 0.5, dt = 1e-3, w0 = 0;
  std::size_t steps = 1000, dim = 1;
};

void add_sde(CLI::App& app) {
  auto a = std::make_shared<SdeArgs>();
  auto* cmd = app.add_subcommand("sde", "Euler-Maruyama integration of an fBm-driven SDE");
  cmd->add_option("--drift", a->drift, "zero | linear | double_well")->capture_default_str();
  cmd->add_option("--rate", a->rate, "linear drift rate")->capture_default_str();
  cmd->add_option("--well-a", a->a, "double-well cubic coefficient")->capture_default_str();
  cmd->add_option("--well-b", a->b, "double-well linear coefficient")->capture_default_str();
  cmd->add_option("--sigma", a->sigma, "diffusion scale")->capture_default_str();
  cmd->add_option("--hurst", a->hurst, "Hurst parameter of the driving noise")->capture_default_str();
  cmd->add_option("--dt", a->dt, "time step")->capture_default_str();
  cmd->add_option("--steps", a->steps, "number of steps")->capture_default_str();
  cmd->add_option("--dim", a->dim, "state dimension")->capture_default_str();
  cmd->add_option("--w0", a->w0, "initial value of every coordinate")->capture_default_str();
  cmd->add_option("--method", a->method, "noise generator")->capture_default_str();
  cmd->add_option("--dtype", a->dtype, "f64 | f32")->capture_default_str();
  cmd->add_option("--out", a->out, "output trajectory log")->required();
  cmd->callback([a] {
    Stopwatch sw("sde");
    tb::SdeConfig cfg;
    if (a->drift == "zero") {
      cfg.drift = tb::drift::Zero{};
    } else if (a->drift == "linear") {
      cfg.drift = tb::drift::Linear{a->rate};
    } else if (a->drift == "double_well") {
      cfg.drift = tb::drift::DoubleWell{a->a, a->b};
    } else {
      throw tb::DomainError("unknown drift '" + a->drift + "'");
    }
    cfg.sigma = a->sigma;
    cfg.h = tb::HurstParam(a->hurst);
    cfg.dt = a->dt;
    cfg.steps = a->steps;
    cfg.w0.assign(a->dim, a->w0);
    cfg.seed = g.seed;
    cfg.noise = tb::parse_fgn_method(a->method);
    const auto path = tb::integrate(cfg);
    tb::write_log(path.values, a->out, parse_dtype(a->dtype));
    tb::KeyValues kv{{"rows", std::to_string(path.values.rows())}, {"cols", std::to_string(path.values.cols())}};
    for (std::size_t c = 0; c < path.values.cols(); ++c)
      kv.emplace_back("terminal." + std::to_string(c), tb::format_double(path.values(path.values.rows() - 1, c)));
    print(kv);
  });
}

// ---- shared training flags -------------------------------------------------

struct TrainingArgs {
  std::string dataset = "blobs", layers;
  std::size_t classes = 2, dim = 32, m_train = 400, m_test = 400, width = 64, depth = 1;
  double separation = 3.0, noise = 0.1, init_scale = 1.0;
  tb::TrainConfig train;
};

void add_training_flags(CLI::App* cmd, TrainingArgs& a) {
  cmd->add_option("--dataset", a.dataset, "blobs | rings")->capture_default_str();
  cmd->add_option("--classes", a.classes, "blob classes")->capture_default_str();
  cmd->add_option("--dim", a.dim, "blob feature dimension")->capture_default_str();
  cmd->add_option("--separation", a.separation, "distance between blob centers")->capture_default_str();
  cmd->add_option("--noise", a.noise, "ring jitter")->capture_default_str();
  cmd->add_option("--m-train", a.m_train, "training examples")->capture_default_str();
  cmd->add_option("--m-test", a.m_test, "test examples")->capture_default_str();
  cmd->add_option("--layers", a.layers, "comma list of layer sizes, input first (overrides --width/--depth)");
  cmd->add_option("--width", a.width, "hidden units per layer")->capture_default_str();
  cmd->add_option("--depth", a.depth, "hidden layers")->capture_default_str();
  cmd->add_option("--init-scale", a.init_scale, "multiplier on the He initialization")->capture_default_str();
  cmd->add_option("--lr", a.train.lr, "learning rate")->capture_default_str();
  cmd->add_option("--batch", a.train.batch_size, "mini-batch size")->capture_default_str();
  cmd->add_option("--momentum", a.train.momentum, "momentum coefficient")->capture_default_str();
  cmd->add_option("--wd", a.train.weight_decay, "weight decay")->capture_default_str();
  cmd->add_option("--stop-loss", a.train.stop_loss, "stop when the running training loss falls below this")
      ->capture_default_str();
  cmd->add_option("--max-iters", a.train.max_iters, "iteration cap")->capture_default_str();
  cmd->add_option("--stride", a.train.loss_log_stride, "iterations between logged loss vectors")->capture_default_str();
  cmd->add_option("--sgn-coords", a.train.sgn_coord_count, "gradient coordinates logged per iteration")
      ->capture_default_str();
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double v = tb::parse_double(item);
    if (!(v >= 1) || v != std::floor(v)) throw tb::DomainError("bad layer size '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

tb::RunConfig run_config(const TrainingArgs& a) {
  tb::RunConfig c;
  if (a.dataset == "blobs") {
    c.dataset = tb::dataset::GaussianBlobs{a.classes, a.dim, a.separation};
  } else if (a.dataset == "rings") {
    c.dataset = tb::dataset::TwoRings{a.noise};
  } else {
    throw tb::DomainError("unknown dataset '" + a.dataset + "' (expected blobs or rings)");
  }
  c.m_train = a.m_train;
  c.m_test = a.m_test;
  c.width = a.width;
  c.depth = a.depth;
  c.init_scale = a.init_scale;
  c.train = a.train;
  return c;
}

// ---- train ---------------------------------------------------------------

void add_train(CLI::App& app) {
  auto a = std::make_shared<TrainingArgs>();
  auto out_dir = std::make_shared<std::string>();
  auto* cmd = app.add_subcommand("train", "train the toy MLP and write a run directory");
  add_training_flags(cmd, *a);
  cmd->add_option("--out-dir", *out_dir, "run directory to create")->required();
  cmd->callback([a, out_dir] {
    Stopwatch sw("train");
    const auto config = run_config(*a);
    auto run = tb::prepare_run(config, g.seed);
    auto echo = tb::describe_run(config, g.seed);
    if (!a->layers.empty()) {
      const auto sizes = parse_sizes(a->layers);
      if (sizes.size() < 2 || sizes.front() != run.spec.layer_sizes.front() ||
          sizes.back() != run.spec.layer_sizes.back()) {
        throw tb::DomainError("--layers must start with the feature dimension (" +
                              std::to_string(run.spec.layer_sizes.front()) + ") and end with the class count (" +
                              std::to_string(run.spec.layer_sizes.back()) + ")");
      }
      run.spec.layer_sizes = sizes;
      echo.emplace_back("layers", a->layers);
    }
    note("training " + std::to_string(run.spec.layer_sizes.size() - 1) + "-layer network on " +
         std::to_string(run.data.train.size()) + " examples");
    const auto log = tb::train(run.spec, run.train, run.data);
    tb::write_run_dir(log, echo, *out_dir);
    print(tb::artifacts_from_log(log, echo).summary);
  });
}

// ---- analyze -------------------------------------------------------------

struct AnalyzeArgs {
  std::string run_dir, strategy = "per_coordinate_mean", out;
  double zeta = 0, beta = 0, tau = 0.05, eps = 1e-3, tail_fraction = 0.1;
  std::size_t subsample_count = 0, min_window = tb::kDefaultMinWindow, k1 = 0;
};

void add_analyze_flags(CLI::App* cmd, AnalyzeArgs& a) {
  cmd->add_option("--zeta", a.zeta, "loss upper bound (default: largest observed loss)");
  cmd->add_option("--beta", a.beta, "hypothesis-set stability")->capture_default_str();
  cmd->add_option("--tau", a.tau, "failure probability")->capture_default_str();
  cmd->add_option("--strategy", a.strategy, "per_coordinate_mean | subsample")->capture_default_str();
  cmd->add_option("--subsample-count", a.subsample_count, "coordinates drawn under --strategy subsample");
  cmd->add_option("--min-window", a.min_window, "smallest R/S window")->capture_default_str();
  cmd->add_option("--eps", a.eps, "enclosing-ball slack")->capture_default_str();
  cmd->add_option("--k1", a.k1, "tail-index block size (0 = sqrt of length)");
  cmd->add_option("--tail-fraction", a.tail_fraction, "eigenvalue tail used by the Hill fit")->capture_default_str();
}

tb::AnalyzeOptions analyze_options(const AnalyzeArgs& a) {
  tb::AnalyzeOptions o;
  if (a.zeta > 0) o.zeta = a.zeta;
  o.beta = a.beta;
  o.tau = a.tau;
  o.hurst = hurst_options(a.strategy, a.subsample_count, a.min_window);
  o.ball_eps = a.eps;
  o.bg_k1 = a.k1;
  o.tail_fraction = a.tail_fraction;
  return o;
}

void add_analyze(CLI::App& app) {
  auto a = std::make_shared<AnalyzeArgs>();
  auto* cmd = app.add_subcommand("analyze", "Hurst estimate, diameter, bound and indicators of a run directory");
  cmd->add_option("--run-dir", a->run_dir, "directory written by `train`")->required();
  cmd->add_option("--out", a->out, "also write the report to this file");
  add_analyze_flags(cmd, *a);
  cmd->callback([a] {
    Stopwatch sw("analyze");
    const auto report = tb::analyze(a->run_dir, analyze_options(*a));
    const auto text = tb::format_key_values(report.to_key_values());
    std::cout << text;
    if (!a->out.empty()) write_text(a->out, text);
    if (!report.complete()) {
      for (const auto& f : report.failures) std::cerr << "trajbound: " << f << '\n';
      throw tb::EstimationError("report incomplete (" + std::to_string(report.failures.size()) + " field(s) absent)");
    }
  });
}

// ---- sweep ---------------------------------------------------------------

void add_sweep(CLI::App& app) {
  auto t = std::make_shared<TrainingArgs>();
  auto a = std::make_shared<AnalyzeArgs>();
  auto axis = std::make_shared<std::string>("train_size");
  auto values = std::make_shared<std::vector<double>>();
  auto seeds = std::make_shared<std::size_t>(5);
  auto out = std::make_shared<std::string>();
  auto* cmd = app.add_subcommand("sweep", "train and analyze over a grid of one hyperparameter");
  cmd->add_option("--axis", *axis, "train_size | lr | batch | momentum | wd | width | depth")->capture_default_str();
  cmd->add_option("--values", *values, "comma list of axis values")->delimiter(',')->required();
  cmd->add_option("--seeds", *seeds, "replicates per value; seeds are --seed, --seed+1, ...")->capture_default_str();
  cmd->add_option("--out", *out, "CSV output (default stdout)");
  add_training_flags(cmd, *t);
  add_analyze_flags(cmd, *a);
  cmd->callback([t, a, axis, values, seeds, out] {
    Stopwatch sw("sweep");
    tb::SweepSpec spec;
    spec.axis = tb::parse_sweep_axis(*axis);
    spec.values = *values;
    for (std::size_t i = 0; i < *seeds; ++i) spec.seeds.push_back(g.seed + i);
    spec.base = run_config(*t);
    spec.analyze = analyze_options(*a);
    spec.jobs = g.jobs;
    note(std::to_string(spec.values.size() * spec.seeds.size()) + " cells on " + std::to_string(g.jobs) + " job(s)");
    const auto rows = tb::run_sweep(spec);
    const auto csv = tb::sweep_csv(spec.axis, rows);
    if (out->empty()) {
      std::cout << csv;
    } else {
      write_text(*out, csv);
    }
    for (const auto& r : rows)
      if (!r.error.empty()) std::cerr << "trajbound: cell " << tb::format_double(r.axis_value) << "/" << r.seed << ": " << r.error << '\n';
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajectory-based generalization bound toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "parallel sweep cells")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_flag("--verbose,-v", g.verbose, "progress and timing on stderr");

  add_fbm(app);
  add_hurst(app);
  add_boxdim(app);
  add_diam(app);
  add_bound(app);
  add_indicators(app);
  add_sde(app);
  add_train(app);
  add_analyze(app);
  add_sweep(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(tb::ExitCode::usage);
  } catch (const tb::Error& e) {
    std::cerr << "trajbound: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "trajbound: internal error: " << e.what() << '\n';
    return 70;
  }
  return 0;
}
