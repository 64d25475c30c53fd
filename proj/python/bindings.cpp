#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

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

namespace py = pybind11;
namespace tb = trajbound;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

tb::SeriesMatrix to_matrix(const Array& a) {
  if (a.ndim() == 1) return tb::SeriesMatrix(a.shape(0), 1, std::vector<double>(a.data(), a.data() + a.size()));
  if (a.ndim() != 2) throw tb::DomainError("expected a 1-d or 2-d array");
  return tb::SeriesMatrix(a.shape(0), a.shape(1), std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const tb::SeriesMatrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

Array to_array(const std::vector<double>& v) {
  Array out(v.size());
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::span<const double> as_span(const Array& a) { return {a.data(), static_cast<std::size_t>(a.size())}; }

py::dict to_dict(const tb::KeyValues& kv) {
  py::dict d;
  for (const auto& [k, v] : kv) d[py::str(k)] = v;
  return d;
}

tb::WeightMatrix to_weight(const Array& a, std::size_t layer) {
  if (a.ndim() != 2) throw tb::DomainError("weight matrix must be 2-d");
  return {layer, to_matrix(a)};
}

}  // namespace

PYBIND11_MODULE(_trajbound, m) {
  m.doc() = "Trajectory-based generalization bound toolkit.";

  auto error = py::register_exception<tb::Error>(m, "Error");
  py::register_exception<tb::DomainError>(m, "DomainError", error.ptr());
  py::register_exception<tb::EstimationError>(m, "EstimationError", error.ptr());
  py::register_exception<tb::NumericalError>(m, "NumericalError", error.ptr());
  py::register_exception<tb::FormatError>(m, "FormatError", error.ptr());
  py::register_exception<tb::DivergenceError>(m, "DivergenceError", error.ptr());

  m.def(
      "sample_fgn",
      [](std::size_t n, double h, const std::string& method, std::uint64_t seed) {
        return to_array(tb::sample_fgn(n, tb::HurstParam(h), tb::parse_fgn_method(method), seed));
      },
      py::arg("n"), py::arg("hurst"), py::arg("method") = "davies_harte", py::arg("seed") = 0);
  m.def(
      "sample_fbm",
      [](std::size_t n, std::size_t d, double h, double dt, const std::string& method, std::uint64_t seed) {
        return to_array(tb::sample_fbm_multi(n, d, tb::HurstParam(h), dt, tb::parse_fgn_method(method), seed).values);
      },
      py::arg("n"), py::arg("d") = 1, py::arg("hurst") = 0.5, py::arg("dt") = 1.0,
      py::arg("method") = "davies_harte", py::arg("seed") = 0,
      "Returns an (n+1) x d array starting at the origin.");
  m.def(
      "fbm_covariance", [](double t, double s, double h) { return tb::fbm_covariance(t, s, tb::HurstParam(h)); },
      py::arg("t"), py::arg("s"), py::arg("hurst"));

  m.def(
      "estimate_hurst",
      [](const Array& series, std::size_t min_window) {
        if (series.ndim() == 1) return tb::estimate_hurst_rs(as_span(series), min_window).h_hat;
        return tb::estimate_hurst_from_vectors(to_matrix(series), {std::nullopt, min_window}).h_hat;
      },
      py::arg("series"), py::arg("min_window") = tb::kDefaultMinWindow,
      "R/S estimate; a 2-d array is treated as K x d with one series per column.");

  m.def(
      "box_dimension",
      [](const Array& points, std::optional<double> delta_min, std::optional<double> delta_max, bool trajectory) {
        const tb::PointCloud cloud(to_matrix(points));
        auto [lo, hi] = trajectory ? tb::trajectory_scaling_regime(cloud) : tb::auto_scaling_regime(cloud);
        return tb::estimate_boxdim(cloud, delta_min.value_or(lo), delta_max.value_or(hi)).dim_hat;
      },
      py::arg("points"), py::arg("delta_min") = py::none(), py::arg("delta_max") = py::none(),
      py::arg("trajectory") = false);

  m.def(
      "enclosing_ball",
      [](const Array& points, double eps, bool exact) {
        const tb::PointCloud cloud(to_matrix(points));
        const auto b = exact ? tb::exact_ball_welzl(cloud) : tb::miniball_core_set(cloud, eps);
        return py::make_tuple(to_array(b.center), b.radius);
      },
      py::arg("points"), py::arg("eps") = 1e-3, py::arg("exact") = false, "Returns (center, radius).");

  m.def(
      "rademacher_bound",
      [](double diam, std::size_t m, double h) { return tb::rademacher_bound(diam, m, tb::clamp_hurst(h).h); },
      py::arg("diam"), py::arg("m"), py::arg("hurst"));
  m.def(
      "full_bound",
      [](double diam, std::size_t m, double h, double zeta, double beta, double tau, double risk) {
        const auto c = tb::clamp_hurst(h);
        const auto r = tb::full_bound({diam, m, c.h, zeta, beta, tau, risk});
        py::dict d;
        d["rademacher_term"] = r.rademacher_term;
        d["concentration_term"] = r.concentration_term;
        d["total"] = r.total;
        d["clamped"] = c.clamped;
        return d;
      },
      py::arg("diam"), py::arg("m"), py::arg("hurst"), py::arg("zeta") = 1.0, py::arg("beta") = 0.0,
      py::arg("tau") = 0.05, py::arg("empirical_risk") = 0.0);

  m.def(
      "bg_index", [](const Array& series, std::size_t k1) { return tb::estimate_bg_index(as_span(series), k1); },
      py::arg("series"), py::arg("k1") = 0);
  m.def(
      "spectral_norm", [](const Array& w) { return tb::spectral_norm(to_weight(w, 0)); }, py::arg("w"));
  m.def(
      "esd_eigenvalues", [](const Array& w) { return to_array(tb::esd_eigenvalues(to_weight(w, 0))); },
      py::arg("w"));
  m.def(
      "power_law_index",
      [](const Array& eig, double tail_fraction) { return tb::power_law_index(as_span(eig), tail_fraction); },
      py::arg("eigenvalues"), py::arg("tail_fraction") = 0.1);

  m.def(
      "integrate_sde",
      [](const std::string& drift, double rate, double sigma, double h, double dt, std::size_t steps, std::size_t dim,
         std::uint64_t seed) {
        tb::SdeConfig c;
        if (drift == "linear") c.drift = tb::drift::Linear{rate};
        else if (drift == "double_well") c.drift = tb::drift::DoubleWell{};
        else if (drift != "zero") throw tb::DomainError("unknown drift '" + drift + "'");
        c.sigma = sigma;
        c.h = tb::HurstParam(h);
        c.dt = dt;
        c.steps = steps;
        c.w0.assign(dim, 0.0);
        c.seed = seed;
        return to_array(tb::integrate(c).values);
      },
      py::arg("drift") = "zero", py::arg("rate") = 1.0, py::arg("sigma") = 1.0, py::arg("hurst") = 0.5,
      py::arg("dt") = 1e-3, py::arg("steps") = 1000, py::arg("dim") = 1, py::arg("seed") = 0);

  m.def(
      "write_log",
      [](const Array& a, const std::filesystem::path& path, const std::string& dtype) {
        if (dtype != "f64" && dtype != "f32") throw tb::DomainError("dtype must be f32 or f64");
        tb::write_log(to_matrix(a), path, dtype == "f32" ? tb::LogDtype::f32 : tb::LogDtype::f64);
      },
      py::arg("array"), py::arg("path"), py::arg("dtype") = "f64");
  m.def(
      "read_log", [](const std::filesystem::path& path) { return to_array(tb::read_log(path)); }, py::arg("path"));

  m.def(
      "analyze",
      [](const std::filesystem::path& dir) {
        const auto report = tb::analyze(dir);
        return to_dict(report.to_key_values());
      },
      py::arg("run_dir"), "Analyzes a run directory written by `trajbound train`; values are strings.");
}
