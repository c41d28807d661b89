#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mscale/error.hpp"
#include "mscale/forecast.hpp"
#include "mscale/ghe.hpp"
#include "mscale/panel.hpp"
#include "mscale/rolling.hpp"
#include "mscale/spectral.hpp"
#include "mscale/synth.hpp"

namespace py = pybind11;
using namespace mscale;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

Array to_array(const std::vector<double>& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Panel make_panel(const std::vector<std::string>& names, const Array& values,
                 const std::string& start) {
  if (values.ndim() != 2) throw py::value_error("values must be a 2-D array (nodes x hours)");
  const auto n = static_cast<std::size_t>(values.shape(0));
  const auto t = static_cast<std::size_t>(values.shape(1));
  if (names.size() != n) throw py::value_error("one name per row of values is required");
  std::vector<NodeId> ids;
  for (const auto& name : names) ids.push_back({name, ComponentRole::OTHER});
  return Panel(std::move(ids), parse_timestamp(start), t,
               std::vector<double>(values.data(), values.data() + n * t));
}

py::array_t<double> panel_values(const Panel& p) {
  py::array_t<double> out({p.node_count(), p.length()});
  auto* dst = out.mutable_data();
  for (std::size_t i = 0; i < p.node_count(); ++i) {
    const auto r = p.row(i);
    std::copy(r.begin(), r.end(), dst + i * p.length());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generalized Hurst exponents, seasonal filtering and trend forecasts for price panels";

  auto base = py::register_exception<Error>(m, "MscaleError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DegenerateSeries>(m, "DegenerateSeries", base.ptr());
  py::register_exception<InsufficientData>(m, "InsufficientData", base.ptr());

  // panel
  py::class_<Panel>(m, "Panel")
      .def(py::init(&make_panel), py::arg("names"), py::arg("values"),
           py::arg("start") = "2014-01-01T00:00:00Z")
      .def_property_readonly("node_count", &Panel::node_count)
      .def_property_readonly("length", &Panel::length)
      .def_property_readonly("start", [](const Panel& p) { return format_timestamp(p.start()); })
      .def_property_readonly("names",
                             [](const Panel& p) {
                               std::vector<std::string> out;
                               for (const auto& n : p.nodes()) out.push_back(n.name);
                               return out;
                             })
      .def_property_readonly("values", &panel_values)
      .def("row", [](const Panel& p, std::size_t i) {
        const auto r = p.row(i);
        return to_array({r.begin(), r.end()});
      });

  m.def(
      "load_panel",
      [](const std::filesystem::path& path, const std::string& format) {
        std::optional<PanelFormat> fmt;
        if (format == "auto")
          fmt = path.extension() == ".json" ? PanelFormat::json : PanelFormat::csv;
        else
          fmt = parse_panel_format(format);
        if (!fmt) throw InvalidConfig("unknown format '" + format + "'");
        return load_panel(path, *fmt);
      },
      py::arg("path"), py::arg("format") = "auto");
  m.def("cumulative_sum", [](const Array& x) { return to_array(cumulative_sum(view(x))); });

  // ghe
  py::class_<GheConfig>(m, "GheConfig")
      .def(py::init<>())
      .def_readwrite("q_grid", &GheConfig::q_grid)
      .def_readwrite("tau_max", &GheConfig::tau_max)
      .def_readwrite("nu", &GheConfig::nu)
      .def_readwrite("detrend", &GheConfig::detrend)
      .def_readwrite("tau_max_sweep", &GheConfig::tau_max_sweep);
  m.def("windowed_ghe_defaults", &windowed_ghe_defaults);

  py::class_<QEstimate>(m, "QEstimate")
      .def_readonly("q", &QEstimate::q)
      .def_readonly("hurst", &QEstimate::hurst)
      .def_readonly("fit_r2", &QEstimate::fit_r2)
      .def_readonly("sweep_std", &QEstimate::sweep_std)
      .def_readonly("denominator", &QEstimate::denominator)
      .def_readonly("structure", &QEstimate::structure);
  py::class_<GheResult>(m, "GheResult")
      .def_readonly("lags", &GheResult::lags)
      .def_readonly("estimates", &GheResult::estimates)
      .def("hurst", &GheResult::hurst, py::arg("q"));
  py::class_<MultiScalingReport>(m, "MultiScalingReport")
      .def_readonly("q_grid", &MultiScalingReport::q_grid)
      .def_readonly("mean_qH", &MultiScalingReport::mean_qH)
      .def_readonly("min_qH", &MultiScalingReport::min_qH)
      .def_readonly("max_qH", &MultiScalingReport::max_qH)
      .def_readonly("concavity_gap", &MultiScalingReport::concavity_gap)
      .def_readonly("used_series", &MultiScalingReport::used_series)
      .def_readonly("skipped_series", &MultiScalingReport::skipped_series);
  py::class_<SpectralExponent>(m, "SpectralExponent")
      .def_readonly("beta_spectral", &SpectralExponent::beta_spectral)
      .def_readonly("beta_predicted", &SpectralExponent::beta_predicted)
      .def_readonly("hurst2", &SpectralExponent::hurst2)
      .def_readonly("fitted_bins", &SpectralExponent::fitted_bins);

  m.def("structure_function",
        [](const Array& x, double q, std::size_t tau) { return structure_function(view(x), q, tau); },
        py::arg("x"), py::arg("q"), py::arg("tau"));
  m.def("estimate_ghe",
        [](const Array& s, const GheConfig& c, bool cumsum) { return estimate_ghe(view(s), c, cumsum); },
        py::arg("series"), py::arg("config") = GheConfig{}, py::arg("apply_cumsum") = true);
  m.def("multiscaling_report", &multiscaling_report, py::arg("panel"),
        py::arg("config") = GheConfig{}, py::arg("apply_cumsum") = true, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "spectral_exponent_check",
      [](const Array& s, const GheConfig& c, bool cumsum) {
        return spectral_exponent_check(view(s), c, cumsum);
      },
      py::arg("series"), py::arg("config") = GheConfig{}, py::arg("apply_cumsum") = true);
  m.def(
      "detrending_robustness",
      [](const Array& s, const GheConfig& c, const std::vector<std::size_t>& windows, bool cumsum) {
        return detrending_robustness(view(s), c, windows, cumsum);
      },
      py::arg("series"), py::arg("config") = GheConfig{}, py::arg("windows"),
      py::arg("apply_cumsum") = true);

  // spectral
  py::class_<PeakCriterion>(m, "PeakCriterion")
      .def(py::init<>())
      .def_readwrite("ratio", &PeakCriterion::ratio)
      .def_readwrite("halfwidth", &PeakCriterion::halfwidth)
      .def_readwrite("standard_periods", &PeakCriterion::standard_periods);
  py::class_<FilterSpec>(m, "FilterSpec")
      .def(py::init<>())
      .def_readwrite("periods_hours", &FilterSpec::periods_hours)
      .def_readwrite("bin_halfwidth", &FilterSpec::bin_halfwidth);
  py::class_<SpectralPeak>(m, "SpectralPeak")
      .def_readonly("bin", &SpectralPeak::bin)
      .def_readonly("period_hours", &SpectralPeak::period_hours)
      .def_readonly("ratio", &SpectralPeak::ratio)
      .def_readonly("label", &SpectralPeak::label);
  py::class_<SpectrumReport>(m, "SpectrumReport")
      .def_readonly("length", &SpectrumReport::length)
      .def_readonly("bin_freqs", &SpectrumReport::bin_freqs)
      .def_readonly("mean_power", &SpectrumReport::mean_power)
      .def_readonly("peaks", &SpectrumReport::peaks);

  m.def("power_spectrum", [](const Array& x) { return to_array(power_spectrum(view(x))); });
  m.def("market_average_spectrum", &market_average_spectrum, py::arg("panel"),
        py::arg("criterion") = PeakCriterion{}, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "remove_components",
      [](const Array& x, const FilterSpec& spec) { return to_array(remove_components(view(x), spec)); },
      py::arg("series"), py::arg("spec") = FilterSpec{});
  m.def("filter_panel", &filter_panel, py::arg("panel"), py::arg("spec") = FilterSpec{},
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());

  // rolling
  py::class_<RollingConfig>(m, "RollingConfig")
      .def(py::init<>())
      .def_readwrite("window", &RollingConfig::window)
      .def_readwrite("stride", &RollingConfig::stride)
      .def_readwrite("ghe", &RollingConfig::ghe)
      .def_readwrite("filtered", &RollingConfig::filtered)
      .def_readwrite("filter", &RollingConfig::filter)
      .def_readwrite("keep_per_node", &RollingConfig::keep_per_node);
  py::class_<RollingTrace>(m, "RollingTrace")
      .def_readonly("window_ends", &RollingTrace::window_ends)
      .def_readonly("q_grid", &RollingTrace::q_grid)
      .def_readonly("mean_h", &RollingTrace::mean_h)
      .def_readonly("std_h", &RollingTrace::std_h)
      .def_readonly("valid_nodes", &RollingTrace::valid_nodes)
      .def_readonly("per_node", &RollingTrace::per_node)
      .def("__len__", &RollingTrace::size);
  py::class_<Shift>(m, "Shift").def_readonly("time", &Shift::time).def_readonly("jump", &Shift::jump);
  py::class_<ShiftRegion>(m, "ShiftRegion")
      .def_readonly("first", &ShiftRegion::first)
      .def_readonly("last", &ShiftRegion::last)
      .def_readonly("largest_jump", &ShiftRegion::largest_jump);

  m.def("rolling_ghe", &rolling_ghe, py::arg("panel"), py::arg("config") = RollingConfig{},
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("detect_shifts", &detect_shifts, py::arg("trace"), py::arg("q"),
        py::arg("threshold") = 0.1);
  m.def("group_shifts", &group_shifts, py::arg("shifts"), py::arg("max_gap"));
  m.def("temporal_std", &temporal_std, py::arg("trace"), py::arg("q"));

  // forecast
  py::enum_<ErrorMetric>(m, "ErrorMetric")
      .value("absolute", ErrorMetric::absolute)
      .value("squared", ErrorMetric::squared);
  py::class_<ForecastConfig>(m, "ForecastConfig")
      .def(py::init<>())
      .def_readwrite("window", &ForecastConfig::window)
      .def_readwrite("lags", &ForecastConfig::lags)
      .def_readwrite("ghe", &ForecastConfig::ghe)
      .def_readwrite("filtered", &ForecastConfig::filtered)
      .def_readwrite("filter", &ForecastConfig::filter)
      .def_readwrite("metric", &ForecastConfig::metric);
  py::class_<ForecastRecord>(m, "ForecastRecord")
      .def(py::init<>())
      .def_readwrite("node", &ForecastRecord::node)
      .def_readwrite("origin", &ForecastRecord::origin)
      .def_readwrite("lag", &ForecastRecord::lag)
      .def_readwrite("predicted", &ForecastRecord::predicted)
      .def_readwrite("actual", &ForecastRecord::actual)
      .def_readwrite("error", &ForecastRecord::error)
      .def_readwrite("h1", &ForecastRecord::h1)
      .def_readwrite("h2", &ForecastRecord::h2)
      .def_readwrite("degenerate", &ForecastRecord::degenerate);
  py::class_<LogLinearFit>(m, "LogLinearFit")
      .def_readonly("e0", &LogLinearFit::e0)
      .def_readonly("c", &LogLinearFit::c)
      .def_readonly("r2", &LogLinearFit::r2)
      .def_readonly("n_points", &LogLinearFit::n_points)
      .def_readonly("excluded_zero_error", &LogLinearFit::excluded_zero_error)
      .def_readonly("excluded_degenerate", &LogLinearFit::excluded_degenerate);
  py::class_<LagSlope>(m, "LagSlope").def_readonly("lag", &LagSlope::lag).def_readonly("fit", &LagSlope::fit);
  py::class_<SlopeCurve>(m, "SlopeCurve")
      .def_readonly("q", &SlopeCurve::q)
      .def_readonly("filtered", &SlopeCurve::filtered)
      .def_readonly("points", &SlopeCurve::points)
      .def_readonly("skipped", &SlopeCurve::skipped);

  m.def("fit_trend_slope", [](const Array& w) { return fit_trend_slope(view(w)); });
  m.def(
      "forecast",
      [](const Array& s, std::size_t origin, std::size_t lag, std::size_t window) {
        return forecast(view(s), origin, lag, window);
      },
      py::arg("series"), py::arg("origin"), py::arg("lag"), py::arg("window"));
  m.def("study_record_count", &study_record_count);
  m.def("run_study", &run_study, py::arg("panel"), py::arg("config") = ForecastConfig{},
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def(
      "fit_error_vs_hurst",
      [](const std::vector<ForecastRecord>& records, int q, bool binned, std::size_t bins,
         std::optional<std::size_t> lag) {
        ErrorFitOptions opts;
        opts.mode = binned ? FitMode::binned : FitMode::pointwise;
        opts.bins = bins;
        opts.lag = lag;
        return fit_error_vs_hurst(records, q, opts);
      },
      py::arg("records"), py::arg("q") = 1, py::arg("binned") = false, py::arg("bins") = 20,
      py::arg("lag") = py::none());
  m.def("slope_vs_lag", &slope_vs_lag, py::arg("panel"), py::arg("config") = ForecastConfig{},
        py::arg("q") = 1, py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());

  // synth
  m.def(
      "gen_fbm",
      [](double hurst, std::size_t length, std::uint64_t seed, bool path) {
        FbmSpec spec;
        spec.hurst = hurst;
        spec.length = length;
        spec.seed = seed;
        spec.output = path ? FbmOutput::path : FbmOutput::increments;
        return to_array(gen_fbm(spec));
      },
      py::arg("hurst"), py::arg("length"), py::arg("seed") = 0, py::arg("path") = false);
  m.def(
      "gen_cascade",
      [](double m0, std::size_t depth, std::uint64_t seed) {
        return to_array(gen_cascade({m0, depth, seed}));
      },
      py::arg("m0") = 0.6, py::arg("depth") = 14, py::arg("seed") = 0);
  m.def(
      "gen_seasonal",
      [](const std::vector<std::pair<double, double>>& components, std::size_t length,
         std::optional<double> noise_hurst, std::uint64_t seed) {
        SeasonalSpec spec;
        spec.length = length;
        for (const auto& [period, amp] : components) spec.components.push_back({period, amp});
        if (noise_hurst) {
          FbmSpec noise;
          noise.hurst = *noise_hurst;
          noise.seed = seed;
          spec.noise = noise;
        }
        return to_array(gen_seasonal(spec));
      },
      py::arg("components"), py::arg("length") = 1632, py::arg("noise_hurst") = py::none(),
      py::arg("seed") = 0);
  m.def("fgn_autocovariance", &fgn_autocovariance, py::arg("hurst"), py::arg("lag"));
  m.def("cascade_mass_exponent", &cascade_mass_exponent, py::arg("m0"), py::arg("q"));
}
