#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mscale/error.hpp"
#include "mscale/forecast.hpp"
#include "mscale/ghe.hpp"
#include "mscale/panel.hpp"
#include "mscale/report.hpp"
#include "mscale/rolling.hpp"
#include "mscale/spectral.hpp"
#include "mscale/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace mscale::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Argument parsing helpers. Every option is captured as a string (or a flag)
// so that the resolved command line can be written to the manifest verbatim.

struct ArgRegistry {
  std::string positional_name;
  std::string* positional = nullptr;
  std::vector<std::pair<std::string, std::string*>> values;
  std::vector<std::pair<std::string, bool*>> flags;

  std::vector<std::string> resolved() const {
    std::vector<std::string> out;
    if (positional) out.push_back(*positional);
    for (const auto& [name, v] : values) {
      out.push_back(name);
      out.push_back(*v);
    }
    for (const auto& [name, f] : flags)
      if (*f) out.push_back(name);
    return out;
  }

  json to_json() const {
    json j = json::object();
    if (positional) j[positional_name] = *positional;
    for (const auto& [name, v] : values) j[name.substr(2)] = *v;
    for (const auto& [name, f] : flags) j[name.substr(2)] = *f;
    return j;
  }
};

void add_value(CLI::App* app, ArgRegistry& reg, const std::string& names, std::string& target,
               const std::string& help) {
  app->add_option(names, target, help)->capture_default_str();
  reg.values.emplace_back(names.substr(0, names.find(',')), &target);
}

void add_flag(CLI::App* app, ArgRegistry& reg, const std::string& name, bool& target,
              const std::string& help) {
  app->add_flag(name, target, help);
  reg.flags.emplace_back(name, &target);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw InvalidConfig("invalid number for " + what + ": '" + text + "'");
  return v;
}

std::size_t to_size(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw InvalidConfig("invalid non-negative integer for " + what + ": '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

// ---------------------------------------------------------------------------
// Output staging: nothing touches the disk until every result is computed.

class OutputSet {
public:
  void add(const std::string& name, std::string content) { files_[name] = std::move(content); }

  void commit(const fs::path& dir) const {
    fs::create_directories(dir);
    for (const auto& [name, content] : files_) write_atomic(dir / name, content);
  }

  static void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw Error("cannot write '" + tmp.string() + "'");
      f << content;
      if (!f) throw Error("failed writing '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
  }

private:
  std::map<std::string, std::string> files_;
};

json manifest(const std::string& command, const ArgRegistry& reg) {
  json m;
  m["tool"] = "mscale";
  m["version"] = kVersion;
  m["command"] = command;
  m["argv"] = reg.resolved();
  m["config"] = reg.to_json();
  return m;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Shared option groups.

struct InputOptions {
  std::string input;
  std::string format = "auto";
  std::string output;
  std::string threads = "0";

  void attach(CLI::App* app, ArgRegistry& reg) {
    add_value(app, reg, "--input,-i", input, "Panel file (CSV or JSON)");
    add_value(app, reg, "--format", format, "Panel format: csv, json or auto (by extension)");
    add_value(app, reg, "--output,-o", output, "Output directory");
    add_value(app, reg, "--threads", threads, "Worker threads (0 = all cores)");
  }

  Panel load() const {
    if (input.empty()) throw InvalidConfig("--input is required");
    if (output.empty()) throw InvalidConfig("--output is required");
    if (!fs::is_regular_file(input)) throw InvalidConfig("input file '" + input + "' not found");
    PanelFormat fmt = PanelFormat::csv;
    if (format == "auto") {
      if (fs::path(input).extension() == ".json") fmt = PanelFormat::json;
    } else {
      auto parsed = parse_panel_format(format);
      if (!parsed) throw InvalidConfig("unknown format '" + format + "'");
      fmt = *parsed;
    }
    return load_panel(input, fmt);
  }

  unsigned thread_count() const { return static_cast<unsigned>(to_size(threads, "--threads")); }
};

struct GheOptions {
  std::string q;
  std::string tau_max;
  std::string nu = "1";
  std::string detrend = "0";
  std::string sweep;

  GheOptions(std::string q_default, std::string tau_default)
      : q(std::move(q_default)), tau_max(std::move(tau_default)) {}

  void attach(CLI::App* app, ArgRegistry& reg) {
    add_value(app, reg, "--q", q, "Moments: list '1,2' or range 'start:stop:step'");
    add_value(app, reg, "--tau-max", tau_max, "Largest lag in samples");
    add_value(app, reg, "--nu", nu, "Lag step in samples");
    add_value(app, reg, "--detrend", detrend, "Detrend window in samples (0 = off)");
    add_value(app, reg, "--tau-max-sweep", sweep, "Average H over these tau_max values");
  }

  GheConfig config() const {
    GheConfig c;
    c.q_grid = parse_number_list(q);
    c.tau_max = to_size(tau_max, "--tau-max");
    c.nu = to_size(nu, "--nu");
    if (auto d = to_size(detrend, "--detrend"); d > 0) c.detrend = d;
    if (!trim(sweep).empty()) c.tau_max_sweep = parse_index_list(sweep);
    return c;
  }
};

struct FilterOptions {
  bool filtered = false;
  std::string periods = "24,12,8,6";
  std::string halfwidth = "0";

  void attach(CLI::App* app, ArgRegistry& reg) {
    add_flag(app, reg, "--filtered", filtered, "Notch out the seasonal periods first");
    add_value(app, reg, "--filter-periods", periods, "Periods (hours) removed by the filter");
    add_value(app, reg, "--filter-halfwidth", halfwidth, "Neighbour bins zeroed on each side");
  }

  FilterSpec spec() const {
    FilterSpec s;
    s.periods_hours = trim(periods).empty() ? std::vector<double>{} : parse_number_list(periods);
    s.bin_halfwidth = to_size(halfwidth, "--filter-halfwidth");
    return s;
  }
};

// ---------------------------------------------------------------------------
// Commands. Each returns the staged outputs; validation happens before any
// heavy computation.

struct SpectrumCmd {
  InputOptions io;
  std::string threshold = "10";
  std::string halfwidth = "16";

  void attach(CLI::App* app, ArgRegistry& reg) {
    io.attach(app, reg);
    add_value(app, reg, "--peaks-threshold", threshold, "Peak ratio against the local median");
    add_value(app, reg, "--peaks-halfwidth", halfwidth, "Bins on each side for the local median");
  }

  OutputSet run(const ArgRegistry& reg, std::ostream& out) const {
    PeakCriterion crit;
    crit.ratio = to_double(threshold, "--peaks-threshold");
    crit.halfwidth = to_size(halfwidth, "--peaks-halfwidth");
    if (!(crit.ratio > 0.0)) throw InvalidConfig("--peaks-threshold must be positive");
    const unsigned threads = io.thread_count();
    const Panel panel = io.load();
    if (panel.length() < 4) throw SeriesTooShort("spectrum needs at least 4 samples");

    const auto rep = market_average_spectrum(panel, crit, threads);
    out << "peaks (hours):";
    for (const auto& p : rep.peaks) {
      out << ' ' << format_double(p.period_hours);
      if (p.label) out << '[' << format_double(*p.label) << "h]";
    }
    out << '\n';

    OutputSet files;
    files.add("spectrum.csv", render([&](std::ostream& os) { report::write_spectrum_csv(os, rep); }));
    files.add("spectrum.json", dump(report::to_json(rep)));
    files.add("manifest.json", dump(manifest("spectrum", reg)));
    return files;
  }
};

struct GheCmd {
  InputOptions io;
  GheOptions ghe{"1,2", "456"};
  FilterOptions filter;
  bool no_cumsum = false;
  std::string robustness;
  bool spectral_check = false;

  void attach(CLI::App* app, ArgRegistry& reg) {
    io.attach(app, reg);
    ghe.attach(app, reg);
    filter.attach(app, reg);
    add_flag(app, reg, "--no-cumsum", no_cumsum, "Analyse the series itself, not its running sum");
    add_value(app, reg, "--robustness-windows", robustness,
              "Detrend windows for the robustness check, e.g. 6..12");
    add_flag(app, reg, "--spectral-check", spectral_check, "Compare beta with 1 + 2 H(2)");
  }

  OutputSet run(const ArgRegistry& reg, std::ostream& out) const {
    const unsigned threads = io.thread_count();
    const GheConfig config = ghe.config();
    const FilterSpec fspec = filter.spec();
    std::vector<std::size_t> windows;
    if (!trim(robustness).empty()) windows = parse_index_list(robustness);

    Panel panel = io.load();
    config.validate(panel.length());
    if (filter.filtered) {
      notch_bins(panel.length(), fspec);
      panel = filter_panel(panel, fspec, threads);
    }
    for (auto w : windows)
      if (w < 2 || w > panel.length() / 4)
        throw InvalidConfig("robustness window " + std::to_string(w) + " out of range");

    const bool cumsum = !no_cumsum;
    const auto rep = multiscaling_report(panel, config, cumsum, threads);
    out << "nodes used: " << rep.used_series << ", skipped: " << rep.skipped_series
        << ", mean H(1) - H(2): " << format_double(rep.concavity_gap) << '\n';

    OutputSet files;
    files.add("ghe.csv", render([&](std::ostream& os) { report::write_ghe_csv(os, rep, panel); }));
    files.add("multiscaling.csv",
              render([&](std::ostream& os) { report::write_multiscaling_csv(os, rep); }));
    files.add("ghe.json", dump(report::to_json(rep, panel)));

    if (!windows.empty() || spectral_check) {
      std::ostringstream rob, beta;
      rob << "node,max_relative_change\n";
      beta << "node,beta_spectral,beta_predicted\n";
      for (std::size_t i = 0; i < panel.node_count(); ++i) {
        const auto& name = panel.nodes()[i].name;
        if (!windows.empty()) {
          rob << name << ',';
          try {
            rob << format_double(detrending_robustness(panel.row(i), config, windows, cumsum));
          } catch (const DegenerateSeries&) {
          }
          rob << '\n';
        }
        if (spectral_check) {
          beta << name << ',';
          try {
            const auto b = spectral_exponent_check(panel.row(i), config, cumsum);
            beta << format_double(b.beta_spectral) << ',' << format_double(b.beta_predicted);
          } catch (const DegenerateSeries&) {
            beta << ',';
          }
          beta << '\n';
        }
      }
      if (!windows.empty()) files.add("robustness.csv", rob.str());
      if (spectral_check) files.add("spectral_check.csv", beta.str());
    }
    files.add("manifest.json", dump(manifest("ghe", reg)));
    return files;
  }
};

struct RollingCmd {
  InputOptions io;
  GheOptions ghe{"1,2", "10"};
  FilterOptions filter;
  std::string dh = "50";
  std::string stride = "1";
  std::string shift_threshold = "0.1";
  bool per_node = false;

  void attach(CLI::App* app, ArgRegistry& reg) {
    io.attach(app, reg);
    ghe.attach(app, reg);
    filter.attach(app, reg);
    add_value(app, reg, "--dh", dh, "Window length in samples");
    add_value(app, reg, "--stride", stride, "Step between windows");
    add_value(app, reg, "--shift-threshold", shift_threshold, "Jump in mean H flagged as a shift");
    add_flag(app, reg, "--per-node", per_node, "Also write every node's H per window");
  }

  OutputSet run(const ArgRegistry& reg, std::ostream& out) const {
    const unsigned threads = io.thread_count();
    RollingConfig config;
    config.window = to_size(dh, "--dh");
    config.stride = to_size(stride, "--stride");
    config.ghe = ghe.config();
    config.filtered = filter.filtered;
    config.filter = filter.spec();
    config.keep_per_node = per_node;
    const double threshold = to_double(shift_threshold, "--shift-threshold");

    const Panel panel = io.load();
    config.validate(panel.length());
    if (config.filtered) notch_bins(panel.length(), config.filter);

    const auto trace = rolling_ghe(panel, config, threads);

    std::ostringstream shifts;
    shifts << "q,time,jump\n";
    json shift_json = json::array();
    for (double q : trace.q_grid) {
      for (const auto& s : detect_shifts(trace, q, threshold)) {
        shifts << format_double(q) << ',' << s.time << ',' << format_double(s.jump) << '\n';
        shift_json.push_back({{"q", q}, {"time", s.time}, {"jump", s.jump}});
      }
    }
    out << "windows: " << trace.size() << ", shifts: " << shift_json.size() << '\n';

    OutputSet files;
    files.add("rolling.csv", render([&](std::ostream& os) { report::write_rolling_csv(os, trace); }));
    auto j = report::to_json(trace);
    j["shifts"] = shift_json;
    files.add("rolling.json", dump(j));
    files.add("shifts.csv", shifts.str());
    if (per_node)
      files.add("rolling_nodes.csv",
                render([&](std::ostream& os) { report::write_rolling_nodes_csv(os, trace, panel); }));
    files.add("manifest.json", dump(manifest("rolling", reg)));
    return files;
  }
};

struct ForecastCmd {
  InputOptions io;
  GheOptions ghe{"1,2", "10"};
  FilterOptions filter;
  std::string dh = "50";
  std::string lags = "1..24";
  bool compare = false;
  bool squared = false;
  std::string fit_mode = "pointwise";
  std::string bins = "20";
  bool records = false;

  void attach(CLI::App* app, ArgRegistry& reg, bool pipeline) {
    io.attach(app, reg);
    ghe.attach(app, reg);
    add_value(app, reg, "--dh", dh, "Training window in samples");
    add_value(app, reg, "--lags", lags, "Forecast lags, e.g. 1..24 or 1,6,12");
    if (!pipeline) {
      filter.attach(app, reg);
      add_flag(app, reg, "--compare-filtered", compare, "Fit both raw and filtered panels");
    } else {
      add_value(app, reg, "--filter-periods", filter.periods, "Periods (hours) removed");
      add_value(app, reg, "--filter-halfwidth", filter.halfwidth, "Neighbour bins zeroed");
      compare = true;
    }
    add_flag(app, reg, "--squared-error", squared, "Use squared instead of absolute error");
    add_value(app, reg, "--fit-mode", fit_mode, "pointwise or binned");
    add_value(app, reg, "--bins", bins, "H bins for the binned fit");
    add_flag(app, reg, "--records", records, "Write every forecast record");
  }

  OutputSet run(const ArgRegistry& reg, std::ostream& out, std::ostream& err,
                const std::string& command) const {
    const unsigned threads = io.thread_count();
    ForecastConfig config;
    config.window = to_size(dh, "--dh");
    config.lags = parse_index_list(lags);
    config.ghe = ghe.config();
    config.filtered = filter.filtered;
    config.filter = filter.spec();
    config.metric = squared ? ErrorMetric::squared : ErrorMetric::absolute;
    ErrorFitOptions fit_opts;
    if (fit_mode == "binned")
      fit_opts.mode = FitMode::binned;
    else if (fit_mode != "pointwise")
      throw InvalidConfig("--fit-mode must be pointwise or binned");
    fit_opts.bins = to_size(bins, "--bins");
    const std::vector<int> q_fit = [&] {
      std::vector<int> qs;
      for (double q : config.ghe.q_grid) {
        if (q != 1.0 && q != 2.0) throw InvalidConfig("forecast fits support q = 1 and q = 2 only");
        qs.push_back(static_cast<int>(q));
      }
      return qs;
    }();

    const Panel panel = io.load();
    config.validate(panel.length());
    if (config.filtered || compare) notch_bins(panel.length(), config.filter);

    std::vector<bool> variants;
    if (compare)
      variants = {false, true};
    else
      variants = {config.filtered};

    OutputSet files;
    std::vector<SlopeCurve> curves;
    json fits = json::array();
    for (bool filtered : variants) {
      ForecastConfig cfg = config;
      cfg.filtered = filtered;
      const auto recs = run_study(panel, cfg, threads);
      if (records) {
        const std::string name = filtered ? "records_filtered.csv" : "records.csv";
        files.add(name, render([&](std::ostream& os) { report::write_records_csv(os, recs, panel); }));
      }
      for (int q : q_fit) {
        SlopeCurve curve;
        curve.q = q;
        curve.filtered = filtered;
        for (auto p : cfg.lags) {
          ErrorFitOptions o = fit_opts;
          o.lag = p;
          try {
            curve.points.push_back({p, fit_error_vs_hurst(recs, q, o)});
          } catch (const InsufficientData& e) {
            curve.skipped.emplace_back(p, e.what());
            err << "fit skipped (q=" << q << ", p=" << p << (filtered ? ", filtered" : "")
                << "): " << e.what() << '\n';
          }
        }
        fits.push_back(report::to_json(curve));
        curves.push_back(std::move(curve));
      }
    }
    for (const auto& c : curves)
      for (const auto& pt : c.points)
        out << "q=" << c.q << (c.filtered ? " filtered" : " raw") << " p=" << pt.lag
            << " c=" << format_double(pt.fit.c) << '\n';

    files.add("slopes.csv", render([&](std::ostream& os) { report::write_slopes_csv(os, curves); }));
    files.add("fits.json", dump(fits));
    if (command == "pipeline") {
      const Panel filtered = filter_panel(panel, config.filter, threads);
      files.add("filtered_panel.csv",
                render([&](std::ostream& os) { write_panel_csv(os, filtered); }));
      files.add("spectrum_raw.json", dump(report::to_json(market_average_spectrum(panel, {}, threads))));
      files.add("spectrum_filtered.json",
                dump(report::to_json(market_average_spectrum(filtered, {}, threads))));
    }
    files.add("manifest.json", dump(manifest(command, reg)));
    return files;
  }
};

struct SynthCmd {
  std::string kind;
  std::string output;
  std::string hurst = "0.5";
  std::string length = "1632";
  std::string seed = "0";
  std::string nodes = "1";
  std::string m0 = "0.6";
  std::string depth = "14";
  std::string periods = "24:1";
  std::string noise_hurst;
  std::string start = "2014-01-01T00:00:00Z";
  bool path = false;
  std::string format = "csv";

  void attach(CLI::App* app, ArgRegistry& reg) {
    app->add_option("kind", kind, "fbm, cascade or seasonal")->required();
    reg.positional_name = "kind";
    reg.positional = &kind;
    add_value(app, reg, "--output,-o", output, "Panel file to write");
    add_value(app, reg, "--hurst,--H", hurst, "fBm Hurst exponent");
    add_value(app, reg, "--length,--T", length, "Samples per node");
    add_value(app, reg, "--seed", seed, "Base seed; node i uses seed + i");
    add_value(app, reg, "--nodes", nodes, "Number of nodes");
    add_value(app, reg, "--m0", m0, "Cascade multiplier");
    add_value(app, reg, "--depth", depth, "Cascade depth (length = 2^depth)");
    add_value(app, reg, "--periods", periods, "Seasonal components 'period:amplitude,...'");
    add_value(app, reg, "--noise-hurst", noise_hurst, "Add fGn noise with this Hurst exponent");
    add_value(app, reg, "--start", start, "Timestamp of the first sample");
    add_flag(app, reg, "--path", path, "fBm: write the path instead of increments");
    add_value(app, reg, "--format", format, "csv or json");
  }

  OutputSet run(const ArgRegistry& reg, std::ostream& out) const {
    if (output.empty()) throw InvalidConfig("--output is required");
    const auto fmt = parse_panel_format(format);
    if (!fmt) throw InvalidConfig("unknown format '" + format + "'");
    const std::size_t n = to_size(nodes, "--nodes");
    if (n == 0) throw InvalidConfig("--nodes must be at least 1");
    const std::uint64_t base = to_size(seed, "--seed");
    const HourStamp t0 = parse_timestamp(start);

    std::function<std::vector<double>(std::uint64_t)> make;
    if (kind == "fbm") {
      FbmSpec spec;
      spec.hurst = to_double(hurst, "--hurst");
      spec.output = path ? FbmOutput::path : FbmOutput::increments;
      const std::size_t len = to_size(length, "--length");
      if (!(spec.hurst > 0.0 && spec.hurst < 1.0)) throw InvalidConfig("--hurst must lie in (0, 1)");
      if (len < 2) throw InvalidConfig("--length must be at least 2");
      make = [spec, len](std::uint64_t s) {
        FbmSpec local = spec;
        local.seed = s;
        if (local.output == FbmOutput::path) {
          local.output = FbmOutput::increments;
          return cumulative_sum(gen_fbm_prefix(local, len));
        }
        return gen_fbm_prefix(local, len);
      };
    } else if (kind == "cascade") {
      CascadeSpec spec;
      spec.m0 = to_double(m0, "--m0");
      spec.depth = to_size(depth, "--depth");
      gen_cascade(spec);  // validates
      make = [spec](std::uint64_t s) {
        CascadeSpec local = spec;
        local.seed = s;
        return gen_cascade(local);
      };
    } else if (kind == "seasonal") {
      SeasonalSpec spec;
      spec.length = to_size(length, "--length");
      for (const auto& part : split(periods, ',')) {
        if (part.empty()) continue;
        const auto pa = split(part, ':');
        if (pa.size() != 2) throw InvalidConfig("--periods entries must be 'period:amplitude'");
        spec.components.push_back({to_double(pa[0], "--periods"), to_double(pa[1], "--periods")});
      }
      if (!trim(noise_hurst).empty()) {
        FbmSpec noise;
        noise.hurst = to_double(noise_hurst, "--noise-hurst");
        if (!(noise.hurst > 0.0 && noise.hurst < 1.0))
          throw InvalidConfig("--noise-hurst must lie in (0, 1)");
        spec.noise = noise;
      }
      SeasonalSpec probe = spec;
      probe.noise.reset();
      gen_seasonal(probe);  // validates
      make = [spec](std::uint64_t s) {
        SeasonalSpec local = spec;
        if (local.noise) local.noise->seed = s;
        return gen_seasonal(local);
      };
    } else {
      throw InvalidConfig("unknown synth kind '" + kind + "' (fbm, cascade, seasonal)");
    }

    std::vector<NodeId> ids;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "%s_%03zu", kind.c_str(), i);
      ids.push_back({name, ComponentRole::OTHER});
      rows.push_back(make(base + i));
    }
    const Panel panel = Panel::from_rows(std::move(ids), t0, rows);
    out << "wrote " << n << " node(s) x " << panel.length() << " samples to " << output << '\n';

    OutputSet files;
    files.add(fs::path(output).filename().string(), render([&](std::ostream& os) {
                if (*fmt == PanelFormat::csv)
                  write_panel_csv(os, panel);
                else
                  write_panel_json(os, panel);
              }));
    files.add(fs::path(output).filename().string() + ".manifest.json", dump(manifest("synth", reg)));
    return files;
  }
};

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int replay(const std::string& manifest_path, const std::string& output_override, std::ostream& out,
           std::ostream& err) {
  std::ifstream f(manifest_path);
  if (!f) throw InvalidConfig("cannot open manifest '" + manifest_path + "'");
  json m;
  try {
    m = json::parse(f);
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("invalid manifest: ") + e.what());
  }
  if (!m.contains("command") || !m.contains("argv"))
    throw InvalidConfig("manifest lacks 'command' or 'argv'");
  std::vector<std::string> args{"mscale", m["command"].get<std::string>()};
  auto argv = m["argv"].get<std::vector<std::string>>();
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (!output_override.empty() && (argv[i] == "--output") && i + 1 < argv.size()) {
      args.push_back(argv[i]);
      args.push_back(output_override);
      ++i;
      continue;
    }
    args.push_back(argv[i]);
  }
  return execute(args, out, err);
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-scaling analysis of hourly price panels", "mscale"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  ArgRegistry spectrum_reg, ghe_reg, rolling_reg, forecast_reg, pipeline_reg, synth_reg;
  SpectrumCmd spectrum;
  GheCmd ghe;
  RollingCmd rolling;
  ForecastCmd forecast_cmd, pipeline;
  SynthCmd synth;
  std::string manifest_path, replay_output;

  auto* s_spec = app.add_subcommand("spectrum", "Market-average power spectrum and its peaks");
  spectrum.attach(s_spec, spectrum_reg);
  auto* s_ghe = app.add_subcommand("ghe", "Whole-series generalized Hurst exponents");
  ghe.attach(s_ghe, ghe_reg);
  auto* s_roll = app.add_subcommand("rolling", "Generalized Hurst exponents on moving windows");
  rolling.attach(s_roll, rolling_reg);
  auto* s_fc = app.add_subcommand("forecast", "Trend forecasts and error-vs-Hurst slopes");
  forecast_cmd.attach(s_fc, forecast_reg, false);
  auto* s_pipe = app.add_subcommand("pipeline", "Filter then forecast: raw vs filtered c(p)");
  pipeline.attach(s_pipe, pipeline_reg, true);
  auto* s_synth = app.add_subcommand("synth", "Write a synthetic panel (fbm, cascade, seasonal)");
  synth.attach(s_synth, synth_reg);
  auto* s_replay = app.add_subcommand("replay", "Re-run a command from its manifest");
  s_replay->add_option("manifest", manifest_path, "manifest.json from an earlier run")->required();
  s_replay->add_option("--output,-o", replay_output, "Write to this location instead");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return ok;
  } catch (const CLI::ParseError& e) {
    // Subcommand help requests surface as ParseErrors with exit code 0.
    if (e.get_exit_code() == 0) {
      auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
      out << sub->help();
      return ok;
    }
    err << "error: " << e.what() << '\n';
    return validation_error;
  }

  OutputSet files;
  fs::path dest;
  if (s_spec->parsed()) {
    files = spectrum.run(spectrum_reg, out);
    dest = spectrum.io.output;
  } else if (s_ghe->parsed()) {
    files = ghe.run(ghe_reg, out);
    dest = ghe.io.output;
  } else if (s_roll->parsed()) {
    files = rolling.run(rolling_reg, out);
    dest = rolling.io.output;
  } else if (s_fc->parsed()) {
    files = forecast_cmd.run(forecast_reg, out, err, "forecast");
    dest = forecast_cmd.io.output;
  } else if (s_pipe->parsed()) {
    files = pipeline.run(pipeline_reg, out, err, "pipeline");
    dest = pipeline.io.output;
  } else if (s_synth->parsed()) {
    files = synth.run(synth_reg, out);
    dest = fs::path(synth.output).parent_path();
    if (dest.empty()) dest = ".";
  } else if (s_replay->parsed()) {
    return replay(manifest_path, replay_output, out, err);
  }
  files.commit(dest);
  return ok;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw InvalidConfig("empty number list");
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw InvalidConfig("range must be 'start:stop:step'");
    const double a = to_double(parts[0], "range start");
    const double b = to_double(parts[1], "range stop");
    const double step = to_double(parts[2], "range step");
    if (!(step > 0.0) || b < a) throw InvalidConfig("range needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
  }
  if (s.find("..") != std::string::npos) {
    for (auto v : parse_index_list(s)) out.push_back(static_cast<double>(v));
    return out;
  }
  for (const auto& part : split(s, ',')) out.push_back(to_double(part, "list entry"));
  return out;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw InvalidConfig("empty index list");
  std::vector<std::size_t> out;
  for (const auto& part : split(s, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_size(part, "list entry"));
      continue;
    }
    const std::size_t a = to_size(part.substr(0, dots), "range start");
    const std::size_t b = to_size(part.substr(dots + 2), "range end");
    if (b < a) throw InvalidConfig("range end before start in '" + part + "'");
    for (std::size_t v = a; v <= b; ++v) out.push_back(v);
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return execute(args, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return validation_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return runtime_error;
  }
}

}  // namespace mscale::cli
