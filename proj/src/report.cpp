#include "mscale/report.hpp"

#include <cmath>
#include <ostream>

namespace mscale::report {

namespace {

nlohmann::json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string cell(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

std::string q_label(double q) { return format_double(q); }

}  // namespace

nlohmann::json to_json(const GheResult& result) {
  nlohmann::json j;
  j["lags"] = result.lags;
  auto& est = j["estimates"] = nlohmann::json::array();
  for (const auto& e : result.estimates) {
    nlohmann::json s;
    s["q"] = e.q;
    s["H"] = num(e.hurst);
    s["fit_r2"] = num(e.fit_r2);
    s["sweep_std"] = num(e.sweep_std);
    s["denominator"] = num(e.denominator);
    s["structure"] = e.structure;
    est.push_back(std::move(s));
  }
  return j;
}

nlohmann::json to_json(const MultiScalingReport& report, const Panel& panel) {
  nlohmann::json j;
  j["q"] = report.q_grid;
  j["mean_qH"] = report.mean_qH;
  j["min_qH"] = report.min_qH;
  j["max_qH"] = report.max_qH;
  j["concavity_gap"] = num(report.concavity_gap);
  j["used_series"] = report.used_series;
  j["skipped_series"] = report.skipped_series;
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (std::size_t i = 0; i < report.per_node.size(); ++i) {
    nlohmann::json n;
    n["name"] = panel.nodes()[i].name;
    n["role"] = std::string(to_string(panel.nodes()[i].role));
    n["result"] = report.per_node[i] ? to_json(*report.per_node[i]) : nlohmann::json(nullptr);
    nodes.push_back(std::move(n));
  }
  return j;
}

nlohmann::json to_json(const SpectrumReport& report) {
  nlohmann::json j;
  j["length"] = report.length;
  j["freq"] = report.bin_freqs;
  j["power"] = report.mean_power;
  auto& peaks = j["peaks"] = nlohmann::json::array();
  for (const auto& p : report.peaks) {
    nlohmann::json pk;
    pk["bin"] = p.bin;
    pk["period_hours"] = p.period_hours;
    pk["ratio"] = num(p.ratio);
    pk["label"] = p.label ? nlohmann::json(*p.label) : nlohmann::json(nullptr);
    peaks.push_back(std::move(pk));
  }
  return j;
}

nlohmann::json to_json(const RollingTrace& trace) {
  nlohmann::json j;
  j["time"] = trace.window_ends;
  j["valid_nodes"] = trace.valid_nodes;
  auto& per_q = j["series"] = nlohmann::json::array();
  for (std::size_t iq = 0; iq < trace.q_grid.size(); ++iq) {
    nlohmann::json s;
    s["q"] = trace.q_grid[iq];
    auto& m = s["mean_H"] = nlohmann::json::array();
    auto& sd = s["std_H"] = nlohmann::json::array();
    for (std::size_t w = 0; w < trace.size(); ++w) {
      m.push_back(num(trace.mean_h[iq][w]));
      sd.push_back(num(trace.std_h[iq][w]));
    }
    per_q.push_back(std::move(s));
  }
  return j;
}

nlohmann::json to_json(const LogLinearFit& fit) {
  return {{"E0", num(fit.e0)},
          {"c", num(fit.c)},
          {"r2", num(fit.r2)},
          {"n_points", fit.n_points},
          {"excluded_zero_error", fit.excluded_zero_error},
          {"excluded_degenerate", fit.excluded_degenerate}};
}

nlohmann::json to_json(const SlopeCurve& curve) {
  nlohmann::json j;
  j["q"] = curve.q;
  j["filtered"] = curve.filtered;
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : curve.points) {
    auto f = to_json(p.fit);
    f["p"] = p.lag;
    pts.push_back(std::move(f));
  }
  auto& skipped = j["skipped"] = nlohmann::json::array();
  for (const auto& [lag, why] : curve.skipped) skipped.push_back({{"p", lag}, {"reason", why}});
  return j;
}

void write_ghe_csv(std::ostream& out, const MultiScalingReport& report, const Panel& panel) {
  out << "node,q,H,fit_r2\n";
  for (std::size_t i = 0; i < report.per_node.size(); ++i) {
    const auto& res = report.per_node[i];
    for (std::size_t iq = 0; iq < report.q_grid.size(); ++iq) {
      out << panel.nodes()[i].name << ',' << q_label(report.q_grid[iq]) << ',';
      if (res)
        out << cell(res->estimates[iq].hurst) << ',' << cell(res->estimates[iq].fit_r2);
      else
        out << ',';
      out << '\n';
    }
  }
}

void write_multiscaling_csv(std::ostream& out, const MultiScalingReport& report) {
  out << "q,mean_qH,min_qH,max_qH\n";
  for (std::size_t iq = 0; iq < report.q_grid.size(); ++iq)
    out << q_label(report.q_grid[iq]) << ',' << cell(report.mean_qH[iq]) << ','
        << cell(report.min_qH[iq]) << ',' << cell(report.max_qH[iq]) << '\n';
}

void write_spectrum_csv(std::ostream& out, const SpectrumReport& report) {
  out << "bin,freq,power,is_peak,period_label\n";
  std::size_t next_peak = 0;
  for (std::size_t k = 0; k < report.mean_power.size(); ++k) {
    const SpectralPeak* peak = nullptr;
    if (next_peak < report.peaks.size() && report.peaks[next_peak].bin == k)
      peak = &report.peaks[next_peak++];
    out << k << ',' << cell(report.bin_freqs[k]) << ',' << cell(report.mean_power[k]) << ','
        << (peak ? 1 : 0) << ',';
    if (peak && peak->label) out << format_double(*peak->label);
    out << '\n';
  }
}

void write_rolling_csv(std::ostream& out, const RollingTrace& trace) {
  out << "time";
  for (double q : trace.q_grid) out << ",mean_H" << q_label(q) << ",std_H" << q_label(q);
  out << '\n';
  for (std::size_t w = 0; w < trace.size(); ++w) {
    out << trace.window_ends[w];
    for (std::size_t iq = 0; iq < trace.q_grid.size(); ++iq)
      out << ',' << cell(trace.mean_h[iq][w]) << ',' << cell(trace.std_h[iq][w]);
    out << '\n';
  }
}

void write_rolling_nodes_csv(std::ostream& out, const RollingTrace& trace, const Panel& panel) {
  out << "node,q,window_end,H\n";
  for (std::size_t iq = 0; iq < trace.per_node.size(); ++iq)
    for (std::size_t i = 0; i < trace.per_node[iq].size(); ++i)
      for (std::size_t w = 0; w < trace.size(); ++w)
        out << panel.nodes()[i].name << ',' << q_label(trace.q_grid[iq]) << ','
            << trace.window_ends[w] << ',' << cell(trace.per_node[iq][i][w]) << '\n';
}

void write_records_csv(std::ostream& out, std::span<const ForecastRecord> records,
                       const Panel& panel) {
  out << "node,t,p,predicted,actual,error,H1,H2\n";
  for (const auto& r : records)
    out << panel.nodes()[r.node].name << ',' << r.origin << ',' << r.lag << ','
        << cell(r.predicted) << ',' << cell(r.actual) << ',' << cell(r.error) << ','
        << cell(r.h1) << ',' << cell(r.h2) << '\n';
}

void write_slopes_csv(std::ostream& out, std::span<const SlopeCurve> curves) {
  out << "q,p,c,E0,r2,n_points,filtered\n";
  for (const auto& curve : curves)
    for (const auto& pt : curve.points)
      out << curve.q << ',' << pt.lag << ',' << cell(pt.fit.c) << ',' << cell(pt.fit.e0) << ',' << cell(pt.fit.r2)
          << ',' << pt.fit.n_points << ',' << (curve.filtered ? 1 : 0) << '\n';
}

}  // namespace mscale::report
