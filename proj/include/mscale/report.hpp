#pragma once

#include <iosfwd>
#include <span>

#include <json.hpp>

#include "mscale/forecast.hpp"
#include "mscale/ghe.hpp"
#include "mscale/panel.hpp"
#include "mscale/rolling.hpp"
#include "mscale/spectral.hpp"

// JSON and plot-ready CSV output for every analysis result. Non-finite
// numbers become JSON null and empty CSV cells.
namespace mscale::report {

nlohmann::json to_json(const GheResult& result);
nlohmann::json to_json(const MultiScalingReport& report, const Panel& panel);
nlohmann::json to_json(const SpectrumReport& report);
nlohmann::json to_json(const RollingTrace& trace);
nlohmann::json to_json(const LogLinearFit& fit);
nlohmann::json to_json(const SlopeCurve& curve);

/// node,q,H,fit_r2
void write_ghe_csv(std::ostream& out, const MultiScalingReport& report, const Panel& panel);
/// q,mean_qH,min_qH,max_qH
void write_multiscaling_csv(std::ostream& out, const MultiScalingReport& report);
/// bin,freq,power,is_peak,period_label
void write_spectrum_csv(std::ostream& out, const SpectrumReport& report);
/// time,mean_H1,std_H1,mean_H2,std_H2 (one mean/std pair per q)
void write_rolling_csv(std::ostream& out, const RollingTrace& trace);
/// node,q,window_end,H
void write_rolling_nodes_csv(std::ostream& out, const RollingTrace& trace, const Panel& panel);
/// node,t,p,predicted,actual,error,H1,H2
void write_records_csv(std::ostream& out, std::span<const ForecastRecord> records,
                       const Panel& panel);
/// q,p,c,E0,r2,n_points,filtered
void write_slopes_csv(std::ostream& out, std::span<const SlopeCurve> curves);

}  // namespace mscale::report
