#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "mscale/report.hpp"

using namespace mscale;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("multiscaling csv and json") {
  const auto panel = fixture::fgn_panel(0.6, 2, 512, 1);
  GheConfig cfg;
  cfg.tau_max = 50;
  const auto rep = multiscaling_report(panel, cfg);
  std::ostringstream csv;
  report::write_multiscaling_csv(csv, rep);
  const auto l = lines(csv.str());
  CHECK(l[0] == "q,mean_qH,min_qH,max_qH");
  CHECK(l.size() == 3);

  const auto j = report::to_json(rep, panel);
  CHECK(j["used_series"] == 2);
  CHECK(j["q"].size() == 2);
  CHECK(j["nodes"].size() == 2);

  std::ostringstream ghe;
  report::write_ghe_csv(ghe, rep, panel);
  const auto g = lines(ghe.str());
  CHECK(g[0] == "node,q,H,fit_r2");
  CHECK(g[1].rfind("n0,1,", 0) == 0);
}

TEST_CASE("rolling csv has a mean/std pair per q and gaps are empty") {
  RollingTrace t;
  t.window_ends = {49, 50};
  t.q_grid = {1.0, 2.0};
  t.mean_h = {{0.5, std::nan("")}, {0.4, 0.3}};
  t.std_h = {{0.1, std::nan("")}, {0.0, 0.2}};
  t.valid_nodes = {3, 0};
  std::ostringstream os;
  report::write_rolling_csv(os, t);
  const auto l = lines(os.str());
  CHECK(l[0] == "time,mean_H1,std_H1,mean_H2,std_H2");
  CHECK(l[1] == "49,0.5,0.1,0.4,0");
  CHECK(l[2] == "50,,,0.3,0.2");
  const auto j = report::to_json(t);
  CHECK(j["series"][0]["mean_H"][1].is_null());
  CHECK(j["series"][1]["q"] == 2.0);
}

TEST_CASE("records and slopes csv") {
  const auto panel = fixture::fgn_panel(0.6, 1, 120, 1);
  ForecastRecord r;
  r.origin = 60;
  r.lag = 2;
  r.predicted = 1.5;
  r.actual = 1.0;
  r.error = 0.5;
  r.h1 = 0.6;
  r.h2 = 0.55;
  std::ostringstream os;
  report::write_records_csv(os, std::vector<ForecastRecord>{r}, panel);
  const auto l = lines(os.str());
  CHECK(l[0] == "node,t,p,predicted,actual,error,H1,H2");
  CHECK(l[1] == "n0,60,2,1.5,1,0.5,0.6,0.55");

  SlopeCurve c;
  c.q = 2;
  c.filtered = true;
  c.points.push_back({3, {0.25, -0.5, 0.1, 10, 0, 0}});
  std::ostringstream ss;
  report::write_slopes_csv(ss, std::vector<SlopeCurve>{c});
  const auto s = lines(ss.str());
  CHECK(s[0] == "q,p,c,E0,r2,n_points,filtered");
  CHECK(s[1] == "2,3,-0.5,0.25,0.1,10,1");
}

TEST_CASE("spectrum csv flags labelled peaks") {
  const auto panel = fixture::harmonic_noise_panel(4, 240, 50.0, 1);
  const auto rep = market_average_spectrum(panel);
  std::ostringstream os;
  report::write_spectrum_csv(os, rep);
  const auto l = lines(os.str());
  CHECK(l.size() == 1 + 121);
  CHECK(l[11].rfind("10,", 0) == 0);
  CHECK(l[11].find(",1,24") != std::string::npos);
}
