#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "mscale/error.hpp"
#include "mscale/rolling.hpp"

using namespace mscale;

TEST_CASE("trace length") {
  CHECK(rolling_trace_length(1632, 50, 1) == 1583);
  CHECK(rolling_trace_length(1632, 50, 25) == 64);
  CHECK(rolling_trace_length(51, 50, 1) == 2);
}

TEST_CASE("rolling_ghe on a short panel") {
  const auto panel = fixture::fgn_panel(0.7, 3, 300, 4);
  RollingConfig cfg;
  const auto trace = rolling_ghe(panel, cfg);
  REQUIRE(trace.size() == 251);
  CHECK(trace.window_ends.front() == 49);
  CHECK(trace.window_ends.back() == 299);
  CHECK(trace.q_grid == std::vector<double>{1.0, 2.0});
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t w = 0; w < trace.size(); ++w) {
      CHECK(std::isfinite(trace.mean_h[q][w]));
      CHECK(trace.std_h[q][w] >= 0.0);
    }
  CHECK(trace.per_node.empty());
}

TEST_CASE("single node has zero spread") {
  const auto panel = fixture::fgn_panel(0.5, 1, 400, 2);
  const auto trace = rolling_ghe(panel, RollingConfig{});
  for (double s : trace.std_h[0]) CHECK(s == 0.0);
  for (double s : trace.std_h[1]) CHECK(s == 0.0);
}

TEST_CASE("per-node matrix matches direct estimates") {
  const auto panel = fixture::fgn_panel(0.6, 2, 200, 6);
  RollingConfig cfg;
  cfg.keep_per_node = true;
  cfg.stride = 7;
  const auto trace = rolling_ghe(panel, cfg);
  REQUIRE(trace.per_node.size() == 2);
  for (std::size_t w = 0; w < trace.size(); ++w)
    for (std::size_t i = 0; i < 2; ++i) {
      const std::size_t end = trace.window_ends[w];
      const auto direct = estimate_ghe(panel.row(i).subspan(end + 1 - 50, 50), cfg.ghe, true);
      CHECK(trace.per_node[1][i][w] == direct.hurst(2));
    }
}

TEST_CASE("stationary fBm panel averages near its H") {
  std::vector<double> means;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto trace = rolling_ghe(fixture::fgn_panel(0.7, 4, 1632, 400 + seed), RollingConfig{});
    means.push_back(oracle::mean(trace.mean_h[0]));
  }
  CHECK(std::abs(oracle::mean(means) - 0.7) < 0.08);
}

TEST_CASE("stride gives an exact subsequence") {
  const auto panel = fixture::fgn_panel(0.6, 3, 500, 9);
  RollingConfig dense;
  RollingConfig sparse;
  sparse.stride = 13;
  const auto a = rolling_ghe(panel, dense), b = rolling_ghe(panel, sparse);
  REQUIRE(b.size() == rolling_trace_length(500, 50, 13));
  for (std::size_t w = 0; w < b.size(); ++w) {
    const std::size_t j = w * 13;
    CHECK(b.window_ends[w] == a.window_ends[j]);
    for (std::size_t q = 0; q < 2; ++q) {
      CHECK(b.mean_h[q][w] == a.mean_h[q][j]);
      CHECK(b.std_h[q][w] == a.std_h[q][j]);
    }
  }
}

TEST_CASE("window estimates only see their own data") {
  const auto panel = fixture::fgn_panel(0.6, 2, 400, 12);
  std::vector<std::vector<double>> rows{
      {panel.row(0).begin(), panel.row(0).end()}, {panel.row(1).begin(), panel.row(1).end()}};
  for (auto& r : rows)
    for (std::size_t t = 0; t < 150; ++t) r[t] = 1e6 * std::sin(static_cast<double>(t));
  const auto changed = Panel::from_rows(panel.nodes(), panel.start(), rows);
  const auto a = rolling_ghe(panel, RollingConfig{}), b = rolling_ghe(changed, RollingConfig{});
  for (std::size_t w = 0; w < a.size(); ++w) {
    if (a.window_ends[w] < 150 + 49) continue;  // window touches the modified prefix
    CHECK(a.mean_h[0][w] == b.mean_h[0][w]);
    CHECK(a.std_h[1][w] == b.std_h[1][w]);
  }
}

TEST_CASE("degenerate windows become gaps") {
  std::vector<double> row = fixture::fgn(0.5, 300, 1);
  for (std::size_t t = 100; t < 180; ++t) row[t] = 0.0;
  const auto panel = Panel::from_rows(fixture::node_names(1), fixture::kStart, {row});
  const auto trace = rolling_ghe(panel, RollingConfig{});
  bool saw_gap = false;
  for (std::size_t w = 0; w < trace.size(); ++w) {
    if (std::isnan(trace.mean_h[0][w])) {
      saw_gap = true;
      CHECK(trace.valid_nodes[w] == 0);
    }
  }
  CHECK(saw_gap);
  CHECK(std::isfinite(temporal_std(trace, 1.0)));
}

TEST_CASE("rolling config validation") {
  const auto panel = fixture::fgn_panel(0.5, 1, 100, 1);
  RollingConfig cfg;
  cfg.window = 7;
  CHECK_THROWS_AS(rolling_ghe(panel, cfg), WindowTooSmall);
  cfg.window = 100;
  CHECK_THROWS_AS(rolling_ghe(panel, cfg), WindowTooSmall);
  cfg.window = 20;
  cfg.ghe.tau_max = 10;
  CHECK_THROWS_AS(rolling_ghe(panel, cfg), InvalidConfig);
  cfg.window = 50;
  cfg.stride = 0;
  CHECK_THROWS_AS(rolling_ghe(panel, cfg), InvalidConfig);
}

TEST_CASE("detect_shifts") {
  RollingTrace flat;
  flat.q_grid = {1.0, 2.0};
  for (std::size_t t = 0; t < 20; ++t) flat.window_ends.push_back(49 + t);
  flat.mean_h = {std::vector<double>(20, 0.6), std::vector<double>(20, 0.5)};
  flat.std_h = {std::vector<double>(20, 0.0), std::vector<double>(20, 0.0)};
  flat.valid_nodes.assign(20, 1);
  CHECK(detect_shifts(flat, 1.0).empty());

  RollingTrace step = flat;
  for (std::size_t t = 12; t < 20; ++t) step.mean_h[0][t] = 0.9;
  const auto s = detect_shifts(step, 1.0);
  REQUIRE(s.size() == 1);
  CHECK(s[0].time == 49 + 12);
  CHECK(s[0].jump == doctest::Approx(0.3));
  CHECK(detect_shifts(step, 1.0, std::numeric_limits<double>::infinity()).empty());
  CHECK(detect_shifts(step, 2.0).empty());
}

TEST_CASE("group_shifts") {
  const std::vector<Shift> shifts{{100, 0.2}, {120, -0.3}, {300, 0.15}};
  const auto regions = group_shifts(shifts, 50);
  REQUIRE(regions.size() == 2);
  CHECK(regions[0].first == 100);
  CHECK(regions[0].last == 120);
  CHECK(regions[0].largest_jump == -0.3);
  CHECK(regions[1].first == 300);
  CHECK(group_shifts({}, 10).empty());
}

TEST_CASE("spliced panel yields one shift region near the splice") {
  const auto panel = fixture::spliced_panel(64, 1632, 800, 0.5, 0.9, 3);
  RollingConfig cfg;
  cfg.stride = 25;
  const auto trace = rolling_ghe(panel, cfg);
  const auto regions = group_shifts(detect_shifts(trace, 1.0), cfg.window);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].first + 50 >= 800);
  CHECK(regions[0].last <= 800 + 50);
  CHECK(regions[0].largest_jump > 0.0);
}
