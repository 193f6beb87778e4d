#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "harrod/continuous.hpp"
#include "harrod/csv.hpp"
#include "harrod/svg.hpp"

using namespace harrod;

namespace {

Trajectory sample_trajectory() {
  const ModelParams p = make_params(0.5, 10.0, 1.0);
  OdeControls controls;
  controls.max_step = 0.5;
  return simulate(p, 10.0, controls).trajectory;
}

}  // namespace

TEST_CASE("trajectory CSV carries the fixed header and round-trips") {
  const Trajectory t = sample_trajectory();
  const std::string csv = trajectory_csv(t);
  CHECK(csv.rfind("tau,K,I,Y,C,Y_R,K_R,C_R\n", 0) == 0);

  const Trajectory parsed = parse_trajectory_csv(csv);
  REQUIRE(parsed.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(std::abs(parsed.grid[i] - t.grid[i]) <=
          1e-12 * std::max(1.0, std::abs(t.grid[i])));
    CHECK(std::abs(parsed.capital[i] - t.capital[i]) <=
          1e-12 * std::abs(t.capital[i]));
    CHECK(std::abs(parsed.income[i] - t.income[i]) <=
          1e-12 * std::abs(t.income[i]));
  }
  CHECK(parsed.realized_investment == parsed.realized_capital);

  // identical trajectory, identical bytes
  CHECK(trajectory_csv(t) == csv);
  // emitting the parsed trajectory reproduces the bytes as well
  CHECK(trajectory_csv(parsed) == csv);
}

TEST_CASE("csv parser rejects malformed documents") {
  CHECK_THROWS_AS(parse_trajectory_csv("tau,K\n1,2\n"), parse_error);
  CHECK_THROWS_AS(
      parse_trajectory_csv("tau,K,I,Y,C,Y_R,K_R,C_R\n1,2,3\n"), parse_error);
  CHECK_THROWS_AS(parse_observations_csv("time,value\n1,2\n"), parse_error);
  CHECK_THROWS_AS(parse_observations_csv("tau,value\n1,abc\n"), parse_error);
  const auto samples = parse_observations_csv("tau,value\n1,2\n2.5,3.5\n");
  REQUIRE(samples.size() == 2);
  CHECK(samples[1].first == 2.5);
  CHECK(samples[1].second == 3.5);
}

TEST_CASE("plot output is deterministic and validates its inputs") {
  const Trajectory t = sample_trajectory();
  const std::vector<PlotChannel> channels = {
      PlotChannel::Capital, PlotChannel::Income, PlotChannel::Investment};
  const std::string svg = emit_plot(t, channels);
  CHECK(svg == emit_plot(t, channels));
  CHECK(svg.rfind("<svg", 0) == 0);

  std::size_t polylines = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
       pos = svg.find("<polyline", pos + 1))
    ++polylines;
  CHECK(polylines == channels.size());

  CHECK_THROWS_AS(emit_plot(t, {}), validation_error);
  CHECK_THROWS_AS(emit_plot(Trajectory{}, {PlotChannel::Capital}),
                  validation_error);
}

TEST_CASE("single-point trajectories still render") {
  Trajectory point;
  point.grid = {0.0};
  point.capital = {1.0};
  point.investment = {0.05};
  point.income = {0.1};
  point.consumption = {0.05};
  point.realized_income = {0.0};
  point.realized_capital = {0.0};
  point.realized_consumption = {0.0};
  point.realized_investment = {0.0};
  CHECK_NOTHROW(emit_plot(point, {PlotChannel::Capital}));
}

TEST_CASE("log-scale plots require positive values") {
  const Trajectory t = sample_trajectory();
  PlotOptions log_plot;
  log_plot.log_scale = true;
  CHECK_NOTHROW(emit_plot(t, {PlotChannel::Capital}, log_plot));
  // realized series start at zero, which the log axis cannot take
  CHECK_THROWS_AS(emit_plot(t, {PlotChannel::RealizedCapital}, log_plot),
                  validation_error);
}
