#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "harrod/domain.hpp"
#include "harrod/format.hpp"

// Self-contained SVG line charts of trajectory series. Output is a pure
// function of the inputs (fixed canvas, fixed formatting), so identical
// trajectories give byte-identical files suitable for golden tests.

namespace harrod {

enum class PlotChannel {
  Capital,
  Investment,
  Income,
  Consumption,
  RealizedIncome,
  RealizedCapital,
  RealizedConsumption,
};

struct PlotOptions {
  bool log_scale = false;  // log10 on the value axis; requires positive data
  std::string_view title = "trajectory";
};

namespace detail {

inline const std::vector<double>& channel_series(const Trajectory& t,
                                                 PlotChannel c) {
  switch (c) {
    case PlotChannel::Capital: return t.capital;
    case PlotChannel::Investment: return t.investment;
    case PlotChannel::Income: return t.income;
    case PlotChannel::Consumption: return t.consumption;
    case PlotChannel::RealizedIncome: return t.realized_income;
    case PlotChannel::RealizedCapital: return t.realized_capital;
    case PlotChannel::RealizedConsumption: return t.realized_consumption;
  }
  return t.capital;
}

inline std::string_view channel_label(PlotChannel c) {
  switch (c) {
    case PlotChannel::Capital: return "K";
    case PlotChannel::Investment: return "I";
    case PlotChannel::Income: return "Y";
    case PlotChannel::Consumption: return "C";
    case PlotChannel::RealizedIncome: return "Y_R";
    case PlotChannel::RealizedCapital: return "K_R";
    case PlotChannel::RealizedConsumption: return "C_R";
  }
  return "?";
}

inline std::string_view channel_color(PlotChannel c) {
  switch (c) {
    case PlotChannel::Capital: return "#1f77b4";
    case PlotChannel::Investment: return "#d62728";
    case PlotChannel::Income: return "#2ca02c";
    case PlotChannel::Consumption: return "#9467bd";
    case PlotChannel::RealizedIncome: return "#8c564b";
    case PlotChannel::RealizedCapital: return "#e377c2";
    case PlotChannel::RealizedConsumption: return "#7f7f7f";
  }
  return "#000000";
}

inline std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace detail

inline std::string emit_plot(const Trajectory& t,
                             const std::vector<PlotChannel>& channels,
                             const PlotOptions& options = {}) {
  if (t.empty())
    throw validation_error("trajectory", "cannot plot an empty trajectory");
  if (channels.empty())
    throw validation_error("channels", "at least one channel is required");

  const auto value_of = [&](PlotChannel c, std::size_t i) {
    const double raw = detail::channel_series(t, c)[i];
    if (!options.log_scale) return raw;
    if (!(raw > 0.0))
      throw validation_error("log_scale",
                             "log scale requires strictly positive values");
    return std::log10(raw);
  };

  double x_lo = t.grid.front(), x_hi = t.grid.back();
  double y_lo = value_of(channels.front(), 0), y_hi = y_lo;
  for (PlotChannel c : channels) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double v = value_of(c, i);
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;
  const double y_pad = 0.05 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  const double width = 880.0, height = 560.0;
  const double left = 70.0, right = 20.0, top = 36.0, bottom = 50.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const auto sx = [&](double x) {
    return left + (x - x_lo) / (x_hi - x_lo) * plot_w;
  };
  const auto sy = [&](double y) {
    return top + (y_hi - y) / (y_hi - y_lo) * plot_h;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"880\" "
         "height=\"560\" viewBox=\"0 0 880 560\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"880\" height=\"560\" fill=\"white\"/>\n";
  svg += "<text x=\"70\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" +
         std::string(options.title) +
         (options.log_scale ? " (log10 value axis)" : "") + "</text>\n";

  // frame and ticks
  svg += "<rect x=\"" + detail::coord(left) + "\" y=\"" + detail::coord(top) +
         "\" width=\"" + detail::coord(plot_w) + "\" height=\"" +
         detail::coord(plot_h) + "\" fill=\"none\" stroke=\"#333333\"/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / ticks;
    const double px = sx(fx);
    svg += "<line x1=\"" + detail::coord(px) + "\" y1=\"" +
           detail::coord(top + plot_h) + "\" x2=\"" + detail::coord(px) +
           "\" y2=\"" + detail::coord(top + plot_h + 6.0) +
           "\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + detail::coord(px) + "\" y=\"" +
           detail::coord(top + plot_h + 22.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">" +
           format_brief(fx) + "</text>\n";

    const double fy = y_lo + (y_hi - y_lo) * i / ticks;
    const double py = sy(fy);
    svg += "<line x1=\"" + detail::coord(left - 6.0) + "\" y1=\"" +
           detail::coord(py) + "\" x2=\"" + detail::coord(left) + "\" y2=\"" +
           detail::coord(py) + "\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + detail::coord(left - 10.0) + "\" y=\"" +
           detail::coord(py + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">" +
           format_brief(fy) + "</text>\n";
  }
  svg += "<text x=\"" + detail::coord(left + plot_w / 2.0) + "\" y=\"" +
         detail::coord(height - 10.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">tau</text>\n";

  // one polyline per channel plus a legend entry
  double legend_x = left + 10.0;
  for (PlotChannel c : channels) {
    std::string points;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!points.empty()) points += ' ';
      points += detail::coord(sx(t.grid[i])) + "," +
                detail::coord(sy(value_of(c, i)));
    }
    svg += "<polyline fill=\"none\" stroke=\"" +
           std::string(detail::channel_color(c)) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    svg += "<rect x=\"" + detail::coord(legend_x) + "\" y=\"" +
           detail::coord(top + 8.0) + "\" width=\"12\" height=\"12\" fill=\"" +
           std::string(detail::channel_color(c)) + "\"/>\n";
    svg += "<text x=\"" + detail::coord(legend_x + 16.0) + "\" y=\"" +
           detail::coord(top + 18.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" +
           std::string(detail::channel_label(c)) + "</text>\n";
    legend_x += 60.0;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace harrod
