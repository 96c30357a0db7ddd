#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppmkit/eventlog.hpp"

namespace ppmkit {

class ChartError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChartColors {
  std::string create = "#2ca02c";
  std::string move = "#1f77b4";
  std::string remove = "#d62728";
  std::string rename = "#ff7f0e";
};

struct PPMChartSpec {
  Duration window = std::chrono::hours(1);
  double width = 1200;
  /// Defaults to row_height * rows.
  std::optional<double> height;
  double row_height = 20;
  double dot_radius = 3;
  ChartColors colors;
};

struct ChartDot {
  std::string object_id;
  std::uint64_t seq = 0;
  EventClass cls = EventClass::Create;
  double x = 0;
  double y = 0;
};

struct ChartLayout {
  double width = 0;
  double height = 0;
  /// Object ids top to bottom, ordered by their first action.
  std::vector<std::string> rows;
  std::vector<ChartDot> dots;
};

/// Dot geometry of a PPMChart, one dot per event; a reconnect is one dot
/// in the move color. The last action sits at x = width; an action
/// dt before it sits at width * (1 - dt / window). Throws ChartError on an
/// empty log or a window shorter than the session.
ChartLayout layout_ppmchart(const EventLog& log, const PPMChartSpec& spec = {});

/// SVG rendering of layout_ppmchart() with coordinates at two decimals.
std::string render_ppmchart(const EventLog& log, const PPMChartSpec& spec = {});

}  // namespace ppmkit
