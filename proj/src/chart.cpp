#include "ppmkit/chart.hpp"

#include <unordered_map>

#include <fmt/format.h>

namespace ppmkit {

namespace {

std::string_view css_class(EventClass cls) {
  switch (cls) {
    case EventClass::Create: return "create";
    case EventClass::Move: return "move";
    case EventClass::Delete: return "delete";
    case EventClass::Reconnect: return "reconnect";
    default: return "rename";
  }
}

const std::string& fill(const ChartColors& colors, EventClass cls) {
  switch (cls) {
    case EventClass::Create: return colors.create;
    case EventClass::Move:
    case EventClass::Reconnect: return colors.move;
    case EventClass::Delete: return colors.remove;
    default: return colors.rename;
  }
}

std::string attr_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

ChartLayout layout_ppmchart(const EventLog& log, const PPMChartSpec& spec) {
  if (log.events.empty()) throw ChartError("cannot chart an empty log");
  if (spec.window.count() <= 0) throw ChartError("window must be positive");
  if (!(spec.width > 0)) throw ChartError("width must be positive");
  const Timestamp last = log.events.back().timestamp;
  const Duration span = last - log.events.front().timestamp;
  if (span > spec.window) {
    throw ChartError(fmt::format("session lasts {:.3f} s but the window is only {:.3f} s; use a larger window",
                                 to_seconds(span), to_seconds(spec.window)));
  }

  ChartLayout layout;
  std::unordered_map<std::string, std::size_t> row_of;
  for (const auto& ev : log.events) {
    if (row_of.emplace(ev.object_id, layout.rows.size()).second) layout.rows.push_back(ev.object_id);
  }
  layout.width = spec.width;
  layout.height = spec.height.value_or(spec.row_height * static_cast<double>(layout.rows.size()));
  const double row_height = layout.height / static_cast<double>(layout.rows.size());
  const double window_ms = static_cast<double>(spec.window.count());

  layout.dots.reserve(log.events.size());
  for (const auto& ev : log.events) {
    const double behind = static_cast<double>((last - ev.timestamp).count());
    ChartDot dot;
    dot.object_id = ev.object_id;
    dot.seq = ev.seq;
    dot.cls = ev.event_class();
    dot.x = spec.width * (1.0 - behind / window_ms);
    dot.y = row_height * (static_cast<double>(row_of.at(ev.object_id)) + 0.5);
    layout.dots.push_back(std::move(dot));
  }
  return layout;
}

std::string render_ppmchart(const EventLog& log, const PPMChartSpec& spec) {
  const auto layout = layout_ppmchart(log, spec);
  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.2f}\" height=\"{1:.2f}\" viewBox=\"0 0 {0:.2f} {1:.2f}\">\n",
      layout.width, layout.height);
  out += fmt::format("<title>PPMChart {}</title>\n", attr_escape(log.session_id));
  out += fmt::format("<rect class=\"background\" x=\"0\" y=\"0\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#ffffff\"/>\n",
                     layout.width, layout.height);
  out += "<g class=\"rows\">\n";
  const double row_height = layout.height / static_cast<double>(layout.rows.size());
  for (std::size_t r = 0; r < layout.rows.size(); ++r) {
    const double y = row_height * (static_cast<double>(r) + 0.5);
    out += fmt::format(
        "<line class=\"row\" data-object=\"{}\" x1=\"0.00\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#e0e0e0\"/>\n",
        attr_escape(layout.rows[r]), y, layout.width, y);
  }
  out += "</g>\n<g class=\"dots\">\n";
  for (const auto& d : layout.dots) {
    out += fmt::format(
        "<circle class=\"dot {}\" data-object=\"{}\" data-seq=\"{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" "
        "fill=\"{}\"/>\n",
        css_class(d.cls), attr_escape(d.object_id), d.seq, d.x, d.y, spec.dot_radius,
        attr_escape(fill(spec.colors, d.cls)));
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace ppmkit
