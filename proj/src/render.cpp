#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "wsn/arcs.hpp"
#include "wsn/report.hpp"

namespace wsn {

namespace {

constexpr double kPad = 30.0;
constexpr double kDrawable = 560.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

class Canvas {
 public:
  explicit Canvas(const Instance& in)
      : in_(in), scale_(kDrawable / std::max(in.area.width, in.area.height)) {
    width_ = in.area.width * scale_ + 2 * kPad;
    height_ = in.area.height * scale_ + 2 * kPad;
  }

  double px(double x) const { return kPad + x * scale_; }
  double py(double y) const { return kPad + (in_.area.height - y) * scale_; }
  double len(double meters) const { return meters * scale_; }

  void open(std::string_view title) {
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" + num(height_) +
            "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) + "\">\n";
    out_ += "<title>" + std::string(title) + "</title>\n";
    out_ += "<rect class=\"field\" x=\"" + num(px(0)) + "\" y=\"" + num(py(in_.area.height)) + "\" width=\"" +
            num(len(in_.area.width)) + "\" height=\"" + num(len(in_.area.height)) +
            "\" fill=\"#fafafa\" stroke=\"#999\"/>\n";
  }

  void sinks() {
    for (int m = 0; m < in_.num_sinks(); ++m) {
      const double x = px(in_.sinks[m].x), y = py(in_.sinks[m].y);
      out_ += "<polygon class=\"sink\" data-sink=\"" + std::to_string(m) + "\" points=\"" + num(x) + "," +
              num(y - 9) + " " + num(x - 8) + "," + num(y + 6) + " " + num(x + 8) + "," + num(y + 6) +
              "\" fill=\"#c0392b\"/>\n";
    }
  }

  void line(const std::string& s) { out_ += s + "\n"; }

  std::string close() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

 private:
  const Instance& in_;
  double scale_;
  double width_ = 0.0, height_ = 0.0;
  std::string out_;
};

void check_slot(const Instance& in, int t, int g) {
  if (t < 0 || t >= in.periods) {
    throw std::out_of_range("period " + std::to_string(t) + " is outside 0.." + std::to_string(in.periods - 1));
  }
  if (g < 0 || g >= in.num_phenomena()) {
    throw std::out_of_range("phenomenon " + std::to_string(g) + " is outside 0.." +
                            std::to_string(in.num_phenomena() - 1));
  }
}

std::string node_label(int node) { return is_sink_node(node) ? "m" + std::to_string(sink_of(node)) : std::to_string(node); }

}  // namespace

std::string render_schedule(const Instance& in, const Solution& sol, int t, int g) {
  check_slot(in, t, g);
  Canvas c(in);
  c.open("schedule t=" + std::to_string(t) + " g=" + std::to_string(g));
  const double radius = in.phenomena[g].coverage_radius;
  for (int i = 0; i < in.num_sensors(); ++i) {
    if (!sol.on(VarRef::r(i, t, g))) continue;
    c.line("<circle class=\"coverage\" data-sensor=\"" + std::to_string(i) + "\" cx=\"" + num(c.px(in.sensors[i].x)) +
           "\" cy=\"" + num(c.py(in.sensors[i].y)) + "\" r=\"" + num(c.len(radius)) +
           "\" fill=\"#3498db\" fill-opacity=\"0.06\" stroke=\"#3498db\" stroke-opacity=\"0.5\"/>");
  }
  for (int j = 0; j < in.num_demand_points(); ++j) {
    const DemandPoint& dp = in.demand_points[j];
    const std::string at = "cx=\"" + num(c.px(dp.position.x)) + "\" cy=\"" + num(c.py(dp.position.y)) + "\"";
    const std::string id = " data-dp=\"" + std::to_string(j) + "\" ";
    if (!dp.demands_phenomenon(g)) {
      c.line("<circle class=\"dp idle\"" + id + at + " r=\"1.5\" fill=\"#bbb\"/>");
    } else if (sol.on(VarRef::h(j, t, g))) {
      c.line("<circle class=\"dp uncovered\"" + id + at + " r=\"3\" fill=\"none\" stroke=\"#000\"/>");
    } else {
      c.line("<circle class=\"dp covered\"" + id + at + " r=\"3\" fill=\"#000\"/>");
    }
  }
  for (int i = 0; i < in.num_sensors(); ++i) {
    const bool sensing = sol.on(VarRef::r(i, t, g));
    const bool active = sol.on(VarRef::y(i, t));
    const char* state = sensing ? "sensing" : active ? "active" : "off";
    const char* fill = sensing ? "#000" : active ? "#888" : "#fff";
    c.line("<rect class=\"sensor " + std::string(state) + "\" data-sensor=\"" + std::to_string(i) + "\" x=\"" +
           num(c.px(in.sensors[i].x) - 5) + "\" y=\"" + num(c.py(in.sensors[i].y) - 5) +
           "\" width=\"10\" height=\"10\" fill=\"" + fill + "\" stroke=\"#000\"/>");
  }
  c.sinks();
  return c.close();
}

std::string render_routes(const Instance& in, const Solution& sol, int t, int g) {
  check_slot(in, t, g);
  Canvas c(in);
  c.open("routes t=" + std::to_string(t) + " g=" + std::to_string(g));
  c.line(
      "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" "
      "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"context-stroke\"/></marker></defs>");
  for (int i = 0; i < in.num_sensors(); ++i) {
    c.line("<rect class=\"sensor\" data-sensor=\"" + std::to_string(i) + "\" x=\"" + num(c.px(in.sensors[i].x) - 4) +
           "\" y=\"" + num(c.py(in.sensors[i].y) - 4) + "\" width=\"8\" height=\"8\" fill=\"" +
           (sol.on(VarRef::y(i, t)) ? "#888" : "#fff") + "\" stroke=\"#000\"/>");
  }
  for (const auto& [ref, value] : sol.values) {
    if (ref.kind != VarKind::kZ || value == 0.0 || ref.idx[3] != t || ref.idx[4] != g) continue;
    const int l = ref.idx[0], from = ref.idx[1], to = ref.idx[2];
    const Point2D a = in.sensors.at(from);
    const Point2D b = is_sink_node(to) ? in.sinks.at(sink_of(to)) : in.sensors.at(to);
    // Golden-angle hues keep neighbouring source ids apart.
    const int hue = static_cast<int>(std::fmod(l * 137.508, 360.0));
    c.line("<line class=\"route\" data-source=\"" + std::to_string(l) + "\" data-from=\"" + node_label(from) +
           "\" data-to=\"" + node_label(to) + "\" x1=\"" + num(c.px(a.x)) + "\" y1=\"" + num(c.py(a.y)) +
           "\" x2=\"" + num(c.px(b.x)) + "\" y2=\"" + num(c.py(b.y)) + "\" stroke=\"hsl(" + std::to_string(hue) +
           ",70%,40%)\" stroke-width=\"2\" marker-end=\"url(#head)\"/>");
  }
  c.sinks();
  return c.close();
}

}  // namespace wsn
