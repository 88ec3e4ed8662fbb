#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace legevo::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;  // legend and colour bar
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

// Tick step of 1, 2 or 5 times a power of ten giving about five ticks.
double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

}  // namespace

std::string ramp(double t) {
  // Stops sampled from a perceptually ordered blue-green-yellow map.
  static constexpr std::array<std::array<int, 3>, 5> stops{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double s = t * (stops.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(s), stops.size() - 2);
  const double f = s - static_cast<double>(i);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

std::string category(std::size_t i) {
  static constexpr std::array<const char*, 10> colors{
      "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors[i % colors.size()];
}

std::string Chart::render() const {
  Range xr, yr;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      xr.add(p.x);
      yr.add(p.y);
    }
  xr.finish();
  yr.finish();

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(title) << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double xs = nice_step(xr.hi - xr.lo);
  for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi; v += xs) {
    o << "<line x1=\"" << num(sx(v)) << "\" y1=\"" << kTop + ph << "\" x2=\"" << num(sx(v))
      << "\" y2=\"" << kTop + ph + 5 << "\" stroke=\"black\"/>"
      << "<text x=\"" << num(sx(v)) << "\" y=\"" << kTop + ph + 18
      << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(v) << "</text>\n";
  }
  const double ys = nice_step(yr.hi - yr.lo);
  for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi; v += ys) {
    o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(sy(v)) << "\" x2=\"" << kLeft << "\" y2=\""
      << num(sy(v)) << "\" stroke=\"black\"/>"
      << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(sy(v) + 4)
      << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(v) << "</text>\n";
  }
  o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << kHeight - 18
    << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\""
    << " transform=\"rotate(-90 18 " << num(kTop + ph / 2) << ")\">" << escape(y_label)
    << "</text>\n";

  for (const auto& s : series) {
    if (s.connect && s.points.size() > 1) {
      o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& p : s.points) o << num(sx(p.x)) << ',' << num(sy(p.y)) << ' ';
      o << "\"/>\n";
    }
    for (const auto& p : s.points)
      o << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y)) << "\" r=\"4\" fill=\""
        << p.color << "\" fill-opacity=\"0.85\" stroke=\"black\" stroke-width=\"0.4\"/>\n";
  }

  double ly = kTop + 10;
  const double lx = kLeft + pw + 15;
  for (const auto& s : series) {
    if (s.label.empty()) continue;
    o << "<circle cx=\"" << lx << "\" cy=\"" << num(ly) << "\" r=\"4\" fill=\"" << s.color
      << "\"/><text x=\"" << lx + 10 << "\" y=\"" << num(ly + 4) << "\" font-size=\"11\">"
      << escape(s.label) << "</text>\n";
    ly += 18;
  }
  if (colorbar) {
    const double top = ly + 20;
    const double h = 150;
    for (int i = 0; i < 30; ++i) {
      const double t = 1.0 - i / 29.0;
      o << "<rect x=\"" << lx << "\" y=\"" << num(top + i * h / 30) << "\" width=\"14\" height=\""
        << num(h / 30 + 0.5) << "\" fill=\"" << ramp(t) << "\"/>\n";
    }
    o << "<text x=\"" << lx + 20 << "\" y=\"" << num(top + 8) << "\" font-size=\"11\">"
      << tick_label(colorbar_max) << "</text>\n";
    o << "<text x=\"" << lx + 20 << "\" y=\"" << num(top + h) << "\" font-size=\"11\">"
      << tick_label(colorbar_min) << "</text>\n";
    o << "<text x=\"" << lx << "\" y=\"" << num(top - 8) << "\" font-size=\"11\">"
      << escape(colorbar_label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace legevo::svg
