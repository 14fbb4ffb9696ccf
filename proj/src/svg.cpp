#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "slitflow/commands.hpp"

namespace slitflow {

namespace {

constexpr double kWidthPx = 800.0;
constexpr double kMarginPx = 50.0;

std::string px(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 2);
  return std::string(buf.data(), res.ptr);
}

std::string label(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 6);
  return std::string(buf.data(), res.ptr);
}

double nice_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

struct View {
  double x_min, x_max, y_min, y_max, scale;

  double X(double x) const { return kMarginPx + (x - x_min) * scale; }
  double Y(double y) const { return kMarginPx + (y_max - y) * scale; }
  bool inside(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
};

}  // namespace

void write_streamlines_svg(const StreamlineRun &run, const RunConfig &cfg, std::ostream &out) {
  const auto &s = cfg.svg;
  const View v{s.x_min, s.x_max, s.y_min, s.y_max, kWidthPx / (s.x_max - s.x_min)};
  const double width = kWidthPx + 2 * kMarginPx;
  const double height = (s.y_max - s.y_min) * v.scale + 2 * kMarginPx;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << px(width)
      << "\" height=\"" << px(height) << "\" viewBox=\"0 0 " << px(width) << ' ' << px(height)
      << "\">\n"
      << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"8\" refY=\"5\" markerWidth=\"6\" "
         "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#1f4e9c\"/>"
         "</marker></defs>\n"
      << "<rect x=\"" << px(kMarginPx) << "\" y=\"" << px(kMarginPx) << "\" width=\""
      << px(kWidthPx) << "\" height=\"" << px(height - 2 * kMarginPx)
      << "\" fill=\"white\" stroke=\"black\"/>\n";

  // Barrier along x = 0 with openings at the two slits.
  const double half = cfg.kd / 2;
  const double a = cfg.exclusion_radius;
  if (s.x_min <= 0.0 && s.x_max >= 0.0) {
    const std::array<std::array<double, 2>, 3> walls{{{half + a, s.y_max},
                                                      {-(half - a), half - a},
                                                      {s.y_min, -(half + a)}}};
    for (const auto &w : walls) {
      const double lo = std::max(w[0], s.y_min);
      const double hi = std::min(w[1], s.y_max);
      if (lo >= hi) continue;
      out << "<line x1=\"" << px(v.X(0)) << "\" y1=\"" << px(v.Y(lo)) << "\" x2=\"" << px(v.X(0))
          << "\" y2=\"" << px(v.Y(hi)) << "\" stroke=\"black\" stroke-width=\"4\"/>\n";
    }
  }
  for (double yc : {half, -half}) {
    out << "<circle cx=\"" << px(v.X(0)) << "\" cy=\"" << px(v.Y(yc)) << "\" r=\""
        << px(a * v.scale) << "\" fill=\"none\" stroke=\"#b03030\" stroke-dasharray=\"3,2\"/>\n";
  }

  for (const auto &m : run.family) {
    if (!m.line) continue;
    out << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1\" "
           "marker-end=\"url(#arrow)\" points=\"";
    std::string last;
    bool first = true;
    for (const auto &p : m.line->points) {
      if (!v.inside(p.x, p.y)) {
        if (!first) break;
        continue;
      }
      std::string pt = px(v.X(p.x)) + "," + px(v.Y(p.y));
      if (pt == last) continue;
      out << (first ? "" : " ") << pt;
      last = std::move(pt);
      first = false;
    }
    out << "\"/>\n";
  }

  // Ticks in k*r units, labelled in x / k.
  const double step = nice_step(s.x_max - s.x_min);
  const double bottom = v.Y(s.y_min);
  for (double x = std::ceil(s.x_min / step) * step; x <= s.x_max; x += step) {
    out << "<line x1=\"" << px(v.X(x)) << "\" y1=\"" << px(bottom) << "\" x2=\"" << px(v.X(x))
        << "\" y2=\"" << px(bottom + 5) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << px(v.X(x)) << "\" y=\"" << px(bottom + 18)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << label(x / s.k) << "</text>\n";
  }
  for (double y = std::ceil(s.y_min / step) * step; y <= s.y_max; y += step) {
    out << "<line x1=\"" << px(kMarginPx - 5) << "\" y1=\"" << px(v.Y(y)) << "\" x2=\""
        << px(kMarginPx) << "\" y2=\"" << px(v.Y(y)) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << px(kMarginPx - 8) << "\" y=\"" << px(v.Y(y) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << label(y / s.k) << "</text>\n";
  }
  const char *unit = s.k == 1.0 ? "k" : "";
  out << "<text x=\"" << px(kMarginPx + kWidthPx / 2) << "\" y=\"" << px(height - 10)
      << "\" font-size=\"14\" text-anchor=\"middle\">" << unit << "x</text>\n"
      << "<text x=\"14\" y=\"" << px(height / 2) << "\" font-size=\"14\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 14 " << px(height / 2) << ")\">" << unit << "y</text>\n"
      << "</svg>\n";
}

}  // namespace slitflow
