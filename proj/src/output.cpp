#include "evac/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace evac {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::string escape_xml(const std::string& s) {
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

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

/// Round step of about span / 5.
double tick_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : (f < 3.5 ? 2.0 : (f < 7.5 ? 5.0 : 10.0));
  return nice * mag;
}

}  // namespace

const char* tool_version() { return EVAC_VERSION; }

nlohmann::json provenance_json(const Provenance& p) {
  return {{"tool", "evac"},
          {"version", tool_version()},
          {"command", p.command},
          {"config_hash", p.config_hash},
          {"seed", p.seed}};
}

void write_csv(const std::string& path, const Provenance& p, const std::string& units,
               const std::function<void(std::ostream&)>& body) {
  auto out = open_out(path);
  out << "# tool: evac " << tool_version() << '\n'
      << "# command: " << p.command << '\n'
      << "# config_hash: " << p.config_hash << '\n'
      << "# seed: " << p.seed << '\n'
      << "# units: " << units << '\n';
  body(out);
}

void write_json(const std::string& path, const Provenance& p, nlohmann::json doc) {
  doc["provenance"] = provenance_json(p);
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

std::string render_svg(const PlotSpec& plot, const Provenance& p) {
  const double width = 720.0;
  const double height = 440.0;
  const double left = 80.0;
  const double right = 180.0;
  const double top = 40.0;
  const double bottom = 60.0;
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const Series& s : plot.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = ymin = 0.0;
    xmax = ymax = 1.0;
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<!-- evac " << tool_version() << " command=" << escape_xml(p.command)
      << " config_hash=" << p.config_hash << " seed=" << p.seed << " -->\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape_xml(plot.title) << "</text>\n"
      << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double xs = tick_step(xmax - xmin);
  for (double x = std::ceil(xmin / xs) * xs; x <= xmax + 1e-9 * xs; x += xs) {
    svg << "<line x1=\"" << sx(x) << "\" y1=\"" << top + ph << "\" x2=\"" << sx(x) << "\" y2=\""
        << top + ph + 5 << "\" stroke=\"black\"/>"
        << "<text x=\"" << sx(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
        << fmt(std::abs(x) < 1e-12 * xs ? 0.0 : x) << "</text>\n";
  }
  const double ys = tick_step(ymax - ymin);
  for (double y = std::ceil(ymin / ys) * ys; y <= ymax + 1e-9 * ys; y += ys) {
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(y) << "\" x2=\"" << left << "\" y2=\""
        << sy(y) << "\" stroke=\"black\"/>"
        << "<text x=\"" << left - 8 << "\" y=\"" << sy(y) + 4 << "\" text-anchor=\"end\">"
        << fmt(std::abs(y) < 1e-12 * ys ? 0.0 : y) << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">" << escape_xml(plot.x_label) << "</text>\n"
      << "<text transform=\"translate(20," << top + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape_xml(plot.y_label) << "</text>\n";
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const Series& s = plot.series[k];
    const char* colour = colours[k % 8];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      svg << fmt(sx(s.x[i]), 6) << ',' << fmt(sy(s.y[i]), 6) << ' ';
    }
    svg << "\"/>\n";
    const double ly = top + 15.0 + 18.0 * static_cast<double>(k);
    svg << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30
        << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>"
        << "<text x=\"" << left + pw + 35 << "\" y=\"" << ly + 4 << "\">" << escape_xml(s.label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_svg(const std::string& path, const PlotSpec& plot, const Provenance& p) {
  auto out = open_out(path);
  out << render_svg(plot, p);
}

}  // namespace evac
