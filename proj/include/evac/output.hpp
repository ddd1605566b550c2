#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace evac {

const char* tool_version();

/// Identifies the run that produced an artifact.
struct Provenance {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
};

nlohmann::json provenance_json(const Provenance& p);

/// Writes "# key: value" header lines (tool, version, command, config hash, seed, units),
/// then the body.
void write_csv(const std::string& path, const Provenance& p, const std::string& units,
               const std::function<void(std::ostream&)>& body);

/// Writes a JSON document with a "provenance" member added.
void write_json(const std::string& path, const Provenance& p, nlohmann::json doc);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Static SVG line chart with axes, ticks and a legend; provenance in a comment.
std::string render_svg(const PlotSpec& plot, const Provenance& p);
void write_svg(const std::string& path, const PlotSpec& plot, const Provenance& p);

}  // namespace evac
