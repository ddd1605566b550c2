#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "evac/output.hpp"

using namespace evac;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("CSV header carries provenance") {
  const Provenance p{"simulate", "0123456789abcdef", 42};
  const std::string path = "test_output.csv";
  write_csv(path, p, "t in h", [](std::ostream& out) { out << "t,v\n0,1\n"; });
  const auto text = slurp(path);
  std::remove(path.c_str());
  CHECK(text.find("# config_hash: 0123456789abcdef") != std::string::npos);
  CHECK(text.find("# seed: 42") != std::string::npos);
  CHECK(text.find(tool_version()) != std::string::npos);
  CHECK(text.find("t,v\n0,1\n") != std::string::npos);
}

TEST_CASE("JSON documents get a provenance member") {
  const Provenance p{"flood", "abc", 1};
  const std::string path = "test_output.json";
  write_json(path, p, {{"value", 3}});
  const auto j = nlohmann::json::parse(slurp(path));
  std::remove(path.c_str());
  CHECK(j["value"] == 3);
  CHECK(j["provenance"]["config_hash"] == "abc");
  CHECK(j["provenance"]["seed"] == 1);
  CHECK(j["provenance"]["version"] == tool_version());
}

TEST_CASE("SVG plot") {
  PlotSpec plot{"title", "x", "y", {{"a", {0.0, 1.0, 2.0}, {1.0, 3.0, 2.0}}}};
  const auto svg = render_svg(plot, {"cmd", "hash123", 5});
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("hash123") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  PlotSpec empty{"t", "x", "y", {}};
  CHECK_NOTHROW(render_svg(empty, {"cmd", "h", 0}));
}
