/// Runs every acceptance criterion at full size and prints one PASS/FAIL line per criterion.
/// Exit status is the number of failing criteria (capped at 125).

#include <algorithm>
#include <cstdio>
#include <exception>

#include "evac/reproduce.hpp"
#include "evac/scenario.hpp"

int main() {
  try {
    const evac::ScenarioConfig config;
    const auto results = evac::run_target("all", config);
    int failed = 0;
    for (const auto& r : results) {
      std::printf("[%2d] %s %s (%.1f s)\n", r.criterion, r.pass ? "PASS" : "FAIL", r.name.c_str(),
                  r.seconds);
      for (const auto& line : r.lines) std::printf("     %s\n", line.c_str());
      std::fflush(stdout);
      if (!r.pass) ++failed;
    }
    std::printf("%d of %zu criteria pass\n", static_cast<int>(results.size()) - failed,
                results.size());
    return std::min(failed, 125);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
    return 126;
  }
}
