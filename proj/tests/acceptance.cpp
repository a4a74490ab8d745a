// Release gate: one line per criterion; nonzero exit if any fails.
// Optional args: criterion ids to run (default all), for calibration.

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "probe/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) {
    for (int id = 1; id <= 10; ++id) ids.push_back(id);
  }
  bool all_pass = true;
  for (int id : ids) {
    const probe::CriterionResult r = probe::run_criterion(id, probe::kAcceptanceSeed);
    std::printf("criterion %2d: %s  %s\n", r.id, r.pass ? "PASS" : "FAIL",
                r.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 1;
}
