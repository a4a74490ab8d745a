#pragma once
// The release acceptance checks: exact lemma sweeps plus scaled-down regret
// experiments with pinned tolerances. Each criterion reports one line.

#include <cstdint>
#include <string>
#include <vector>

namespace probe {

struct CriterionResult {
  int id = 0;
  bool pass = false;
  std::string detail;
};

CriterionResult run_criterion(int id, std::uint64_t seed);
std::vector<CriterionResult> run_acceptance(std::uint64_t seed);

inline constexpr std::uint64_t kAcceptanceSeed = 20260824ULL;

}  // namespace probe
