// acceptance_test.cc -- runs the eleven end-to-end checks and prints one
// verdict line per criterion
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>

#include "hier/verify.hh"

using namespace hier;

TEST_CASE("acceptance criteria") {
  for (int id = 1; id <= 11; ++id) {
    const CriterionResult r = run_acceptance_criterion(id);
    std::printf("[%s] criterion %2d: %s -- %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}

TEST_CASE("suite report serializes") {
  // The aggregate runner re-executes two cheap items to keep this case fast.
  std::vector<CriterionResult> rs = {run_acceptance_criterion(3), run_acceptance_criterion(8)};
  const nlohmann::ordered_json j = suite_to_json(rs);
  CHECK(j["pass"] == true);
  REQUIRE(j["criteria"].size() == 2);
  CHECK(j["criteria"][0]["id"] == 3);
  CHECK(j["criteria"][1]["name"] == "class periods match the brute-force idempotent oracle");
  for (const auto& item : j["criteria"]) {
    CHECK(item.contains("seconds"));
    CHECK(item["pass"] == true);
  }
}
