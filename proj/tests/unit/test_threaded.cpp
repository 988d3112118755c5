#include <doctest.h>

#include "dpp/harness.hpp"
#include "dpp/threaded.hpp"

using namespace dpp;

TEST_SUITE("threaded") {

TEST_CASE("eight-agent superconflict on threads") {
  const Scenario sc = gen_superconflict({10, 10}, 2.0, 8, GridSpec{30, 30, 20.0, 20.0, Connectivity::eight, {}});
  const GridPlanner planner(sc);
  const SolutionSet ideal = ideal_solution(planner).solution;
  for (auto a : {Algorithm::sdpp, Algorithm::adpp, Algorithm::iadpp}) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto r = run_threaded(planner, a, {}, &ideal);
      REQUIRE_FALSE(r.report.failed);
      CHECK_NOTHROW(verify_solution(r.solution, sc.separation));
      CHECK(r.solution[0]->dest_time() == ideal[0]->dest_time());
      CHECK(r.report.broadcasts[0] == 1);
      if (a == Algorithm::sdpp) CHECK(r.report.iterations <= 8);
      CHECK(r.report.cost >= 0.0);
    }
  }
  CHECK_THROWS_AS(run_threaded(planner, Algorithm::ca, {}), InvalidArgument);
}

TEST_CASE("failures are reported, not hung on") {
  const GridPlanner planner(gen_corridor(CorridorOrder::agent1_first, CorridorWidth::narrow));
  for (auto a : {Algorithm::sdpp, Algorithm::adpp, Algorithm::iadpp}) CHECK(run_threaded(planner, a, {}).report.failed);
}

}  // TEST_SUITE
