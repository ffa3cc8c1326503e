#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "pbprop/instance.hpp"

namespace pbprop::fixtures {

// Worked instances with known verdicts, shipped as data under fixtures/ as
// well. Each builder returns the canonical instance.

// Four voters with cardinal utilities over c1..c4, l = 1.
PBInstance four_voter_cardinal();
// v1, v2 share c1, c2, c3; v3 has c4, c5; everyone approves c6; l = 10.
PBInstance three_voter_laminar();
// Same approvals with cheap c1..c5 and an expensive common c6; l = 1.
PBInstance expensive_unanimous();
// Unit costs, committee size 4, common c5; the bundle {c1..c4} has every
// cohesion property but no price system.
PBInstance unit_cost_unpriceable();
// Two voters sharing t1, t2 at utility 3/5, three sharing c1..c3.
PBInstance priceable_not_pjr();
// Common c, eight t-projects for three voters, four x-projects for the
// fourth; l = 11/3.
PBInstance lp_not_core();
// Unit costs, k = 3, voter i approves c_i, c4, c5, c6.
PBInstance priceable_not_ejr();

struct Named {
  std::string name;
  PBInstance (*build)();
};
const std::vector<Named> &all();

Bundle bundle(const PBInstance &instance, std::initializer_list<const char *> ids);

struct FixtureCheck {
  std::string name;
  bool passed = false;
  std::string detail; // observed values
};

// Replays every worked example against the library.
std::vector<FixtureCheck> worked_example_checks();

} // namespace pbprop::fixtures
