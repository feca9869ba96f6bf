#pragma once

#include <string>
#include <vector>

namespace cosy {

// Scalable benchmark families. Every generator is deterministic: the same
// parameters produce byte-identical text.

enum class Variant {
  Gr1,  // recurrence-implication objective
  Ltl,  // adds a persistence side to each implication
};

struct BenchmarkInstance {
  std::string family;
  std::string name;    // unique, file-name friendly
  std::string params;  // human-readable parameter summary
  Variant variant = Variant::Gr1;
  int props = 0;  // declared input + output count
  std::string text;
};

// Lift over `floors` one-hot position bits, serving a single call button.
// The ltl variant adds a cabin request that must be answered by opening.
BenchmarkInstance gen_lift(int floors, Variant v);

// Bus arbiter granting one of `clients` lines each step. The ltl variant
// adds a burst-mode flag the arbiter must eventually keep low.
BenchmarkInstance gen_amba(int clients, Variant v);

// Grid world, one character per cell:
//   '#' wall, '.' floor, 'o' patrol loop, 'H' loop home cell,
//   'S' service room (entry needs its door input), 'R' robot start,
//   'X' cells the robot must eventually keep clear of (ltl variant).
// The patrol obstacle hops to the next loop cell whenever the adversary
// raises adv, and the robot may never share a cell with it.
struct RobotMap {
  std::string name;
  std::vector<std::string> rows;
};

BenchmarkInstance gen_robot(const RobotMap& map, Variant v);

// Ring layout: outer walk lane, rectangular patrol loop, service rooms
// carved into the central block. `style` 0..3 varies room and home
// placement. Needs rows >= 6 and cols >= 6.
RobotMap ring_map(const std::string& name, int rows, int cols, int services,
                  int style = 0);

// The fixed instance set the bench command runs: lift 2..8, amba 1..4,
// and sixteen 8x16 ring maps, each in both variants.
std::vector<RobotMap> shipped_robot_maps();
std::vector<BenchmarkInstance> shipped_suite();

std::string manifest_json(const std::vector<BenchmarkInstance>& set);

}  // namespace cosy
