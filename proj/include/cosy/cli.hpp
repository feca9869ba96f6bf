#pragma once

#include <random>
#include <string>

namespace cosy {

// Random small arena with a random fragment objective, reproducible from
// the generator state. Shared between the verify command and the test
// drivers so failures replay from a seed.
std::string fuzz_game_text(std::mt19937_64& rng, int max_props);

// Entry point of the cocoa-synth binary. Exit codes: 0 realizable or
// verified, 1 unrealizable, 2 usage or input error, 3 engine
// disagreement, 4 timeout.
int cli_main(int argc, char** argv);

}  // namespace cosy
