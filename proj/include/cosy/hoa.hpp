#pragma once

// HOA-format import and export. Import accepts deterministic-friendly
// subset: explicit edge labels, a single initial state, and the
// acceptance names "parity min even N", "Buchi", and "co-Buchi"
// (transition-based or state-based sets). Atomic propositions must
// already exist in the store.

#include <stdexcept>
#include <string>

#include "cosy/automata.hpp"

namespace cosy {

struct HoaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ParityAutomaton import_hoa(const std::string& text, Store& store);

std::string export_hoa(const ParityAutomaton& a);
std::string export_hoa(const CoBuchiAutomaton& a);  // Fin(0) acceptance

}  // namespace cosy
