// io.hpp
// JSON import/export of states. The schema is
//   {"num_qubits": N, "amplitudes": [[re, im], ...]}
// with amplitudes in basis-index order.

#pragma once

#include <string>

#include "stagesim/state.hpp"

namespace stagesim {

std::string state_to_json_string(const StateVector& s);
// Throws std::invalid_argument on schema violations and on non-unit input.
StateVector state_from_json_string(const std::string& text);

StateVector load_state_file(const std::string& path);
void save_state_file(const StateVector& s, const std::string& path);

}  // namespace stagesim
