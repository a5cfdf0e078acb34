#include "stagesim/io.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace stagesim {

std::string state_to_json_string(const StateVector& s) {
  nlohmann::json j;
  j["num_qubits"] = s.num_qubits;
  auto& amps = j["amplitudes"] = nlohmann::json::array();
  for (const cplx& a : s.amps) {
    amps.push_back(nlohmann::json::array({a.real(), a.imag()}));
  }
  return j.dump(2) + "\n";
}

StateVector state_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("state JSON: parse error: ") +
                                e.what());
  }
  if (!j.is_object() || !j.contains("num_qubits") || !j.contains("amplitudes")) {
    throw std::invalid_argument(
        "state JSON: expected object with num_qubits and amplitudes");
  }
  if (!j["num_qubits"].is_number_integer()) {
    throw std::invalid_argument("state JSON: num_qubits must be an integer");
  }
  StateVector s;
  s.num_qubits = j["num_qubits"].get<int>();
  const auto& amps = j["amplitudes"];
  if (!amps.is_array()) {
    throw std::invalid_argument("state JSON: amplitudes must be an array");
  }
  s.amps.reserve(amps.size());
  for (const auto& pair : amps) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number()) {
      throw std::invalid_argument(
          "state JSON: each amplitude must be a [re, im] pair");
    }
    s.amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  s.validate();
  return s;
}

StateVector load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return state_from_json_string(text);
}

void save_state_file(const StateVector& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write state file: " + path);
  out << state_to_json_string(s);
}

}  // namespace stagesim
