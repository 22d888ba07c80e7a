#pragma once

// State file format:
//   {"cutoff": N, "coefficients": [c0, ..., cN], "normalized": bool, "provenance": "..."}
// Coefficients are written with 17 significant digits.

#include "hbell/fock.hpp"

#include <string>

namespace hbell {

struct StateFile {
    CoefficientVector state;
    std::string provenance;
};

std::string state_to_json(const CoefficientVector& v, const std::string& provenance);
StateFile state_from_json(const std::string& text);

void write_state_file(const std::string& path, const CoefficientVector& v, const std::string& provenance);
StateFile read_state_file(const std::string& path);

/// Writes `text` to `path`, or to stdout when `path` is empty or "-".
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace hbell
