#pragma once

#include <string>

#include "hmcf/config/io.hpp"

namespace hmcf::testing {

/// Small problems for unit tests; `extra` is spliced into the JSON object.
inline config::ProblemSpec circle_problem(const std::string& extra = "") {
  return config::parse_problem(R"({"geometry": {"type": "circle", "r0": 1},
    "network": {"hidden_layers": 2, "hidden_width": 6},
    "sampling": {"n_f": 10, "n_0": 10, "n_b": 10})" + extra + "}");
}

inline config::ProblemSpec sphere_problem(const std::string& extra = "") {
  return config::parse_problem(R"({"geometry": {"type": "sphere", "r0": 1},
    "network": {"hidden_layers": 2, "hidden_width": 5},
    "sampling": {"n_f": 8, "n_0": 6, "n_b": 6, "n_p": 5})" + extra + "}");
}

inline config::ProblemSpec torus_problem(const std::string& extra = "") {
  return config::parse_problem(R"({"geometry": {"type": "torus", "R": 2, "r": 1},
    "network": {"hidden_layers": 2, "hidden_width": 5},
    "sampling": {"n_f": 8, "n_0": 6, "n_b": 6})" + extra + "}");
}

}  // namespace hmcf::testing
