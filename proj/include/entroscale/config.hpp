#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entroscale/rlmover.hpp"

namespace entroscale {

// One JSON document: the model plus optional command parameters.
//
//   hamiltonian.mu           integer >= 1
//   hamiltonian.c            object "alpha,n" -> number (alpha 0..2 with n 1..mu, alpha 3 with n 0..mu)
//   beta_L, beta_R           0 < beta_L <= beta_R
//   fermi                    {"type": "fermi_dirac" | "ground" | "half"}
//                            {"type": "step_set", "intervals": [[a, b], ...]}, endpoints may be "inf"/"-inf"
//   phase                    {"lambda": [re, im], "gamma": 1 | 2}, default [1, 0] and 2
//   nu_list, nu, fft_size    optional defaults for the commands
struct RunConfig {
  ChainModel model;
  std::vector<int> nu_list;
  std::optional<int> nu;
  int fft_size = 0;
  std::string source;
};

// ConfigError with the offending field (or parser line/column) in the message.
RunConfig parse_config_text(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);

}  // namespace entroscale
