#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace entroscale {

using Json = nlohmann::ordered_json;

// Every double is printed with 17 significant digits, so equal inputs give byte-equal output.
std::string format_number(double x);
std::string to_json_text(const Json& doc, int indent = 2);

struct SweepRow {
  int nu = 0;
  double S = 0.0;
  double s_infinity = 0.0;
  double gap() const;
  double per_site() const;
  double bits() const;
};

inline constexpr const char* kSweepHeader = "nu,S_nu,S_nu/nu,s_infinity,gap,S_nu_bits";
std::string to_csv(const std::vector<SweepRow>& rows);

}  // namespace entroscale
