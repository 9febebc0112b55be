#include "entroscale/report.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace entroscale {

namespace {

void write(const Json& j, int indent, int level, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * level), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        write(it.value(), indent, level + 1, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write(j[i], indent, level + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(j[i], indent, level + 1, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  return fmt::format("{:.17g}", x);
}

std::string to_json_text(const Json& doc, int indent) {
  std::string out;
  write(doc, indent, 0, out);
  out += "\n";
  return out;
}

double SweepRow::gap() const { return std::fabs(per_site() - s_infinity); }
double SweepRow::per_site() const { return S / nu; }
double SweepRow::bits() const { return S / std::numbers::ln2; }

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepHeader) + "\n";
  for (const SweepRow& r : rows)
    out += fmt::format("{},{},{},{},{},{}\n", r.nu, format_number(r.S), format_number(r.per_site()),
                       format_number(r.s_infinity), format_number(r.gap()), format_number(r.bits()));
  return out;
}

}  // namespace entroscale
