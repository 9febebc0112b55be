#include "entroscale/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "entroscale/error.hpp"

namespace entroscale {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& source, const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigError, fmt::format("{}: field '{}': {}", source, field, what));
}

double number(const json& j, const std::string& source, const std::string& field) {
  if (!j.is_number()) fail(source, field, fmt::format("expected a number, got {}", j.dump()));
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(source, field, "must be finite");
  return v;
}

double endpoint(const json& j, const std::string& source, const std::string& field) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    fail(source, field, fmt::format("expected a number, \"inf\" or \"-inf\", got \"{}\"", s));
  }
  return number(j, source, field);
}

int integer(const json& j, const std::string& source, const std::string& field) {
  if (!j.is_number_integer()) fail(source, field, fmt::format("expected an integer, got {}", j.dump()));
  return j.get<int>();
}

const json& require(const json& j, const char* key, const std::string& source, const std::string& field) {
  if (!j.contains(key)) fail(source, field, "missing");
  return j.at(key);
}

HamiltonianCoeffs parse_hamiltonian(const json& h, const std::string& source) {
  if (!h.is_object()) fail(source, "hamiltonian", "expected an object");
  const int mu = integer(require(h, "mu", source, "hamiltonian.mu"), source, "hamiltonian.mu");
  if (mu < 1) fail(source, "hamiltonian.mu", fmt::format("must be at least 1, got {}", mu));
  HamiltonianCoeffs coeffs(mu);
  const json& c = require(h, "c", source, "hamiltonian.c");
  if (!c.is_object()) fail(source, "hamiltonian.c", "expected an object mapping \"alpha,n\" to numbers");
  for (const auto& [key, value] : c.items()) {
    const std::string field = fmt::format("hamiltonian.c[\"{}\"]", key);
    int alpha = -1, n = -1;
    char comma = 0;
    std::istringstream in(key);
    if (!(in >> alpha >> comma >> n) || comma != ',' || !in.eof())
      fail(source, field, "key must have the form \"alpha,n\"");
    if (alpha < 0 || alpha > 3) fail(source, field, "alpha must be 0, 1, 2 or 3");
    if (n < (alpha == 3 ? 0 : 1) || n > mu)
      fail(source, field, fmt::format("n must lie in {}..{} for alpha={}", alpha == 3 ? 0 : 1, mu, alpha));
    coeffs.set(alpha, n, number(value, source, field));
  }
  return coeffs;
}

FermiFunction parse_fermi(const json& f, const std::string& source) {
  if (!f.is_object()) fail(source, "fermi", "expected an object with a \"type\"");
  const json& t = require(f, "type", source, "fermi.type");
  if (!t.is_string()) fail(source, "fermi.type", "expected a string");
  const auto type = t.get<std::string>();
  if (type == "fermi_dirac") return FermiDirac{};
  if (type == "ground") return GroundStep{};
  if (type == "half") return HalfConstant{};
  if (type == "step_set") {
    const json& iv = require(f, "intervals", source, "fermi.intervals");
    if (!iv.is_array()) fail(source, "fermi.intervals", "expected an array of [a, b] pairs");
    StepSet s;
    for (std::size_t i = 0; i < iv.size(); ++i) {
      const std::string field = fmt::format("fermi.intervals[{}]", i);
      if (!iv[i].is_array() || iv[i].size() != 2) fail(source, field, "expected [a, b]");
      const double a = endpoint(iv[i][0], source, field + "[0]");
      const double b = endpoint(iv[i][1], source, field + "[1]");
      if (!(a < b)) fail(source, field, "needs a < b");
      s.intervals.emplace_back(a, b);
    }
    return s;
  }
  fail(source, "fermi.type", fmt::format("unknown type \"{}\" (expected fermi_dirac, ground, half or step_set)", type));
}

FermiFamilyPhase parse_phase(const json& p, const std::string& source) {
  FermiFamilyPhase phase;
  if (!p.is_object()) fail(source, "phase", "expected an object");
  if (p.contains("lambda")) {
    const json& l = p.at("lambda");
    if (!l.is_array() || l.size() != 2) fail(source, "phase.lambda", "expected [re, im]");
    phase.lambda = {number(l[0], source, "phase.lambda[0]"), number(l[1], source, "phase.lambda[1]")};
  }
  if (p.contains("gamma")) phase.gamma = integer(p.at("gamma"), source, "phase.gamma");
  return phase;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, fmt::format("{}: {}", source, e.what()));
  }
  if (!doc.is_object()) throw Error(ErrorCode::ConfigError, fmt::format("{}: top level must be an object", source));

  RunConfig cfg;
  cfg.source = source;
  cfg.model.hamiltonian = parse_hamiltonian(require(doc, "hamiltonian", source, "hamiltonian"), source);
  cfg.model.temps.beta_L = number(require(doc, "beta_L", source, "beta_L"), source, "beta_L");
  cfg.model.temps.beta_R = number(require(doc, "beta_R", source, "beta_R"), source, "beta_R");
  cfg.model.fermi = parse_fermi(require(doc, "fermi", source, "fermi"), source);
  if (doc.contains("phase")) cfg.model.phase = parse_phase(doc.at("phase"), source);
  if (doc.contains("nu_list")) {
    const json& l = doc.at("nu_list");
    if (!l.is_array()) fail(source, "nu_list", "expected an array of integers");
    for (std::size_t i = 0; i < l.size(); ++i) cfg.nu_list.push_back(integer(l[i], source, fmt::format("nu_list[{}]", i)));
  }
  if (doc.contains("nu")) cfg.nu = integer(doc.at("nu"), source, "nu");
  if (doc.contains("fft_size")) cfg.fft_size = integer(doc.at("fft_size"), source, "fft_size");

  try {
    cfg.model.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, fmt::format("{}: {}", source, e.what()));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, fmt::format("cannot open config file '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace entroscale
