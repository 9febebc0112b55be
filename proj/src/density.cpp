#include "entroscale/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "entroscale/entropy.hpp"
#include "entroscale/error.hpp"
#include "entroscale/quadrature.hpp"

namespace entroscale {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDensityTolerance = 1e-10;
constexpr double kRouteTolerance = 1e-9;
constexpr int kMaxDepth = 40;
constexpr int kVanishingSamples = 4096;

// E' without the OnZeroSet guard: Z_|u| is a null set the integrators only graze.
double velocity(const PauliSymbol& s, double k) {
  const double d0 = s.du[0](k);
  if (s.tag == CaseTag::Case3) return d0;
  const double au = s.abs_u(k);
  return au < 1e-13 ? 0.0 : d0 + s.udu(k) / au;
}

double energy(const PauliSymbol& s, double k) { return dispersion(s, k).plus; }

std::vector<Arc> cyclic_arcs(const std::vector<double>& cuts) {
  if (cuts.empty()) return {{-kPi, kPi}};
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) arcs.push_back({cuts[i], cuts[i + 1]});
  arcs.push_back({cuts.back(), cuts.front() + 2.0 * kPi});
  return arcs;
}

// Inward clamp so arc endpoints (roots of E', Fermi-level crossings) are never sampled.
std::function<double(double)> open_arc(std::function<double(double)> f, const Arc& arc) {
  const double eps = 1e-9 * arc.length();
  return [f = std::move(f), lo = arc.lo + eps, hi = arc.hi - eps](double k) {
    return f(std::clamp(k, lo, hi));
  };
}

struct ArcIntegral {
  double value;
  double error;
};

ArcIntegral integrate_arc(std::function<double(double)> f, const Arc& arc) {
  const auto r = adaptive_simpson(open_arc(std::move(f), arc), arc.lo, arc.hi,
                                  kDensityTolerance * arc.length() / (2.0 * kPi), kMaxDepth);
  if (!r.converged)
    throw Error(ErrorCode::QuadratureFailure,
                fmt::format("density integral on arc [{}, {}] did not converge (value {}, error {:.3e})", arc.lo,
                            arc.hi, r.value, r.error));
  return {r.value / (2.0 * kPi), r.error / (2.0 * kPi)};
}

std::vector<double> partition_cuts(const PauliSymbol& s) {
  std::vector<double> cuts;
  auto add = [&cuts](const TrigPoly& p) {
    if (is_zero(p, TrigPoly::kTrimTolerance)) return;
    for (double r : root_angles(p)) cuts.push_back(r);
  };
  if (s.tag == CaseTag::Case3) {
    add(s.du[0]);
  } else {
    add(partition_polynomial(s));
    add(s.usq);
  }
  // Q and u^2 share their zeros on Z_|u|.
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return b - a < 1e-9; }), cuts.end());
  if (cuts.size() > 1 && cuts.front() + 2.0 * kPi - cuts.back() < 1e-9) cuts.pop_back();
  return cuts;
}

double total_length(const std::vector<Arc>& arcs) {
  double t = 0.0;
  for (const Arc& a : arcs) t += a.length();
  return t;
}

std::vector<Interval> merge_intervals(std::vector<Interval> v) {
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const Interval& iv : v) {
    if (!out.empty() && iv.lo <= out.back().hi + 1e-12 * std::max(1.0, std::fabs(iv.lo))) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

}  // namespace

double MomentumPartition::length_L() const { return total_length(pi_L); }
double MomentumPartition::length_R() const { return total_length(pi_R); }

MomentumPartition partition_momentum(const ChainModel& model) {
  const RLSymbol rl(model);
  const PauliSymbol& s = rl.pauli();
  const std::vector<double> cuts = partition_cuts(s);

  MomentumPartition part;
  for (double c : cuts) {
    if (s.tag != CaseTag::Case3 && s.abs_u(c) < 1e-7) {
      part.excluded.push_back(c);
    } else if (std::fabs(velocity(s, c)) <= 1e-8) {
      part.pi_0.push_back(c);
    }
  }

  std::vector<double> pts{-kPi};
  for (double c : cuts)
    if (c > -kPi && c < kPi) pts.push_back(c);
  pts.push_back(kPi);

  int last = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Arc arc{pts[i], pts[i + 1]};
    if (arc.length() <= 0.0) continue;
    const double v = velocity(s, 0.5 * (arc.lo + arc.hi));
    const int side = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (side == 0) continue;
    auto& target = side > 0 ? part.pi_R : part.pi_L;
    if (side == last && !target.empty() && target.back().hi == arc.lo) {
      target.back().hi = arc.hi;
    } else {
      target.push_back(arc);
    }
    last = side;
  }
  return part;
}

std::vector<Interval> sigma_set(const ChainModel& model) {
  const RLSymbol rl(model);
  const PauliSymbol& s = rl.pauli();
  const MomentumPartition part = partition_momentum(model);
  std::vector<Interval> pieces;
  auto add = [&](const std::vector<Arc>& arcs, double beta) {
    for (const Arc& a : arcs) {
      const double e0 = energy(s, a.lo);
      const double e1 = energy(s, a.hi);
      const double lo = beta * std::min(e0, e1);
      const double hi = beta * std::max(e0, e1);
      pieces.push_back({lo, hi});
      pieces.push_back({-hi, -lo});
    }
  };
  add(part.pi_L, model.temps.beta_L);
  add(part.pi_R, model.temps.beta_R);
  return merge_intervals(std::move(pieces));
}

VanishingVerdict vanishing_check(const ChainModel& model) {
  const std::vector<Interval> sigma = sigma_set(model);
  double total = 0.0;
  for (const Interval& iv : sigma) total += iv.hi - iv.lo;
  VanishingVerdict v;
  for (const Interval& iv : sigma) {
    const double len = iv.hi - iv.lo;
    const int count = total > 0.0 ? std::max(1, static_cast<int>(std::lround(kVanishingSamples * len / total))) : 1;
    for (int j = 0; j < count; ++j) {
      const double x = iv.lo + len * (j + 0.5) / count;
      const double r = fermi_value(model.fermi, x);
      ++v.samples;
      if (std::fabs(r) > 1e-12 && std::fabs(r - 1.0) > 1e-12) {
        if (v.witnesses.size() < 8) v.witnesses.push_back({x, r});
      }
    }
  }
  v.vanishing = v.witnesses.empty();
  return v;
}

DensityReport s_infinity(const ChainModel& model) {
  const RLSymbol rl(model);
  const PauliSymbol& s = rl.pauli();
  const double beta = model.temps.beta();
  const double delta = model.temps.delta();
  const FermiFunction& f = model.fermi;

  DensityReport rep;
  double general = 0.0;
  for (const Arc& arc : cyclic_arcs(rl.breakpoints())) {
    if (arc.length() <= 0.0) continue;
    const auto g = integrate_arc(
        [&](double k) { return binary_eta(fermi_odd2(f, (beta + delta * soft_sign(velocity(s, k))) * energy(s, k))); },
        arc);
    general += g.value;
    rep.quadrature_error += g.error;

    const double side = soft_sign(velocity(s, 0.5 * (arc.lo + arc.hi)));
    const double beta_side = beta + delta * side;
    const auto h = integrate_arc([&](double k) { return binary_eta(fermi_odd2(f, beta_side * energy(s, k))); }, arc);
    (side < 0.0 ? rep.s_L : rep.s_R) += h.value;
  }
  if (!std::isfinite(general))
    throw Error(ErrorCode::QuadratureFailure, "density integral is not finite");
  if (std::fabs(general - (rep.s_L + rep.s_R)) > kRouteTolerance)
    throw Error(ErrorCode::QuadratureFailure,
                fmt::format("single-integral and split forms disagree: {} vs {}", general, rep.s_L + rep.s_R));
  rep.s_infinity = std::max(0.0, general);
  rep.partition = partition_momentum(model);
  rep.sigma = sigma_set(model);
  rep.vanishing = vanishing_check(model);
  rep.verdict_agrees = rep.vanishing.vanishing == (rep.s_infinity < kVanishingThreshold);
  return rep;
}

double s_infinity_symmetric(const ChainModel& model) {
  const RLSymbol rl(model);
  const PauliSymbol& s = rl.pauli();
  if (!is_zero(s.u[0], 1e-12))
    throw Error(ErrorCode::NotSymmetric, "the symmetric form needs u_0 = 0");
  const FermiFunction& f = model.fermi;
  double sum = 0.0;
  for (double b : {model.temps.beta_L, model.temps.beta_R})
    for (const Arc& arc : cyclic_arcs(rl.breakpoints())) {
      if (arc.length() <= 0.0) continue;
      sum += integrate_arc([&](double k) { return binary_eta(fermi_odd2(f, b * energy(s, k))); }, arc).value;
    }
  return 0.5 * sum;
}

TanhReport tanh_form(const ChainModel& model) {
  if (!std::holds_alternative<FermiDirac>(model.fermi))
    throw Error(ErrorCode::WrongFermi, fmt::format("tanh form needs fermi_dirac, got {}", fermi_name(model.fermi)));
  const RLSymbol rl(model);
  const PauliSymbol& s = rl.pauli();
  TanhReport rep;
  for (const Arc& arc : cyclic_arcs(rl.breakpoints())) {
    if (arc.length() <= 0.0) continue;
    const double side = soft_sign(velocity(s, 0.5 * (arc.lo + arc.hi)));
    const double b = side < 0.0 ? model.temps.beta_L : (side > 0.0 ? model.temps.beta_R : model.temps.beta());
    rep.value += integrate_arc([&](double k) { return binary_eta(std::tanh(0.5 * b * energy(s, k))); }, arc).value;
  }
  double norm = 0.0;
  for (const TrigPoly& p : s.u) norm += sup_norm(p);
  rep.a = {std::tanh(0.5 * model.temps.beta_L * norm), std::tanh(0.5 * model.temps.beta_R * norm)};
  const MomentumPartition part = partition_momentum(model);
  rep.lower_bound = (binary_eta(rep.a[0]) * part.length_L() + binary_eta(rep.a[1]) * part.length_R()) / (2.0 * kPi);
  return rep;
}

}  // namespace entroscale
