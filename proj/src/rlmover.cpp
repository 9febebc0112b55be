#include "entroscale/rlmover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "entroscale/error.hpp"

namespace entroscale {

namespace {

constexpr double kCaseTolerance = 1e-12;
constexpr double kZeroSetTolerance = 1e-13;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double fermi_dirac(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

bool in_step_set(const StepSet& s, double x) {
  for (const auto& [a, b] : s.intervals)
    if (a < x && x < b) return true;
  return false;
}

void append_roots(std::vector<double>& out, const TrigPoly& p) {
  if (is_zero(p, TrigPoly::kTrimTolerance)) return;
  for (double r : root_angles(p)) out.push_back(r);
}

}  // namespace

HamiltonianCoeffs::HamiltonianCoeffs(int mu) : mu_(mu) {
  for (auto& row : c_) row.assign(static_cast<std::size_t>(std::max(mu, 0)) + 1, 0.0);
}

double HamiltonianCoeffs::get(int alpha, int n) const {
  if (alpha < 0 || alpha > 3 || n < 0 || n > mu_ || (alpha < 3 && n == 0))
    throw Error(ErrorCode::InvalidModel, fmt::format("no coefficient c({},{}) for mu={}", alpha, n, mu_));
  return c_[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(n)];
}

void HamiltonianCoeffs::set(int alpha, int n, double value) {
  get(alpha, n);
  if (!std::isfinite(value))
    throw Error(ErrorCode::InvalidModel, fmt::format("coefficient c({},{}) is not finite", alpha, n));
  c_[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(n)] = value;
}

TrigPoly HamiltonianCoeffs::u(int alpha) const {
  const auto& row = c_[static_cast<std::size_t>(alpha)];
  if (alpha == 3) {
    std::vector<double> a(row.size());
    a[0] = row[0];
    for (std::size_t n = 1; n < row.size(); ++n) a[n] = 2.0 * row[n];
    return TrigPoly(std::move(a), {});
  }
  std::vector<double> b(row.size() - 1);
  for (std::size_t n = 1; n < row.size(); ++n) b[n - 1] = -2.0 * row[n];
  return TrigPoly({0.0}, std::move(b));
}

void HamiltonianCoeffs::validate() const {
  if (mu_ < 1) throw Error(ErrorCode::InvalidModel, "range mu must be at least 1");
  for (const auto& row : c_)
    for (double v : row)
      if (v != 0.0) return;
  throw Error(ErrorCode::InvalidModel, "all Hamiltonian coefficients vanish");
}

void Temperatures::validate() const {
  if (!(beta_L > 0.0) || !std::isfinite(beta_L))
    throw Error(ErrorCode::InvalidModel, fmt::format("beta_L must be positive and finite, got {}", beta_L));
  if (!(beta_R >= beta_L) || !std::isfinite(beta_R))
    throw Error(ErrorCode::InvalidModel,
                fmt::format("beta_R must be finite and at least beta_L, got beta_L={} beta_R={}", beta_L, beta_R));
}

double fermi_value(const FermiFunction& f, double x) {
  return std::visit(Overloaded{
                        [x](const FermiDirac&) { return fermi_dirac(x); },
                        [x](const GroundStep&) { return x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5); },
                        [](const HalfConstant&) { return 0.5; },
                        [x](const StepSet& s) { return in_step_set(s, x) ? 1.0 : 0.0; },
                        [x](const CustomOdd& c) { return 0.5 * (1.0 + c.odd(x)); },
                    },
                    f);
}

double fermi_odd2(const FermiFunction& f, double x) {
  return std::visit(Overloaded{
                        [x](const FermiDirac&) { return std::tanh(0.5 * x); },
                        [x](const GroundStep&) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); },
                        [](const HalfConstant&) { return 0.0; },
                        [&f, x](const StepSet&) { return fermi_value(f, x) - fermi_value(f, -x); },
                        [x](const CustomOdd& c) { return 0.5 * (c.odd(x) - c.odd(-x)); },
                    },
                    f);
}

std::vector<double> fermi_breakpoints(const FermiFunction& f) {
  std::vector<double> pts = std::visit(
      Overloaded{
          [](const FermiDirac&) { return std::vector<double>{}; },
          [](const GroundStep&) { return std::vector<double>{0.0}; },
          [](const HalfConstant&) { return std::vector<double>{}; },
          [](const StepSet& s) {
            std::vector<double> v;
            for (const auto& [a, b] : s.intervals)
              for (double e : {a, b})
                if (std::isfinite(e)) v.insert(v.end(), {e, -e});
            return v;
          },
          [](const CustomOdd& c) {
            std::vector<double> v;
            for (double e : c.breakpoints) v.insert(v.end(), {e, -e});
            return v;
          },
      },
      f);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

bool fermi_is_smooth(const FermiFunction& f) {
  return std::holds_alternative<FermiDirac>(f) || std::holds_alternative<HalfConstant>(f);
}

std::string fermi_name(const FermiFunction& f) {
  return std::visit(Overloaded{
                        [](const FermiDirac&) { return std::string("fermi_dirac"); },
                        [](const GroundStep&) { return std::string("ground"); },
                        [](const HalfConstant&) { return std::string("half"); },
                        [](const StepSet&) { return std::string("step_set"); },
                        [](const CustomOdd& c) { return c.label; },
                    },
                    f);
}

void validate_fermi(const FermiFunction& f) {
  if (const auto* s = std::get_if<StepSet>(&f)) {
    for (const auto& [a, b] : s->intervals)
      if (std::isnan(a) || std::isnan(b) || !(a < b))
        throw Error(ErrorCode::InvalidFermi, fmt::format("step_set interval ({}, {}) is empty or malformed", a, b));
  }
  if (const auto* c = std::get_if<CustomOdd>(&f); c && !c->odd)
    throw Error(ErrorCode::InvalidFermi, "custom Fermi function has no odd part");

  double reach = 10.0;
  for (double b : fermi_breakpoints(f)) reach = std::max(reach, 2.0 * std::fabs(b) + 1.0);
  constexpr int kSamples = 1024;
  for (int j = 0; j < kSamples; ++j) {
    const double x = reach * (2.0 * j + 1.0 - kSamples) / kSamples;
    const double rp = fermi_value(f, x);
    const double rm = fermi_value(f, -x);
    if (!std::isfinite(rp) || rp < -1e-12)
      throw Error(ErrorCode::InvalidFermi, fmt::format("rho({}) = {} is negative", x, rp));
    if (std::fabs(rp + rm - 1.0) > 1e-12)
      throw Error(ErrorCode::InvalidFermi,
                  fmt::format("even part of rho is not 1/2 at x={}: rho(x)+rho(-x) = {}", x, rp + rm));
    if (std::fabs(fermi_odd2(f, x)) > 1.0 + 1e-12)
      throw Error(ErrorCode::InvalidFermi, fmt::format("|rho(x)-rho(-x)| exceeds 1 at x={}", x));
  }
}

std::complex<double> FermiFamilyPhase::lambda_power(int g) const {
  return (g % 2 == 0) ? lambda : std::conj(lambda) / std::norm(lambda);
}

void FermiFamilyPhase::validate() const {
  if (std::fabs(std::abs(lambda) - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidModel, fmt::format("phase lambda must have unit modulus, |lambda| = {}", std::abs(lambda)));
  if (gamma != 1 && gamma != 2)
    throw Error(ErrorCode::InvalidModel, fmt::format("phase gamma must be 1 or 2, got {}", gamma));
}

std::string to_string(CaseTag tag) { return fmt::format("Case{}", static_cast<int>(tag)); }

void ChainModel::validate() const {
  hamiltonian.validate();
  temps.validate();
  validate_fermi(fermi);
  phase.validate();
}

PauliSymbol::PauliSymbol(const HamiltonianCoeffs& h) {
  for (int a = 0; a < 4; ++a) {
    u[static_cast<std::size_t>(a)] = h.u(a);
    du[static_cast<std::size_t>(a)] = derivative(u[static_cast<std::size_t>(a)]);
  }
  for (int a = 1; a < 4; ++a) {
    usq = usq + mul(u[static_cast<std::size_t>(a)], u[static_cast<std::size_t>(a)]);
    udu = udu + mul(u[static_cast<std::size_t>(a)], du[static_cast<std::size_t>(a)]);
  }
  const bool u0_zero = is_zero(u[0], kCaseTolerance);
  const bool u_zero = is_zero(usq, kCaseTolerance * kCaseTolerance) &&
                      is_zero(u[1], kCaseTolerance) && is_zero(u[2], kCaseTolerance) &&
                      is_zero(u[3], kCaseTolerance);
  const bool udu_zero = is_zero(udu, kCaseTolerance);
  if (u0_zero) {
    tag = udu_zero ? CaseTag::Case1 : CaseTag::Case2;
  } else if (u_zero) {
    tag = CaseTag::Case3;
  } else if (is_zero(mul(u[0], u[0]) - usq, kCaseTolerance)) {
    tag = CaseTag::Case6;
  } else {
    tag = udu_zero ? CaseTag::Case4 : CaseTag::Case5;
  }
}

double PauliSymbol::abs_u(double k) const { return std::sqrt(std::max(0.0, usq(k))); }

CaseTag classify(const HamiltonianCoeffs& h) { return PauliSymbol(h).tag; }

Dispersion dispersion(const PauliSymbol& s, double k) {
  const double u0 = s.u[0](k);
  const double au = s.abs_u(k);
  return {u0 + au, u0 - au};
}

Dispersion dispersion(const HamiltonianCoeffs& h, double k) { return dispersion(PauliSymbol(h), k); }

Dispersion dispersion_derivatives(const PauliSymbol& s, double k) {
  const double d0 = s.du[0](k);
  if (s.tag == CaseTag::Case3) return {d0, d0};
  const double au = s.abs_u(k);
  if (au < kZeroSetTolerance)
    throw Error(ErrorCode::OnZeroSet, fmt::format("|u| vanishes at k={}", k));
  const double t = s.udu(k) / au;
  return {d0 + t, d0 - t};
}

double dispersion_derivative(const HamiltonianCoeffs& h, double k) {
  return dispersion_derivatives(PauliSymbol(h), k).plus;
}

double soft_sign(double x) {
  if (std::fabs(x) < kZeroSetTolerance) return 0.0;
  return x > 0.0 ? 1.0 : -1.0;
}

TrigPoly partition_polynomial(const PauliSymbol& s) {
  return mul(mul(s.du[0], s.du[0]), s.usq) - mul(s.udu, s.udu);
}

RLSymbol::RLSymbol(const ChainModel& model) : model_(model), pauli_(model.hamiltonian) {
  if (pauli_.tag == CaseTag::Case1 || pauli_.tag == CaseTag::Case6)
    throw Error(ErrorCode::WrongCase,
                fmt::format("{} has a pure-point part; the R/L symbol needs Cases 2-5", to_string(pauli_.tag)));
}

PauliValue RLSymbol::pauli_value(double k) const {
  const double beta = model_.temps.beta();
  const double delta = model_.temps.delta();
  const Dispersion e = dispersion(pauli_, k);
  if (pauli_.tag == CaseTag::Case3) {
    const double rho = fermi_value(model_.fermi, (beta + delta * soft_sign(pauli_.du[0](k))) * e.plus);
    return {rho, {0.0, 0.0, 0.0}};
  }
  const Dispersion d = dispersion_derivatives(pauli_, k);
  const double rp = fermi_value(model_.fermi, (beta + delta * soft_sign(d.plus)) * e.plus);
  const double rm = fermi_value(model_.fermi, (beta + delta * soft_sign(d.minus)) * e.minus);
  const double au = pauli_.abs_u(k);
  const double half_diff = 0.5 * (rp - rm) / au;
  return {0.5 * (rp + rm),
          {half_diff * pauli_.u[1](k), half_diff * pauli_.u[2](k), half_diff * pauli_.u[3](k)}};
}

Eigen::Matrix2cd RLSymbol::matrix(double k) const {
  const PauliValue p = pauli_value(k);
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  m(0, 0) = p.r0 + p.r[2];
  m(0, 1) = C(p.r[0], -p.r[1]);
  m(1, 0) = C(p.r[0], p.r[1]);
  m(1, 1) = p.r0 - p.r[2];
  return m;
}

std::vector<double> RLSymbol::breakpoints() const {
  std::vector<double> out;
  const auto levels = fermi_breakpoints(model_.fermi);
  const double betas[2] = {model_.temps.beta_L, model_.temps.beta_R};
  if (pauli_.tag == CaseTag::Case3) {
    append_roots(out, pauli_.du[0]);
    for (double t : levels)
      for (double b : betas) append_roots(out, pauli_.u[0] - TrigPoly::constant(t / b));
  } else {
    append_roots(out, partition_polynomial(pauli_));
    append_roots(out, pauli_.usq);
    for (double t : levels)
      for (double b : betas) {
        const TrigPoly shifted = pauli_.u[0] - TrigPoly::constant(t / b);
        append_roots(out, mul(shifted, shifted) - pauli_.usq);
      }
  }
  std::sort(out.begin(), out.end());
  std::vector<double> unique;
  for (double x : out)
    if (unique.empty() || x - unique.back() > 1e-12) unique.push_back(x);
  if (unique.size() > 1 && unique.front() + 2.0 * std::numbers::pi - unique.back() <= 1e-12) unique.pop_back();
  return unique;
}

PauliValue rl_symbol_pauli(const ChainModel& model, double k) { return RLSymbol(model).pauli_value(k); }

Eigen::Matrix2cd rl_symbol_matrix(const ChainModel& model, double k) { return RLSymbol(model).matrix(k); }

}  // namespace entroscale
