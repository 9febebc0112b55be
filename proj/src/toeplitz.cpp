#include "entroscale/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <fftw3.h>
#include <fmt/format.h>

#include "entroscale/error.hpp"
#include "entroscale/quadrature.hpp"
#include "entroscale/skew_eigen.hpp"

namespace entroscale {

namespace {

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kDoublingTolerance = 1e-9;
constexpr double kCoefficientTolerance = 1e-11;

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

int next_pow2(int x) {
  int p = 1;
  while (p < x) p <<= 1;
  return p;
}

// Coefficients from n half-step samples k_j = 2pi(j + 1/2)/n - pi.
std::vector<Mat2> fft_coefficients(const BlockSymbol& s, int max_lag, int n) {
  auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * 4 * static_cast<std::size_t>(n)));
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * 4 * static_cast<std::size_t>(n)));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_many_dft(1, &n, 4, in, nullptr, 1, n, out, nullptr, 1, n, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (int j = 0; j < n; ++j) {
    const double k = 2.0 * kPi * (j + 0.5) / n - kPi;
    const Mat2 v = s(k);
    for (int e = 0; e < 4; ++e) {
      in[static_cast<std::size_t>(e) * n + j][0] = v.data()[e].real();
      in[static_cast<std::size_t>(e) * n + j][1] = v.data()[e].imag();
    }
  }
  fftw_execute(plan);
  std::vector<Mat2> c(2 * static_cast<std::size_t>(max_lag) + 1);
  for (int x = -max_lag; x <= max_lag; ++x) {
    const C shift = std::polar(1.0 / n, kPi * x * (1.0 - 1.0 / n));
    const int idx = ((x % n) + n) % n;
    Mat2& m = c[static_cast<std::size_t>(x + max_lag)];
    for (int e = 0; e < 4; ++e) {
      const auto& o = out[static_cast<std::size_t>(e) * n + idx];
      m.data()[e] = shift * C(o[0], o[1]);
    }
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return c;
}

double max_change(const std::vector<Mat2>& a, const std::vector<Mat2>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, (a[i] - b[i]).cwiseAbs().maxCoeff());
  return d;
}

CoefficientTable fft_table(const BlockSymbol& s, int max_lag, int fft_size) {
  int n = fft_size > 0 ? fft_size : std::max(1 << 14, 16 * next_pow2(std::max(max_lag, 1)));
  if (n <= 2 * max_lag)
    throw Error(ErrorCode::NoConvergence, fmt::format("fft size {} cannot resolve lag {}", n, max_lag));
  CoefficientTable t;
  t.max_lag = max_lag;
  t.method = "fft";
  auto coarse = fft_coefficients(s, max_lag, n);
  for (int pass = 0; pass < 2; ++pass) {
    auto fine = fft_coefficients(s, max_lag, 2 * n);
    t.delta = max_change(coarse, fine);
    n *= 2;
    coarse = std::move(fine);
    if (t.delta <= kDoublingTolerance) break;
  }
  if (t.delta > kDoublingTolerance)
    throw Error(ErrorCode::NoConvergence,
                fmt::format("fft coefficients still move by {:.3e} after two doublings (size {})", t.delta, n));
  t.fft_size = n;
  t.coeffs = std::move(coarse);
  return t;
}

CoefficientTable quadrature_table(const BlockSymbol& s, int max_lag) {
  std::vector<double> cuts = s.breakpoints();
  std::vector<std::pair<double, double>> arcs;
  if (cuts.empty()) {
    arcs.emplace_back(-kPi, kPi);
  } else {
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) arcs.emplace_back(cuts[i], cuts[i + 1]);
    arcs.emplace_back(cuts.back(), cuts.front() + 2.0 * kPi);
  }
  const std::size_t dim = 4 * (2 * static_cast<std::size_t>(max_lag) + 1);
  const VectorIntegrand integrand = [&](double k, C* out) {
    const Mat2 v = s(k);
    const C step = std::polar(1.0, -k);
    C phase = std::polar(1.0, k * max_lag);
    for (int x = -max_lag; x <= max_lag; ++x) {
      C* o = out + 4 * static_cast<std::size_t>(x + max_lag);
      for (int e = 0; e < 4; ++e) o[e] = v.data()[e] * phase;
      phase *= step;
    }
  };
  CoefficientTable t;
  t.max_lag = max_lag;
  t.method = "gauss_kronrod";
  std::vector<C> sum(dim, C{});
  for (const auto& [lo, hi] : arcs) {
    const double width = hi - lo;
    if (width <= 0.0) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(width * (max_lag + 1) / 3.0)));
    const auto r = gauss_kronrod_vector(integrand, dim, lo, hi, kCoefficientTolerance * width / (2.0 * kPi),
                                        panels, 30);
    if (!r.converged)
      throw Error(ErrorCode::NoConvergence,
                  fmt::format("coefficient quadrature on arc [{}, {}] stalled at error {:.3e}", lo, hi, r.error));
    t.delta += r.error;
    for (std::size_t d = 0; d < dim; ++d) sum[d] += r.value[d];
  }
  t.coeffs.resize(2 * static_cast<std::size_t>(max_lag) + 1);
  for (std::size_t i = 0; i < t.coeffs.size(); ++i)
    for (int e = 0; e < 4; ++e) t.coeffs[i].data()[e] = sum[4 * i + static_cast<std::size_t>(e)] / (2.0 * kPi);
  t.delta /= 2.0 * kPi;
  return t;
}

struct SymbolParts {
  std::shared_ptr<const RLSymbol> rl;
  std::vector<double> breakpoints;
  bool smooth;
};

SymbolParts symbol_parts(const ChainModel& model) {
  model.validate();
  auto rl = std::make_shared<const RLSymbol>(model);
  const bool smooth = std::holds_alternative<HalfConstant>(model.fermi) ||
                      (fermi_is_smooth(model.fermi) && model.temps.delta() == 0.0);
  return {rl, smooth ? std::vector<double>{} : rl->breakpoints(), smooth};
}

}  // namespace

BlockSymbol::BlockSymbol(Evaluator f, std::vector<double> breakpoints, bool smooth)
    : f_(std::move(f)), breakpoints_(std::move(breakpoints)), smooth_(smooth), cache_(std::make_shared<Cache>()) {
  std::sort(breakpoints_.begin(), breakpoints_.end());
}

std::shared_ptr<const CoefficientTable> BlockSymbol::precompute(int max_lag) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (!cache_->table || cache_->table->max_lag < max_lag)
    cache_->table = std::make_shared<const CoefficientTable>(fourier_coeffs(*this, max_lag, fft_size_));
  return cache_->table;
}

std::shared_ptr<const CoefficientTable> BlockSymbol::cached() const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->table;
}

CoefficientTable fourier_coeffs(const BlockSymbol& s, int max_lag, int fft_size) {
  if (max_lag < 0) throw Error(ErrorCode::MissingLags, "max_lag must be nonnegative");
  return s.smooth() ? fft_table(s, max_lag, fft_size) : quadrature_table(s, max_lag);
}

Mat2 a_tilde_from_r(const Mat2& r, const FermiFamilyPhase& phase) {
  const C lam = phase.lambda_power(phase.gamma + 1);
  const C lr = lam * lam * r(0, 1);
  const double sum = r(0, 0).real() + r(1, 1).real();
  const double diff = r(0, 0).real() - r(1, 1).real();
  const double sgn = phase.gamma % 2 == 0 ? 1.0 : -1.0;
  const C i(0.0, 1.0);
  Mat2 t;
  t(0, 0) = 0.5 * i * (1.0 - (sum + 2.0 * lr.real()));
  t(0, 1) = 0.5 * sgn * (diff - 2.0 * i * lr.imag());
  t(1, 0) = -0.5 * sgn * (diff + 2.0 * i * lr.imag());
  t(1, 1) = 0.5 * i * (1.0 - (sum - 2.0 * lr.real()));
  return t;
}

BlockSymbol build_r_symbol(const ChainModel& model) {
  auto p = symbol_parts(model);
  return BlockSymbol([rl = p.rl](double k) { return rl->matrix(k); }, p.breakpoints, p.smooth);
}

BlockSymbol build_a_tilde(const ChainModel& model) {
  auto p = symbol_parts(model);
  const FermiFamilyPhase phase = model.phase;
  return BlockSymbol([rl = p.rl, phase](double k) { return a_tilde_from_r(rl->matrix(k), phase); },
                     p.breakpoints, p.smooth);
}

BlockSymbol build_a(const ChainModel& model) {
  auto p = symbol_parts(model);
  const FermiFamilyPhase phase = model.phase;
  return BlockSymbol(
      [rl = p.rl, phase](double k) {
        return Mat2(0.5 * Mat2::Identity() + C(0.0, 1.0) * a_tilde_from_r(rl->matrix(k), phase));
      },
      p.breakpoints, p.smooth);
}

BlockSymbol build_b(const ChainModel& model) {
  auto p = symbol_parts(model);
  const FermiFamilyPhase phase = model.phase;
  return BlockSymbol(
      [rl = p.rl, phase](double k) { return Mat2(C(0.0, 2.0) * a_tilde_from_r(rl->matrix(k), phase)); },
      p.breakpoints, p.smooth);
}

ToeplitzSection build_section(const CoefficientTable& table, int n) {
  if (n < 1) throw Error(ErrorCode::MissingLags, "section order must be at least 1");
  if (table.max_lag < n - 1)
    throw Error(ErrorCode::MissingLags,
                fmt::format("section of order {} needs lag {}, cache holds {}", n, n - 1, table.max_lag));
  ToeplitzSection t;
  t.n = n;
  t.m.resize(2 * n, 2 * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) t.m.block<2, 2>(2 * p, 2 * q) = table.at(p - q);
  return t;
}

ToeplitzSection build_section(const BlockSymbol& s, int n) {
  const auto table = s.cached();
  if (!table) throw Error(ErrorCode::MissingLags, "no Fourier coefficients cached; call precompute first");
  return build_section(*table, n);
}

double SpectrumReport::max_residual() const {
  double r = 0.0;
  for (double x : residuals) r = std::max(r, x);
  return r;
}

SpectrumReport pair_spectrum(std::vector<double> raw) {
  std::sort(raw.begin(), raw.end());
  SpectrumReport rep;
  const std::size_t n = raw.size();
  rep.nu = static_cast<int>(n / 2);
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double top = raw[n - 1 - i];
    const double bottom = raw[i];
    const double residual = std::fabs(top + bottom);
    if (residual > 1e-6)
      throw Error(ErrorCode::PairingFailure,
                  fmt::format("eigenvalues {} and {} do not pair (residual {:.3e})", top, bottom, residual));
    rep.lambdas.push_back(std::max(0.0, 0.5 * (top - bottom)));
    rep.residuals.push_back(residual);
  }
  rep.raw = std::move(raw);
  return rep;
}

SpectrumReport paired_spectrum(const ToeplitzSection& t) {
  const Eigen::MatrixXcd h = 0.5 * (t.m + t.m.adjoint());
  const double defect = (t.m - t.m.adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, t.m.cwiseAbs().maxCoeff());
  SpectrumReport rep;
  std::vector<double> raw;
  const bool skew = h.real().cwiseAbs().maxCoeff() <= 1e-14 * scale;
  if (skew) {
    const Eigen::VectorXd ev = skew_hermitian_eigenvalues(h.imag());
    raw.assign(ev.data(), ev.data() + ev.size());
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    raw.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  }
  rep = pair_spectrum(std::move(raw));
  rep.hermiticity_defect = defect;
  rep.skew_path = skew;
  return rep;
}

SkewCoefficients skew_coefficients(const BlockSymbol& a_tilde, int max_lag) {
  const auto table = a_tilde.precompute(max_lag);
  SkewCoefficients c;
  c.max_lag = max_lag;
  c.method = table->method;
  c.delta = table->delta;
  c.coeffs.resize(2 * static_cast<std::size_t>(max_lag) + 1);
  for (int x = -max_lag; x <= max_lag; ++x) {
    const Mat2& m = table->at(x);
    c.coeffs[static_cast<std::size_t>(x + max_lag)] = m.real();
    c.symmetry_defect = std::max(c.symmetry_defect, m.imag().cwiseAbs().maxCoeff());
  }
  return c;
}

Eigen::MatrixXd skew_section(const SkewCoefficients& c, int n) {
  if (n < 1 || c.max_lag < n - 1)
    throw Error(ErrorCode::MissingLags,
                fmt::format("section of order {} needs lag {}, table holds {}", n, n - 1, c.max_lag));
  Eigen::MatrixXd m(2 * n, 2 * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) m.block<2, 2>(2 * p, 2 * q) = 2.0 * c.at(p - q);
  return m;
}

SpectrumReport skew_spectrum(const SkewCoefficients& c, int n) {
  const Eigen::MatrixXd m = skew_section(c, n);
  const double defect = (m + m.transpose()).cwiseAbs().maxCoeff();
  // The lower triangle is authoritative; skew_hermitian_eigenvalues never reads the rest.
  const Eigen::VectorXd ev = skew_hermitian_eigenvalues(m);
  SpectrumReport rep = pair_spectrum(std::vector<double>(ev.data(), ev.data() + ev.size()));
  rep.hermiticity_defect = defect;
  rep.skew_path = true;
  return rep;
}

}  // namespace entroscale
