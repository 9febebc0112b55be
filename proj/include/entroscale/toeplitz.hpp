#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "entroscale/rlmover.hpp"

namespace entroscale {

using Mat2 = Eigen::Matrix2cd;

// Fourier coefficients c(x) = int dk/2pi s(k) e^{-ikx} for |x| <= max_lag.
struct CoefficientTable {
  int max_lag = -1;
  std::vector<Mat2> coeffs;  // index x + max_lag
  std::string method;        // "fft" or "gauss_kronrod"
  int fft_size = 0;          // final grid for the fft method
  double delta = 0.0;        // fft: max change under the last doubling; quadrature: error estimate

  const Mat2& at(int x) const { return coeffs[static_cast<std::size_t>(x + max_lag)]; }
};

// 2x2 matrix-valued function on the circle with lazily cached Fourier coefficients.
// Copies share the cache. Cache growth is serialized by a mutex.
class BlockSymbol {
 public:
  using Evaluator = std::function<Mat2(double)>;

  BlockSymbol(Evaluator f, std::vector<double> breakpoints, bool smooth);

  Mat2 operator()(double k) const { return f_(k); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  bool smooth() const { return smooth_; }

  // 0 selects max(2^14, 16 * nextpow2(max_lag)).
  void set_fft_size(int n) { fft_size_ = n; }
  int fft_size() const { return fft_size_; }

  // Ensures the cache covers max_lag and returns it.
  std::shared_ptr<const CoefficientTable> precompute(int max_lag) const;
  // Current cache; null when nothing has been computed.
  std::shared_ptr<const CoefficientTable> cached() const;

 private:
  struct Cache {
    std::mutex mutex;
    std::shared_ptr<const CoefficientTable> table;
  };

  Evaluator f_;
  std::vector<double> breakpoints_;
  bool smooth_;
  int fft_size_ = 0;
  std::shared_ptr<Cache> cache_;
};

// Smooth symbols: FFT on a half-step grid with a doubling certificate (NoConvergence
// if two doublings do not bring the change under 1e-9). Otherwise the circle is cut at
// the breakpoints and each arc is integrated with adaptive Gauss-Kronrod.
CoefficientTable fourier_coeffs(const BlockSymbol& s, int max_lag, int fft_size = 0);

BlockSymbol build_r_symbol(const ChainModel& model);
// Majorana correlation symbol a = 1/2 + i * a_tilde.
BlockSymbol build_a(const ChainModel& model);
BlockSymbol build_a_tilde(const ChainModel& model);
// b = 2i a_tilde = 2a - 1.
BlockSymbol build_b(const ChainModel& model);

// Pointwise a_tilde from a two-point matrix r and the family phase.
Mat2 a_tilde_from_r(const Mat2& r, const FermiFamilyPhase& phase);

struct ToeplitzSection {
  int n = 0;
  Eigen::MatrixXcd m;  // 2n x 2n, block (p, q) = c(p - q)
};

// Throws MissingLags unless the cache reaches lag n - 1.
ToeplitzSection build_section(const BlockSymbol& s, int n);
ToeplitzSection build_section(const CoefficientTable& table, int n);

struct SpectrumReport {
  int nu = 0;
  std::vector<double> lambdas;    // descending, each >= 0
  std::vector<double> residuals;  // |top + bottom| per pair
  std::vector<double> raw;        // ascending eigenvalues
  double hermiticity_defect = 0.0;
  bool skew_path = false;

  double max_residual() const;
};

// Pairs an ascending spectrum largest-with-most-negative. PairingFailure above 1e-6.
SpectrumReport pair_spectrum(std::vector<double> raw);
SpectrumReport paired_spectrum(const ToeplitzSection& t);

// Fourier coefficients of a real skew block symbol (a_tilde), projected onto their real
// part. symmetry_defect is the largest discarded imaginary component.
struct SkewCoefficients {
  int max_lag = -1;
  std::vector<Eigen::Matrix2d> coeffs;
  double symmetry_defect = 0.0;
  std::string method;
  double delta = 0.0;

  const Eigen::Matrix2d& at(int x) const { return coeffs[static_cast<std::size_t>(x + max_lag)]; }
};

SkewCoefficients skew_coefficients(const BlockSymbol& a_tilde, int max_lag);
// 2 T_{a_tilde, n}: real skew, and i times it is the b-section.
Eigen::MatrixXd skew_section(const SkewCoefficients& c, int n);
SpectrumReport skew_spectrum(const SkewCoefficients& c, int n);

}  // namespace entroscale
