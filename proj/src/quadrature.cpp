#include "entroscale/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace entroscale {

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  int max_depth;
  bool converged = true;
  double error = 0.0;
};

double simpson_step(SimpsonState& s, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = s.f(lm);
  const double frm = s.f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (std::fabs(diff) <= 15.0 * tol || depth >= s.max_depth) {
    if (std::fabs(diff) > 15.0 * tol) s.converged = false;
    s.error += std::fabs(diff) / 15.0;
    return left + right + diff / 15.0;
  }
  return simpson_step(s, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_step(s, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double tol, int max_depth) {
  if (!(b > a)) return {};
  SimpsonState s{f, max_depth};
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  QuadResult r;
  r.value = simpson_step(s, a, b, fa, fm, fb, whole, tol, 0);
  r.error = s.error;
  r.converged = s.converged && std::isfinite(r.value);
  return r;
}

VectorQuadResult gauss_kronrod_vector(const VectorIntegrand& f, std::size_t dim, double a,
                                      double b, double tol, int initial_panels, int max_depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  using G = boost::math::quadrature::gauss<double, 10>;
  const auto& xk = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();

  VectorQuadResult res;
  res.value.assign(dim, {0.0, 0.0});
  if (!(b > a) || dim == 0) return res;

  // Kronrod node i > 0 of the positive half is a Gauss node when i is odd.
  std::vector<std::complex<double>> buf(dim), kron(dim), gauss(dim);
  struct Panel {
    double lo, hi;
    int depth;
  };
  std::vector<Panel> stack;
  const int panels = std::max(1, initial_panels);
  for (int p = panels - 1; p >= 0; --p)
    stack.push_back({a + (b - a) * p / panels, p + 1 == panels ? b : a + (b - a) * (p + 1) / panels, 0});

  const double total = b - a;
  while (!stack.empty()) {
    const Panel pan = stack.back();
    stack.pop_back();
    const double c = 0.5 * (pan.lo + pan.hi);
    const double h = 0.5 * (pan.hi - pan.lo);
    std::fill(kron.begin(), kron.end(), std::complex<double>{});
    std::fill(gauss.begin(), gauss.end(), std::complex<double>{});
    for (std::size_t i = 0; i < xk.size(); ++i) {
      const int signs = i == 0 ? 1 : 2;
      for (int s = 0; s < signs; ++s) {
        const double x = s == 0 ? c + h * xk[i] : c - h * xk[i];
        f(x, buf.data());
        for (std::size_t d = 0; d < dim; ++d) kron[d] += wk[i] * buf[d];
        if (i % 2 == 1) {
          const double w = wg[i / 2];
          for (std::size_t d = 0; d < dim; ++d) gauss[d] += w * buf[d];
        }
      }
    }
    double err = 0.0;
    bool finite = true;
    for (std::size_t d = 0; d < dim; ++d) {
      err = std::max(err, std::abs(kron[d] - gauss[d]) * h);
      finite = finite && std::isfinite(kron[d].real()) && std::isfinite(kron[d].imag());
    }
    if (!finite) {
      res.converged = false;
      return res;
    }
    const double local_tol = tol * (2.0 * h) / total;
    if (err <= local_tol || pan.depth >= max_depth) {
      if (err > local_tol) res.converged = false;
      res.error += err;
      for (std::size_t d = 0; d < dim; ++d) res.value[d] += h * kron[d];
    } else {
      stack.push_back({c, pan.hi, pan.depth + 1});
      stack.push_back({pan.lo, c, pan.depth + 1});
    }
  }
  return res;
}

}  // namespace entroscale
