#include "entroscale/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "entroscale/error.hpp"

namespace entroscale {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTouchThreshold = 1e-14;  // on p^2
constexpr double kMergeDistance = 1e-9;

// Bisection on a bracket with f(lo) * f(hi) < 0, run to machine resolution.
template <class F>
double bisect(const F& f, double lo, double hi, double flo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double circular_distance(double x, double y) {
  const double d = std::fabs(x - y);
  return std::min(d, 2.0 * kPi - d);
}

}  // namespace

TrigPoly::TrigPoly(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
  if (cos_coeffs.empty()) cos_coeffs.push_back(0.0);
  const std::size_t m = std::max(cos_coeffs.size() - 1, sin_coeffs.size());
  cos_ = std::move(cos_coeffs);
  cos_.resize(m + 1, 0.0);
  sin_.assign(m + 1, 0.0);
  std::copy(sin_coeffs.begin(), sin_coeffs.end(), sin_.begin() + 1);
  trim();
}

TrigPoly TrigPoly::constant(double c) { return TrigPoly({c}, {}); }

TrigPoly TrigPoly::cosine(int n, double amplitude) {
  std::vector<double> a(static_cast<std::size_t>(n) + 1, 0.0);
  a[static_cast<std::size_t>(n)] = amplitude;
  return TrigPoly(std::move(a), {});
}

TrigPoly TrigPoly::sine(int n, double amplitude) {
  if (n == 0) return TrigPoly();
  std::vector<double> b(static_cast<std::size_t>(n), 0.0);
  b[static_cast<std::size_t>(n) - 1] = amplitude;
  return TrigPoly({0.0}, std::move(b));
}

double TrigPoly::a(int n) const {
  return (n >= 0 && n <= degree()) ? cos_[static_cast<std::size_t>(n)] : 0.0;
}

double TrigPoly::b(int n) const {
  return (n >= 1 && n <= degree()) ? sin_[static_cast<std::size_t>(n)] : 0.0;
}

void TrigPoly::trim() {
  while (cos_.size() > 1 && std::fabs(cos_.back()) < kTrimTolerance &&
         std::fabs(sin_.back()) < kTrimTolerance) {
    cos_.pop_back();
    sin_.pop_back();
  }
  sin_[0] = 0.0;
}

double TrigPoly::operator()(double k) const {
  double v = cos_[0];
  for (int n = 1; n <= degree(); ++n) {
    const double nk = n * k;
    v += cos_[static_cast<std::size_t>(n)] * std::cos(nk) +
         sin_[static_cast<std::size_t>(n)] * std::sin(nk);
  }
  return v;
}

double TrigPoly::max_abs_coeff() const {
  double m = 0.0;
  for (double c : cos_) m = std::max(m, std::fabs(c));
  for (double c : sin_) m = std::max(m, std::fabs(c));
  return m;
}

TrigPoly TrigPoly::operator-() const { return -1.0 * (*this); }

TrigPoly operator+(const TrigPoly& p, const TrigPoly& q) {
  const int m = std::max(p.degree(), q.degree());
  std::vector<double> a(static_cast<std::size_t>(m) + 1), b(static_cast<std::size_t>(m));
  for (int n = 0; n <= m; ++n) a[static_cast<std::size_t>(n)] = p.a(n) + q.a(n);
  for (int n = 1; n <= m; ++n) b[static_cast<std::size_t>(n) - 1] = p.b(n) + q.b(n);
  return TrigPoly(std::move(a), std::move(b));
}

TrigPoly operator-(const TrigPoly& p, const TrigPoly& q) { return p + (-1.0) * q; }

TrigPoly operator*(double s, const TrigPoly& p) {
  std::vector<double> a = p.cos_coeffs();
  std::vector<double> b(p.sin_coeffs().begin() + 1, p.sin_coeffs().end());
  for (double& x : a) x *= s;
  for (double& x : b) x *= s;
  return TrigPoly(std::move(a), std::move(b));
}

double eval(const TrigPoly& p, double k) { return p(k); }

// Product through the exponential form: c_n = (a_n - i b_n) / 2, c_{-n} = conj(c_n).
TrigPoly mul(const TrigPoly& p, const TrigPoly& q) {
  const int mp = p.degree();
  const int mq = q.degree();
  const int m = mp + mq;
  auto expo = [](const TrigPoly& t) {
    const int d = t.degree();
    std::vector<std::complex<double>> c(static_cast<std::size_t>(2 * d + 1));
    c[static_cast<std::size_t>(d)] = t.a(0);
    for (int n = 1; n <= d; ++n) {
      const std::complex<double> cn(0.5 * t.a(n), -0.5 * t.b(n));
      c[static_cast<std::size_t>(d + n)] = cn;
      c[static_cast<std::size_t>(d - n)] = std::conj(cn);
    }
    return c;
  };
  const auto cp = expo(p);
  const auto cq = expo(q);
  std::vector<std::complex<double>> c(static_cast<std::size_t>(2 * m + 1));
  for (int i = -mp; i <= mp; ++i)
    for (int j = -mq; j <= mq; ++j)
      c[static_cast<std::size_t>(m + i + j)] +=
          cp[static_cast<std::size_t>(mp + i)] * cq[static_cast<std::size_t>(mq + j)];
  std::vector<double> a(static_cast<std::size_t>(m) + 1), b(static_cast<std::size_t>(m));
  a[0] = c[static_cast<std::size_t>(m)].real();
  for (int n = 1; n <= m; ++n) {
    // Average the +n and -n entries so the result stays exactly real.
    const std::complex<double> cn =
        0.5 * (c[static_cast<std::size_t>(m + n)] + std::conj(c[static_cast<std::size_t>(m - n)]));
    a[static_cast<std::size_t>(n)] = 2.0 * cn.real();
    b[static_cast<std::size_t>(n) - 1] = -2.0 * cn.imag();
  }
  return TrigPoly(std::move(a), std::move(b));
}

TrigPoly derivative(const TrigPoly& p) {
  const int m = p.degree();
  std::vector<double> a(static_cast<std::size_t>(m) + 1, 0.0), b(static_cast<std::size_t>(m));
  for (int n = 1; n <= m; ++n) {
    a[static_cast<std::size_t>(n)] = n * p.b(n);
    b[static_cast<std::size_t>(n) - 1] = -n * p.a(n);
  }
  return TrigPoly(std::move(a), std::move(b));
}

bool is_zero(const TrigPoly& p, double tol) { return p.max_abs_coeff() < tol; }

double canonical_angle(double k) {
  double r = std::remainder(k, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  if (r > kPi) r -= 2.0 * kPi;
  return r;
}

std::vector<Root> roots(const TrigPoly& p) {
  if (is_zero(p, TrigPoly::kTrimTolerance))
    throw Error(ErrorCode::ZeroPolynomial, "roots() called on the zero polynomial");
  const int m = p.degree();
  if (m == 0) return {};

  const int n = 512 * (2 * m + 1);
  const double h = 2.0 * kPi / n;
  std::vector<double> k(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    k[static_cast<std::size_t>(j)] = -kPi + h * j;
    v[static_cast<std::size_t>(j)] = p(k[static_cast<std::size_t>(j)]);
  }
  auto at = [&](int j) { return v[static_cast<std::size_t>((j % n + n) % n)]; };
  auto left = [&](int j) { return k[static_cast<std::size_t>(j)] - h; };
  auto right = [&](int j) { return k[static_cast<std::size_t>(j)] + h; };

  std::vector<Root> found;
  const TrigPoly dp = derivative(p);

  for (int j = 0; j < n; ++j) {
    const double v0 = at(j);
    const double v1 = at(j + 1);
    if (v0 * v1 < 0.0) {
      found.push_back({canonical_angle(bisect(p, k[static_cast<std::size_t>(j)], right(j), v0)), false});
    } else if (v0 == 0.0 && at(j - 1) * v1 < 0.0) {
      found.push_back({canonical_angle(k[static_cast<std::size_t>(j)]), false});
    }
  }

  for (int j = 0; j < n; ++j) {
    const double vm = at(j - 1);
    const double v0 = at(j);
    const double vp = at(j + 1);
    if (std::fabs(v0) > std::fabs(vm) || std::fabs(v0) > std::fabs(vp)) continue;
    if (vm * v0 < 0.0 || v0 * vp < 0.0) continue;
    if (v0 == 0.0 && vm * vp < 0.0) continue;
    const double lo = left(j);
    const double hi = right(j);
    const auto sq = [&](double x) {
      const double y = p(x);
      return y * y;
    };
    auto [xmin, fmin] = boost::math::tools::brent_find_minima(sq, lo, hi, 52);
    if (v0 * v0 < fmin) {
      xmin = k[static_cast<std::size_t>(j)];
      fmin = v0 * v0;
    }
    if (fmin >= kTouchThreshold) continue;
    // Polish on the derivative when it brackets the extremum.
    const double dlo = dp(lo);
    const double dhi = dp(hi);
    if (dlo * dhi < 0.0) {
      const double xp = bisect(dp, lo, hi, dlo);
      if (sq(xp) <= std::max(fmin, kTouchThreshold)) xmin = xp;
    }
    found.push_back({canonical_angle(xmin), true});
  }

  std::sort(found.begin(), found.end(),
            [](const Root& x, const Root& y) { return x.angle < y.angle; });
  std::vector<Root> out;
  for (const Root& r : found) {
    if (!out.empty() && circular_distance(out.back().angle, r.angle) < kMergeDistance) {
      if (out.back().touch && !r.touch) out.back() = r;
      continue;
    }
    out.push_back(r);
  }
  if (out.size() > 1 && circular_distance(out.front().angle, out.back().angle) < kMergeDistance) {
    if (out.front().touch && !out.back().touch) out.front() = out.back();
    out.pop_back();
  }
  return out;
}

std::vector<double> root_angles(const TrigPoly& p) {
  std::vector<double> out;
  for (const Root& r : roots(p)) out.push_back(r.angle);
  return out;
}

double sup_norm(const TrigPoly& p) {
  if (p.degree() == 0) return std::fabs(p.a(0));
  double best = std::max(std::fabs(p(kPi)), std::fabs(p(0.0)));
  for (const Root& r : roots(derivative(p))) best = std::max(best, std::fabs(p(r.angle)));
  return best;
}

}  // namespace entroscale
