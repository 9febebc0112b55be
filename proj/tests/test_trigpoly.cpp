#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "entroscale/error.hpp"
#include "entroscale/trigpoly.hpp"
#include "models.hpp"

using namespace entroscale;
using testing_models::kPi;

namespace {

TrigPoly random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(degree + 1)), b(static_cast<std::size_t>(degree));
  for (double& x : a) x = d(rng);
  for (double& x : b) x = d(rng);
  return TrigPoly(a, b);
}

bool has_root_near(const std::vector<double>& r, double x, double tol) {
  return std::any_of(r.begin(), r.end(), [&](double y) { return std::fabs(std::remainder(y - x, 2 * kPi)) < tol; });
}

}  // namespace

TEST_CASE("eval reproduces closed forms") {
  CHECK(eval(TrigPoly::cosine(1), 0.0) == 1.0);
  CHECK(std::fabs(eval(TrigPoly::sine(1, -2.0 / 50.0), kPi / 2) + 0.04) < 1e-15);
  // u_3 = 1/2 + cos k at cos k = -625/1248 is -1/1248.
  const TrigPoly u3({0.5, 1.0}, {});
  CHECK(std::fabs(eval(u3, std::acos(-625.0 / 1248.0)) + 1.0 / 1248.0) < 1e-15);
}

TEST_CASE("mul follows the product-to-sum identities") {
  const TrigPoly c = TrigPoly::cosine(1), s = TrigPoly::sine(1);
  const TrigPoly cc = mul(c, c);
  CHECK(cc.degree() == 2);
  CHECK(std::fabs(cc.a(0) - 0.5) < 1e-15);
  CHECK(std::fabs(cc.a(2) - 0.5) < 1e-15);
  CHECK(std::fabs(cc.b(2)) < 1e-15);
  const TrigPoly sc = mul(s, c);
  CHECK(std::fabs(sc.b(2) - 0.5) < 1e-15);
  CHECK(std::fabs(sc.a(0)) < 1e-15);

  const TrigPoly p({0.5, 1.0}, {});
  const TrigPoly sq = mul(p, p);
  CHECK(std::fabs(sq.a(0) - 0.75) < 1e-15);
  CHECK(std::fabs(sq.a(1) - 1.0) < 1e-15);
  CHECK(std::fabs(sq.a(2) - 0.5) < 1e-15);
  for (int i = 0; i < 64; ++i) {
    const double k = -kPi + 2 * kPi * i / 64;
    CHECK(std::fabs(sq(k) - (0.75 + std::cos(k) + 0.5 * std::cos(2 * k))) < 1e-14);
  }
}

TEST_CASE("derivative is termwise") {
  const TrigPoly d = derivative(TrigPoly::cosine(1));
  CHECK(std::fabs(d.b(1) + 1.0) < 1e-15);
  CHECK(d.a(1) == 0.0);
  CHECK(is_zero(derivative(TrigPoly::constant(3.0)), 1e-14));
  const TrigPoly e = derivative(TrigPoly::sine(2, -2.0 / 7.0));
  CHECK(std::fabs(e.a(2) + 4.0 / 7.0) < 1e-15);
}

TEST_CASE("is_zero and the ring identity u.u' = (u^2)'/2") {
  CHECK(is_zero(TrigPoly(), 1e-14));
  CHECK_FALSE(is_zero(TrigPoly::cosine(1, 1e-3), 1e-14));
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const TrigPoly u = random_poly(rng, 1 + t % 4);
    const TrigPoly diff = mul(u, derivative(u)) - 0.5 * derivative(mul(u, u));
    CHECK(is_zero(diff, 1e-12));
  }
}

TEST_CASE("roots of standard polynomials") {
  const auto r1 = root_angles(TrigPoly::cosine(1));
  REQUIRE(r1.size() == 2);
  CHECK(std::fabs(r1[0] + kPi / 2) < 1e-12);
  CHECK(std::fabs(r1[1] - kPi / 2) < 1e-12);

  const auto r2 = root_angles(TrigPoly({0.5, 1.0}, {}));
  REQUIRE(r2.size() == 2);
  CHECK(std::fabs(r2[0] + 2 * kPi / 3) < 1e-12);
  CHECK(std::fabs(r2[1] - 2 * kPi / 3) < 1e-12);

  // sin^2 k = 1/2 - cos(2k)/2 touches zero at 0 and pi.
  const auto r3 = roots(TrigPoly({0.5, 0.0, -0.5}, {}));
  REQUIRE(r3.size() == 2);
  CHECK(std::fabs(r3[0].angle) < 1e-7);
  CHECK(std::fabs(r3[1].angle - kPi) < 1e-7);
  CHECK(r3[0].touch);
  CHECK(r3[1].touch);

  CHECK_THROWS_AS(roots(TrigPoly()), Error);
}

TEST_CASE("property: ring homomorphism on random samples") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const TrigPoly p = random_poly(rng, 1 + t % 5), q = random_poly(rng, 2 + t % 3);
    const TrigPoly pq = mul(p, q);
    CHECK(pq.degree() <= p.degree() + q.degree());
    for (double k : testing_models::random_angles(128, 100 + t)) CHECK(std::fabs(pq(k) - p(k) * q(k)) < 1e-10);
  }
}

TEST_CASE("property: derivative agrees with central differences") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const TrigPoly p = random_poly(rng, 1 + t % 6);
    const TrigPoly d = derivative(p);
    const double h = 1e-6;
    for (double k : testing_models::random_angles(32, 200 + t)) {
      const double fd = (p(k + h) - p(k - h)) / (2 * h);
      CHECK(std::fabs(fd - d(k)) < 1e-6 * std::max(1.0, p.max_abs_coeff()));
    }
  }
}

TEST_CASE("property: root completeness for known factorizations") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(0.05, kPi - 0.05);
  for (int t = 0; t < 20; ++t) {
    // prod_j (cos k - cos a_j) with distinct a_j has roots exactly +-a_j.
    std::vector<double> a{d(rng), d(rng), d(rng)};
    std::sort(a.begin(), a.end());
    if (a[1] - a[0] < 1e-3 || a[2] - a[1] < 1e-3) continue;
    TrigPoly p = TrigPoly::constant(1.0);
    for (double x : a) p = mul(p, TrigPoly({-std::cos(x), 1.0}, {}));
    const auto r = root_angles(p);
    CHECK(r.size() == 6);
    for (double x : a) {
      CHECK(has_root_near(r, x, 1e-10));
      CHECK(has_root_near(r, -x, 1e-10));
    }
  }
}

TEST_CASE("canonical angles and sup norm") {
  CHECK(std::fabs(canonical_angle(3 * kPi) - kPi) < 1e-15);
  CHECK(std::fabs(canonical_angle(-kPi) - kPi) < 1e-15);
  CHECK(std::fabs(canonical_angle(0.25 + 4 * kPi) - 0.25) < 1e-14);
  CHECK(std::fabs(sup_norm(TrigPoly({0.5, 1.0}, {})) - 1.5) < 1e-12);
  CHECK(std::fabs(sup_norm(TrigPoly::sine(1, -0.04)) - 0.04) < 1e-12);
}
