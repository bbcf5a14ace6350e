#include <doctest.h>

#include <cmath>
#include <random>

#include "ratdyn/error.hpp"
#include "ratdyn/family.hpp"

using namespace ratdyn;

namespace {

const MapParams kExoticMap = MapParams::make(1.719727, 0.3142117, -3.121092);

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("eval on the sphere") {
  const MapParams sq = MapParams::quadratic(0.0);
  CHECK(std::abs(eval(sq, Complex(1, 1)).value() - Complex(0, 2)) < 1e-15);
  CHECK(std::abs(eval(kExoticMap, 2.0).value() - 2.0) < 1e-5);
  CHECK(eval(kExoticMap, kExoticMap.a).is_infinite());
  CHECK(eval(kExoticMap, Point::infinity()).is_infinite());
}

TEST_CASE("derivative") {
  CHECK(derivative(MapParams::quadratic(0.0), 3.0) == Complex(6.0));
  CHECK(std::abs(derivative(kExoticMap, 2.0)) < 1e-4);
  CHECK(kind_of([] { derivative(kExoticMap, kExoticMap.a); }) == ErrorKind::PoleDerivative);
  CHECK(kind_of([] { derivative(kExoticMap, Point::infinity()); }) == ErrorKind::PoleDerivative);
}

TEST_CASE("derivative matches central differences on random maps") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const MapParams p = MapParams::make({u(rng), u(rng)}, {u(rng) + 2.5, u(rng)}, {u(rng), u(rng)});
    const Complex z(u(rng), u(rng));
    if (std::abs(z - p.a) < 0.05) continue;
    const double h = 1e-6 * (1.0 + std::abs(z));
    const Complex fd = (eval_finite(p, z + h) - eval_finite(p, z - h)) / (2.0 * h);
    const Complex d = derivative(p, z);
    CHECK(std::abs(d - fd) / (1.0 + std::abs(d)) < 1e-5);
  }
}

TEST_CASE("from_kw") {
  CHECK(kind_of([] { from_kw({1.0, 1.0}); }) == ErrorKind::DegenerateFamily);

  const MapParams ex = from_kw({0.8598635, 2.0});
  CHECK(std::abs(ex.a - Complex(1.719727)) < 1e-5);
  CHECK(std::abs(ex.b - Complex(0.3142117)) < 1e-5);
  CHECK(std::abs(ex.c - Complex(-3.121092)) < 1e-5);

  const double w = 1.88053;
  const MapParams p = from_kw({0.85, w});
  CHECK(p.a.real() == doctest::Approx(1.5984505).epsilon(1e-9));
  CHECK(p.b.real() == doctest::Approx(2.0 * w * w * w * 0.0225).epsilon(1e-12));
  CHECK(p.c.real() == doctest::Approx(w * w * (1.7 - 3.0) + w).epsilon(1e-12));

  // w is a superattracting fixed point on the whole slice.
  for (double k : {0.76, 0.81, 0.85, 0.93}) {
    for (double ww : {0.3, 0.7, 1.4, 2.2}) {
      const MapParams q = from_kw({k, ww});
      CHECK(std::abs(eval_finite(q, ww) - ww) < 1e-10 * (1.0 + ww));
      CHECK(std::abs(derivative_finite(q, ww)) < 1e-10 * (1.0 + ww));
    }
  }
}

TEST_CASE("to_kw") {
  // Quadratic-formula oracle on 3w² − (2a+1)w + c = 0 for the exotic-map constants.
  const double a = 1.719727, c = -3.121092;
  const double disc = std::sqrt((2 * a + 1) * (2 * a + 1) - 12 * c);
  const double w_oracle = ((2 * a + 1) + disc) / 6.0;
  const KWParams q = to_kw(kExoticMap);
  CHECK(q.w.real() == doctest::Approx(w_oracle).epsilon(1e-12));
  CHECK(q.w.real() == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(q.k == doctest::Approx(0.8598635).epsilon(1e-4));

  CHECK(kind_of([] { to_kw(MapParams::make(1.0, 5.0, 0.0)); }) == ErrorKind::NotInFamilySlice);

  for (double k : {0.76, 0.8, 0.85, 0.8598635, 0.95}) {
    for (double w : {0.25, 0.63, 1.37, 1.88053, 3.0}) {
      const MapParams p = from_kw({k, w});
      const MapParams back = from_kw(to_kw(p));
      for (auto [x, y] : {std::pair{p.a, back.a}, {p.b, back.b}, {p.c, back.c}})
        CHECK(std::abs(x - y) < 1e-8 * (1.0 + std::abs(x)));
    }
  }
}

TEST_CASE("critical points on the slice") {
  const double k = 0.85, w = 1.88053;
  const MapParams p = from_kw({k, w});
  const CriticalData crit = critical_points(p);
  CHECK(crit.includes_infinity);
  CHECK(crit.finite_count() == 3);
  const double s = std::sqrt(4 * k - 3);
  const double u = w * (-0.5 + k - 0.5 * s), v = w * (-0.5 + k + 0.5 * s);
  CHECK(u == doctest::Approx(0.063512).epsilon(1e-5));
  CHECK(v == doctest::Approx(1.252861).epsilon(1e-6));
  for (double target : {u, v, w}) {
    double best = 1e9;
    for (const auto& cp : crit.finite_points) best = std::min(best, std::abs(cp.z - target));
    CHECK(best < 1e-8);
  }
  for (const auto& cp : crit.finite_points) CHECK(cp.residual < 1e-9);

  const MarkedMap m = mark(KWParams{k, w});
  CHECK(std::abs(m.u - u) < 1e-8);
  CHECK(std::abs(m.v - v) < 1e-8);
  CHECK(std::abs(m.w - w) < 1e-8);
}

TEST_CASE("critical points near a small residue") {
  // c = −4, a = 2, b = 1e−6: a free root near b/(2a²) and a pair a ∓ √(b/2a).
  const MapParams p = MapParams::make(2.0, 1e-6, -4.0);
  const CriticalData crit = critical_points(p);
  REQUIRE(crit.finite_points.size() == 3);
  const double b = 1e-6, a = 2.0;
  const double small = b / (2 * a * a), off = std::sqrt(b / (2 * a));
  CHECK(std::abs(crit.finite_points[0].z - small) < 0.05 * small);
  CHECK(std::abs(crit.finite_points[1].z - (a - off)) < 0.05 * off);
  CHECK(std::abs(crit.finite_points[2].z - (a + off)) < 0.05 * off);
  // Critical values of the pair: a² + c ∓ 2√(2a)√b = ∓4e−3.
  const double dv = 2 * std::sqrt(2 * a) * std::sqrt(b);
  CHECK(std::abs(eval_finite(p, crit.finite_points[1].z) - (-dv)) < 0.1 * dv);
  CHECK(std::abs(eval_finite(p, crit.finite_points[2].z) - dv) < 0.1 * dv);
}

TEST_CASE("fixed points") {
  const MapParams p = from_kw({0.85, 1.88053});
  const auto fps = fixed_points(p);
  REQUIRE(fps.size() == 4);
  CHECK(fps.back().point.is_infinite());
  CHECK(fps.back().cls == FixedPointClass::Superattracting);
  bool found_w = false;
  for (const auto& fp : fps) {
    CHECK(fp.residual < 1e-9);
    if (!fp.point.is_infinite() && std::abs(fp.point.value() - 1.88053) < 1e-8) {
      found_w = true;
      CHECK(fp.cls == FixedPointClass::Superattracting);
      CHECK(std::abs(fp.multiplier) < 1e-8);
    }
  }
  CHECK(found_w);

  const auto sq = fixed_points(MapParams::quadratic(0.0));
  REQUIRE(sq.size() == 3);
  CHECK(std::abs(sq[0].point.value()) < 1e-12);
  CHECK(std::abs(sq[1].point.value() - 1.0) < 1e-12);
}

TEST_CASE("multiplier classes") {
  CHECK(classify_multiplier(0.0) == FixedPointClass::Superattracting);
  CHECK(classify_multiplier(0.5) == FixedPointClass::Attracting);
  CHECK(classify_multiplier(Complex(0.0, 1.0 - 1e-9)) == FixedPointClass::Indifferent);
  CHECK(classify_multiplier(1.0 + 1e-7) == FixedPointClass::Repelling);
}

TEST_CASE("Newton detection") {
  CHECK(is_newton(from_kw({0.85, 0.7136146})).is_newton);
  CHECK(is_newton(from_kw({0.81, 0.6348589})).is_newton);
  CHECK(is_newton(from_kw({0.81, 0.63})).is_newton);
  const NewtonReport ex = is_newton(kExoticMap);
  CHECK_FALSE(ex.is_newton);
  CHECK(ex.fixed_points.size() == 4);
}

TEST_CASE("degenerate mode is explicit") {
  CHECK(kind_of([] { MapParams::make(1.0, 0.0, 0.0); }) == ErrorKind::DegenerateFamily);
  const MapParams q = MapParams::quadratic(-1.0);
  CHECK(q.degree() == 2);
  CHECK(critical_points(q).finite_count() == 1);
}

TEST_CASE("multi-pole model") {
  SUBCASE("one pole reduces to the single-pole family") {
    const MultiPoleParams m{-4.0, 1e-3, 0.1, 3};
    const CriticalData a = multipole_critical_points(m);
    const CriticalData b = critical_points(MapParams::make(m.poles()[0], m.b, m.c));
    REQUIRE(a.finite_points.size() == b.finite_points.size());
    for (std::size_t i = 0; i < a.finite_points.size(); ++i)
      CHECK(std::abs(a.finite_points[i].z - b.finite_points[i].z) < 1e-9);
  }
  SUBCASE("d = 4 pole-pair asymptotics") {
    const MultiPoleParams m{-4.0, 1e-8, 0.1, 4};
    CHECK(multipole_critical_points(m).finite_count() == 5);
    Complex free_cp;
    const auto pairs = multipole_pole_pairs(m, &free_cp);
    REQUIRE(pairs.size() == 2);
    for (const auto& pr : pairs) {
      const double off = std::abs(pr.predicted_offset);
      CHECK(std::abs(pr.minus_root - (pr.pole - pr.predicted_offset)) < 0.05 * off);
      CHECK(std::abs(pr.plus_root - (pr.pole + pr.predicted_offset)) < 0.05 * off);
      const Complex centre = pr.pole * pr.pole + m.c;
      const double dv = std::abs(pr.predicted_value_offset);
      CHECK(std::abs(pr.minus_value - (centre - pr.predicted_value_offset)) < 0.1 * dv);
      CHECK(std::abs(pr.plus_value - (centre + pr.predicted_value_offset)) < 0.1 * dv);
      CHECK(pr.minus_side * pr.plus_side < 0.0);
    }
    CHECK(std::abs(free_cp) < 1e-6);
  }
}
