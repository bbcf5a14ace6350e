#include <doctest.h>

#include <cmath>
#include <random>

#include "ratdyn/error.hpp"
#include "ratdyn/orbits.hpp"
#include "ratdyn/potential.hpp"

using namespace ratdyn;

namespace {

const MapParams kExoticMap = MapParams::make(1.719727, 0.3142117, -3.121092);

// Maps used for the functional-equation properties.
std::vector<MapParams> sample_maps() {
  return {kExoticMap, from_kw({0.85, 1.88053}), from_kw({0.81, 1.51545}), from_kw({0.81, 1.37}),
          MapParams::make(4.0, 0.5, -8.0), MapParams::quadratic(-1.0)};
}

template <class Pred>
std::vector<Complex> samples_where(const MapParams& p, int count, std::uint64_t seed, Pred pred,
                                   Complex centre = 0.0, double radius = 0.0) {
  std::mt19937_64 rng(seed);
  const double r = radius > 0.0 ? radius : escape_radius(p);
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<Complex> out;
  for (int guard = 0; guard < 200000 && static_cast<int>(out.size()) < count; ++guard) {
    const Complex z = centre + Complex(u(rng), u(rng));
    if (pred(z)) out.push_back(z);
  }
  return out;
}

}  // namespace

TEST_CASE("Green function basics") {
  const MapParams sq = MapParams::quadratic(0.0);
  CHECK(green_infinity(sq, 2.0).value == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  for (const MapParams& p : sample_maps()) {
    const Complex z = std::polar(1e6, 0.7);
    const PotentialValue g = green_infinity(p, z);
    CHECK(g.converged);
    CHECK(std::abs(g.value - std::log(1e6)) < 1e-5 * std::log(1e6));
  }
  const PotentialValue inside = green_infinity(sq, 0.5);
  CHECK_FALSE(inside.converged);
  CHECK(inside.value == 0.0);
  CHECK(std::isinf(green_infinity(kExoticMap, kExoticMap.a).value));
}

TEST_CASE("Green functional equation on escaping samples") {
  for (const MapParams& p : sample_maps()) {
    const auto pts = samples_where(p, 100, 1, [&](Complex z) {
      const PotentialValue g = green_infinity(p, z);
      return g.converged && std::isfinite(g.value) && g.value < 50.0;
    });
    REQUIRE(pts.size() == 100);
    for (Complex z : pts) {
      const double g = green_infinity(p, z).value;
      const double gf = green_infinity(p, eval_finite(p, z)).value;
      CHECK(std::abs(gf - 2.0 * g) < 1e-8 * (1.0 + g));
    }
  }
}

TEST_CASE("Koenigs series of a linear germ") {
  const auto phi = koenigs_series({0.5, 0.0, 0.0, 0.0}, 4);
  CHECK(phi[0] == Complex(1.0));
  for (std::size_t k = 1; k < phi.size(); ++k) CHECK(std::abs(phi[k]) == 0.0);
  // φ(h(ζ)) = λφ(ζ) for a quadratic germ, checked on the truncated series.
  const std::vector<Complex> germ{Complex(0.3, 0.2), 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const auto phi2 = koenigs_series(germ, 8);
  const Complex zeta = 1e-3;
  auto ev = [&](Complex x) {
    Complex acc = 0.0;
    for (auto it = phi2.rbegin(); it != phi2.rend(); ++it) acc = (acc + *it) * x;
    return acc;
  };
  const Complex hz = germ[0] * zeta + zeta * zeta;
  CHECK(std::abs(ev(hz) - germ[0] * ev(zeta)) < 1e-15 * std::abs(ev(zeta)));
}

TEST_CASE("Koenigs coordinate at attracting fixed points") {
  // (k=0.85, w≈0.3015): the fixed point near 0.30 has multiplier ~0.009, w is superattracting.
  const MapParams p = from_kw({0.85, 0.301});
  const auto fps = fixed_points(p);
  const FixedPointData* attracting = nullptr;
  const FixedPointData* super = nullptr;
  for (const auto& fp : fps) {
    if (fp.point.is_infinite()) continue;
    if (fp.cls == FixedPointClass::Attracting) attracting = &fp;
    if (fp.cls == FixedPointClass::Superattracting) super = &fp;
  }
  REQUIRE(attracting);
  REQUIRE(super);
  const Complex q = attracting->point.value();
  const Complex lambda = attracting->multiplier;

  // Near the fixed point Φ(z) ≈ z − q.
  const Complex near = q + Complex(1e-7, 1e-7);
  CHECK(std::abs(koenigs(p, *attracting, near).phi - (near - q)) < 1e-3 * std::abs(near - q));

  ClassifierConfig cc;
  const auto pts = samples_where(p, 100, 2, [&](Complex z) {
    const OrbitFate f = classify_orbit(p, z, cc);
    return f.kind == FateKind::ToCycle && std::abs(f.cycle.front() - q) < 1e-6;
  });
  REQUIRE(pts.size() == 100);
  for (Complex z : pts) {
    const KoenigsValue a = koenigs(p, *attracting, z);
    const KoenigsValue b = koenigs(p, *attracting, eval_finite(p, z));
    CHECK(a.converged);
    CHECK(a.g >= 0.0);
    CHECK(std::abs(b.g - std::norm(lambda) * a.g) < 1e-8 * (1.0 + a.g));
  }

  bool super_err = false, repel_err = false, basin_err = false;
  try {
    koenigs(p, *super, q);
  } catch (const Error& e) {
    super_err = e.kind() == ErrorKind::SuperattractingFixedPoint;
  }
  for (const auto& fp : fps) {
    if (fp.cls != FixedPointClass::Repelling) continue;
    try {
      koenigs(p, fp, q);
    } catch (const Error& e) {
      repel_err = e.kind() == ErrorKind::NotAttracting;
    }
  }
  try {
    koenigs(p, *attracting, Complex(50.0, 0.0));
  } catch (const Error& e) {
    basin_err = e.kind() == ErrorKind::NotInBasin;
  }
  CHECK(super_err);
  CHECK(repel_err);
  CHECK(basin_err);
}

TEST_CASE("Koenigs coordinate of the period-4 cycle") {
  const MarkedMap m = mark(KWParams{0.81, 1.37});
  OrbitFate cycle;
  for (Complex c : {m.u, m.v}) {
    const OrbitFate f = classify_orbit(m.params, c);
    if (f.kind == FateKind::ToCycle && f.period == 4) cycle = f;
  }
  REQUIRE(cycle.period == 4);
  const double mult = std::abs(cycle.multiplier);
  CHECK(mult > 0.0);
  CHECK(mult < 1.0);
  const BasinClassifier bc(m.params, m.w);
  const auto id = bc.match_cycle(cycle.cycle);
  REQUIRE(id);
  const auto pts = samples_where(m.params, 100, 3, [&](Complex z) {
    const PointFate f = bc.classify(z);
    return f.label == PointFate::Label::Cycle && f.cycle_id == *id;
  });
  REQUIRE(pts.size() == 100);
  for (Complex z : pts) {
    const KoenigsValue a = koenigs_cycle(m.params, cycle.cycle, z);
    Complex fz = z;
    for (int s = 0; s < 4; ++s) fz = eval_finite(m.params, fz);
    const KoenigsValue b = koenigs_cycle(m.params, cycle.cycle, fz);
    CHECK(a.converged);
    CHECK(std::abs(b.g - mult * mult * a.g) < 1e-8 * (1.0 + a.g));
  }
}

TEST_CASE("Boettcher potential at the superattracting fixed point") {
  const MapParams sq = MapParams::quadratic(0.0);
  for (double r : {0.1, 0.5, 0.9}) CHECK(boettcher_super(sq, 0.0, Complex(0.0, r)).value == doctest::Approx(std::log(r)));

  const std::vector<KWParams> slice{{0.8598635, 2.0}, {0.85, 1.88053}, {0.81, 1.51545}, {0.81, 1.37}, {0.85, 1.63045}};
  for (const auto& q : slice) {
    const MarkedMap m = mark(q);
    const BasinClassifier bc(m.params, m.w);
    const int wid = *bc.w_cycle_id();
    const auto pts = samples_where(m.params, 100, 4, [&](Complex z) {
      const PointFate f = bc.classify(z);
      return f.label == PointFate::Label::Cycle && f.cycle_id == wid && std::abs(z - m.w) > 1e-6;
    }, m.w, 0.25);
    REQUIRE(pts.size() == 100);
    for (Complex z : pts) {
      const double v = boettcher_super(m.params, m.w, z).value;
      const double vf = boettcher_super(m.params, m.w, eval_finite(m.params, z)).value;
      CHECK(v < 0.0);
      CHECK(vf < v);
      CHECK(std::abs(vf - 2.0 * v) < 1e-8 * (1.0 + std::abs(v)));
    }
  }
  bool threw = false;
  try {
    const MarkedMap m = mark(KWParams{0.85, 1.63045});
    boettcher_super(m.params, m.w, Complex(10.0, 0.0));
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::NotInBasin;
  }
  CHECK(threw);
  // The exotic map fixes w without a critical point there.
  bool rejected = false;
  try {
    boettcher_super(kExoticMap, mark(kExoticMap).w, Complex(10.0, 0.0));
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::Validation;
  }
  CHECK(rejected);
}

TEST_CASE("saddle spectrum") {
  const SaddleSpectrum s = saddle_levels(kExoticMap, 2);
  const double gu = green_infinity(kExoticMap, mark(kExoticMap).u).value;
  int depth0 = 0, depth1 = 0;
  for (const auto& e : s.saddles) {
    CHECK(e.level == doctest::Approx(gu / std::ldexp(1.0, e.depth)));
    CHECK(std::abs(green_infinity(kExoticMap, e.point).value - e.level) < 1e-8);
    depth0 += e.depth == 0;
    depth1 += e.depth == 1;
  }
  CHECK(depth0 == 1);
  CHECK(depth1 == 3);
  CHECK(s.attractor_preimages.front().point == kExoticMap.a);

  const SaddleSpectrum q = saddle_levels(MapParams::quadratic(-6.0), 3);
  const double g0 = green_infinity(MapParams::quadratic(-6.0), 0.0).value;
  CHECK(q.saddles.size() == 1 + 2 + 4 + 8);
  for (const auto& e : q.saddles) CHECK(e.level == doctest::Approx(g0 / std::ldexp(1.0, e.depth)));
  CHECK(saddle_levels(kExoticMap, 0).saddles.size() == 1);
  CHECK(saddle_levels(from_kw({0.85, 0.7136146}), 2).saddles.empty());
}

TEST_CASE("level curves") {
  SUBCASE("circle for z^2") {
    const LevelCurve c = trace_level(MapParams::quadratic(0.0), std::log(2.0), Window::square(0.0, 3.0), 200);
    REQUIRE(c.count() == 1);
    CHECK(c.components[0].closed);
    for (Complex z : c.components[0].points) CHECK(std::abs(std::abs(z) - 2.0) < 0.03);
  }
  SUBCASE("above every saddle of an escaping quadratic") {
    const MapParams q = MapParams::quadratic(-6.0);
    const double g0 = green_infinity(q, 0.0).value;
    CHECK(trace_level(q, 1.5 * g0, Window::square(0.0, 5.0), 256).count() == 1);
  }
  SUBCASE("passes near points on the level") {
    const double t = 0.8;
    const LevelCurve c = trace_level(kExoticMap, t, Window::square(0.0, 4.2), 256);
    const double cell = 8.4 / 256;
    // Points with G = t found by bisection along rays from far away.
    for (double ang : {0.3, 1.3, 2.9, 4.4}) {
      double lo = 0.0, hi = 4.0;
      const Complex dir = std::polar(1.0, ang);
      if (green_infinity(kExoticMap, lo * dir).value > t) continue;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (green_infinity(kExoticMap, mid * dir).value < t ? lo : hi) = mid;
      }
      CHECK(c.count_near(lo * dir, cell) >= 1);
    }
  }
  SUBCASE("level outside the window") {
    bool threw = false;
    try {
      trace_level(MapParams::quadratic(0.0), 50.0, Window::square(0.0, 2.0), 64);
    } catch (const Error& e) {
      threw = e.kind() == ErrorKind::LevelOutsideWindow;
    }
    CHECK(threw);
  }
}

TEST_CASE("figure-eight level") {
  const FigureEightResult ex = figure_eight_level(kExoticMap);
  CHECK(ex.t0 == doctest::Approx(green_infinity(kExoticMap, mark(kExoticMap).u).value));
  CHECK(ex.count_above == 1);
  CHECK(ex.count_below == 2);
  CHECK(ex.verified);

  const FigureEightResult quad = figure_eight_level(MapParams::quadratic(-6.0));
  CHECK(quad.verified);
  CHECK(quad.total_above == 1);
  CHECK(quad.total_below == 2);

  bool threw = false;
  try {
    figure_eight_level(from_kw({0.85, 0.7136146}));
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::NoEscapingCritical;
  }
  CHECK(threw);
  threw = false;
  try {
    figure_eight_level(MapParams::make(4.0, 0.5, -8.0));
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::MultipleEscaping;
  }
  CHECK(threw);
}
