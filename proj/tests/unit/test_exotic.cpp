#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "ratdyn/error.hpp"
#include "ratdyn/exotic.hpp"

using namespace ratdyn;

namespace {

const MapParams kExoticMap = MapParams::make(1.719727, 0.3142117, -3.121092);

const CensusEntry& entry(const ConnectivityReport& r, const std::string& name) {
  for (const auto& e : r.census)
    if (e.name == name) return e;
  FAIL("missing census entry " << name);
  return r.census.front();
}

const Evidence& evidence(const ExoticVerdict& v, const std::string& name) {
  for (const auto& e : v.evidence)
    if (e.name == name) return e;
  FAIL("missing evidence " << name);
  return v.evidence.front();
}

}  // namespace

TEST_CASE("basin mask of the unit-circle Julia set") {
  const MapParams sq = MapParams::quadratic(0.0);
  const BasinMask m = basin_mask(sq, Complex(0.0), Window{-2, -2, 2, 2}, 128);
  const double h = m.grid.dx() * std::sqrt(2.0);
  long wrong = 0;
  for (int j = 0; j < m.grid.height; ++j) {
    for (int i = 0; i < m.grid.width; ++i) {
      const double r = std::abs(m.grid.centre(i, j));
      const std::uint8_t l = m.labels.at(i, j);
      if (r > 1.0 + h) wrong += l != BasinMask::kInfinity;
      if (r < 1.0 - h) wrong += l != BasinMask::kW;
    }
  }
  CHECK(wrong == 0);
  CHECK_THROWS_AS(basin_mask(sq, Complex(0.0), Window{-2, -2, 2, 2}, 8), Error);
}

TEST_CASE("basin masks of slice maps") {
  SUBCASE("three classes at (0.85, 1.63045)") {
    // u escapes and v is attracted to w, so the third class is the Julia boundary.
    const MarkedMap m = mark(KWParams{0.85, 1.63045});
    const BasinMask mask = basin_mask(m.params, m.w, Window{-2, -2, 2, 2}, 256);
    const auto frac = mask.label_fractions();
    double other = 0.0;
    for (int c = BasinMask::kOtherBase; c < 255; ++c) other += frac[c];
    CHECK(frac[BasinMask::kInfinity] > 0.0);
    CHECK(frac[BasinMask::kW] > 0.0);
    CHECK(other == 0.0);
    const auto julia = julia_pixels(mask);
    CHECK(std::count(julia.data.begin(), julia.data.end(), 1) > 0);
  }
  SUBCASE("window [-i, 2+i] at (0.81, 1.51545)") {
    const MarkedMap m = mark(KWParams{0.81, 1.51545});
    const BasinMask mask = basin_mask(m.params, m.w, Window{0, -1, 2, 1}, 256);
    const auto frac = mask.label_fractions();
    CHECK(frac[BasinMask::kInfinity] > 0.0);
    CHECK(frac[BasinMask::kW] > 0.0);
    CHECK(*mask.label_at(m.w) == BasinMask::kW);
    CHECK(*mask.label_at(m.u) == BasinMask::kInfinity);
  }
}

TEST_CASE("mask labels agree with pointwise classification") {
  const MarkedMap m = mark(KWParams{0.85, 1.63045});
  const BasinMask mask = basin_mask(m.params, m.w, Window{-2, -2, 2, 2}, 200);
  std::mt19937_64 rng(5);
  int compared = 0;
  for (int k = 0; k < 1000; ++k) {
    const int i = static_cast<int>(rng() % mask.grid.width), j = static_cast<int>(rng() % mask.grid.height);
    const std::uint8_t l = mask.labels.at(i, j);
    if (l == BasinMask::kUndecided) continue;
    const OrbitFate f = classify_orbit(m.params, mask.grid.centre(i, j));
    if (f.kind == FateKind::Undecided) continue;
    ++compared;
    if (f.kind == FateKind::ToInfinity) {
      CHECK(l == BasinMask::kInfinity);
    } else if (fate_class(f, m.w) == CriticalFate::W) {
      CHECK(l == BasinMask::kW);
    } else {
      CHECK(l >= BasinMask::kOtherBase);
    }
  }
  CHECK(compared > 900);
}

TEST_CASE("masks do not depend on the worker count") {
  const MarkedMap m = mark(KWParams{0.81, 1.37});
  MaskConfig one, four;
  four.jobs = 4;
  const BasinMask a = basin_mask(m.params, m.w, Window{-2, -2, 2, 2}, 160, one);
  const BasinMask b = basin_mask(m.params, m.w, Window{-2, -2, 2, 2}, 160, four);
  CHECK(a.labels.data == b.labels.data);
  CHECK(a.thin.data == b.thin.data);
}

TEST_CASE("connectivity reports") {
  SUBCASE("basin of infinity split at (0.81, 1.4961)") {
    const MapParams p = from_kw({0.81, 1.4961});
    const MarkedMap m = mark(p);
    const BasinMask mask = basin_mask(p, m.w, Window::square(0.0, escape_radius(p)), 384);
    const ConnectivityReport r = connectivity(p, m.w, mask, named_criticals(p));
    CHECK(r.infinity_components > 1);
    CHECK_FALSE(r.pole_in_immediate_basin);
    CHECK(r.criticals_in_immediate_basin == std::vector<std::string>{"inf"});
    CHECK(r.resolution_stable);
    CHECK(r.monitors_ok());
  }
  SUBCASE("exotic map: one basin of infinity holding u") {
    const MarkedMap m = mark(kExoticMap);
    const BasinMask mask = basin_mask(kExoticMap, m.w, Window::square(0.0, escape_radius(kExoticMap)), 384);
    const ConnectivityReport r = connectivity(kExoticMap, m.w, mask, named_criticals(kExoticMap));
    CHECK(r.pole_in_immediate_basin);
    CHECK(entry(r, "u").region == "immediate_infinity");
    CHECK(entry(r, "w").region == "w");
    CHECK(entry(r, "v").region == "other");
    CHECK(r.complement_components >= 2);
    CHECK(r.monitors_ok());
  }
  SUBCASE("unit-circle case") {
    const MapParams sq = MapParams::quadratic(0.0);
    const BasinMask mask = basin_mask(sq, Complex(0.0), Window{-2, -2, 2, 2}, 128);
    const ConnectivityReport r = connectivity(sq, Complex(0.0), mask, named_criticals(sq));
    CHECK(r.infinity_components == 1);
    Raster<std::uint8_t> w(mask.labels.width, mask.labels.height, 0);
    for (std::size_t k = 0; k < w.data.size(); ++k) w.data[k] = mask.labels.data[k] == BasinMask::kW;
    CHECK(label_components(w, Connectivity::Four).count == 1);
    CHECK(r.complement_components == 1);
  }
  SUBCASE("census covers every critical point once") {
    const MapParams p = from_kw({0.81, 1.37});
    const BasinMask mask = basin_mask(p, mark(p).w, Window::square(0.0, escape_radius(p)), 200);
    const auto crit = named_criticals(p);
    const ConnectivityReport r = connectivity(p, mark(p).w, mask, crit);
    REQUIRE(r.census.size() == crit.size());
    const std::set<std::string> regions{"immediate_infinity", "infinity", "w", "other", "undecided", "outside"};
    for (std::size_t k = 0; k < crit.size(); ++k) {
      CHECK(r.census[k].name == crit[k].name);
      CHECK(regions.count(r.census[k].region) == 1);
    }
  }
  SUBCASE("window must cover the critical points") {
    const MarkedMap m = mark(kExoticMap);
    const BasinMask mask = basin_mask(kExoticMap, m.w, Window{-1, -1, 1, 1}, 64);
    CHECK_THROWS_AS(connectivity(kExoticMap, m.w, mask, named_criticals(kExoticMap)), Error);
  }
}

TEST_CASE("exotic verdicts") {
  ExoticConfig cfg;
  cfg.resolution = 384;
  SUBCASE("exotic map is exotic") {
    const ExoticVerdict v = exotic_verdict(kExoticMap, cfg);
    CHECK(v.is_exotic);
    CHECK_FALSE(v.caveats.empty());
    CHECK(evidence(v, "figure_eight_level").pass);
    CHECK(evidence(v, "two_distinct_critical_values").pass);
  }
  SUBCASE("(0.81, 1.51545) is exotic") { CHECK(exotic_verdict(from_kw({0.81, 1.51545}), cfg).is_exotic); }
  SUBCASE("Newton regime is not") {
    const ExoticVerdict v = exotic_verdict(from_kw({0.85, 0.7136114}), cfg);
    CHECK_FALSE(v.is_exotic);
    CHECK_FALSE(evidence(v, "u_escapes_v_w_bounded").pass);
  }
  SUBCASE("(0.81, 1.49): disconnected basin of infinity") {
    const ExoticVerdict v = exotic_verdict(from_kw({0.81, 1.49}), cfg);
    CHECK_FALSE(v.is_exotic);
    CHECK_FALSE(evidence(v, "infinity_basin_connected").pass);
    CHECK_FALSE(evidence(v, "two_criticals_in_infinity_basin").pass);
  }
  SUBCASE("verdict implies every mandatory check") {
    for (double w : {1.51545, 1.49, 0.63}) {
      const ExoticVerdict v = exotic_verdict(from_kw({0.81, w}), cfg);
      if (!v.is_exotic) continue;
      for (const auto& e : v.evidence) CHECK((!e.mandatory || e.pass));
    }
  }
  SUBCASE("degenerate map rejected") {
    bool threw = false;
    try {
      exotic_verdict(MapParams::quadratic(0.0), cfg);
    } catch (const Error& e) {
      threw = e.kind() == ErrorKind::DegenerateFamily;
    }
    CHECK(threw);
  }
}
