#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ratdyn/error.hpp"
#include "ratdyn/symbolic.hpp"

using namespace ratdyn;

namespace {

const MapParams kExoticMap = MapParams::make(1.719727, 0.3142117, -3.121092);
const MapParams kCantor3 = MapParams::make(1.0, 1.0, -2.0);
const MapParams kCutMap = MapParams::make(4.0, 0.5, -8.0);

struct Interval {
  double lo, hi;
};

// Real Cantor construction for z² − 6: I₀ = [−β, β] with β the repelling
// fixed point, and the two inverse branches ±√(x + 6).
std::vector<Interval> cantor_intervals(const std::string& word) {
  const double beta = 0.5 + std::sqrt(0.25 + 6.0);
  Interval cur{-beta, beta};
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const double lo = std::sqrt(cur.lo + 6.0), hi = std::sqrt(cur.hi + 6.0);
    cur = *it == '0' ? Interval{-hi, -lo} : Interval{lo, hi};
  }
  return {cur};
}

}  // namespace

TEST_CASE("preimages") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const Complex z0(u(rng), u(rng));
    const Complex y = eval_finite(kExoticMap, z0);
    const InverseBranchResult r = preimages(kExoticMap, y);
    REQUIRE(r.preimages.size() == 3);
    double best = 1e9;
    for (const Point& z : r.preimages) best = std::min(best, std::abs(z.value() - z0));
    CHECK(best < 1e-8);
    for (double res : r.residuals) CHECK(res < 1e-9 * (1.0 + std::abs(y)));
  }
  // At a critical value the critical point is a double root.
  const MarkedMap m = mark(kExoticMap);
  const InverseBranchResult r = preimages(kExoticMap, eval_finite(kExoticMap, m.u));
  int near_u = 0;
  for (const Point& z : r.preimages) near_u += std::abs(z.value() - m.u) < 1e-6;
  CHECK(near_u == 2);
  // Discriminant of z³ + B z² + C z + D at y = f(u).
  const Complex y = eval_finite(kExoticMap, m.u);
  const Complex B = -kExoticMap.a, C = kExoticMap.c - y, D = kExoticMap.b - kExoticMap.a * (kExoticMap.c - y);
  const Complex disc = 18.0 * B * C * D - 4.0 * B * B * B * D + B * B * C * C - 4.0 * C * C * C - 27.0 * D * D;
  CHECK(std::abs(disc) < 1e-8);

  const InverseBranchResult inf = preimages(kExoticMap, Point::infinity());
  CHECK(inf.preimages.size() == 3);
  CHECK(inf.preimages[2] == Point(kExoticMap.a));
  CHECK(preimages(MapParams::quadratic(-6.0), 3.0).preimages.size() == 2);
}

TEST_CASE("trap for the Cantor quadratic") {
  const MapParams q = MapParams::quadratic(-6.0);
  TrapConfig cfg;
  cfg.resolution = 300;
  const TrapRegion trap = build_trap(q, cfg);
  CHECK(trap.degree == 2);
  CHECK(trap.level_low < trap.t_star);
  CHECK(trap.t_star < trap.level_high);
  CHECK_FALSE(trap.cut);
  CHECK(trap.centroids[0].real() < trap.centroids[1].real());

  ShiftConfig sc;
  sc.depth = 10;
  const CodingReport rep = verify_full_shift(q, trap, sc);
  CHECK(rep.exhaustive);
  CHECK(rep.full_shift);
  CHECK(rep.contraction_ratio < 0.95);
  CHECK(rep.injectivity_pass == rep.injectivity_total);
  for (const auto& row : rep.transition_matrix)
    for (bool x : row) CHECK(x);

  // Interval oracle: the point of word s lies in the interval of s, and the
  // cylinder diameters are bounded by the interval lengths.
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    std::string word;
    for (int k = 0; k < 8; ++k) word.push_back(static_cast<char>('0' + rng() % 2));
    Complex y = trap.base_point;
    for (auto it = word.rbegin(); it != word.rend(); ++it) y = *branch_preimage(q, trap, y, *it - '0');
    const Interval iv = cantor_intervals(word).front();
    // The base point sits at a pixel centre just off the axis; backward
    // contraction pulls its preimages towards the real line.
    CHECK(std::abs(y.imag()) < 1e-5);
    CHECK(y.real() >= iv.lo - 1e-5);
    CHECK(y.real() <= iv.hi + 1e-5);
    CHECK(code_point(q, trap, y, 8) == word);
  }
  for (int m = 1; m < 9; ++m) {
    double longest = 0.0;
    for (int w = 0; w < (1 << m); ++w) {
      std::string word;
      for (int k = m - 1; k >= 0; --k) word.push_back(static_cast<char>('0' + ((w >> k) & 1)));
      const Interval iv = cantor_intervals(word).front();
      longest = std::max(longest, iv.hi - iv.lo);
    }
    CHECK(rep.cylinder_diameters[m - 1] <= longest + 1e-12);
  }
}

TEST_CASE("trap for a degree-3 Cantor map") {
  TrapConfig cfg;
  cfg.resolution = 400;
  const TrapRegion trap = build_trap(kCantor3, cfg);
  CHECK(trap.degree == 3);
  CHECK_FALSE(trap.cut);

  ShiftConfig sc;
  sc.depth = 10;
  const CodingReport rep = verify_full_shift(kCantor3, trap, sc);
  CHECK(rep.full_shift);
  CHECK(rep.injectivity_pass == rep.injectivity_total);
  CHECK(rep.recheck_mismatches == 0);

  SUBCASE("depth 1 transitions match a direct preimage census") {
    ShiftConfig one;
    one.depth = 1;
    one.recheck_resolution = false;
    const CodingReport r1 = verify_full_shift(kCantor3, trap, one);
    std::vector<std::vector<bool>> direct(3, std::vector<bool>(3, false));
    for (const Point& z : preimages(kCantor3, trap.base_point).preimages)
      direct[*trap.symbol_at(z.value())][trap.base_symbol] = true;
    CHECK(r1.transition_matrix == direct);
  }
  SUBCASE("relabelling permutes the transition matrix") {
    TrapConfig perm = cfg;
    perm.label_order = {2, 0, 1};
    const TrapRegion t2 = build_trap(kCantor3, perm);
    ShiftConfig s2;
    s2.depth = 3;
    s2.recheck_resolution = false;
    const CodingReport a = verify_full_shift(kCantor3, trap, s2);
    const CodingReport b = verify_full_shift(kCantor3, t2, s2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(a.transition_matrix[i][j] == b.transition_matrix[perm.label_order[i]][perm.label_order[j]]);
    for (int s = 0; s < 3; ++s) CHECK(std::abs(trap.centroids[s] - t2.centroids[perm.label_order[s]]) < 1e-12);
  }
  SUBCASE("itineraries") {
    // Fixed point of branch j: constant itinerary.
    for (int j = 0; j < 3; ++j) {
      Complex y = trap.base_point;
      for (int k = 0; k < 60; ++k) y = *branch_preimage(kCantor3, trap, y, j);
      CHECK(code_point(kCantor3, trap, y, 6) == std::string(6, static_cast<char>('0' + j)));
    }
    // Shift equivariance on a deep backward orbit.
    Complex y = trap.base_point;
    const std::string word = "0120210";
    for (auto it = word.rbegin(); it != word.rend(); ++it) y = *branch_preimage(kCantor3, trap, y, *it - '0');
    const std::string code = code_point(kCantor3, trap, y, 7);
    CHECK(code == word);
    CHECK(code_point(kCantor3, trap, eval_finite(kCantor3, y), 6) == code.substr(1));
    // An escaping point leaves the trap.
    bool threw = false;
    try {
      code_point(kCantor3, trap, Complex(0.0, 3.0), 5);
    } catch (const Error& e) {
      threw = e.kind() == ErrorKind::LeftTrap;
    }
    CHECK(threw);
  }
}

TEST_CASE("trap with a real cut") {
  // {G < t*/2} has two components here until the ray from the pole is cut.
  TrapConfig cfg;
  cfg.resolution = 400;
  const TrapRegion trap = build_trap(kCutMap, cfg);
  REQUIRE(trap.cut);
  CHECK(trap.cut->start > kCutMap.a.real());
  CHECK(trap.cut->start < trap.cut->end);
  CHECK(trap.degree == 3);
  // The pole-side branch contracts by about 1/200 per step, so the depth is kept shallow.
  ShiftConfig sc;
  sc.depth = 5;
  const CodingReport rep = verify_full_shift(kCutMap, trap, sc);
  CHECK(rep.full_shift);
  CHECK(rep.injectivity_pass == rep.injectivity_total);
}

TEST_CASE("trap hypotheses") {
  bool threw = false;
  try {
    build_trap(kExoticMap);
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::HypothesisFailed;
  }
  CHECK(threw);
}
