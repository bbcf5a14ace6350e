#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ratdyn/error.hpp"
#include "ratdyn/scan.hpp"

using namespace ratdyn;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Validation;
}

ScanCell cell_at(double k, double w) {
  ScanGrid g;
  g.k_min = g.k_max = k;
  g.w_min = g.w_max = w;
  g.nk = g.nw = 2;
  return scan(g).cells.front();
}

}  // namespace

TEST_CASE("scan cells") {
  SUBCASE("period-2 v at (0.85, 1.88053)") {
    const ScanCell c = cell_at(0.85, 1.88053);
    CHECK(c.color.u == CriticalFate::Inf);
    CHECK(c.color.v == CriticalFate::Other);
    CHECK(c.v_period == 2);
    CHECK(c.code() == 2);
  }
  SUBCASE("Newton cell (0.85, 0.7136114): u is its own superattracting fixed point") {
    const ScanCell c = cell_at(0.85, 0.7136114);
    CHECK(c.color.u == CriticalFate::Other);
    CHECK(c.color.v == CriticalFate::Other);
    CHECK(c.u_period == 1);
    CHECK(c.v_period == 1);
  }
  SUBCASE("k = 1 is degenerate") {
    const ScanCell c = cell_at(1.0, 1.3);
    CHECK(c.degenerate);
    CHECK(c.code() == -1);
    CHECK((c.undecided_flags() & 4) == 4);
  }
}

TEST_CASE("scan CSV") {
  ScanGrid g;
  g.k_min = 0.80;
  g.k_max = 0.90;
  g.w_min = 0.2;
  g.w_max = 2.2;
  g.nk = 6;
  g.nw = 9;
  const NineColorMap m = scan(g);
  const std::string csv = scan_csv(m);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,w,u_fate,v_fate,color,u_period,v_period,undecided");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    int commas = 0;
    for (char ch : line) commas += ch == ',';
    CHECK(commas == 7);
  }
  CHECK(rows == g.nk * g.nw);
  for (const ScanCell& c : m.cells) {
    CHECK(c.code() >= 0);
    CHECK(c.code() <= 8);
  }
  CHECK(m.at(0, 0).k == doctest::Approx(0.80));
  CHECK(m.at(5, 8).w == doctest::Approx(2.2));

  g.jobs = 4;
  CHECK(scan_csv(scan(g)) == csv);

  g.nk = 1;
  CHECK(kind_of([&] { scan(g); }) == ErrorKind::Validation);
}

TEST_CASE("milestone roots at k = 0.85") {
  const EventResult p2 = solve_period2_v(0.85, 1.85, 1.92);
  CHECK(std::abs(p2.w - 1.88053) < 5e-4);
  CHECK(p2.residual < 1e-10);
  CHECK(std::abs(residual_period2_v(0.85, p2.w)) < 1e-10);
  CHECK(p2.all_checks_pass());

  const EventResult fu = solve_fixed_u(0.85, 0.70, 0.73);
  CHECK(std::abs(fu.w - 0.7136114) < 1e-3);
  CHECK(std::abs(residual_fixed_u(0.85, fu.w)) < 1e-10);
  CHECK(fu.all_checks_pass());

  const EventResult fv = solve_fixed_v(0.85, 0.28, 0.32);
  CHECK(std::abs(fv.w - 0.301) < 5e-3);
  CHECK(std::abs(residual_fixed_v(0.85, fv.w)) < 1e-10);
  CHECK(fv.all_checks_pass());

  CHECK(kind_of([] { solve_period2_v(0.85, 0.1, 0.2); }) == ErrorKind::NoSignChange);
}

TEST_CASE("exotic-map constants from the period-2 root") {
  const EventResult r = solve_period2_v(0.8598635, 1.95, 2.05);
  CHECK(std::abs(r.w - 2.0) < 1e-3);
  const MapParams p = from_kw({0.8598635, r.w});
  CHECK(std::abs(p.a - Complex(1.719727)) < 1e-3);
  CHECK(std::abs(p.b - Complex(0.3142117)) < 1e-3);
  CHECK(std::abs(p.c - Complex(-3.121092)) < 1e-3);
  const MapParams exact = from_kw({0.8598635, 2.0});
  CHECK(std::abs(exact.a - Complex(1.719727)) < 1e-4);
  CHECK(std::abs(exact.b - Complex(0.3142117)) < 1e-4);
  CHECK(std::abs(exact.c - Complex(-3.121092)) < 1e-4);
}

TEST_CASE("Newton root at k = 0.81 near w = 0.63") {
  const EventResult r = solve_fixed_u(0.81, 0.60, 0.66);
  CHECK(std::abs(r.w - 0.63) < 1e-2);
  CHECK(r.all_checks_pass());
}

TEST_CASE("boundary transitions at k = 0.85") {
  const EventResult leave = bisect_event(0.85, predicate_v_bounded(0.85), 1.85, 1.88, "v-bounded");
  CHECK(std::abs(leave.w - 1.86874) < 2e-3);
  CHECK(leave.bracket_hi - leave.bracket_lo < 1e-6);
  CHECK(predicate_v_bounded(0.85)(leave.bracket_lo) != predicate_v_bounded(0.85)(leave.bracket_hi));

  const EventResult onset = bisect_event(0.85, predicate_u_other(0.85), 1.50, 1.60, "u-other");
  CHECK(std::abs(onset.w - 1.541549) < 5e-3);

  CHECK(kind_of([] { bisect_event(0.85, [](double) { return true; }, 1.0, 2.0); }) == ErrorKind::SamePredicateValue);
}

TEST_CASE("bisection brackets nest and halve") {
  const double root = 0.3217;
  const EventResult r = bisect_event(0.85, [&](double w) { return w > root; }, 0.0, 1.0);
  CHECK(std::abs(r.w - root) < 1e-6);
  CHECK(r.iterations == static_cast<int>(std::ceil(std::log2(1.0 / 1e-6))));
}

TEST_CASE("qualitative milestone at (0.85, 1.63045)") {
  const MilestoneCheck m = milestone_check(0.85, 1.63045);
  CHECK(m.f4v_attracted_to_w);
  CHECK(m.f4v_in_immediate_basin);
  CHECK(m.f2v_below_u);
}

TEST_CASE("coarse scan for an all-escaping real map") {
  const auto cands = cantor_scan({1.0, 4.0}, {1.0, 0.5}, {-2.0, -8.0});
  REQUIRE_FALSE(cands.empty());
  for (std::size_t i = 1; i < cands.size(); ++i) CHECK(cands[i - 1].max_derivative <= cands[i].max_derivative);
  CHECK(cands.front().a == 1.0);
  CHECK(cands.front().b == 1.0);
  CHECK(cands.front().c == -2.0);
  for (const auto& c : cands) {
    const MapParams p = MapParams::make(c.a, c.b, c.c);
    for (const auto& cp : critical_points(p).finite_points) CHECK(classify_orbit(p, cp.z).kind == FateKind::ToInfinity);
  }
}
