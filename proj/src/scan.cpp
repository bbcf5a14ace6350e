#include "ratdyn/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ratdyn/error.hpp"
#include "ratdyn/raster.hpp"
#include "ratdyn/symbolic.hpp"

namespace ratdyn {

void ScanGrid::validate() const {
  if (nk < 2 || nw < 2) throw Error(ErrorKind::Validation, "nk and nw must be >= 2");
  if (!(k_min <= k_max) || !(w_min <= w_max) || !std::isfinite(k_min) || !std::isfinite(k_max) ||
      !std::isfinite(w_min) || !std::isfinite(w_max))
    throw Error(ErrorKind::Validation, "scan ranges must be finite with min <= max");
  if (jobs < 1) throw Error(ErrorKind::Validation, "jobs must be >= 1");
  classifier.validate();
}

int ScanCell::undecided_flags() const {
  return (color.u_undecided ? 1 : 0) | (color.v_undecided ? 2 : 0) | (degenerate ? 4 : 0);
}

namespace {

int period_of(const OrbitFate& f) { return f.kind == FateKind::ToCycle ? f.period : 0; }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

NineColorMap scan(const ScanGrid& grid) {
  grid.validate();
  NineColorMap out;
  out.grid = grid;
  out.cells.resize(static_cast<std::size_t>(grid.nk) * grid.nw);
  parallel_rows(grid.nw, grid.jobs, [&](int j) {
    for (int i = 0; i < grid.nk; ++i) {
      ScanCell& cell = out.cells[static_cast<std::size_t>(j) * grid.nk + i];
      cell.k = grid.k_at(i);
      cell.w = grid.w_at(j);
      try {
        const CriticalFates f = critical_fates(mark(KWParams{cell.k, cell.w}), grid.classifier);
        cell.color = f.color;
        cell.u_period = period_of(f.u);
        cell.v_period = period_of(f.v);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateFamily) throw;
        cell.degenerate = true;
      }
    }
  });
  long undecided = 0;
  for (const ScanCell& c : out.cells) undecided += (c.undecided_flags() & 3) != 0;
  out.undecided_fraction = static_cast<double>(undecided) / static_cast<double>(out.cells.size());
  return out;
}

std::string scan_csv(const NineColorMap& map) {
  std::string s = "k,w,u_fate,v_fate,color,u_period,v_period,undecided\n";
  for (const ScanCell& c : map.cells) {
    const std::string uf = c.degenerate ? "degenerate" : to_string(c.color.u);
    const std::string vf = c.degenerate ? "degenerate" : to_string(c.color.v);
    s += fmt(c.k) + "," + fmt(c.w) + "," + uf + "," + vf + "," + std::to_string(c.code()) + "," +
         std::to_string(c.u_period) + "," + std::to_string(c.v_period) + "," + std::to_string(c.undecided_flags()) +
         "\n";
  }
  return s;
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Period2V: return "period2-v";
    case EventKind::FixedU: return "fixed-u";
    case EventKind::FixedV: return "fixed-v";
    case EventKind::Transition: return "transition";
  }
  return "?";
}

bool EventResult::all_checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

namespace {

double real_residual(Complex r) { return std::isfinite(r.real()) ? r.real() : std::numeric_limits<double>::quiet_NaN(); }

Complex f_point(const MapParams& p, Complex z) {
  const Point y = eval(p, Point(z));
  return y.is_infinite() ? Complex(std::numeric_limits<double>::infinity()) : y.value();
}

}  // namespace

double residual_period2_v(double k, double w) {
  const MarkedMap m = mark(KWParams{k, w});
  return real_residual(f_point(m.params, f_point(m.params, m.v)) - m.v);
}

double residual_fixed_u(double k, double w) {
  const MarkedMap m = mark(KWParams{k, w});
  return real_residual(f_point(m.params, m.u) - m.u);
}

double residual_fixed_v(double k, double w) {
  const MarkedMap m = mark(KWParams{k, w});
  return real_residual(f_point(m.params, m.v) - m.v);
}

namespace {

EventResult solve_root(double k, double lo, double hi, EventKind kind, double (*F)(double, double)) {
  if (!(lo < hi)) throw Error(ErrorKind::Validation, "bracket must satisfy lo < hi");
  double flo = F(k, lo), fhi = F(k, hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi) || (flo > 0) == (fhi > 0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "residual has the same sign at w = %.10g (%.3g) and w = %.10g (%.3g)", lo, flo, hi,
                  fhi);
    throw Error(ErrorKind::NoSignChange, buf);
  }
  EventResult r;
  r.k = k;
  r.event = kind;
  int it = 0;
  double a = lo, b = hi, fa = flo, fb = fhi;
  // Bisection until the root is isolated to a narrow bracket, then secant.
  while (b - a > 1e-9 * (1.0 + std::abs(a)) && it < 200) {
    const double m = 0.5 * (a + b);
    const double fm = F(k, m);
    ++it;
    if (fm == 0.0) {
      a = b = m;
      fa = fb = 0.0;
      break;
    }
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  double x0 = a, x1 = b, f0 = fa, f1 = fb;
  double best = std::abs(fa) < std::abs(fb) ? a : b;
  double fbest = std::min(std::abs(fa), std::abs(fb));
  for (int s = 0; s < 50 && fbest >= kEventRootTolerance && x1 != x0 && f1 != f0; ++s) {
    double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(x2 >= lo && x2 <= hi)) x2 = 0.5 * (x0 + x1);
    const double f2 = F(k, x2);
    ++it;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    if (std::abs(f2) < fbest) {
      fbest = std::abs(f2);
      best = x2;
    }
  }
  r.w = best;
  r.residual = std::abs(F(k, best));  // fresh evaluation
  r.bracket_lo = a;
  r.bracket_hi = b;
  r.iterations = it;
  if (!(r.residual < kEventRootTolerance)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "residual %.3g at w = %.12g does not reach %.0e (pole in the bracket?)", r.residual,
                  r.w, kEventRootTolerance);
    throw Error(ErrorKind::SolverFailure, buf);
  }
  return r;
}

void add_newton_checks(EventResult& r) {
  const NewtonReport nr = is_newton(from_kw({r.k, r.w}));
  r.checks.emplace_back("is_newton", nr.is_newton);
  int super = 0;
  for (const FixedPointData& fp : nr.fixed_points) super += std::abs(fp.multiplier) < 1e-6;
  r.checks.emplace_back("three_superattracting_fixed_points", super == 3);
}

}  // namespace

EventResult solve_period2_v(double k, double lo, double hi, const ClassifierConfig& cfg) {
  EventResult r = solve_root(k, lo, hi, EventKind::Period2V, residual_period2_v);
  const MarkedMap m = mark(KWParams{k, r.w});
  r.checks.emplace_back("u_escapes", classify_orbit(m.params, m.u, cfg).kind == FateKind::ToInfinity);
  return r;
}

EventResult solve_fixed_u(double k, double lo, double hi) {
  EventResult r = solve_root(k, lo, hi, EventKind::FixedU, residual_fixed_u);
  add_newton_checks(r);
  return r;
}

EventResult solve_fixed_v(double k, double lo, double hi) {
  EventResult r = solve_root(k, lo, hi, EventKind::FixedV, residual_fixed_v);
  add_newton_checks(r);
  return r;
}

EventResult bisect_event(double k, const WPredicate& predicate, double lo, double hi, const std::string& name) {
  if (!(lo < hi)) throw Error(ErrorKind::Validation, "bracket must satisfy lo < hi");
  const bool plo = predicate(lo), phi = predicate(hi);
  if (plo == phi) throw Error(ErrorKind::SamePredicateValue, "predicate '" + name + "' has the same value at both ends");
  EventResult r;
  r.k = k;
  r.event = EventKind::Transition;
  r.predicate = name;
  double a = lo, b = hi;
  int it = 0;
  while (b - a >= kTransitionWidth && it < 100000) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    (predicate(m) == plo ? a : b) = m;
    ++it;
  }
  r.w = 0.5 * (a + b);
  r.bracket_lo = a;
  r.bracket_hi = b;
  r.residual = b - a;
  r.iterations = it;
  r.checks.emplace_back("bracket_below_width", b - a < kTransitionWidth);
  return r;
}

ClassifierConfig transition_classifier() {
  ClassifierConfig cfg;
  cfg.max_iter = 100000;
  return cfg;
}

namespace {

WPredicate bounded_predicate(double k, ClassifierConfig cfg, bool use_u) {
  return [k, cfg, use_u](double w) {
    const MarkedMap m = mark(KWParams{k, w});
    const OrbitFate f = classify_orbit(m.params, use_u ? m.u : m.v, cfg);
    if (f.kind == FateKind::ToInfinity) return false;
    if (f.kind == FateKind::Undecided) return true;
    return fate_class(f, m.w) != CriticalFate::W;
  };
}

}  // namespace

WPredicate predicate_v_bounded(double k, const ClassifierConfig& cfg) { return bounded_predicate(k, cfg, false); }
WPredicate predicate_u_other(double k, const ClassifierConfig& cfg) { return bounded_predicate(k, cfg, true); }

MilestoneCheck milestone_check(double k, double w, const ClassifierConfig& cfg) {
  const MarkedMap m = mark(KWParams{k, w});
  MilestoneCheck out;
  out.k = k;
  out.w = w;
  out.u = m.u.real();
  out.v = m.v.real();
  const Complex f2v = f_point(m.params, f_point(m.params, m.v));
  const Complex f4v = f_point(m.params, f_point(m.params, f2v));
  out.f2v = f2v.real();
  out.f4v = f4v.real();
  out.f2v_below_u = std::isfinite(out.f2v) && out.f2v < out.u;
  if (std::isfinite(f4v.real())) {
    const OrbitFate f = classify_orbit(m.params, f4v, cfg);
    out.f4v_attracted_to_w = fate_class(f, m.w) == CriticalFate::W && f.kind == FateKind::ToCycle;
    bool all = out.f4v_attracted_to_w;
    for (int s = 1; s < 200 && all; ++s) {
      const Complex z = f4v + (m.w - f4v) * (s / 200.0);
      const OrbitFate g = classify_orbit(m.params, z, cfg);
      all = g.kind == FateKind::ToCycle && fate_class(g, m.w) == CriticalFate::W;
    }
    out.f4v_in_immediate_basin = all;
  }
  return out;
}

std::vector<CantorCandidate> cantor_scan(const std::vector<double>& a_values, const std::vector<double>& b_values,
                                         const std::vector<double>& c_values, const ClassifierConfig& cfg) {
  std::vector<CantorCandidate> out;
  for (double a : a_values) {
    for (double b : b_values) {
      for (double c : c_values) {
        if (b == 0.0) continue;
        const MapParams p = MapParams::make(a, b, c);
        bool escaping = true;
        for (const CriticalPoint& cp : critical_points(p).finite_points)
          escaping = escaping && classify_orbit(p, cp.z, cfg).kind == FateKind::ToInfinity;
        if (!escaping) continue;
        std::vector<Complex> layer{eval_finite(p, 0.0)};
        for (int d = 0; d < 7; ++d) {
          std::vector<Complex> next;
          for (Complex y : layer)
            for (const Point& z : preimages(p, y).preimages)
              if (!z.is_infinite()) next.push_back(z.value());
          layer = std::move(next);
        }
        CantorCandidate cand{a, b, c, 0.0, std::numeric_limits<double>::infinity()};
        for (Complex z : layer) {
          const double g = std::abs(derivative_finite(p, z));
          cand.max_derivative = std::max(cand.max_derivative, g);
          cand.min_derivative = std::min(cand.min_derivative, g);
        }
        out.push_back(cand);
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CantorCandidate& x, const CantorCandidate& y) { return x.max_derivative < y.max_derivative; });
  return out;
}

}  // namespace ratdyn
