#include "ratdyn/orbits.hpp"

#include <algorithm>
#include <cmath>

#include "ratdyn/error.hpp"

namespace ratdyn {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct IterateResult {
  Complex z;
  Complex derivative;
  bool ok;
};

// f^n(z) together with (f^n)'(z); ok = false if the orbit hits the pole.
IterateResult iterate_with_derivative(const MapParams& p, Complex z, int n) {
  Complex d = 1.0;
  for (int i = 0; i < n; ++i) {
    if (!p.degenerate && std::abs(z - p.a) < kPoleProximity) return {z, d, false};
    d *= derivative_finite(p, z);
    z = eval_finite(p, z);
    if (!finite(z)) return {z, d, false};
  }
  return {z, d, true};
}

}  // namespace

void ClassifierConfig::validate() const {
  if (max_iter < 1) throw Error(ErrorKind::Validation, "max_iter must be >= 1");
  if (!(cycle_tol > 0.0)) throw Error(ErrorKind::Validation, "cycle_tol must be positive");
  if (newton_steps < 1) throw Error(ErrorKind::Validation, "newton_steps must be >= 1");
  if (max_period < 1) throw Error(ErrorKind::Validation, "max_period must be >= 1");
  if (escape_radius_override && !(*escape_radius_override > 0.0))
    throw Error(ErrorKind::Validation, "escape radius override must be positive");
}

std::string to_string(FateKind kind) {
  switch (kind) {
    case FateKind::ToInfinity: return "infinity";
    case FateKind::ToCycle: return "cycle";
    case FateKind::Undecided: return "undecided";
  }
  return "unknown";
}

std::string to_string(CriticalFate fate) {
  switch (fate) {
    case CriticalFate::Inf: return "inf";
    case CriticalFate::W: return "w";
    case CriticalFate::Other: return "other";
  }
  return "unknown";
}

double escape_radius(const MapParams& p) {
  return std::max(std::abs(p.a) + 1.0, 2.0 + std::sqrt(1.0 + std::abs(p.b) + std::abs(p.c)));
}

double effective_escape_radius(const MapParams& p, const ClassifierConfig& cfg) {
  const double r = escape_radius(p);
  return cfg.escape_radius_override ? std::max(r, *cfg.escape_radius_override) : r;
}

CycleRefinement refine_cycle(const MapParams& p, Complex approx, int period, int newton_steps) {
  if (period < 1) throw Error(ErrorKind::Validation, "period must be >= 1");
  Complex z = approx;
  bool converged = false;
  for (int step = 0; step <= newton_steps; ++step) {
    const IterateResult it = iterate_with_derivative(p, z, period);
    if (!it.ok) throw Error(ErrorKind::NoConvergence, "orbit reached the pole during cycle refinement");
    const Complex g = it.z - z;
    if (std::abs(g) < 1e-12 * std::max(1.0, std::abs(z))) {
      converged = true;
      break;
    }
    if (step == newton_steps) break;
    const Complex slope = it.derivative - 1.0;
    if (slope == 0.0) throw Error(ErrorKind::NoConvergence, "parabolic slope in cycle refinement");
    z -= g / slope;
    if (!finite(z)) throw Error(ErrorKind::NoConvergence, "cycle refinement diverged");
  }
  if (!converged) throw Error(ErrorKind::NoConvergence, "cycle refinement did not reach |f^p(z)-z| < 1e-12");

  // Reduce to the minimal period.
  int minimal = period;
  for (int q = 1; q < period; ++q) {
    if (period % q != 0) continue;
    const IterateResult it = iterate_with_derivative(p, z, q);
    if (it.ok && std::abs(it.z - z) < 1e-9 * (1.0 + std::abs(z))) {
      minimal = q;
      break;
    }
  }
  CycleRefinement out;
  Complex x = z;
  out.multiplier = 1.0;
  for (int i = 0; i < minimal; ++i) {
    out.cycle.push_back(x);
    out.multiplier *= derivative_finite(p, x);
    x = eval_finite(p, x);
  }
  out.residual = std::abs(x - z);
  return out;
}

OrbitFate classify_orbit(const MapParams& p, Point z0, const ClassifierConfig& cfg) {
  cfg.validate();
  OrbitFate fate;
  if (z0.is_infinite()) {
    fate.kind = FateKind::ToInfinity;
    return fate;
  }
  const double radius = effective_escape_radius(p, cfg);
  const int window = cfg.max_period;
  std::vector<Complex> history(static_cast<std::size_t>(window));
  int cooldown = 0;
  Complex z = z0.value();
  for (int n = 0; n <= cfg.max_iter; ++n) {
    if (!finite(z) || std::abs(z) > radius) {
      fate.kind = FateKind::ToInfinity;
      fate.escape_time = n;
      fate.iterations = n;
      return fate;
    }
    if (!p.degenerate && std::abs(z - p.a) < kPoleProximity) {
      fate.kind = FateKind::ToInfinity;
      fate.escape_time = n + 1;
      fate.iterations = n + 1;
      return fate;
    }
    if (cooldown > 0) {
      --cooldown;
    } else {
      const int reach = std::min(n, window);
      for (int period = 1; period <= reach; ++period) {
        const Complex past = history[static_cast<std::size_t>((n - period) % window)];
        if (std::abs(z - past) < cfg.cycle_tol * (1.0 + std::abs(z))) {
          try {
            CycleRefinement r = refine_cycle(p, z, period, cfg.newton_steps);
            if (std::abs(r.multiplier) < 1.0) {
              fate.kind = FateKind::ToCycle;
              fate.period = static_cast<int>(r.cycle.size());
              fate.cycle = std::move(r.cycle);
              fate.multiplier = r.multiplier;
              fate.iterations = n;
              return fate;
            }
          } catch (const Error&) {
          }
          cooldown = window;
          break;
        }
      }
    }
    history[static_cast<std::size_t>(n % window)] = z;
    z = eval_finite(p, z);
  }
  fate.kind = FateKind::Undecided;
  fate.iterations = cfg.max_iter;
  return fate;
}

CriticalFate fate_class(const OrbitFate& fate, Complex w) {
  switch (fate.kind) {
    case FateKind::ToInfinity: return CriticalFate::Inf;
    case FateKind::ToCycle:
      if (fate.period == 1 && std::abs(fate.cycle.front() - w) < 1e-6) return CriticalFate::W;
      return CriticalFate::Other;
    case FateKind::Undecided: return CriticalFate::Other;
  }
  return CriticalFate::Other;
}

CriticalFates critical_fates(const MarkedMap& map, const ClassifierConfig& cfg) {
  CriticalFates out{map, {}, {}, {}, {}};
  out.u = classify_orbit(map.params, map.u, cfg);
  out.v = classify_orbit(map.params, map.v, cfg);
  out.w = classify_orbit(map.params, map.w, cfg);
  out.color.u = fate_class(out.u, map.w);
  out.color.v = fate_class(out.v, map.w);
  out.color.u_undecided = out.u.kind == FateKind::Undecided;
  out.color.v_undecided = out.v.kind == FateKind::Undecided;
  return out;
}

BasinClassifier::BasinClassifier(const MapParams& p, std::optional<Complex> w_anchor, const ClassifierConfig& cfg)
    : params_(p), cfg_(cfg), radius_(effective_escape_radius(p, cfg)) {
  cfg_.validate();
  auto add_cycle = [&](const std::vector<Complex>& pts, Complex multiplier) {
    if (match_cycle(pts)) return;
    KnownCycle kc;
    kc.id = static_cast<int>(cycles_.size());
    kc.points = pts;
    kc.multiplier = multiplier;
    kc.is_w = w_anchor && pts.size() == 1 && std::abs(pts.front() - *w_anchor) < kCaptureRadius;
    for (Complex q : pts) capture_points_.emplace_back(q, kc.id);
    cycles_.push_back(std::move(kc));
  };

  if (w_anchor) {
    const Complex fw = eval_finite(p, *w_anchor);
    if (std::abs(fw - *w_anchor) < 1e-8 * (1.0 + std::abs(*w_anchor)))
      add_cycle({*w_anchor}, derivative_finite(p, *w_anchor));
  }
  for (const auto& cp : critical_points(p).finite_points) {
    const OrbitFate fate = classify_orbit(p, cp.z, cfg_);
    if (fate.kind == FateKind::ToCycle) add_cycle(fate.cycle, fate.multiplier);
  }
}

std::optional<int> BasinClassifier::w_cycle_id() const {
  for (const auto& c : cycles_)
    if (c.is_w) return c.id;
  return std::nullopt;
}

std::optional<int> BasinClassifier::match_cycle(const std::vector<Complex>& cycle) const {
  for (const auto& known : cycles_) {
    if (known.points.size() != cycle.size()) continue;
    for (Complex q : known.points)
      if (std::abs(q - cycle.front()) < kCaptureRadius * (1.0 + std::abs(q))) return known.id;
  }
  return std::nullopt;
}

PointFate BasinClassifier::classify(Complex z) const {
  PointFate out;
  Complex d = 1.0;
  const MapParams& p = params_;
  for (int n = 0; n <= cfg_.max_iter; ++n) {
    const bool at_pole = !p.degenerate && std::abs(z - p.a) < kPoleProximity;
    if (at_pole || !finite(z) || std::abs(z) > radius_) {
      out.label = PointFate::Label::Infinity;
      out.iterations = n;
      // Keep going to a large radius so the distance estimate is accurate.
      for (int extra = 0; extra < 64 && !at_pole && finite(z) && std::abs(z) < 1e6; ++extra) {
        d *= derivative_finite(p, z);
        z = eval_finite(p, z);
      }
      const double r = std::abs(z);
      const double dz = std::abs(d);
      out.distance_estimate =
          (at_pole || !std::isfinite(r) || dz == 0.0) ? std::numeric_limits<double>::infinity() : r * std::log(r) / dz;
      return out;
    }
    for (const auto& [q, id] : capture_points_) {
      if (std::abs(z - q) < kCaptureRadius * (1.0 + std::abs(q))) {
        out.label = PointFate::Label::Cycle;
        out.cycle_id = id;
        out.iterations = n;
        return out;
      }
    }
    d *= derivative_finite(p, z);
    z = eval_finite(p, z);
  }
  // Not captured: run the full classifier from the current position.
  OrbitFate fate = classify_orbit(p, z, cfg_);
  out.iterations = cfg_.max_iter + fate.iterations;
  if (fate.kind == FateKind::ToInfinity) {
    out.label = PointFate::Label::Infinity;
    out.distance_estimate = 0.0;
  } else if (fate.kind == FateKind::ToCycle) {
    if (auto id = match_cycle(fate.cycle)) {
      out.label = PointFate::Label::Cycle;
      out.cycle_id = *id;
    } else {
      out.label = PointFate::Label::Undecided;
    }
  }
  out.fallback = std::move(fate);
  return out;
}

}  // namespace ratdyn
