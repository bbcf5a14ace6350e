#include "ratdyn/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ratdyn/error.hpp"
#include "ratdyn/orbits.hpp"
#include "ratdyn/symbolic.hpp"

namespace ratdyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

using Series = std::vector<Complex>;  // coefficients of ζ¹ … ζ^N

// Germ of f at q: f(q + ζ) − f(q).
Series family_germ(const MapParams& p, Complex q, int order) {
  Series s(static_cast<std::size_t>(order), 0.0);
  if (p.degenerate) {
    s[0] = 2.0 * q;
    if (order > 1) s[1] = 1.0;
    return s;
  }
  const Complex d = q - p.a;
  // b/(d + ζ) = (b/d)·Σ (−ζ/d)^k
  Complex term = p.b / d;
  for (int k = 1; k <= order; ++k) {
    term *= -1.0 / d;
    s[k - 1] = term;
  }
  s[0] += 2.0 * q;
  if (order > 1) s[1] += 1.0;
  return s;
}

Series multiply(const Series& x, const Series& y) {
  // Both start at ζ¹; the product starts at ζ², truncated at ζ^N.
  const std::size_t n = x.size();
  Series out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j + 2 <= n; ++j) out[i + j + 1] += x[i] * y[j];
  return out;
}

// outer ∘ inner, truncated.
Series compose(const Series& outer, const Series& inner) {
  const std::size_t n = inner.size();
  Series out(n, 0.0);
  Series power = inner;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) out[k] += outer[j] * power[k];
    if (j + 1 < n) power = multiply(power, inner);
  }
  return out;
}

Complex eval_series(const Series& s, Complex z) {
  Complex acc = 0.0;
  for (auto it = s.rbegin(); it != s.rend(); ++it) acc = (acc + *it) * z;
  return acc;
}

struct CycleModel {
  std::vector<Complex> points;
  std::vector<Series> phi;
  std::vector<double> radius;  // where the truncated series is trusted
  Complex lambda;
};

// Radius of convergence estimated from the coefficient growth |φ_k|^{-1/(k−1)}.
double series_radius(const Series& phi) {
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t k = phi.size() / 2; k < phi.size(); ++k)
    if (std::abs(phi[k]) > 0.0) r = std::min(r, std::pow(std::abs(phi[k]), -1.0 / static_cast<double>(k)));
  return r;
}

CycleModel build_cycle_model(const MapParams& p, const std::vector<Complex>& cycle, int order) {
  const std::size_t period = cycle.size();
  CycleModel m;
  m.points = cycle;
  for (std::size_t i = 0; i < period; ++i) {
    Series germ = family_germ(p, cycle[i], order);
    for (std::size_t s = 1; s < period; ++s) germ = compose(family_germ(p, cycle[(i + s) % period], order), germ);
    if (i == 0) m.lambda = germ[0];
    m.phi.push_back(koenigs_series(germ, order));
  }
  return m;
}

void check_attracting(Complex lambda) {
  const double m = std::abs(lambda);
  if (m < kMultiplierBoundary)
    throw Error(ErrorKind::SuperattractingFixedPoint, "multiplier is 0; use the Boettcher potential");
  if (m >= 1.0 - kMultiplierBoundary) throw Error(ErrorKind::NotAttracting, "multiplier modulus is not below 1");
}

KoenigsValue koenigs_on_model(const MapParams& p, const CycleModel& m, Complex z, const KoenigsConfig& cfg) {
  const int period = static_cast<int>(m.points.size());
  const double radius_escape = escape_radius(p);
  auto step = [&](Complex x) {
    for (int s = 0; s < period; ++s) {
      if (!p.degenerate && std::abs(x - p.a) < kPoleProximity)
        throw Error(ErrorKind::NotInBasin, "orbit reaches the pole");
      x = eval_finite(p, x);
      if (!finite(x) || std::abs(x) > radius_escape) throw Error(ErrorKind::NotInBasin, "orbit escapes to infinity");
    }
    return x;
  };
  auto nearest = [&](Complex x) -> int {
    for (int i = 0; i < period; ++i)
      if (std::abs(x - m.points[i]) < m.radius[i]) return i;
    return -1;
  };

  KoenigsValue out;
  Complex lambda_pow = 1.0;  // λ^n
  bool entered = false;
  for (int n = 0; n <= cfg.max_iter; ++n) {
    const int idx = nearest(z);
    if (idx >= 0) {
      const Complex zeta = z - m.points[idx];
      const Complex e1 = eval_series(m.phi[idx], zeta) / lambda_pow;
      if (!entered || zeta == 0.0) {
        out.phi = e1;
        out.g = std::norm(e1);
        out.iterations = n;
        out.cycle_index = idx;
      }
      if (zeta == 0.0) {
        out.converged = true;
        return out;
      }
      entered = true;
      const Complex z2 = step(z);
      if (nearest(z2) == idx) {
        const Complex e2 = eval_series(m.phi[idx], z2 - m.points[idx]) / (lambda_pow * m.lambda);
        // Rounding in z2 − q is amplified by λ^{-(n+1)}.
        const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(m.points[idx])) /
                                std::abs(lambda_pow * m.lambda);
        if (std::abs(e1 - e2) <= cfg.tolerance * std::abs(e2) + rounding) {
          out.converged = true;
          return out;
        }
      }
      // The estimate only degrades from here on.
      if (std::abs(zeta) < 1e-3 * m.radius[idx]) return out;
    }
    z = step(z);
    lambda_pow *= m.lambda;
  }
  if (entered) return out;
  throw Error(ErrorKind::NotInBasin, "orbit did not enter the linearisation disc");
}

}  // namespace

PotentialValue green_infinity(const MapParams& p, Complex z, const GreenConfig& cfg) {
  PotentialValue out;
  for (int n = 0; n <= cfg.max_iter; ++n) {
    if (!finite(z)) {
      out.value = kInf;
      out.iterations_used = n;
      out.converged = true;
      return out;
    }
    const double r = std::abs(z);
    if (r > cfg.bailout) {
      const Complex z2 = z * z;
      Complex eps = p.c / z2;
      if (!p.degenerate) eps += p.b / (z2 * (z - p.a));
      out.value = std::ldexp(std::log(r) + 0.5 * std::log(std::abs(1.0 + eps)), -n);
      out.iterations_used = n;
      out.converged = true;
      return out;
    }
    if (!p.degenerate && z == p.a) {
      out.value = kInf;
      out.iterations_used = n;
      out.converged = true;
      return out;
    }
    z = eval_finite(p, z);
  }
  out.value = 0.0;
  out.iterations_used = cfg.max_iter;
  out.converged = false;
  return out;
}

std::vector<Complex> koenigs_series(const std::vector<Complex>& germ, int order) {
  if (germ.empty()) throw Error(ErrorKind::Validation, "empty germ");
  const int n = std::min<int>(order, static_cast<int>(germ.size()));
  Series h(germ.begin(), germ.begin() + n);
  const Complex lambda = h[0];
  // powers[j−1] = h^j
  std::vector<Series> powers{h};
  for (int j = 2; j < n; ++j) powers.push_back(multiply(powers.back(), h));
  Series phi(static_cast<std::size_t>(n), 0.0);
  phi[0] = 1.0;
  Complex lambda_k = lambda;
  for (int k = 2; k <= n; ++k) {
    lambda_k *= lambda;
    Complex acc = 0.0;
    for (int j = 1; j < k; ++j) acc += phi[j - 1] * powers[j - 1][k - 1];
    phi[k - 1] = acc / (lambda - lambda_k);
  }
  return phi;
}

KoenigsValue koenigs(const MapParams& p, const FixedPointData& fp, Complex z, const KoenigsConfig& cfg) {
  if (fp.point.is_infinite())
    throw Error(ErrorKind::SuperattractingFixedPoint, "infinity is superattracting; use green_infinity");
  check_attracting(fp.multiplier);
  return koenigs_cycle(p, {fp.point.value()}, z, cfg);
}

KoenigsValue koenigs_cycle(const MapParams& p, const std::vector<Complex>& cycle, Complex z,
                           const KoenigsConfig& cfg) {
  if (cycle.empty()) throw Error(ErrorKind::Validation, "empty cycle");
  if (cfg.series_order < 1 || cfg.max_iter < 1 || !(cfg.local_radius > 0.0))
    throw Error(ErrorKind::Validation, "invalid Koenigs configuration");
  Complex lambda = 1.0;
  for (Complex q : cycle) lambda *= derivative_finite(p, q);
  check_attracting(lambda);
  CycleModel m = build_cycle_model(p, cycle, cfg.series_order);
  for (std::size_t i = 0; i < cycle.size(); ++i)
    m.radius.push_back(std::min(cfg.local_radius * (1.0 + std::abs(cycle[i])), 0.1 * series_radius(m.phi[i])));
  return koenigs_on_model(p, m, z, cfg);
}

PotentialValue boettcher_super(const MapParams& p, Complex q, Complex z, int max_iter) {
  const double scale = 1.0 + std::abs(q);
  if (std::abs(eval_finite(p, q) - q) > 1e-8 * scale || std::abs(derivative_finite(p, q)) > 1e-8 * scale)
    throw Error(ErrorKind::Validation, "point is not a superattracting fixed point");
  const Complex g2 = p.degenerate ? Complex(1.0) : 1.0 + p.b / std::pow(q - p.a, 3);
  if (std::abs(g2) < 1e-12) throw Error(ErrorKind::Validation, "local degree above 2");
  const Complex pole_offset = p.degenerate ? Complex(0.0) : q - p.a;
  const double radius_escape = escape_radius(p);
  const double switch_radius = 1e-4 * scale;

  PotentialValue out;
  Complex zeta = z - q;
  int n = 0;
  for (; n <= max_iter && std::abs(zeta) >= switch_radius; ++n) {
    if (!p.degenerate && std::abs(z - p.a) < kPoleProximity) throw Error(ErrorKind::NotInBasin, "orbit reaches the pole");
    z = eval_finite(p, z);
    if (!finite(z) || std::abs(z) > radius_escape) throw Error(ErrorKind::NotInBasin, "orbit escapes to infinity");
    zeta = z - q;
  }
  if (n > max_iter) throw Error(ErrorKind::NotInBasin, "orbit does not approach the fixed point");
  // Local coordinate: ζ ↦ ζ²·(1 + b/((q − a)²(q − a + ζ))), exact for the family.
  while (zeta != 0.0 && std::abs(zeta) > 1e-100) {
    const Complex factor = p.degenerate ? Complex(1.0)
                                        : 1.0 + p.b / (pole_offset * pole_offset * (pole_offset + zeta));
    zeta = zeta * zeta * factor;
    ++n;
  }
  out.iterations_used = n;
  out.converged = true;
  out.value = zeta == 0.0 ? -kInf : std::ldexp(std::log(std::abs(zeta)) + std::log(std::abs(g2)), -n);
  return out;
}

SaddleSpectrum saddle_levels(const MapParams& p, int depth) {
  if (depth < 0 || depth > 8) throw Error(ErrorKind::Validation, "depth must be in [0, 8]");
  SaddleSpectrum out;
  for (const auto& cp : critical_points(p).finite_points) {
    const PotentialValue g = green_infinity(p, cp.z);
    if (!g.converged || !std::isfinite(g.value)) continue;
    std::vector<Complex> layer{cp.z};
    for (int j = 0; j <= depth; ++j) {
      for (Complex x : layer) out.saddles.push_back(SaddleEntry{x, cp.label, j, std::ldexp(g.value, -j)});
      if (j == depth) break;
      std::vector<Complex> next;
      for (Complex x : layer)
        for (const Point& y : preimages(p, x).preimages)
          if (!y.is_infinite()) next.push_back(y.value());
      layer = std::move(next);
    }
  }
  if (!p.degenerate) {
    std::vector<Complex> layer{p.a};
    for (int j = 1; j <= std::max(depth, 1); ++j) {
      for (Complex x : layer) out.attractor_preimages.push_back(SaddleEntry{x, "inf", j, kInf});
      if (j == std::max(depth, 1)) break;
      std::vector<Complex> next;
      for (Complex x : layer)
        for (const Point& y : preimages(p, x).preimages)
          if (!y.is_infinite()) next.push_back(y.value());
      layer = std::move(next);
    }
  }
  return out;
}

int LevelCurve::count_near(Complex z, double radius) const {
  int n = 0;
  for (const auto& pl : components) {
    for (Complex x : pl.points) {
      if (std::abs(x - z) <= radius) {
        ++n;
        break;
      }
    }
  }
  return n;
}

Raster<float> green_raster(const MapParams& p, const Grid& grid, int jobs, const GreenConfig& cfg) {
  grid.validate();
  Raster<float> out(grid.width, grid.height, 0.0f);
  parallel_rows(grid.height, jobs, [&](int j) {
    for (int i = 0; i < grid.width; ++i) {
      const PotentialValue g = green_infinity(p, grid.centre(i, j), cfg);
      double v = g.converged ? g.value : 0.0;
      if (!(v < 1e6)) v = 1e6;
      out.at(i, j) = static_cast<float>(v);
    }
  });
  return out;
}

LevelCurve extract_level(const Raster<float>& samples, const Grid& grid, double t,
                         const std::function<double(Complex)>& centre_value) {
  LevelCurve out;
  out.level = t;
  out.grid = grid;
  out.grid_resolution = grid.width;
  const int w = samples.width, h = samples.height;

  auto node = [&](int i, int j) { return grid.centre(i, j); };
  auto above = [&](int i, int j) { return static_cast<double>(samples.at(i, j)) > t; };
  // Edge ids: horizontal (i,j)-(i+1,j) → 2(jw + i); vertical (i,j)-(i,j+1) → 2(jw + i) + 1.
  auto hid = [&](int i, int j) { return 2L * (static_cast<long>(j) * w + i); };
  auto vid = [&](int i, int j) { return 2L * (static_cast<long>(j) * w + i) + 1; };
  auto crossing = [&](int i0, int j0, int i1, int j1) {
    const double v0 = samples.at(i0, j0), v1 = samples.at(i1, j1);
    const double s = (t - v0) / (v1 - v0);
    return node(i0, j0) + std::clamp(s, 0.0, 1.0) * (node(i1, j1) - node(i0, j0));
  };

  struct Segment {
    long e0, e1;
  };
  std::vector<Segment> segments;
  std::vector<Complex> edge_point(static_cast<std::size_t>(2L * w * h));
  std::vector<std::array<int, 2>> edge_segs(static_cast<std::size_t>(2L * w * h), {-1, -1});
  auto add = [&](long a, long b) {
    const int id = static_cast<int>(segments.size());
    segments.push_back({a, b});
    for (long e : {a, b}) {
      auto& slot = edge_segs[static_cast<std::size_t>(e)];
      if (slot[0] < 0) slot[0] = id;
      else slot[1] = id;
    }
  };

  for (int j = 0; j + 1 < h; ++j) {
    for (int i = 0; i + 1 < w; ++i) {
      const bool tl = above(i, j), tr = above(i + 1, j), br = above(i + 1, j + 1), bl = above(i, j + 1);
      const long top = hid(i, j), bottom = hid(i, j + 1), left = vid(i, j), right = vid(i + 1, j);
      std::vector<long> edges;
      if (tl != tr) {
        edge_point[top] = crossing(i, j, i + 1, j);
        edges.push_back(top);
      }
      if (tr != br) {
        edge_point[right] = crossing(i + 1, j, i + 1, j + 1);
        edges.push_back(right);
      }
      if (br != bl) {
        edge_point[bottom] = crossing(i, j + 1, i + 1, j + 1);
        edges.push_back(bottom);
      }
      if (bl != tl) {
        edge_point[left] = crossing(i, j, i, j + 1);
        edges.push_back(left);
      }
      if (edges.size() == 2) {
        add(edges[0], edges[1]);
      } else if (edges.size() == 4) {
        const Complex c = 0.5 * (node(i, j) + node(i + 1, j + 1));
        const bool centre_above = centre_value(c) > t;
        if (centre_above == tl) {
          add(top, right);
          add(bottom, left);
        } else {
          add(top, left);
          add(right, bottom);
        }
      }
    }
  }
  if (segments.empty()) return out;

  std::vector<bool> used(segments.size(), false);
  auto other_edge = [&](int s, long e) { return segments[s].e0 == e ? segments[s].e1 : segments[s].e0; };
  auto next_segment = [&](long e, int from) {
    const auto& slot = edge_segs[static_cast<std::size_t>(e)];
    for (int s : slot)
      if (s >= 0 && s != from && !used[s]) return s;
    return -1;
  };
  for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
    if (used[s0]) continue;
    used[s0] = true;
    std::vector<long> chain{segments[s0].e0, segments[s0].e1};
    bool closed = false;
    int cur = static_cast<int>(s0);
    for (;;) {
      const int nx = next_segment(chain.back(), cur);
      if (nx < 0) break;
      used[nx] = true;
      const long e = other_edge(nx, chain.back());
      cur = nx;
      if (e == chain.front()) {
        closed = true;
        break;
      }
      chain.push_back(e);
    }
    if (!closed) {
      cur = static_cast<int>(s0);
      std::vector<long> back;
      long tail = chain.front();
      for (;;) {
        const int nx = next_segment(tail, cur);
        if (nx < 0) break;
        used[nx] = true;
        tail = other_edge(nx, tail);
        cur = nx;
        back.push_back(tail);
      }
      chain.insert(chain.begin(), back.rbegin(), back.rend());
    }
    Polyline pl;
    pl.closed = closed;
    for (long e : chain) pl.points.push_back(edge_point[static_cast<std::size_t>(e)]);
    if (closed) pl.points.push_back(pl.points.front());
    out.components.push_back(std::move(pl));
  }
  return out;
}

LevelCurve trace_level(const MapParams& p, double t, const Window& window, int resolution, int jobs) {
  if (!(t > 0.0)) throw Error(ErrorKind::Validation, "level must be positive");
  if (resolution < 2) throw Error(ErrorKind::Validation, "resolution must be >= 2");
  const Grid grid = Grid::square(window, resolution);
  grid.validate();
  const Raster<float> samples = green_raster(p, grid, jobs);
  LevelCurve curve = extract_level(samples, grid, t, [&](Complex z) {
    const PotentialValue g = green_infinity(p, z);
    return g.converged ? g.value : 0.0;
  });
  if (curve.components.empty()) throw Error(ErrorKind::LevelOutsideWindow, "no grid cell straddles the level");
  return curve;
}

FigureEightResult figure_eight_level(const MapParams& p, const FigureEightConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw Error(ErrorKind::Validation, "epsilon must be in (0, 1)");
  FigureEightResult out;
  int escaping = 0;
  for (const auto& cp : critical_points(p).finite_points) {
    const PotentialValue g = green_infinity(p, cp.z);
    if (g.converged && std::isfinite(g.value) && g.value > 0.0) {
      ++escaping;
      out.t0 = g.value;
      out.critical = cp.z;
      out.critical_label = cp.label;
    }
  }
  if (escaping == 0) throw Error(ErrorKind::NoEscapingCritical, "no finite critical point escapes");
  if (escaping > 1) throw Error(ErrorKind::MultipleEscaping, "more than one finite critical point escapes");

  const Window window = cfg.window.value_or(Window::square(0.0, escape_radius(p)));
  const Grid grid = Grid::square(window, cfg.resolution);
  grid.validate();
  const Raster<float> samples = green_raster(p, grid, cfg.jobs);
  auto centre = [&](Complex z) {
    const PotentialValue g = green_infinity(p, z);
    return g.converged ? g.value : 0.0;
  };
  const LevelCurve above = extract_level(samples, grid, out.t0 * (1.0 + cfg.epsilon), centre);
  const LevelCurve below = extract_level(samples, grid, out.t0 * (1.0 - cfg.epsilon), centre);
  // The saddle's own branches are the curves nearest to it; count within twice that distance.
  auto nearest = [&](const LevelCurve& lc) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& pl : lc.components)
      for (Complex x : pl.points) d = std::min(d, std::abs(x - out.critical));
    return d;
  };
  const double radius = std::max(3.0 * grid.dx(), 2.0 * std::max(nearest(above), nearest(below)));
  out.count_above = above.count_near(out.critical, radius);
  out.count_below = below.count_near(out.critical, radius);
  out.total_above = above.count();
  out.total_below = below.count();
  out.verified = out.count_above == 1 && out.count_below == 2;
  return out;
}

}  // namespace ratdyn
