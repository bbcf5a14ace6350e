#include "ratdyn/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "ratdyn/error.hpp"
#include "ratdyn/potential.hpp"

namespace ratdyn {

namespace {

bool lex_less(Complex x, Complex y) {
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

double cross(Complex o, Complex a, Complex b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

// Diameter of a point set: convex hull, then all pairs of hull vertices.
double diameter(std::vector<Complex> pts) {
  if (pts.size() < 2) return 0.0;
  std::sort(pts.begin(), pts.end(), lex_less);
  std::vector<Complex> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, std::abs(hull[i] - hull[j]));
  return best;
}

// Distance from each point to its nearest neighbour: scan outwards in the
// Re-sorted order until the Re gap exceeds the best distance found.
std::vector<double> nearest_neighbour_distances(const std::vector<Complex>& pts) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return lex_less(pts[x], pts[y]); });
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < n; ++r) {
    const Complex z = pts[order[r]];
    double& b = best[order[r]];
    for (std::size_t s = r + 1; s < n && pts[order[s]].real() - z.real() < b; ++s)
      b = std::min(b, std::abs(pts[order[s]] - z));
    for (std::size_t s = r; s-- > 0 && z.real() - pts[order[s]].real() < b;)
      b = std::min(b, std::abs(pts[order[s]] - z));
  }
  return best;
}

Raster<std::uint8_t> threshold(const Raster<float>& g, double t) {
  Raster<std::uint8_t> out(g.width, g.height, 0);
  for (std::size_t k = 0; k < g.data.size(); ++k) out.data[k] = static_cast<double>(g.data[k]) < t ? 1 : 0;
  return out;
}

bool real_coefficients(const MapParams& p) {
  auto re = [](Complex z) { return std::abs(z.imag()) <= 1e-12 * (1.0 + std::abs(z.real())); };
  return re(p.a) && re(p.b) && re(p.c);
}

// S = {x on the ray from the pole away from 0 : G(x) < t}, if it is a single
// interval bounded away from both ends of the ray.
std::optional<RealCut> find_real_cut(const MapParams& p, double t_star) {
  if (p.degenerate || !real_coefficients(p)) return std::nullopt;
  const double a = p.a.real(), b = p.b.real();
  if (a == 0.0 || !(b / (2.0 * a) > 0.0)) return std::nullopt;
  const double sigma = a > 0.0 ? 1.0 : -1.0;
  const double reach = escape_radius(p) + 1.0;
  const int samples = 20000;
  int first = -1, last = -1;
  for (int s = 1; s <= samples; ++s) {
    const double x = a + sigma * reach * s / samples;
    const PotentialValue g = green_infinity(p, x);
    if (!g.converged) return std::nullopt;  // the ray meets a non-escaping point
    if (g.value < t_star) {
      if (first < 0) first = s;
      else if (last != s - 1) return std::nullopt;  // not a single interval
      last = s;
    }
  }
  if (first < 0 || first == 1 || last == samples) return std::nullopt;
  const double x0 = a + sigma * reach * (first - 1) / samples;
  const double x1 = a + sigma * reach * (last + 1) / samples;
  return RealCut{std::min(x0, x1), std::max(x0, x1)};
}

}  // namespace

InverseBranchResult preimages(const MapParams& p, Point y) {
  InverseBranchResult out;
  if (y.is_infinite()) {
    out.preimages = {Point::infinity(), Point::infinity()};
    if (!p.degenerate) out.preimages.push_back(p.a);
    out.residuals.assign(out.preimages.size(), 0.0);
    return out;
  }
  const Complex target = y.value();
  std::vector<Complex> zs;
  if (p.degenerate) {
    const Complex s = std::sqrt(target - p.c);
    zs = {s, -s};
  } else {
    const Complex cy = p.c - target;
    zs = roots(Polynomial{{p.b - p.a * cy, cy, -p.a, 1.0}});
    for (Complex& z : zs) {
      Complex best = z;
      double best_res = std::abs(eval_finite(p, z) - target);
      for (int step = 0; step < 6 && best_res > 0.0; ++step) {
        const Complex d = derivative_finite(p, z);
        if (d == 0.0) break;
        const Complex next = z - (eval_finite(p, z) - target) / d;
        if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
        z = next;
        const double res = std::abs(eval_finite(p, z) - target);
        if (res < best_res) {
          best_res = res;
          best = z;
        }
      }
      z = best;
    }
  }
  std::sort(zs.begin(), zs.end(), lex_less);
  for (Complex z : zs) {
    const double res = std::abs(eval_finite(p, z) - target);
    if (!(res < 1e-9 * (1.0 + std::abs(target)))) throw Error(ErrorKind::SolverFailure, "preimage residual above tolerance");
    out.preimages.emplace_back(z);
    out.residuals.push_back(res);
  }
  return out;
}

std::optional<int> TrapRegion::symbol_at(Complex z) const {
  const auto px = grid.pixel_of(z);
  if (!px) return std::nullopt;
  const auto [i, j] = *px;
  const int s = labels.at(i, j);
  if (s >= 0) return s;
  // Thin components: the pixel centre may sit above the level while z does not.
  if (!(green_infinity(params, z).value < 0.5 * t_star)) return std::nullopt;
  if (cut) {
    const Complex fz = eval_finite(params, z);
    if (std::abs(fz.imag()) <= 1e-9 * (1.0 + std::abs(fz)) && fz.real() >= cut->start && fz.real() <= cut->end)
      return std::nullopt;
  }
  int found = -1;
  for (int dj = -2; dj <= 2; ++dj) {
    for (int di = -2; di <= 2; ++di) {
      if (!labels.inside(i + di, j + dj)) continue;
      const int l = labels.at(i + di, j + dj);
      if (l < 0) continue;
      if (found >= 0 && l != found) return std::nullopt;
      found = l;
    }
  }
  if (found < 0) return std::nullopt;
  return found;
}

bool TrapRegion::in_omega(Complex z) const {
  const auto px = grid.pixel_of(z);
  return px && omega.at(px->first, px->second);
}

TrapRegion build_trap(const MapParams& p, const TrapConfig& cfg) {
  if (cfg.resolution < 16) throw Error(ErrorKind::Validation, "trap resolution must be >= 16");
  const int d = p.degree();
  if (!cfg.label_order.empty()) {
    std::vector<int> sorted = cfg.label_order;
    std::sort(sorted.begin(), sorted.end());
    for (int s = 0; s < static_cast<int>(sorted.size()); ++s)
      if (sorted[s] != s || static_cast<int>(sorted.size()) != d)
        throw Error(ErrorKind::Validation, "label_order must be a permutation of 0..d-1");
  }

  const CriticalData crit = critical_points(p);
  std::vector<std::string> stuck;
  for (const auto& cp : crit.finite_points)
    if (classify_orbit(p, cp.z, cfg.classifier).kind != FateKind::ToInfinity) stuck.push_back(cp.label);
  if (!stuck.empty()) {
    std::ostringstream msg;
    msg << "critical orbits not attracted to infinity:";
    for (const auto& s : stuck) msg << ' ' << s;
    throw Error(ErrorKind::HypothesisFailed, msg.str());
  }

  TrapRegion trap;
  trap.config = cfg;
  trap.params = p;
  trap.degree = d;
  double max_g = 0.0, min_g = std::numeric_limits<double>::infinity();
  for (const auto& cp : crit.finite_points) {
    const double g = 2.0 * green_infinity(p, cp.z).value;  // G(f(c)) = 2G(c)
    max_g = std::max(max_g, g);
    min_g = std::min(min_g, g);
  }
  trap.level_low = 0.5 * max_g;
  trap.level_high = min_g;
  if (!(trap.level_low < trap.level_high)) {
    std::ostringstream msg;
    msg << "level interval (" << trap.level_low << ", " << trap.level_high
        << ") is empty; a coding through an iterate of f would be required (not implemented)";
    throw Error(ErrorKind::LevelIntervalEmpty, msg.str());
  }
  trap.t_star = 0.5 * (trap.level_low + trap.level_high);

  const Window window = cfg.window.value_or(Window::square(0.0, escape_radius(p) + 0.5));
  trap.grid = Grid::square(window, cfg.resolution);
  trap.grid.validate();
  const Raster<float> g = green_raster(p, trap.grid, cfg.jobs);
  trap.omega = threshold(g, trap.t_star);
  Raster<std::uint8_t> inner = threshold(g, 0.5 * trap.t_star);
  ComponentLabels comps = label_components(inner, Connectivity::Four);

  std::vector<std::uint8_t> band(inner.data.size(), 0);
  if (comps.count != d) {
    trap.cut = find_real_cut(p, trap.t_star);
    if (!trap.cut) {
      std::ostringstream msg;
      msg << "{G < t*/2} has " << comps.count << " components and no real cut makes it split into " << d;
      throw Error(ErrorKind::NoInvariantCut, msg.str());
    }
    const double h = std::max(trap.grid.dx(), trap.grid.dy());
    const RealCut cut = *trap.cut;
    for (int j = 0; j < trap.grid.height; ++j) {
      for (int i = 0; i < trap.grid.width; ++i) {
        const Complex z = trap.grid.centre(i, j);
        if (std::abs(z.imag()) <= h && z.real() >= cut.start - h && z.real() <= cut.end + h) trap.omega.at(i, j) = 0;
        if (!inner.at(i, j)) continue;
        const Complex fz = eval_finite(p, z);
        const double reach = std::abs(derivative_finite(p, z)) * h;
        if (std::abs(fz.imag()) <= reach && fz.real() >= cut.start - reach && fz.real() <= cut.end + reach) {
          inner.at(i, j) = 0;
          band[static_cast<std::size_t>(j) * trap.grid.width + i] = 1;
        }
      }
    }
    comps = label_components(inner, Connectivity::Four);
  }
  if (comps.count != d) {
    std::ostringstream msg;
    msg << "{G < t*/2} has " << comps.count << " components, expected " << d;
    throw Error(ErrorKind::ComponentCountMismatch, msg.str());
  }

  // Canonical symbols: components sorted by the (Re, Im) of their centroids.
  std::vector<Complex> plane(d);
  for (int k = 0; k < d; ++k) {
    const Complex c = comps.centroids[k];
    plane[k] = {window.re_min + (c.real() + 0.5) * trap.grid.dx(), window.im_max - (c.imag() + 0.5) * trap.grid.dy()};
  }
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return lex_less(plane[x], plane[y]); });
  std::vector<int> symbol_of(d);
  for (int s = 0; s < d; ++s) symbol_of[order[s]] = cfg.label_order.empty() ? s : cfg.label_order[s];
  trap.centroids.assign(d, 0.0);
  trap.areas.assign(d, 0);
  for (int k = 0; k < d; ++k) {
    trap.centroids[symbol_of[k]] = plane[k];
    trap.areas[symbol_of[k]] = comps.sizes[k];
  }
  trap.labels = Raster<std::int32_t>(trap.grid.width, trap.grid.height, -1);
  for (std::size_t k = 0; k < comps.labels.data.size(); ++k) {
    const int l = comps.labels.data[k];
    if (l >= 0) trap.labels.data[k] = symbol_of[l];
  }

  // Base point: lowest-G labelled pixel whose 5×5 neighbourhood carries the same label.
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (int j = 2; j + 2 < trap.grid.height; ++j) {
    for (int i = 2; i + 2 < trap.grid.width; ++i) {
      const int s = trap.labels.at(i, j);
      if (s < 0 || !(g.at(i, j) < best)) continue;
      bool interior = true;
      for (int dj = -2; dj <= 2 && interior; ++dj)
        for (int di = -2; di <= 2 && interior; ++di) interior = trap.labels.at(i + di, j + dj) == s;
      if (!interior) continue;
      best = g.at(i, j);
      trap.base_point = trap.grid.centre(i, j);
      trap.base_symbol = s;
      found = true;
    }
  }
  if (!found) throw Error(ErrorKind::ComponentCountMismatch, "no interior pixel available for the base point");
  return trap;
}

std::optional<Complex> branch_preimage(const MapParams& p, const TrapRegion& trap, Complex y, int symbol) {
  std::optional<Complex> hit;
  for (const Point& z : preimages(p, y).preimages) {
    if (z.is_infinite()) continue;
    if (trap.symbol_at(z.value()) == symbol) {
      if (hit) return std::nullopt;
      hit = z.value();
    }
  }
  return hit;
}

CodingReport verify_full_shift(const MapParams& p, const TrapRegion& trap, const ShiftConfig& cfg) {
  if (cfg.depth < 1 || cfg.depth > 20) throw Error(ErrorKind::Validation, "depth must be in [1, 20]");
  if (cfg.samples < 1) throw Error(ErrorKind::Validation, "samples must be >= 1");
  const int d = trap.degree;
  const int n = cfg.depth;

  CodingReport rep;
  rep.component_count = d;
  rep.depth = n;
  rep.transition_matrix.assign(d, std::vector<bool>(d, false));

  // Every preimage of y must land in a distinct labelled component.
  auto split = [&](Complex y) {
    std::vector<Complex> out(d);
    std::vector<bool> seen(d, false);
    for (const Point& z : preimages(p, y).preimages) {
      if (z.is_infinite()) throw Error(ErrorKind::EscapeFromTrap, "a preimage is the point at infinity");
      const auto s = trap.symbol_at(z.value());
      if (!s) throw Error(ErrorKind::EscapeFromTrap, "a preimage lands outside the labelled region");
      if (seen[*s]) throw Error(ErrorKind::EscapeFromTrap, "two preimages land in the same component");
      seen[*s] = true;
      out[*s] = z.value();
    }
    return out;
  };

  double total = 1.0;
  for (int k = 0; k < n; ++k) total *= d;
  rep.exhaustive = total <= cfg.samples;

  // Points of the deepest layer with their words; the first symbol of a word is most significant.
  std::vector<Complex> points;
  std::vector<std::vector<int>> words;
  std::vector<Complex> all_points;  // every layer, for the resolution re-check
  std::vector<int> all_symbols;

  if (rep.exhaustive) {
    std::vector<Complex> layer{trap.base_point};
    std::vector<std::vector<int>> layer_words{{}};
    for (int k = 1; k <= n; ++k) {
      std::vector<Complex> next(layer.size() * d);
      std::vector<std::vector<int>> next_words(layer.size() * d);
      parallel_rows(static_cast<int>(layer.size()), cfg.jobs, [&](int r) {
        const std::vector<Complex> pre = split(layer[r]);
        for (int s = 0; s < d; ++s) {
          next[static_cast<std::size_t>(r) * d + s] = pre[s];
          std::vector<int> w{s};
          w.insert(w.end(), layer_words[r].begin(), layer_words[r].end());
          next_words[static_cast<std::size_t>(r) * d + s] = std::move(w);
        }
      });
      for (std::size_t r = 0; r < layer.size(); ++r) {
        const int parent = k == 1 ? trap.base_symbol : layer_words[r].front();
        for (int s = 0; s < d; ++s) rep.transition_matrix[s][parent] = true;
      }
      for (std::size_t r = 0; r < next.size(); ++r) {
        all_points.push_back(next[r]);
        all_symbols.push_back(next_words[r].front());
      }
      layer = std::move(next);
      layer_words = std::move(next_words);
    }
    points = std::move(layer);
    words = std::move(layer_words);
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> pick(0, d - 1);
    words.resize(static_cast<std::size_t>(cfg.samples));
    for (auto& w : words) {
      w.resize(n);
      for (int& s : w) s = pick(rng);
    }
    points.resize(words.size());
    std::vector<std::vector<std::pair<int, int>>> transitions(words.size());
    std::vector<std::vector<Complex>> trail(words.size());
    parallel_rows(static_cast<int>(words.size()), cfg.jobs, [&](int r) {
      Complex y = trap.base_point;
      int parent = trap.base_symbol;
      for (int k = n - 1; k >= 0; --k) {
        const int s = words[r][k];
        y = split(y)[s];
        transitions[r].emplace_back(s, parent);
        trail[r].push_back(y);
        parent = s;
      }
      points[r] = y;
    });
    for (std::size_t r = 0; r < words.size(); ++r) {
      for (auto [s, parent] : transitions[r]) rep.transition_matrix[s][parent] = true;
      for (std::size_t k = 0; k < trail[r].size(); ++k) {
        all_points.push_back(trail[r][k]);
        all_symbols.push_back(words[r][n - 1 - static_cast<int>(k)]);
      }
    }
  }
  rep.words = static_cast<long>(points.size());

  // Cylinder diameters for prefix lengths 1..n−1.
  for (int m = 1; m < n; ++m) {
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed(points.size());
    for (std::size_t r = 0; r < points.size(); ++r) {
      std::uint64_t key = 0;
      for (int k = 0; k < m; ++k) key = key * d + static_cast<std::uint64_t>(words[r][k]);
      keyed[r] = {key, r};
    }
    std::sort(keyed.begin(), keyed.end());
    double worst = 0.0;
    for (std::size_t lo = 0; lo < keyed.size();) {
      std::size_t hi = lo;
      std::vector<Complex> group;
      while (hi < keyed.size() && keyed[hi].first == keyed[lo].first) group.push_back(points[keyed[hi++].second]);
      worst = std::max(worst, diameter(std::move(group)));
      lo = hi;
    }
    rep.cylinder_diameters.push_back(worst);
  }
  rep.diameters_decreasing = !rep.cylinder_diameters.empty();
  for (std::size_t m = 1; m < rep.cylinder_diameters.size(); ++m)
    if (!(rep.cylinder_diameters[m] < rep.cylinder_diameters[m - 1])) rep.diameters_decreasing = false;
  // Least-squares slope of log diameter against prefix length.
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t m = 0; m < rep.cylinder_diameters.size(); ++m) {
      const double dm = rep.cylinder_diameters[m];
      if (!(dm > 0.0)) continue;
      const double x = static_cast<double>(m + 1), y = std::log(dm);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++cnt;
    }
    rep.contraction_ratio = cnt >= 2 ? std::exp((cnt * sxy - sx * sy) / (cnt * sxx - sx * sx)) : 1.0;
  }

  // Injectivity: distinct words must give points further apart than 10× the solver tolerance.
  const std::vector<double> nn = nearest_neighbour_distances(points);
  rep.injectivity_total = static_cast<long>(points.size());
  rep.min_separation = std::numeric_limits<double>::infinity();
  for (double x : nn) {
    rep.min_separation = std::min(rep.min_separation, x);
    if (x > 10.0 * cfg.solver_tol) ++rep.injectivity_pass;
  }
  if (points.size() < 2) rep.injectivity_pass = rep.injectivity_total;

  if (cfg.recheck_resolution) {
    TrapConfig fine_cfg = trap.config;
    fine_cfg.window = trap.grid.window;
    fine_cfg.resolution = trap.grid.width * 2;
    const TrapRegion fine = build_trap(p, fine_cfg);
    rep.recheck_total = static_cast<long>(all_points.size());
    for (std::size_t r = 0; r < all_points.size(); ++r)
      if (fine.symbol_at(all_points[r]) != all_symbols[r]) ++rep.recheck_mismatches;
  }

  bool all_true = true;
  for (const auto& row : rep.transition_matrix)
    for (bool x : row) all_true = all_true && x;
  rep.full_shift = all_true && rep.diameters_decreasing && rep.contraction_ratio < 0.95 &&
                   rep.injectivity_pass == rep.injectivity_total && rep.recheck_mismatches == 0;
  return rep;
}

std::string code_point(const MapParams& p, const TrapRegion& trap, Complex z, int n) {
  if (n < 0) throw Error(ErrorKind::Validation, "itinerary length must be >= 0");
  std::string out;
  for (int k = 0; k < n; ++k) {
    const auto s = trap.symbol_at(z);
    if (!s) throw Error(ErrorKind::LeftTrap, "orbit left the labelled region", k);
    out.push_back(static_cast<char>('0' + *s));
    z = eval_finite(p, z);
  }
  return out;
}

}  // namespace ratdyn
