#include "ratdyn/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ratdyn/error.hpp"

namespace ratdyn {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool lex_less(Complex x, Complex y) {
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

// Merges numerically coincident roots into one entry with multiplicity.
std::vector<CriticalPoint> merge_roots(std::vector<Complex> zs) {
  std::sort(zs.begin(), zs.end(), lex_less);
  std::vector<CriticalPoint> out;
  std::vector<bool> used(zs.size(), false);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (used[i]) continue;
    CriticalPoint cp{zs[i], 1, 0.0, {}};
    for (std::size_t j = i + 1; j < zs.size(); ++j) {
      if (!used[j] && std::abs(zs[j] - zs[i]) < 1e-7 * (1.0 + std::abs(zs[i]))) {
        used[j] = true;
        cp.z = (cp.z * static_cast<double>(cp.multiplicity) + zs[j]) / static_cast<double>(cp.multiplicity + 1);
        ++cp.multiplicity;
      }
    }
    out.push_back(cp);
  }
  return out;
}

Polynomial critical_polynomial(const MapParams& p) {
  // 2z(z − a)² − b
  return Polynomial{{-p.b, 2.0 * p.a * p.a, -4.0 * p.a, 2.0}};
}

Polynomial fixed_point_polynomial(const MapParams& p) {
  if (p.degenerate) return Polynomial{{p.c, -1.0, 1.0}};
  // (z² − z + c)(z − a) + b
  return Polynomial{{p.b - p.a * p.c, p.a + p.c, -(p.a + 1.0), 1.0}};
}

std::size_t nearest_index(const std::vector<CriticalPoint>& pts, Complex target) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = std::abs(pts[i].z - target);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

MapParams MapParams::make(Complex a, Complex b, Complex c) {
  MapParams p{a, b, c, false};
  p.validate();
  return p;
}

MapParams MapParams::quadratic(Complex c) { return MapParams{0.0, 0.0, c, true}; }

void MapParams::validate() const {
  if (!finite(a) || !finite(b) || !finite(c)) throw Error(ErrorKind::Validation, "non-finite coefficient");
  if (degenerate && b != 0.0) throw Error(ErrorKind::Validation, "degenerate mode requires b = 0");
  if (!degenerate && b == 0.0)
    throw Error(ErrorKind::DegenerateFamily, "b = 0 reduces the map to z^2 + c; set the degenerate flag to use that mode");
}

std::vector<Complex> MultiPoleParams::poles() const {
  std::vector<Complex> out;
  const Complex root = std::sqrt(-c);
  for (int m = 1; m <= d - 2; ++m) out.push_back(root + Complex(0.0, m * T));
  return out;
}

void MultiPoleParams::validate() const {
  if (d < 3) throw Error(ErrorKind::Validation, "multi-pole model needs d >= 3");
  if (!(b > 0.0)) throw Error(ErrorKind::Validation, "multi-pole model needs b > 0");
  if (!(T > 0.0)) throw Error(ErrorKind::Validation, "multi-pole model needs T > 0");
}

int CriticalData::finite_count() const {
  int n = 0;
  for (const auto& cp : finite_points) n += cp.multiplicity;
  return n;
}

const CriticalPoint* CriticalData::find(const std::string& label) const {
  for (const auto& cp : finite_points)
    if (cp.label == label) return &cp;
  return nullptr;
}

std::string to_string(FixedPointClass cls) {
  switch (cls) {
    case FixedPointClass::Superattracting: return "superattracting";
    case FixedPointClass::Attracting: return "attracting";
    case FixedPointClass::Indifferent: return "indifferent";
    case FixedPointClass::Repelling: return "repelling";
  }
  return "unknown";
}

FixedPointClass classify_multiplier(Complex multiplier) {
  const double m = std::abs(multiplier);
  if (std::abs(m - 1.0) <= kMultiplierBoundary) return FixedPointClass::Indifferent;
  if (m < kMultiplierBoundary) return FixedPointClass::Superattracting;
  if (m < 1.0) return FixedPointClass::Attracting;
  return FixedPointClass::Repelling;
}

Point eval(const MapParams& p, Point z) {
  if (z.is_infinite()) return Point::infinity();
  if (!p.degenerate && z.value() == p.a) return Point::infinity();
  const Complex out = eval_finite(p, z.value());
  if (!finite(out)) return Point::infinity();
  return out;
}

Complex derivative(const MapParams& p, Point z) {
  if (z.is_infinite()) throw Error(ErrorKind::PoleDerivative, "derivative requested at infinity");
  if (!p.degenerate && z.value() == p.a) throw Error(ErrorKind::PoleDerivative, "derivative requested at the pole");
  return derivative_finite(p, z.value());
}

MapParams from_kw(const KWParams& q) {
  const Complex w = q.w;
  const double one_minus_k = 1.0 - q.k;
  MapParams p;
  p.a = q.k * w;
  p.b = 2.0 * w * w * w * (one_minus_k * one_minus_k);
  p.c = w * w * (2.0 * q.k - 3.0) + w;
  if (p.b == 0.0) throw Error(ErrorKind::DegenerateFamily, "k = 1 or w = 0 gives b = 0");
  return p;
}

KWParams to_kw(const MapParams& p) {
  if (p.degenerate) throw Error(ErrorKind::NotInFamilySlice, "degenerate map has no (k, w) coordinates");
  // Eliminating k = a/w from the slice formulas leaves 3w² − (2a + 1)w + c = 0.
  const Complex qa = 3.0, qb = -(2.0 * p.a + 1.0), qc = p.c;
  const Complex disc = std::sqrt(qb * qb - 4.0 * qa * qc);
  const Complex candidates[2] = {(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)};

  const double tol = kToKwTolerance * (1.0 + std::abs(p.b));
  std::optional<KWParams> best;
  double best_res = std::numeric_limits<double>::infinity();
  for (Complex w : candidates) {
    if (std::abs(w) < 1e-14) continue;
    const Complex k = p.a / w;
    if (std::abs(k.imag()) > 1e-8 * (1.0 + std::abs(k))) continue;
    const double res = std::abs(2.0 * w * (w - p.a) * (w - p.a) - p.b);
    const bool tie = best && std::abs(res - best_res) <= 1e-12 * (1.0 + std::abs(p.b));
    if (res < tol && (!best || (tie ? std::abs(w) > std::abs(best->w) : res < best_res))) {
      best = KWParams{k.real(), w};
      best_res = res;
    }
  }
  if (!best) throw Error(ErrorKind::NotInFamilySlice, "no root of 3w^2-(2a+1)w+c reproduces b");
  return *best;
}

CriticalData critical_points(const MapParams& p) {
  CriticalData out;
  if (p.degenerate) {
    out.finite_points.push_back(CriticalPoint{0.0, 1, 0.0, "c1"});
    return out;
  }
  const Polynomial poly = critical_polynomial(p);
  out.finite_points = merge_roots(roots(poly));
  const double tol = kRootTolerance * (1.0 + std::abs(p.b));
  for (std::size_t i = 0; i < out.finite_points.size(); ++i) {
    auto& cp = out.finite_points[i];
    cp.residual = std::abs(poly(cp.z));
    cp.label = "c" + std::to_string(i + 1);
    if (!(cp.residual < tol)) throw Error(ErrorKind::SolverFailure, "critical point residual above tolerance");
  }
  return out;
}

std::vector<FixedPointData> fixed_points(const MapParams& p) {
  const Polynomial poly = fixed_point_polynomial(p);
  std::vector<Complex> zs = roots(poly);
  std::sort(zs.begin(), zs.end(), lex_less);
  const double tol = kRootTolerance * (1.0 + std::abs(p.b));
  std::vector<FixedPointData> out;
  for (Complex z : zs) {
    const double res = std::abs(poly(z));
    if (!(res < tol)) throw Error(ErrorKind::SolverFailure, "fixed point residual above tolerance");
    const Complex lambda = derivative_finite(p, z);
    out.push_back(FixedPointData{z, lambda, classify_multiplier(lambda), res});
  }
  out.push_back(FixedPointData{Point::infinity(), 0.0, FixedPointClass::Superattracting, 0.0});
  return out;
}

NewtonReport is_newton(const MapParams& p, double tol) {
  NewtonReport report;
  report.tolerance = tol;
  report.fixed_points = fixed_points(p);
  for (const auto& fp : report.fixed_points)
    if (std::abs(fp.multiplier) < tol) ++report.small_multiplier_count;
  report.is_newton = report.small_multiplier_count == p.degree();
  return report;
}

std::pair<Complex, Complex> kw_free_critical_points(const KWParams& q) {
  const Complex s = std::sqrt(Complex(4.0 * q.k - 3.0, 0.0));
  const Complex base = -0.5 + q.k;
  return {q.w * (base - 0.5 * s), q.w * (base + 0.5 * s)};
}

namespace {

MarkedMap label_critical(const MapParams& p, const KWParams& q) {
  CriticalData crit = critical_points(p);
  auto [u, v] = kw_free_critical_points(q);
  MarkedMap out{p, q, u, v, q.w};
  // Replace the closed forms by the polished roots they correspond to.
  out.w = crit.finite_points[nearest_index(crit.finite_points, q.w)].z;
  out.u = crit.finite_points[nearest_index(crit.finite_points, u)].z;
  out.v = crit.finite_points[nearest_index(crit.finite_points, v)].z;
  return out;
}

}  // namespace

MarkedMap mark(const KWParams& q) { return label_critical(from_kw(q), q); }

MarkedMap mark(const MapParams& p) { return label_critical(p, to_kw(p)); }

Complex multipole_eval(const MultiPoleParams& m, Complex z) {
  Complex acc = z * z + m.c;
  for (Complex a : m.poles()) acc += m.b / (z - a);
  return acc;
}

Complex multipole_derivative(const MultiPoleParams& m, Complex z) {
  Complex acc = 2.0 * z;
  for (Complex a : m.poles()) acc -= m.b / ((z - a) * (z - a));
  return acc;
}

CriticalData multipole_critical_points(const MultiPoleParams& m) {
  m.validate();
  const auto poles = m.poles();
  // 2z·Π(z − a_m)² − b·Σ_m Π_{t≠m}(z − a_t)²
  Polynomial prod{{1.0}};
  for (Complex a : poles) prod = prod * Polynomial{{a * a, -2.0 * a, 1.0}};
  Polynomial lhs = prod * Polynomial{{0.0, 2.0}};
  Polynomial sum{{0.0}};
  for (std::size_t i = 0; i < poles.size(); ++i) {
    Polynomial term{{1.0}};
    for (std::size_t t = 0; t < poles.size(); ++t)
      if (t != i) term = term * Polynomial{{poles[t] * poles[t], -2.0 * poles[t], 1.0}};
    sum = sum + term;
  }
  const Polynomial poly = lhs + sum * Complex(-m.b);

  std::vector<Complex> zs = roots(poly);
  // The polynomial form is poorly conditioned next to the poles when b is tiny;
  // finish on the rational form F'(z) = 0 with F''(z) = 2 + 2b·Σ 1/(z − a)³.
  for (Complex& z : zs) {
    for (int step = 0; step < 8; ++step) {
      Complex second = 2.0;
      for (Complex a : poles) second += 2.0 * m.b / ((z - a) * (z - a) * (z - a));
      const Complex next = z - multipole_derivative(m, z) / second;
      if (!finite(next)) break;
      z = next;
    }
  }
  CriticalData out;
  out.finite_points = merge_roots(zs);
  for (std::size_t i = 0; i < out.finite_points.size(); ++i) {
    auto& cp = out.finite_points[i];
    cp.residual = relative_residual(poly, cp.z);
    cp.label = "c" + std::to_string(i + 1);
    if (!(cp.residual < kRootTolerance)) throw Error(ErrorKind::SolverFailure, "multi-pole critical residual above tolerance");
  }
  return out;
}

std::vector<PolePairAsymptotics> multipole_pole_pairs(const MultiPoleParams& m, Complex* free_critical) {
  const CriticalData crit = multipole_critical_points(m);
  const auto poles = m.poles();
  std::vector<bool> claimed(crit.finite_points.size(), false);
  std::vector<PolePairAsymptotics> out;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    PolePairAsymptotics pair;
    pair.m = static_cast<int>(i) + 1;
    pair.pole = poles[i];
    pair.predicted_offset = std::sqrt(m.b / (2.0 * poles[i]));
    pair.predicted_value_offset = 2.0 * std::sqrt(2.0 * poles[i]) * std::sqrt(m.b);
    pair.minus_root = crit.finite_points[nearest_index(crit.finite_points, poles[i] - pair.predicted_offset)].z;
    pair.plus_root = crit.finite_points[nearest_index(crit.finite_points, poles[i] + pair.predicted_offset)].z;
    claimed[nearest_index(crit.finite_points, pair.minus_root)] = true;
    claimed[nearest_index(crit.finite_points, pair.plus_root)] = true;
    pair.minus_value = multipole_eval(m, pair.minus_root);
    pair.plus_value = multipole_eval(m, pair.plus_root);
    if (m.c.imag() == 0.0 && m.c.real() < 0.0) {
      auto side = [&](Complex z) { return z.real() - z.imag() * z.imag() / (4.0 * m.c.real()); };
      pair.minus_side = side(pair.minus_value);
      pair.plus_side = side(pair.plus_value);
    }
    out.push_back(pair);
  }
  if (free_critical) {
    *free_critical = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < crit.finite_points.size(); ++i) {
      if (claimed[i]) continue;
      if (std::abs(crit.finite_points[i].z) < best) {
        best = std::abs(crit.finite_points[i].z);
        *free_critical = crit.finite_points[i].z;
      }
    }
  }
  return out;
}

}  // namespace ratdyn
