#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ratdyn/poly.hpp"

namespace ratdyn {

/// A point of the Riemann sphere: a finite complex value or the point at infinity.
class Point {
 public:
  Point(Complex z) : z_(z), infinite_(false) {}  // NOLINT: implicit by design of the sphere
  Point(double x) : z_(x, 0.0), infinite_(false) {}  // NOLINT
  static Point infinity() { return Point(); }

  bool is_infinite() const { return infinite_; }
  /// The finite value; meaningless when is_infinite().
  Complex value() const { return z_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  Point() : z_(0.0), infinite_(true) {}
  Complex z_;
  bool infinite_;
};

/// Coefficients of f(z) = z² + c + b/(z − a).
///
/// b = 0 collapses the map to the quadratic z² + c. That mode is only
/// available through `quadratic()` or by setting `degenerate` explicitly;
/// otherwise b = 0 is rejected by `validate()`.
struct MapParams {
  Complex a{0.0};
  Complex b{0.0};
  Complex c{0.0};
  bool degenerate = false;

  static MapParams make(Complex a, Complex b, Complex c);
  static MapParams quadratic(Complex c);

  int degree() const { return degenerate ? 2 : 3; }
  void validate() const;
};

/// The (k, w) slice on which w is a superattracting fixed point.
struct KWParams {
  double k = 0.0;
  Complex w{0.0};

  bool complex_w() const { return w.imag() != 0.0; }
};

/// The multi-pole model z² + c + b·Σ 1/(z − a_m), a_m = √(−c) + i·m·T.
struct MultiPoleParams {
  Complex c{0.0};
  double b = 0.0;
  double T = 0.0;
  int d = 3;

  std::vector<Complex> poles() const;
  void validate() const;
};

struct CriticalPoint {
  Complex z;
  int multiplicity = 1;
  double residual = 0.0;
  std::string label;
};

struct CriticalData {
  std::vector<CriticalPoint> finite_points;
  bool includes_infinity = true;

  int finite_count() const;
  const CriticalPoint* find(const std::string& label) const;
};

enum class FixedPointClass { Superattracting, Attracting, Indifferent, Repelling };
std::string to_string(FixedPointClass cls);
FixedPointClass classify_multiplier(Complex multiplier);

struct FixedPointData {
  Point point;
  Complex multiplier;
  FixedPointClass cls;
  double residual = 0.0;
};

// Tolerances shared by the family routines.
inline constexpr double kRootTolerance = 1e-9;
inline constexpr double kMultiplierBoundary = 1e-8;
inline constexpr double kToKwTolerance = 1e-4;

Point eval(const MapParams& p, Point z);

/// Hot-loop evaluation on finite values. z == a yields an infinite Complex.
inline Complex eval_finite(const MapParams& p, Complex z) {
  if (p.degenerate) return z * z + p.c;
  return z * z + p.c + p.b / (z - p.a);
}

inline Complex derivative_finite(const MapParams& p, Complex z) {
  if (p.degenerate) return 2.0 * z;
  const Complex d = z - p.a;
  return 2.0 * z - p.b / (d * d);
}

/// f'(z); throws PoleDerivative at the pole and at infinity.
Complex derivative(const MapParams& p, Point z);

MapParams from_kw(const KWParams& q);
KWParams to_kw(const MapParams& p);

/// Finite critical points: roots of 2z(z − a)² = b, Newton-polished.
CriticalData critical_points(const MapParams& p);

/// Finite fixed points (roots of (z² − z + c)(z − a) + b) plus the
/// superattracting fixed point at infinity, which is always last.
std::vector<FixedPointData> fixed_points(const MapParams& p);

struct NewtonReport {
  bool is_newton = false;
  double tolerance = 0.0;
  int small_multiplier_count = 0;
  std::vector<FixedPointData> fixed_points;
};

/// True iff exactly degree() fixed points on the sphere have |λ| < tol.
NewtonReport is_newton(const MapParams& p, double tol = 1e-2);

/// Closed-form u (the −√ branch) and v on the (k, w) slice.
std::pair<Complex, Complex> kw_free_critical_points(const KWParams& q);

/// A map of the family with its critical points labelled u, v, w.
struct MarkedMap {
  MapParams params;
  KWParams kw;
  Complex u;
  Complex v;
  Complex w;
};

MarkedMap mark(const KWParams& q);
/// Recovers (k, w) with to_kw; throws NotInFamilySlice off the slice.
MarkedMap mark(const MapParams& p);

Complex multipole_eval(const MultiPoleParams& m, Complex z);
Complex multipole_derivative(const MultiPoleParams& m, Complex z);
/// The 2d − 3 finite critical points of the multi-pole model.
CriticalData multipole_critical_points(const MultiPoleParams& m);

struct PolePairAsymptotics {
  int m = 0;
  Complex pole;
  Complex minus_root;  ///< critical point near a_m − √(b/2a_m)
  Complex plus_root;   ///< critical point near a_m + √(b/2a_m)
  Complex minus_value;
  Complex plus_value;
  Complex predicted_offset;        ///< √(b/2a_m)
  Complex predicted_value_offset;  ///< 2√(2a_m)·√b
  /// Signed side of each critical value w.r.t. the parabola through the
  /// points a_m² + c; only meaningful for real negative c.
  double minus_side = 0.0;
  double plus_side = 0.0;
};

/// Pairs the critical points with their poles and evaluates the pole-pair
/// asymptotics; also returns the free critical point nearest to zero.
std::vector<PolePairAsymptotics> multipole_pole_pairs(const MultiPoleParams& m, Complex* free_critical = nullptr);

}  // namespace ratdyn
