#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ratdyn/family.hpp"
#include "ratdyn/raster.hpp"

namespace ratdyn {

struct PotentialValue {
  double value = 0.0;
  int iterations_used = 0;
  bool converged = false;
};

struct GreenConfig {
  int max_iter = 10000;
  double bailout = 1e8;
};

/// Green function of the basin of ∞, G(z) = lim 2^{-n} log|f^n(z)|, with a
/// first-order tail correction at |z_n| > bailout. Points whose orbit does
/// not escape return {0, max_iter, false}. The pole and its preimages give +∞.
PotentialValue green_infinity(const MapParams& p, Complex z, const GreenConfig& cfg = {});

struct KoenigsConfig {
  int max_iter = 10000;
  int series_order = 16;
  /// Radius, relative to 1 + |fixed point|, of the disc where the local series is used.
  double local_radius = 1e-3;
  double tolerance = 1e-10;
};

struct KoenigsValue {
  Complex phi{0.0};
  double g = 0.0;  ///< |phi|²
  int iterations = 0;
  bool converged = false;
  int cycle_index = 0;  ///< cycle point whose immediate basin the orbit entered
};

/// Taylor coefficients (ascending, starting at ζ¹) of the local Koenigs map
/// φ(ζ) = ζ + … with φ∘h = λ·φ, for a germ h(ζ) = λζ + h₂ζ² + … .
std::vector<Complex> koenigs_series(const std::vector<Complex>& germ, int order);

/// Koenigs coordinate at an attracting fixed point with 0 < |λ| < 1.
/// Throws SuperattractingFixedPoint, NotAttracting, NotInBasin.
KoenigsValue koenigs(const MapParams& p, const FixedPointData& fp, Complex z, const KoenigsConfig& cfg = {});

/// Koenigs coordinate of f^period at an attracting cycle (cycle[0..period-1]).
KoenigsValue koenigs_cycle(const MapParams& p, const std::vector<Complex>& cycle, Complex z,
                           const KoenigsConfig& cfg = {});

/// Local Böttcher potential lim 2^{-n} log|f^n(z) − fp| at a superattracting
/// fixed point of local degree 2. Negative, −∞ at fp. Throws NotInBasin.
PotentialValue boettcher_super(const MapParams& p, Complex fixed_point, Complex z, int max_iter = 10000);

struct SaddleEntry {
  Complex point;
  std::string origin;  ///< label of the critical point this is a preimage of
  int depth = 0;
  double level = 0.0;
};

struct SaddleSpectrum {
  std::vector<SaddleEntry> saddles;
  /// Preimages of the attractor ∞ (the pole and its preimages), where G = +∞.
  std::vector<SaddleEntry> attractor_preimages;
};

/// G at each escaping finite critical point and at its preimages up to `depth`.
SaddleSpectrum saddle_levels(const MapParams& p, int depth);

struct Polyline {
  std::vector<Complex> points;
  bool closed = false;
};

struct LevelCurve {
  double level = 0.0;
  std::vector<Polyline> components;
  int grid_resolution = 0;
  Grid grid;

  int count() const { return static_cast<int>(components.size()); }
  /// Components with a vertex within `radius` of z.
  int count_near(Complex z, double radius) const;
};

/// G sampled at pixel centres; non-escaping points get 0, poles a large value.
Raster<float> green_raster(const MapParams& p, const Grid& grid, int jobs = 1, const GreenConfig& cfg = {});

/// Marching squares on an existing sample raster (samples at pixel centres).
/// Ambiguous saddle cells are resolved with `centre_value(i, j)`, the value at
/// the centre of the cell whose top-left sample is (i, j).
LevelCurve extract_level(const Raster<float>& samples, const Grid& grid, double t,
                         const std::function<double(Complex)>& centre_value);

/// {G = t} on a resolution × resolution grid. Throws LevelOutsideWindow.
LevelCurve trace_level(const MapParams& p, double t, const Window& window, int resolution, int jobs = 1);

struct FigureEightConfig {
  std::optional<Window> window;  ///< default: square of half-width escape_radius
  int resolution = 512;
  double epsilon = 1e-3;  ///< relative band around t0
  int jobs = 1;
};

struct FigureEightResult {
  double t0 = 0.0;
  bool verified = false;
  Complex critical;
  std::string critical_label;
  int count_above = 0;  ///< components near the critical point at t0(1 + ε)
  int count_below = 0;  ///< same at t0(1 − ε)
  int total_above = 0;
  int total_below = 0;
};

/// Level through the single escaping free critical point. Throws
/// NoEscapingCritical or MultipleEscaping.
FigureEightResult figure_eight_level(const MapParams& p, const FigureEightConfig& cfg = {});

}  // namespace ratdyn
