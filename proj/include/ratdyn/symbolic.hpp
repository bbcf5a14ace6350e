#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratdyn/family.hpp"
#include "ratdyn/orbits.hpp"
#include "ratdyn/raster.hpp"

namespace ratdyn {

struct InverseBranchResult {
  std::vector<Point> preimages;  ///< exactly degree() entries, repeated per multiplicity
  std::vector<double> residuals;
};

/// Solutions of f(z) = y, from the cubic z³ − az² + (c − y)z + (b − a(c − y)) = 0
/// (or z² + c − y = 0 in degenerate mode). y = ∞ gives {∞, ∞, a}.
InverseBranchResult preimages(const MapParams& p, Point y);

struct TrapConfig {
  std::optional<Window> window;  ///< default: square of half-width escape_radius + 0.5
  int resolution = 400;
  ClassifierConfig classifier;
  int jobs = 1;
  /// Optional permutation applied to the canonical symbols (symbol s becomes order[s]).
  std::vector<int> label_order;
};

/// A real interval S on the ray from the pole, removed from Ω so that Ω∖S is
/// simply connected. Its preimage band is removed from the labelled set.
struct RealCut {
  double start = 0.0;
  double end = 0.0;
};

struct TrapRegion {
  TrapConfig config;  ///< the configuration the trap was built with
  MapParams params;
  int degree = 0;
  double t_star = 0.0;
  double level_low = 0.0;   ///< ½·max G over finite critical values
  double level_high = 0.0;  ///< min G over finite critical values
  Grid grid;
  Raster<std::uint8_t> omega;       ///< {G < t_star}, minus the cut
  Raster<std::int32_t> labels;      ///< symbol of {G < t_star/2} minus the cut band, −1 elsewhere
  std::vector<Complex> centroids;   ///< per symbol, plane coordinates
  std::vector<std::int64_t> areas;  ///< per symbol, in pixels
  std::optional<RealCut> cut;
  Complex base_point;
  int base_symbol = 0;

  /// Label of the pixel containing z. Unlabelled pixels still resolve when
  /// G(z) < t_star/2, f(z) is off the cut, and the 5×5 neighbourhood shows one label.
  std::optional<int> symbol_at(Complex z) const;
  bool in_omega(Complex z) const;
};

/// Throws HypothesisFailed, LevelIntervalEmpty, NoInvariantCut, ComponentCountMismatch.
TrapRegion build_trap(const MapParams& p, const TrapConfig& cfg = {});

struct ShiftConfig {
  int depth = 10;
  int samples = 100000;
  std::uint64_t seed = 0;
  double solver_tol = 1e-9;
  /// Re-check every symbol on a trap built at twice the resolution.
  bool recheck_resolution = true;
  int jobs = 1;
};

struct CodingReport {
  int component_count = 0;
  std::vector<std::vector<bool>> transition_matrix;
  bool full_shift = false;
  int depth = 0;
  bool exhaustive = false;
  long words = 0;
  /// Index m−1 holds the largest diameter among cylinders of prefix length m.
  std::vector<double> cylinder_diameters;
  bool diameters_decreasing = false;
  double contraction_ratio = 0.0;
  long injectivity_pass = 0;
  long injectivity_total = 0;
  double min_separation = 0.0;
  long recheck_mismatches = 0;
  long recheck_total = 0;
};

/// Backward iteration along branch words; throws EscapeFromTrap.
CodingReport verify_full_shift(const MapParams& p, const TrapRegion& trap, const ShiftConfig& cfg = {});

/// Itinerary of z over n steps as a string of symbols; throws LeftTrap (step = k).
std::string code_point(const MapParams& p, const TrapRegion& trap, Complex z, int n);

/// Preimage of y inside the component with the given symbol, if any.
std::optional<Complex> branch_preimage(const MapParams& p, const TrapRegion& trap, Complex y, int symbol);

}  // namespace ratdyn
