#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratdyn/orbits.hpp"
#include "ratdyn/raster.hpp"

namespace ratdyn {

struct MaskConfig {
  ClassifierConfig classifier;
  /// Escaping pixels whose distance estimate to the Julia set is below
  /// thin_factor · pixel size are flagged thin and do not carry connectivity.
  double thin_factor = 0.5;
  int jobs = 1;
  void validate() const;
};

/// Per-pixel basin labels. Codes: 0 Infinity, 1 W, 2 + id for other cycles, 255 Undecided.
struct BasinMask {
  static constexpr std::uint8_t kInfinity = 0;
  static constexpr std::uint8_t kW = 1;
  static constexpr std::uint8_t kOtherBase = 2;
  static constexpr std::uint8_t kUndecided = 255;

  Grid grid;
  MaskConfig config;
  Raster<std::uint8_t> labels;
  Raster<std::uint8_t> thin;
  std::vector<KnownCycle> cycles;  ///< cycles[i] is labelled label_for_cycle(i)
  std::optional<int> w_cycle;

  std::uint8_t label_for_cycle(int id) const;
  std::optional<std::uint8_t> label_at(Complex z) const;
  /// Fraction of pixels per code, indexed by code.
  std::vector<double> label_fractions() const;
};

/// Throws Validation when resolution < 16.
BasinMask basin_mask(const MapParams& p, std::optional<Complex> w, const Window& window, int resolution,
                     const MaskConfig& cfg = {});

/// Pixels whose 3×3 neighbourhood holds two labels or an Undecided pixel.
Raster<std::uint8_t> julia_pixels(const BasinMask& mask);

/// A critical point with a display name ("inf" for the point at infinity).
struct NamedCritical {
  std::string name;
  Point point;
};

struct CensusEntry {
  std::string name;
  std::string fate;    ///< orbit fate: inf, w, other, undecided
  std::string region;  ///< immediate_infinity, infinity, w, other, undecided, outside
};

/// Topology of the immediate basin of one attractor on the grid.
struct ImmediateBasin {
  std::string attractor;  ///< "inf" or "w"
  bool present = false;
  /// 8-connected components of the complement (pixels beyond the window count
  /// as one region) that meet Julia pixels. Two or more means not simply connected.
  int complement_components = 0;
  std::vector<std::string> residents;  ///< critical points whose pixel lies in the basin
  int distinct_critical_values = 0;
  /// Non-simply-connected ⇒ a critical point besides the attractor's own.
  bool holds_extra_critical = true;
  /// Non-simply-connected ⇒ at least two distinct critical values.
  bool holds_two_values = true;
};

struct ConnectivityLevel {
  int resolution = 0;
  int infinity_components = 0;  ///< 4-connected, thin pixels excluded, border components merged
  int complement_components = 0;
  bool pole_in_immediate_basin = false;
  std::vector<CensusEntry> census;
  std::vector<ImmediateBasin> basins;
};

struct ConnectivityReport {
  int infinity_components = 0;
  int complement_components = 0;
  bool pole_in_immediate_basin = false;
  std::vector<std::string> criticals_in_infinity_basin;   ///< by orbit fate
  std::vector<std::string> criticals_in_immediate_basin;  ///< by pixel
  std::vector<std::string> criticals_in_w_basin;          ///< by orbit fate
  std::vector<CensusEntry> census;
  std::vector<ImmediateBasin> basins;
  /// Pole placement, complement verdict and census agree at 2× resolution.
  bool resolution_stable = false;
  ConnectivityLevel coarse;
  ConnectivityLevel fine;
  bool monitors_ok() const;
};

/// The mask must cover every finite critical point and the pole with a margin
/// of 0.5, else Validation. Re-runs the mask at twice the resolution.
ConnectivityReport connectivity(const MapParams& p, std::optional<Complex> w, const BasinMask& mask,
                                const std::vector<NamedCritical>& criticals);

/// Finite critical points named u, v, w on the slice (c1, c2, ... elsewhere) and "inf".
std::vector<NamedCritical> named_criticals(const MapParams& p);

struct Evidence {
  std::string name;
  bool mandatory = true;
  bool pass = false;
  std::string detail;
};

struct ExoticConfig {
  std::optional<Window> window;  ///< default: square of half-width escape_radius
  int resolution = 512;
  MaskConfig mask;
  bool figure_eight = true;
};

struct ExoticVerdict {
  bool is_exotic = false;
  std::vector<Evidence> evidence;
  std::vector<std::string> caveats;
  ConnectivityReport connectivity;
};

/// Throws DegenerateFamily, NotInFamilySlice, UnstableAtResolution.
ExoticVerdict exotic_verdict(const MapParams& p, const ExoticConfig& cfg = {});

}  // namespace ratdyn
