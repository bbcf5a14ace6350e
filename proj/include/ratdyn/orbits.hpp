#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratdyn/family.hpp"

namespace ratdyn {

struct ClassifierConfig {
  int max_iter = 10000;
  double cycle_tol = 1e-9;
  int newton_steps = 30;
  std::optional<double> escape_radius_override;
  /// Near-return window: returns are checked against this many stored points.
  int max_period = 64;

  void validate() const;
};

enum class FateKind { ToInfinity, ToCycle, Undecided };
std::string to_string(FateKind kind);

struct OrbitFate {
  FateKind kind = FateKind::Undecided;
  int escape_time = 0;
  int period = 0;
  std::vector<Complex> cycle;
  Complex multiplier{0.0};
  int iterations = 0;
};

/// R = max(|a| + 1, 2 + √(1 + |b| + |c|)). For |z| ≥ R, |f(z)| ≥ 2|z|.
double escape_radius(const MapParams& p);
double effective_escape_radius(const MapParams& p, const ClassifierConfig& cfg);

inline constexpr double kPoleProximity = 1e-12;

struct CycleRefinement {
  std::vector<Complex> cycle;
  Complex multiplier{0.0};
  double residual = 0.0;
};

/// Newton on g(z) = f^period(z) − z from `approx`. The returned cycle has
/// minimal period (a divisor of `period`). Throws NoConvergence.
CycleRefinement refine_cycle(const MapParams& p, Complex approx, int period, int newton_steps = 30);

OrbitFate classify_orbit(const MapParams& p, Point z0, const ClassifierConfig& cfg = {});

enum class CriticalFate : std::uint8_t { Inf = 0, W = 1, Other = 2 };
std::string to_string(CriticalFate fate);

struct NineColor {
  CriticalFate u = CriticalFate::Other;
  CriticalFate v = CriticalFate::Other;
  bool u_undecided = false;
  bool v_undecided = false;

  int code() const { return 3 * static_cast<int>(u) + static_cast<int>(v); }
};

/// Inf for escape, W for attraction to the fixed point w (within 1e-6),
/// Other for any other cycle or an undecided orbit.
CriticalFate fate_class(const OrbitFate& fate, Complex w);

struct CriticalFates {
  MarkedMap map;
  OrbitFate u;
  OrbitFate v;
  OrbitFate w;
  NineColor color;
};

CriticalFates critical_fates(const MarkedMap& map, const ClassifierConfig& cfg = {});

/// An attracting cycle known to a BasinClassifier.
struct KnownCycle {
  int id = 0;
  std::vector<Complex> points;
  Complex multiplier{0.0};
  bool is_w = false;
};

/// Result of BasinClassifier::classify for one starting point.
struct PointFate {
  enum class Label : std::uint8_t { Infinity, Cycle, Undecided };
  Label label = Label::Undecided;
  int cycle_id = -1;
  int iterations = 0;
  /// Distance estimate G/|∇G| to the Julia set for escaping points.
  double distance_estimate = 0.0;
  /// Filled when the capture test failed and the full classifier ran.
  std::optional<OrbitFate> fallback;
};

/// Fast per-point classification for rasters.
///
/// Every attracting cycle attracts a critical point, so the cycles are found
/// once from the critical orbits (plus an optional anchor w) and each point is
/// then iterated until it escapes or comes within `capture_radius` of a known
/// cycle point. Points that do neither within max_iter fall back to
/// classify_orbit. classify() is const and safe to call concurrently.
class BasinClassifier {
 public:
  BasinClassifier(const MapParams& p, std::optional<Complex> w_anchor, const ClassifierConfig& cfg = {});

  PointFate classify(Complex z) const;

  const MapParams& params() const { return params_; }
  const ClassifierConfig& config() const { return cfg_; }
  const std::vector<KnownCycle>& cycles() const { return cycles_; }
  std::optional<int> w_cycle_id() const;
  double escape_radius() const { return radius_; }
  /// Id of the known cycle containing `z` (within 1e-6), if any.
  std::optional<int> match_cycle(const std::vector<Complex>& cycle) const;

  static constexpr double kCaptureRadius = 1e-6;

 private:
  MapParams params_;
  ClassifierConfig cfg_;
  double radius_;
  std::vector<KnownCycle> cycles_;
  std::vector<std::pair<Complex, int>> capture_points_;
};

}  // namespace ratdyn
