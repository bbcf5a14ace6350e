#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ratdyn/orbits.hpp"

namespace ratdyn {

/// Grid over the (k, w) slice with real w; both ranges include their endpoints.
struct ScanGrid {
  double k_min = 0.80;
  double k_max = 0.90;
  double w_min = 0.2;
  double w_max = 2.2;
  int nk = 64;
  int nw = 64;
  ClassifierConfig classifier;
  int jobs = 1;

  void validate() const;
  double k_at(int i) const { return k_min + (k_max - k_min) * i / (nk - 1); }
  double w_at(int j) const { return w_min + (w_max - w_min) * j / (nw - 1); }
};

struct ScanCell {
  double k = 0.0;
  double w = 0.0;
  bool degenerate = false;  ///< b = 0 at this cell (k = 1 or w = 0)
  NineColor color;
  int u_period = 0;
  int v_period = 0;

  /// Bit 0: u undecided, bit 1: v undecided, bit 2: degenerate cell.
  int undecided_flags() const;
  /// Nine-colour code in [0, 8], or −1 for a degenerate cell.
  int code() const { return degenerate ? -1 : color.code(); }
};

/// cells[j·nk + i] holds (k_at(i), w_at(j)).
struct NineColorMap {
  ScanGrid grid;
  std::vector<ScanCell> cells;
  double undecided_fraction = 0.0;

  const ScanCell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * grid.nk + i]; }
};

NineColorMap scan(const ScanGrid& grid);

/// Header "k,w,u_fate,v_fate,color,u_period,v_period,undecided"; rows by w, then k.
std::string scan_csv(const NineColorMap& map);

enum class EventKind { Period2V, FixedU, FixedV, Transition };
std::string to_string(EventKind kind);

struct EventResult {
  double k = 0.0;
  double w = 0.0;
  EventKind event = EventKind::Transition;
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  std::string predicate;  ///< transitions only
  std::vector<std::pair<std::string, bool>> checks;

  bool all_checks_pass() const;
};

inline constexpr double kEventRootTolerance = 1e-10;
inline constexpr double kTransitionWidth = 1e-6;

/// Real residuals on the slice: f²(v) − v, f(u) − u, f(v) − v as functions of w.
double residual_period2_v(double k, double w);
double residual_fixed_u(double k, double w);
double residual_fixed_v(double k, double w);

/// Root of f²(v) = v by bisection and secant polish; checks that u escapes.
/// Throws NoSignChange, SolverFailure.
EventResult solve_period2_v(double k, double lo, double hi, const ClassifierConfig& cfg = {});
/// Root of f(u) = u; checks is_newton. Throws NoSignChange, SolverFailure.
EventResult solve_fixed_u(double k, double lo, double hi);
/// Root of f(v) = v; checks is_newton. Throws NoSignChange, SolverFailure.
EventResult solve_fixed_v(double k, double lo, double hi);

using WPredicate = std::function<bool(double w)>;

/// Bisection on a predicate that differs at the bracket ends, to width < 1e-6
/// (at most 100000 halvings). Throws SamePredicateValue.
EventResult bisect_event(double k, const WPredicate& predicate, double lo, double hi, const std::string& name = "custom");

/// Classifier defaults for transition predicates (max_iter = 100000).
ClassifierConfig transition_classifier();

/// v's orbit neither escapes nor reaches w (undecided counts as bounded).
WPredicate predicate_v_bounded(double k, const ClassifierConfig& cfg = transition_classifier());
/// u's orbit neither escapes nor reaches w (undecided counts as bounded).
WPredicate predicate_u_other(double k, const ClassifierConfig& cfg = transition_classifier());

/// Real-line placement of f²(v) and the fate of f⁴(v).
struct MilestoneCheck {
  double k = 0.0;
  double w = 0.0;
  double u = 0.0;
  double v = 0.0;
  double f2v = 0.0;
  double f4v = 0.0;
  bool f4v_attracted_to_w = false;
  bool f4v_in_immediate_basin = false;  ///< the real segment [f⁴(v), w] is attracted to w
  bool f2v_below_u = false;
};

MilestoneCheck milestone_check(double k, double w, const ClassifierConfig& cfg = {});

/// A real map of the full family whose finite critical orbits all escape.
struct CantorCandidate {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  /// Extremes of |f'| over the depth-7 backward orbit of f(0); a small
  /// maximum keeps deep cylinders resolvable in double precision.
  double max_derivative = 0.0;
  double min_derivative = 0.0;
};

/// Coarse scan over the product of the given values, sorted by max_derivative.
std::vector<CantorCandidate> cantor_scan(const std::vector<double>& a_values, const std::vector<double>& b_values,
                                         const std::vector<double>& c_values, const ClassifierConfig& cfg = {});

}  // namespace ratdyn
