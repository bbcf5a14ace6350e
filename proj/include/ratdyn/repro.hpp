#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ratdyn/family.hpp"

namespace ratdyn {

/// The degree-3 real map with all finite critical orbits escaping used for the
/// full 3-shift check, and the coarse grid it was selected from.
struct CantorSearch {
  std::vector<double> a_values;
  std::vector<double> b_values;
  std::vector<double> c_values;
  MapParams chosen;
};
const CantorSearch& cantor_search();

struct ReproCheck {
  int criterion = 0;
  std::string id;
  bool pass = false;
  std::string detail;
};

struct ReproConfig {
  int jobs = 1;
  std::string out_dir = ".";
  bool write_files = true;
  /// Criteria to run; empty means all.
  std::vector<int> only;
};

struct ReproResult {
  std::vector<ReproCheck> checks;
  std::vector<std::string> files;  ///< written outputs, relative to out_dir
  bool all_pass() const;
  /// Per-criterion verdict: every check of the criterion passed.
  bool criterion_pass(int criterion) const;
};

/// Runs the milestone suite (criteria 1 to 9). Failures of individual checks,
/// including thrown errors, are recorded rather than propagated.
ReproResult run_repro(const ReproConfig& cfg, const std::function<void(const ReproCheck&)>& on_check = {});

/// Fixed-width text table, one row per check.
std::string summary_table(const ReproResult& r);

}  // namespace ratdyn
