#include "ratdyn/exotic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ratdyn/error.hpp"
#include "ratdyn/potential.hpp"

namespace ratdyn {

void MaskConfig::validate() const {
  classifier.validate();
  if (!(thin_factor >= 0.0) || !std::isfinite(thin_factor)) throw Error(ErrorKind::Validation, "thin_factor must be >= 0");
  if (jobs < 1) throw Error(ErrorKind::Validation, "jobs must be >= 1");
}

std::uint8_t BasinMask::label_for_cycle(int id) const {
  if (w_cycle && id == *w_cycle) return kW;
  int rank = 0;
  for (const KnownCycle& c : cycles) {
    if (c.id == id) break;
    if (!(w_cycle && c.id == *w_cycle)) ++rank;
  }
  return static_cast<std::uint8_t>(std::min(kOtherBase + rank, 254));
}

std::optional<std::uint8_t> BasinMask::label_at(Complex z) const {
  const auto px = grid.pixel_of(z);
  if (!px) return std::nullopt;
  return labels.at(px->first, px->second);
}

std::vector<double> BasinMask::label_fractions() const {
  std::vector<double> out(256, 0.0);
  for (std::uint8_t l : labels.data) out[l] += 1.0;
  for (double& x : out) x /= static_cast<double>(labels.data.size());
  return out;
}

BasinMask basin_mask(const MapParams& p, std::optional<Complex> w, const Window& window, int resolution,
                     const MaskConfig& cfg) {
  p.validate();
  cfg.validate();
  if (resolution < 16) throw Error(ErrorKind::Validation, "resolution must be >= 16");
  const Grid grid = Grid::square(window, resolution);
  const BasinClassifier bc(p, w, cfg.classifier);

  BasinMask mask;
  mask.grid = grid;
  mask.config = cfg;
  mask.cycles = bc.cycles();
  mask.w_cycle = bc.w_cycle_id();
  mask.labels = Raster<std::uint8_t>(grid.width, grid.height, BasinMask::kUndecided);
  mask.thin = Raster<std::uint8_t>(grid.width, grid.height, 0);
  const double threshold = cfg.thin_factor * std::max(grid.dx(), grid.dy());

  parallel_rows(grid.height, cfg.jobs, [&](int j) {
    for (int i = 0; i < grid.width; ++i) {
      const PointFate f = bc.classify(grid.centre(i, j));
      switch (f.label) {
        case PointFate::Label::Infinity:
          mask.labels.at(i, j) = BasinMask::kInfinity;
          mask.thin.at(i, j) = f.distance_estimate < threshold;
          break;
        case PointFate::Label::Cycle:
          mask.labels.at(i, j) = mask.label_for_cycle(f.cycle_id);
          break;
        case PointFate::Label::Undecided:
          break;
      }
    }
  });
  return mask;
}

Raster<std::uint8_t> julia_pixels(const BasinMask& mask) {
  const Raster<std::uint8_t>& L = mask.labels;
  Raster<std::uint8_t> out(L.width, L.height, 0);
  for (int j = 0; j < L.height; ++j) {
    for (int i = 0; i < L.width; ++i) {
      const std::uint8_t own = L.at(i, j);
      bool hit = own == BasinMask::kUndecided;
      for (int dj = -1; dj <= 1 && !hit; ++dj) {
        for (int di = -1; di <= 1 && !hit; ++di) {
          if (!L.inside(i + di, j + dj)) continue;
          const std::uint8_t l = L.at(i + di, j + dj);
          hit = l != own || l == BasinMask::kUndecided;
        }
      }
      out.at(i, j) = hit;
    }
  }
  return out;
}

std::vector<NamedCritical> named_criticals(const MapParams& p) {
  std::vector<NamedCritical> out;
  bool slice = false;
  if (!p.degenerate) {
    try {
      const MarkedMap m = mark(p);
      out = {{"u", Point(m.u)}, {"v", Point(m.v)}, {"w", Point(m.w)}};
      slice = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotInFamilySlice) throw;
    }
  }
  if (!slice)
    for (const CriticalPoint& cp : critical_points(p).finite_points) out.push_back({cp.label, Point(cp.z)});
  out.push_back({"inf", Point::infinity()});
  return out;
}

namespace {

bool on_border(const Grid& g, int i, int j) { return i == 0 || j == 0 || i == g.width - 1 || j == g.height - 1; }

bool same_value(const Point& x, const Point& y) {
  if (x.is_infinite() || y.is_infinite()) return x.is_infinite() && y.is_infinite();
  return std::abs(x.value() - y.value()) < 1e-9 * (1.0 + std::abs(x.value()));
}

/// Complement of `basin` in the window, 8-connected. Components touching the
/// border count once when the region beyond the window lies in the complement.
int complement_count(const Raster<std::uint8_t>& basin, const Raster<std::uint8_t>& julia, const Grid& grid,
                     bool outside_in_basin) {
  Raster<std::uint8_t> comp(basin.width, basin.height, 0);
  for (std::size_t k = 0; k < comp.data.size(); ++k) comp.data[k] = !basin.data[k];
  const ComponentLabels cl = label_components(comp, Connectivity::Eight);
  std::vector<char> meets(cl.count, 0), border(cl.count, 0);
  for (int j = 0; j < grid.height; ++j) {
    for (int i = 0; i < grid.width; ++i) {
      const int l = cl.labels.at(i, j);
      if (l < 0) continue;
      if (julia.at(i, j)) meets[l] = 1;
      if (on_border(grid, i, j)) border[l] = 1;
    }
  }
  int count = outside_in_basin ? 0 : 1;  // the region beyond the window
  for (int l = 0; l < cl.count; ++l)
    if (!(border[l] && !outside_in_basin)) count += meets[l];
  return count;
}

struct FateInfo {
  std::string name;
  std::string fate;
  Point point;
  Point value;
};

std::vector<FateInfo> orbit_fates(const MapParams& p, std::optional<Complex> w,
                                  const std::vector<NamedCritical>& criticals, const ClassifierConfig& cc) {
  std::vector<FateInfo> out;
  for (const NamedCritical& c : criticals) {
    FateInfo f{c.name, "inf", c.point, Point::infinity()};
    if (!c.point.is_infinite()) {
      f.value = eval(p, c.point);
      const OrbitFate of = classify_orbit(p, c.point, cc);
      if (of.kind == FateKind::ToInfinity) {
        f.fate = "inf";
      } else if (of.kind == FateKind::Undecided) {
        f.fate = "undecided";
      } else {
        f.fate = (w && fate_class(of, *w) == CriticalFate::W) ? "w" : "other";
      }
    }
    out.push_back(f);
  }
  return out;
}

ConnectivityLevel analyse(const MapParams& p, std::optional<Complex> w, const BasinMask& mask,
                          const std::vector<FateInfo>& fates) {
  const Grid& g = mask.grid;
  ConnectivityLevel lv;
  lv.resolution = g.width;
  const Raster<std::uint8_t> julia = julia_pixels(mask);

  Raster<std::uint8_t> robust(g.width, g.height, 0);
  for (std::size_t k = 0; k < robust.data.size(); ++k)
    robust.data[k] = mask.labels.data[k] == BasinMask::kInfinity && !mask.thin.data[k];
  const ComponentLabels inf = label_components(robust, Connectivity::Four);
  std::vector<char> touches(inf.count, 0);
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i)
      if (inf.labels.at(i, j) >= 0 && on_border(g, i, j)) touches[inf.labels.at(i, j)] = 1;
  int border_comps = 0;
  for (char t : touches) border_comps += t;
  lv.infinity_components = inf.count - border_comps + (border_comps > 0 ? 1 : 0);

  Raster<std::uint8_t> immediate(g.width, g.height, 0);
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i) {
      const int l = inf.labels.at(i, j);
      immediate.at(i, j) = l >= 0 && touches[l];
    }
  if (!p.degenerate) {
    if (const auto px = g.pixel_of(p.a)) lv.pole_in_immediate_basin = immediate.at(px->first, px->second);
  }

  // Immediate basin of w: the W component holding w's pixel.
  Raster<std::uint8_t> wbasin(g.width, g.height, 0);
  bool w_present = false;
  if (w) {
    if (const auto px = g.pixel_of(*w); px && mask.labels.at(px->first, px->second) == BasinMask::kW) {
      Raster<std::uint8_t> wl(g.width, g.height, 0);
      for (std::size_t k = 0; k < wl.data.size(); ++k) wl.data[k] = mask.labels.data[k] == BasinMask::kW;
      const ComponentLabels wc = label_components(wl, Connectivity::Four);
      const int target = wc.labels.at(px->first, px->second);
      for (std::size_t k = 0; k < wl.data.size(); ++k) wbasin.data[k] = wc.labels.data[k] == target;
      w_present = true;
    }
  }

  for (const FateInfo& f : fates) {
    CensusEntry e{f.name, f.fate, "outside"};
    if (f.point.is_infinite()) {
      e.region = "immediate_infinity";
    } else if (const auto px = g.pixel_of(f.point.value())) {
      const auto [i, j] = *px;
      const std::uint8_t l = mask.labels.at(i, j);
      if (l == BasinMask::kInfinity) {
        bool imm = immediate.at(i, j);
        // A thin pixel still belongs to the immediate basin when it borders it.
        if (!imm && mask.thin.at(i, j))
          for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
            imm = imm || (immediate.inside(i + di, j + dj) && immediate.at(i + di, j + dj));
        e.region = imm ? "immediate_infinity" : "infinity";
      } else if (l == BasinMask::kW) {
        e.region = "w";
      } else if (l == BasinMask::kUndecided) {
        e.region = "undecided";
      } else {
        e.region = "other";
      }
    }
    lv.census.push_back(e);
  }

  auto describe = [&](const std::string& attractor, const Raster<std::uint8_t>& basin, bool outside_in_basin,
                      bool present) {
    ImmediateBasin b;
    b.attractor = attractor;
    b.present = present;
    if (!present) return b;
    b.complement_components = complement_count(basin, julia, g, outside_in_basin);
    std::vector<Point> values;
    for (std::size_t k = 0; k < fates.size(); ++k) {
      const FateInfo& f = fates[k];
      bool inside = false;
      if (attractor == "inf") {
        inside = lv.census[k].region == "immediate_infinity";
      } else if (!f.point.is_infinite()) {
        const auto px = g.pixel_of(f.point.value());
        inside = px && basin.at(px->first, px->second);
      }
      if (!inside) continue;
      b.residents.push_back(f.name);
      if (std::none_of(values.begin(), values.end(), [&](const Point& v) { return same_value(v, f.value); }))
        values.push_back(f.value);
    }
    b.distinct_critical_values = static_cast<int>(values.size());
    if (b.complement_components >= 2) {
      const auto extra = std::count_if(b.residents.begin(), b.residents.end(),
                                       [&](const std::string& n) { return n != attractor; });
      b.holds_extra_critical = extra >= 1;
      b.holds_two_values = b.distinct_critical_values >= 2;
    }
    return b;
  };
  lv.basins.push_back(describe("inf", immediate, true, true));
  lv.basins.push_back(describe("w", wbasin, false, w_present));
  lv.complement_components = lv.basins.front().complement_components;
  return lv;
}

bool same_regions(const std::vector<CensusEntry>& a, const std::vector<CensusEntry>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k].region != b[k].region) return false;
  return true;
}

}  // namespace

bool ConnectivityReport::monitors_ok() const {
  for (const ConnectivityLevel* lv : {&coarse, &fine})
    for (const ImmediateBasin& b : lv->basins)
      if (!b.holds_extra_critical || !b.holds_two_values) return false;
  return true;
}

ConnectivityReport connectivity(const MapParams& p, std::optional<Complex> w, const BasinMask& mask,
                                const std::vector<NamedCritical>& criticals) {
  const Window& win = mask.grid.window;
  auto covered = [&](Complex z) {
    return z.real() >= win.re_min + 0.5 && z.real() <= win.re_max - 0.5 && z.imag() >= win.im_min + 0.5 &&
           z.imag() <= win.im_max - 0.5;
  };
  for (const NamedCritical& c : criticals)
    if (!c.point.is_infinite() && !covered(c.point.value()))
      throw Error(ErrorKind::Validation, "window does not cover critical point " + c.name + " with margin 0.5");
  if (!p.degenerate && !covered(p.a)) throw Error(ErrorKind::Validation, "window does not cover the pole with margin 0.5");

  const std::vector<FateInfo> fates = orbit_fates(p, w, criticals, mask.config.classifier);
  const BasinMask fine_mask = basin_mask(p, w, win, mask.grid.width * 2, mask.config);

  ConnectivityReport r;
  r.coarse = analyse(p, w, mask, fates);
  r.fine = analyse(p, w, fine_mask, fates);
  r.infinity_components = r.coarse.infinity_components;
  r.complement_components = r.coarse.complement_components;
  r.pole_in_immediate_basin = r.coarse.pole_in_immediate_basin;
  r.census = r.coarse.census;
  r.basins = r.coarse.basins;
  for (std::size_t k = 0; k < fates.size(); ++k) {
    if (fates[k].fate == "inf") r.criticals_in_infinity_basin.push_back(fates[k].name);
    if (fates[k].fate == "w") r.criticals_in_w_basin.push_back(fates[k].name);
    if (r.census[k].region == "immediate_infinity") r.criticals_in_immediate_basin.push_back(fates[k].name);
  }
  r.resolution_stable = r.coarse.pole_in_immediate_basin == r.fine.pole_in_immediate_basin &&
                        (r.coarse.complement_components >= 2) == (r.fine.complement_components >= 2) &&
                        same_regions(r.coarse.census, r.fine.census);
  return r;
}

ExoticVerdict exotic_verdict(const MapParams& p, const ExoticConfig& cfg) {
  p.validate();
  if (p.degenerate) throw Error(ErrorKind::DegenerateFamily, "the exotic verdict needs the degree-3 map");
  const MarkedMap m = mark(p);
  const Window window = cfg.window ? *cfg.window : Window::square(0.0, escape_radius(p));
  const BasinMask mask = basin_mask(p, m.w, window, cfg.resolution, cfg.mask);

  ExoticVerdict v;
  v.connectivity = connectivity(p, m.w, mask, named_criticals(p));
  const ConnectivityReport& c = v.connectivity;
  v.caveats.push_back("grid connectivity is a heuristic, not a proof of (non-)simple connectivity");

  auto fate_of = [&](const std::string& name) {
    for (const CensusEntry& e : c.census)
      if (e.name == name) return e.fate;
    return std::string("undecided");
  };
  auto add = [&](std::string name, bool mandatory, bool pass, std::string detail) {
    v.evidence.push_back({std::move(name), mandatory, pass, std::move(detail)});
  };

  {
    const std::string fu = fate_of("u"), fv = fate_of("v"), fw = fate_of("w");
    add("u_escapes_v_w_bounded", true, fu == "inf" && fv != "inf" && fw != "inf" && fv != "undecided",
        "u:" + fu + " v:" + fv + " w:" + fw);
  }
  {
    std::ostringstream d;
    d << "pole in immediate basin: " << (c.pole_in_immediate_basin ? "yes" : "no")
      << "; robust infinity components: " << c.infinity_components;
    add("infinity_basin_connected", true, c.pole_in_immediate_basin, d.str());
  }
  add("infinity_basin_not_simply_connected", true, c.complement_components >= 2,
      "complement components meeting Julia pixels: " + std::to_string(c.complement_components));
  {
    std::vector<std::string> got = c.criticals_in_infinity_basin;
    std::sort(got.begin(), got.end());
    std::string d;
    for (const auto& s : got) d += (d.empty() ? "" : ",") + s;
    add("two_criticals_in_infinity_basin", true, got == std::vector<std::string>{"inf", "u"}, d);
  }
  {
    const Point fu = eval(p, Point(m.u));
    std::ostringstream d;
    d << "f(u) = ";
    if (fu.is_infinite()) d << "inf";
    else d << fu.value().real() << (fu.value().imag() < 0 ? "" : "+") << fu.value().imag() << "i";
    add("two_distinct_critical_values", false, !fu.is_infinite(), d.str());
  }
  if (cfg.figure_eight) {
    try {
      const FigureEightResult fe = figure_eight_level(p);
      std::ostringstream d;
      d << "t0 = " << fe.t0 << ", components near the critical point " << fe.count_above << " -> " << fe.count_below;
      add("figure_eight_level", false, fe.verified, d.str());
    } catch (const Error& e) {
      add("figure_eight_level", false, false, e.what());
    }
  }
  add("resolution_stable", true, c.resolution_stable,
      "complement components " + std::to_string(c.coarse.complement_components) + " at " +
          std::to_string(c.coarse.resolution) + ", " + std::to_string(c.fine.complement_components) + " at " +
          std::to_string(c.fine.resolution));
  if (!c.resolution_stable) {
    std::ostringstream d;
    d << "connectivity changes between resolution " << c.coarse.resolution << " and " << c.fine.resolution
      << " (pole in immediate basin " << c.coarse.pole_in_immediate_basin << " vs " << c.fine.pole_in_immediate_basin
      << ", complement components " << c.coarse.complement_components << " vs " << c.fine.complement_components << ")";
    throw Error(ErrorKind::UnstableAtResolution, d.str());
  }
  v.is_exotic = std::all_of(v.evidence.begin(), v.evidence.end(), [](const Evidence& e) { return !e.mandatory || e.pass; });
  return v;
}

}  // namespace ratdyn
