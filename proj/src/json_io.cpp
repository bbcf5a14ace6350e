#include "ratdyn/json_io.hpp"

#include "ratdyn/error.hpp"

namespace ratdyn {

namespace {

template <class T>
Json encode_all(const std::vector<T>& xs) {
  Json out = Json::array();
  for (const T& x : xs) out.push_back(encode(x));
  return out;
}

Json strings(const std::vector<std::string>& xs) { return Json(xs); }

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::Validation, what); }

}  // namespace

Json encode(Complex z) { return Json::array({z.real(), z.imag()}); }

Json encode(const Point& z) { return z.is_infinite() ? Json("inf") : encode(z.value()); }

Json encode(const Window& w) { return Json::array({w.re_min, w.im_min, w.re_max, w.im_max}); }

Json encode(const MapParams& p) {
  Json j{{"a", encode(p.a)}, {"b", encode(p.b)}, {"c", encode(p.c)}};
  if (p.degenerate) j["degenerate"] = true;
  return j;
}

Json encode(const KWParams& q) { return Json{{"k", q.k}, {"w", encode(q.w)}}; }

Json encode(const OrbitFate& f) {
  Json j{{"kind", to_string(f.kind)}, {"iterations", f.iterations}};
  switch (f.kind) {
    case FateKind::ToInfinity:
      j["escape_time"] = f.escape_time;
      break;
    case FateKind::ToCycle: {
      j["period"] = f.period;
      Json pts = Json::array();
      for (Complex z : f.cycle) pts.push_back(encode(z));
      j["points"] = pts;
      j["multiplier"] = encode(f.multiplier);
      break;
    }
    case FateKind::Undecided:
      break;
  }
  return j;
}

Json encode(const CriticalFates& f) {
  return Json{{"params", encode(f.map.params)},
              {"kw", encode(f.map.kw)},
              {"critical_points", {{"u", encode(f.map.u)}, {"v", encode(f.map.v)}, {"w", encode(f.map.w)}}},
              {"fates", {{"u", encode(f.u)}, {"v", encode(f.v)}, {"w", encode(f.w)}}},
              {"color",
               {{"code", f.color.code()},
                {"u", to_string(f.color.u)},
                {"v", to_string(f.color.v)},
                {"u_undecided", f.color.u_undecided},
                {"v_undecided", f.color.v_undecided}}}};
}

Json encode(const FixedPointData& f) {
  return Json{{"point", encode(f.point)},
              {"multiplier", encode(f.multiplier)},
              {"class", to_string(f.cls)},
              {"residual", f.residual}};
}

Json encode(const NewtonReport& r) {
  return Json{{"is_newton", r.is_newton},
              {"tolerance", r.tolerance},
              {"small_multiplier_count", r.small_multiplier_count},
              {"fixed_points", encode_all(r.fixed_points)}};
}

Json encode(const EventResult& r) {
  Json checks = Json::object();
  for (const auto& [name, ok] : r.checks) checks[name] = ok;
  Json j{{"k", r.k},
         {"w", r.w},
         {"event", to_string(r.event)},
         {"residual", r.residual},
         {"bracket", {r.bracket_lo, r.bracket_hi}},
         {"iterations", r.iterations},
         {"checks", checks},
         {"all_checks_pass", r.all_checks_pass()}};
  if (!r.predicate.empty()) j["predicate"] = r.predicate;
  return j;
}

Json encode(const MilestoneCheck& m) {
  return Json{{"k", m.k},
              {"w", m.w},
              {"u", m.u},
              {"v", m.v},
              {"f2v", m.f2v},
              {"f4v", m.f4v},
              {"f4v_attracted_to_w", m.f4v_attracted_to_w},
              {"f4v_in_immediate_basin", m.f4v_in_immediate_basin},
              {"f2v_below_u", m.f2v_below_u}};
}

Json encode(const CodingReport& r) {
  return Json{{"component_count", r.component_count},
              {"transition_matrix", r.transition_matrix},
              {"full_shift", r.full_shift},
              {"depth", r.depth},
              {"exhaustive", r.exhaustive},
              {"words", r.words},
              {"cylinder_diameters", r.cylinder_diameters},
              {"diameters_decreasing", r.diameters_decreasing},
              {"contraction_ratio", r.contraction_ratio},
              {"injectivity", {{"pass", r.injectivity_pass}, {"total", r.injectivity_total}}},
              {"min_separation", r.min_separation},
              {"recheck", {{"mismatches", r.recheck_mismatches}, {"total", r.recheck_total}}}};
}

Json encode(const CensusEntry& e) { return Json{{"name", e.name}, {"fate", e.fate}, {"region", e.region}}; }

Json encode(const ImmediateBasin& b) {
  return Json{{"attractor", b.attractor},
              {"present", b.present},
              {"complement_components", b.complement_components},
              {"residents", strings(b.residents)},
              {"distinct_critical_values", b.distinct_critical_values},
              {"holds_extra_critical", b.holds_extra_critical},
              {"holds_two_values", b.holds_two_values}};
}

Json encode(const ConnectivityLevel& l) {
  return Json{{"resolution", l.resolution},
              {"infinity_components", l.infinity_components},
              {"complement_components", l.complement_components},
              {"pole_in_immediate_basin", l.pole_in_immediate_basin},
              {"census", encode_all(l.census)},
              {"basins", encode_all(l.basins)}};
}

Json encode(const ConnectivityReport& r) {
  return Json{{"infinity_components", r.infinity_components},
              {"complement_components", r.complement_components},
              {"pole_in_immediate_basin", r.pole_in_immediate_basin},
              {"criticals_in_infinity_basin", strings(r.criticals_in_infinity_basin)},
              {"criticals_in_immediate_basin", strings(r.criticals_in_immediate_basin)},
              {"criticals_in_w_basin", strings(r.criticals_in_w_basin)},
              {"census", encode_all(r.census)},
              {"basins", encode_all(r.basins)},
              {"resolution_stable", r.resolution_stable},
              {"monitors_ok", r.monitors_ok()},
              {"coarse", encode(r.coarse)},
              {"fine", encode(r.fine)}};
}

Json encode(const ExoticVerdict& v) {
  Json ev = Json::array();
  for (const Evidence& e : v.evidence)
    ev.push_back(Json{{"name", e.name}, {"mandatory", e.mandatory}, {"pass", e.pass}, {"detail", e.detail}});
  return Json{{"is_exotic", v.is_exotic},
              {"evidence", ev},
              {"caveats", strings(v.caveats)},
              {"connectivity", encode(v.connectivity)}};
}

Json encode(const PotentialValue& v) {
  Json j{{"iterations_used", v.iterations_used}, {"converged", v.converged}};
  if (std::isinf(v.value))
    j["value"] = "inf";
  else
    j["value"] = v.value;
  return j;
}

Json encode(const FigureEightResult& r) {
  return Json{{"t0", r.t0},
              {"verified", r.verified},
              {"critical", encode(r.critical)},
              {"critical_label", r.critical_label},
              {"count_above", r.count_above},
              {"count_below", r.count_below},
              {"total_above", r.total_above},
              {"total_below", r.total_below}};
}

Json encode(const SaddleSpectrum& s) {
  auto entries = [](const std::vector<SaddleEntry>& xs) {
    Json out = Json::array();
    for (const SaddleEntry& e : xs) {
      Json j{{"point", encode(e.point)}, {"origin", e.origin}, {"depth", e.depth}};
      if (std::isinf(e.level))
        j["level"] = "inf";
      else
        j["level"] = e.level;
      out.push_back(j);
    }
    return out;
  };
  return Json{{"saddles", entries(s.saddles)}, {"attractor_preimages", entries(s.attractor_preimages)}};
}

Json encode(const LevelCurve& c) {
  Json comps = Json::array();
  for (const Polyline& pl : c.components) {
    Json pts = Json::array();
    for (Complex z : pl.points) pts.push_back(encode(z));
    comps.push_back(Json{{"closed", pl.closed}, {"points", pts}});
  }
  return Json{{"level", c.level},
              {"count", c.count()},
              {"grid_resolution", c.grid_resolution},
              {"window", encode(c.grid.window)},
              {"components", comps}};
}

Json mask_sidecar(const BasinMask& mask) {
  Json cycles = Json::array();
  for (std::size_t i = 0; i < mask.cycles.size(); ++i) {
    Json pts = Json::array();
    for (Complex z : mask.cycles[i].points) pts.push_back(encode(z));
    cycles.push_back(Json{{"label", mask.label_for_cycle(static_cast<int>(i))},
                          {"period", mask.cycles[i].points.size()},
                          {"points", pts},
                          {"is_w", mask.cycles[i].is_w}});
  }
  return Json{{"width", mask.labels.width},
              {"height", mask.labels.height},
              {"window", encode(mask.grid.window)},
              {"row_order", "top row first, row 0 at the largest imaginary part"},
              {"codes",
               {{"infinity", BasinMask::kInfinity},
                {"w", BasinMask::kW},
                {"other_base", BasinMask::kOtherBase},
                {"undecided", BasinMask::kUndecided}}},
              {"cycles", cycles},
              {"label_fractions", mask.label_fractions()}};
}

Complex decode_complex(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && (j.size() == 1 || j.size() == 2)) {
    for (const Json& x : j)
      if (!x.is_number()) invalid("complex components must be numbers");
    return Complex(j[0].get<double>(), j.size() == 2 ? j[1].get<double>() : 0.0);
  }
  if (j.is_object() && j.contains("re")) {
    for (const auto& [key, val] : j.items()) {
      if (key != "re" && key != "im") invalid("unknown complex key '" + key + "'");
      if (!val.is_number()) invalid("complex components must be numbers");
    }
    return Complex(j["re"].get<double>(), j.value("im", 0.0));
  }
  invalid("expected a number, [re, im] or {\"re\":x,\"im\":y}");
}

KWParams decode_kw(const Json& j) {
  if (!j.is_object()) invalid("parameters must be a JSON object");
  for (const auto& [key, val] : j.items())
    if (key != "k" && key != "w") invalid("unknown parameter key '" + key + "'");
  if (!j.contains("k") || !j.contains("w")) invalid("slice parameters need both k and w");
  if (!j["k"].is_number()) invalid("k must be a number");
  return KWParams{j["k"].get<double>(), decode_complex(j["w"])};
}

MapParams decode_params(const Json& j) {
  if (!j.is_object()) invalid("parameters must be a JSON object");
  if (j.contains("k") || j.contains("w")) return from_kw(decode_kw(j));
  for (const auto& [key, val] : j.items())
    if (key != "a" && key != "b" && key != "c" && key != "degenerate") invalid("unknown parameter key '" + key + "'");
  if (j.value("degenerate", false)) {
    if (!j.contains("c")) invalid("degenerate mode needs c");
    return MapParams::quadratic(decode_complex(j["c"]));
  }
  if (!j.contains("a") || !j.contains("b") || !j.contains("c")) invalid("map parameters need a, b and c");
  return MapParams::make(decode_complex(j["a"]), decode_complex(j["b"]), decode_complex(j["c"]));
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ratdyn
