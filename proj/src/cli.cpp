#include "ratdyn/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ratdyn/error.hpp"
#include "ratdyn/exotic.hpp"
#include "ratdyn/json_io.hpp"
#include "ratdyn/potential.hpp"
#include "ratdyn/render.hpp"
#include "ratdyn/repro.hpp"
#include "ratdyn/scan.hpp"
#include "ratdyn/symbolic.hpp"

namespace ratdyn {

namespace {

/// Reads --config files as flat JSON objects whose keys are long option names
/// of the selected subcommand.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(std::string section) : section_(std::move(section)) {}

  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    Json j = Json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || opt->get_configurable() == false) continue;
      const std::string name = opt->get_lnames().front();
      if (name == "help" || name == "config") continue;
      std::vector<std::string> vals = opt->results();
      if (vals.empty() && default_also && !opt->get_default_str().empty()) vals = {opt->get_default_str()};
      if (vals.empty()) continue;
      j[name] = vals.size() == 1 ? Json(vals.front()) : Json(vals);
    }
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, val] : j.items()) {
      CLI::ConfigItem item;
      if (!section_.empty()) item.parents = {section_};
      item.name = key;
      if (val.is_array()) {
        for (const Json& x : val) item.inputs.push_back(scalar(x, key));
      } else if (val.is_object()) {
        // Structured parameters, e.g. {"params": {"k": 0.85, "w": 1.88}}.
        item.inputs.push_back(val.dump());
      } else {
        item.inputs.push_back(scalar(val, key));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  static std::string scalar(const Json& x, const std::string& key) {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_boolean()) return x.get<bool>() ? "true" : "false";
    if (x.is_number()) return x.dump();
    throw CLI::ConversionError("config key '" + key + "' has an unsupported value");
  }

  std::string section_;
};

struct MapOptions {
  std::string params;
  std::string a, b, c;
  std::string w;
  std::optional<double> k;
  bool degenerate = false;
};

struct ClassifierOptions {
  int max_iter = ClassifierConfig{}.max_iter;
  double cycle_tol = ClassifierConfig{}.cycle_tol;
  int max_period = ClassifierConfig{}.max_period;
  std::optional<double> escape_radius;
};

struct Options {
  MapOptions map;
  ClassifierOptions classifier;
  int jobs = 1;
  std::vector<double> window;
  int resolution = 0;
  std::string out;
  std::string mask_out;
  double thin_factor = MaskConfig{}.thin_factor;
  double newton_tol = 1e-2;
  // scan
  std::vector<double> k_range{ScanGrid{}.k_min, ScanGrid{}.k_max};
  std::vector<double> w_range{ScanGrid{}.w_min, ScanGrid{}.w_max};
  int nk = ScanGrid{}.nk;
  int nw = ScanGrid{}.nw;
  std::string csv;
  // events
  std::string event;
  std::vector<double> bracket;
  // shift
  int depth = ShiftConfig{}.depth;
  int samples = ShiftConfig{}.samples;
  std::uint64_t seed = 0;
  double solver_tol = ShiftConfig{}.solver_tol;
  bool no_recheck = false;
  // exotic
  bool no_figure_eight = false;
  // potential
  std::string z;
  std::optional<double> level;
  std::optional<int> saddles;
  bool figure_eight = false;
  double epsilon = FigureEightConfig{}.epsilon;
  int green_max_iter = GreenConfig{}.max_iter;
  // repro
  std::string out_dir;
  std::vector<int> criteria;
};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::Validation, what); }

Complex parse_complex(const std::string& s, const std::string& what) {
  std::vector<double> parts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      invalid(what + " must be 're' or 're,im', got '" + s + "'");
    }
  }
  if (parts.empty() || parts.size() > 2) invalid(what + " must be 're' or 're,im', got '" + s + "'");
  return Complex(parts[0], parts.size() == 2 ? parts[1] : 0.0);
}

MapParams resolve_map(const MapOptions& m) {
  const bool kw = m.k || !m.w.empty();
  const bool abc = !m.a.empty() || !m.b.empty() || !m.c.empty();
  if (!m.params.empty()) {
    if (kw || abc) invalid("--params cannot be combined with --k/--w or --a/--b/--c");
    Json j;
    try {
      j = Json::parse(m.params);
    } catch (const Json::exception& e) {
      invalid(std::string("--params is not valid JSON: ") + e.what());
    }
    return decode_params(j);
  }
  if (kw && abc) invalid("give either --k/--w or --a/--b/--c, not both");
  if (kw) {
    if (!m.k || m.w.empty()) invalid("slice parameters need both --k and --w");
    return from_kw(KWParams{*m.k, parse_complex(m.w, "--w")});
  }
  if (m.degenerate) {
    if (m.c.empty()) invalid("--degenerate needs --c");
    return MapParams::quadratic(parse_complex(m.c, "--c"));
  }
  if (m.a.empty() || m.b.empty() || m.c.empty()) invalid("map parameters need --a, --b and --c (or --k and --w)");
  return MapParams::make(parse_complex(m.a, "--a"), parse_complex(m.b, "--b"), parse_complex(m.c, "--c"));
}

ClassifierConfig classifier(const ClassifierOptions& o) {
  ClassifierConfig c;
  c.max_iter = o.max_iter;
  c.cycle_tol = o.cycle_tol;
  c.max_period = o.max_period;
  c.escape_radius_override = o.escape_radius;
  c.validate();
  return c;
}

std::optional<Window> window_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  if (v.size() != 4) invalid("--window takes re_min im_min re_max im_max");
  Window w{v[0], v[1], v[2], v[3]};
  w.validate();
  return w;
}

MaskConfig mask_config(const Options& o) {
  MaskConfig m;
  m.classifier = classifier(o.classifier);
  m.thin_factor = o.thin_factor;
  m.jobs = o.jobs;
  m.validate();
  return m;
}

ScanGrid scan_grid(const Options& o) {
  if (o.k_range.size() != 2 || o.w_range.size() != 2) invalid("--k-range and --w-range take two values");
  ScanGrid g;
  g.k_min = o.k_range[0];
  g.k_max = o.k_range[1];
  g.w_min = o.w_range[0];
  g.w_max = o.w_range[1];
  g.nk = o.nk;
  g.nw = o.nw;
  g.classifier = classifier(o.classifier);
  g.jobs = o.jobs;
  g.validate();
  return g;
}

/// Default image name for slice maps; other maps need an explicit --out.
std::string julia_name(const MapParams& p, int resolution) {
  try {
    const KWParams q = to_kw(p);
    const std::string w =
        q.w.imag() == 0.0 ? format_number(q.w.real()) : format_number(q.w.real()) + "," + format_number(q.w.imag());
    return output_path(output_name("julia", format_number(q.k), w, resolution));
  } catch (const Error&) {
    invalid("map is off the (k, w) slice; pass --out");
  }
}

void add_map(CLI::App* app, Options& o) {
  app->add_option("--params", o.map.params, "Parameters as JSON: {\"a\":[re,im],\"b\":..,\"c\":..} or {\"k\":x,\"w\":y}");
  app->add_option("--a", o.map.a, "Pole position, 're' or 're,im'");
  app->add_option("--b", o.map.b, "Residue, 're' or 're,im'");
  app->add_option("--c", o.map.c, "Constant term, 're' or 're,im'");
  app->add_option("--k", o.map.k, "Slice parameter k");
  app->add_option("--w", o.map.w, "Superattracting fixed point w, 're' or 're,im'");
  app->add_flag("--degenerate", o.map.degenerate, "Quadratic z^2 + c mode (b = 0)");
}

void add_classifier(CLI::App* app, Options& o) {
  app->add_option("--max-iter", o.classifier.max_iter, "Orbit iteration cap")->capture_default_str();
  app->add_option("--cycle-tol", o.classifier.cycle_tol, "Cycle return tolerance")->capture_default_str();
  app->add_option("--max-period", o.classifier.max_period, "Longest detectable period")->capture_default_str();
  app->add_option("--escape-radius", o.classifier.escape_radius, "Override the escape radius");
}

void add_window(CLI::App* app, Options& o, int default_resolution) {
  o.resolution = default_resolution;
  app->add_option("--window", o.window, "re_min im_min re_max im_max")->expected(4);
  app->add_option("--resolution", o.resolution, "Pixels per side")->capture_default_str();
}

void add_grid(CLI::App* app, Options& o) {
  app->add_option("--k-range", o.k_range, "k_min k_max")->expected(2)->capture_default_str();
  app->add_option("--w-range", o.w_range, "w_min w_max")->expected(2)->capture_default_str();
  app->add_option("--nk", o.nk, "Grid points along k")->capture_default_str();
  app->add_option("--nw", o.nw, "Grid points along w")->capture_default_str();
}

void emit(std::ostream& out, const Json& j) { out << dump(j); }

void write_or_print(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_file(path, text);
}

int run_classify(const Options& o, std::ostream& out) {
  const MapParams p = resolve_map(o.map);
  const ClassifierConfig cc = classifier(o.classifier);
  try {
    emit(out, encode(critical_fates(mark(p), cc)));
    return 0;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotInFamilySlice) throw;
  }
  Json pts = Json::array();
  for (const NamedCritical& nc : named_criticals(p)) {
    Json entry{{"name", nc.name}, {"point", encode(nc.point)}};
    entry["fate"] = nc.point.is_infinite() ? Json{{"kind", "fixed"}} : encode(classify_orbit(p, nc.point, cc));
    pts.push_back(entry);
  }
  emit(out, Json{{"params", encode(p)}, {"critical_points", pts}});
  return 0;
}

int run_fixed_points(const Options& o, std::ostream& out) {
  const MapParams p = resolve_map(o.map);
  Json j = encode(is_newton(p, o.newton_tol));
  j["params"] = encode(p);
  emit(out, j);
  return 0;
}

int run_render_julia(const Options& o, std::ostream& out) {
  const MapParams p = resolve_map(o.map);
  std::optional<Complex> w;
  try {
    w = mark(p).w;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotInFamilySlice) throw;
  }
  const Window win = window_of(o.window).value_or(Window::square(0.0, escape_radius(p)));
  const std::string path = o.out.empty() ? julia_name(p, o.resolution) : o.out;
  const BasinMask mask = render_julia(p, w, win, o.resolution, Palette::dynamical(), path, mask_config(o));
  Json j{{"image", path},
         {"width", mask.labels.width},
         {"height", mask.labels.height},
         {"window", encode(win)},
         {"label_fractions", mask.label_fractions()}};
  if (!o.mask_out.empty()) {
    write_file(o.mask_out + ".pgm", encode_pgm(mask.labels));
    write_file(o.mask_out + ".json", dump(mask_sidecar(mask)));
    j["mask"] = o.mask_out + ".pgm";
    j["sidecar"] = o.mask_out + ".json";
  }
  emit(out, j);
  return 0;
}

int run_render_scan(const Options& o, std::ostream& out) {
  const ScanGrid g = scan_grid(o);
  const NineColorMap map = scan(g);
  const std::string path =
      o.out.empty() ? output_path(output_name("scan", format_number(g.k_min) + "-" + format_number(g.k_max),
                                              format_number(g.w_min) + "-" + format_number(g.w_max), g.nk))
                    : o.out;
  render_scan(map, Palette::nine_color(), path);
  Json j{{"image", path}, {"width", g.nk}, {"height", g.nw}, {"undecided_fraction", map.undecided_fraction}};
  if (!o.csv.empty()) {
    write_file(o.csv, scan_csv(map));
    j["csv"] = o.csv;
  }
  emit(out, j);
  return 0;
}

int run_scan(const Options& o, std::ostream& out) {
  write_or_print(out, o.out, scan_csv(scan(scan_grid(o))));
  return 0;
}

int run_solve_event(const Options& o, std::ostream& out) {
  if (!o.map.k) invalid("--k is required");
  if (o.bracket.size() != 2) invalid("--bracket takes lo hi");
  const double k = *o.map.k, lo = o.bracket[0], hi = o.bracket[1];
  const ClassifierConfig cc = classifier(o.classifier);
  EventResult r;
  if (o.event == "period2-v")
    r = solve_period2_v(k, lo, hi, cc);
  else if (o.event == "fixed-u")
    r = solve_fixed_u(k, lo, hi);
  else if (o.event == "fixed-v")
    r = solve_fixed_v(k, lo, hi);
  else if (o.event == "v-bounded")
    r = bisect_event(k, predicate_v_bounded(k), lo, hi, "v-bounded");
  else if (o.event == "u-other")
    r = bisect_event(k, predicate_u_other(k), lo, hi, "u-other");
  else
    invalid("unknown event '" + o.event + "'");
  emit(out, encode(r));
  return 0;
}

int run_verify_shift(const Options& o, std::ostream& out) {
  const MapParams p = resolve_map(o.map);
  TrapConfig tc;
  tc.window = window_of(o.window);
  tc.resolution = o.resolution;
  tc.classifier = classifier(o.classifier);
  tc.jobs = o.jobs;
  const TrapRegion trap = build_trap(p, tc);
  ShiftConfig sc;
  sc.depth = o.depth;
  sc.samples = o.samples;
  sc.seed = o.seed;
  sc.solver_tol = o.solver_tol;
  sc.recheck_resolution = !o.no_recheck;
  sc.jobs = o.jobs;
  Json j = encode(verify_full_shift(p, trap, sc));
  j["params"] = encode(p);
  j["t_star"] = trap.t_star;
  j["level_interval"] = {trap.level_low, trap.level_high};
  if (trap.cut) j["cut"] = {trap.cut->start, trap.cut->end};
  emit(out, j);
  return 0;
}

int run_exotic(const Options& o, std::ostream& out) {
  const MapParams p = resolve_map(o.map);
  ExoticConfig ec;
  ec.window = window_of(o.window);
  ec.resolution = o.resolution;
  ec.mask = mask_config(o);
  ec.figure_eight = !o.no_figure_eight;
  Json j = encode(exotic_verdict(p, ec));
  j["params"] = encode(p);
  emit(out, j);
  return 0;
}

int run_potential(const Options& o, std::ostream& out) {
  const MapParams p = resolve_map(o.map);
  Json j{{"params", encode(p)}};
  bool any = false;
  if (!o.z.empty()) {
    GreenConfig gc;
    gc.max_iter = o.green_max_iter;
    const Complex z = parse_complex(o.z, "--z");
    j["z"] = encode(z);
    j["green"] = encode(green_infinity(p, z, gc));
    any = true;
  }
  const Window win = window_of(o.window).value_or(Window::square(0.0, escape_radius(p)));
  if (o.level) {
    j["level_curve"] = encode(trace_level(p, *o.level, win, o.resolution, o.jobs));
    any = true;
  }
  if (o.saddles) {
    j["saddle_levels"] = encode(saddle_levels(p, *o.saddles));
    any = true;
  }
  if (o.figure_eight) {
    FigureEightConfig fc;
    fc.window = window_of(o.window);
    fc.resolution = o.resolution;
    fc.epsilon = o.epsilon;
    fc.jobs = o.jobs;
    j["figure_eight"] = encode(figure_eight_level(p, fc));
    any = true;
  }
  if (!any) invalid("potential needs at least one of --z, --level, --saddles, --figure-eight");
  emit(out, j);
  return 0;
}

int run_repro_paper(const Options& o, std::ostream& out) {
  ReproConfig rc;
  rc.jobs = o.jobs;
  rc.out_dir = o.out_dir.empty() ? output_path("repro-paper") : o.out_dir;
  rc.only = o.criteria;
  const ReproResult r = run_repro(rc);
  out << summary_table(r);
  return r.all_pass() ? 0 : 1;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamics of z^2 + c + b/(z - a): orbit classification, potentials, symbolic coding, exotic basins "
               "and parameter scans."};
  app.require_subcommand(1);
  app.allow_config_extras(false);
  app.fallthrough();
  std::string section;
  for (int i = 1; i < argc && section.empty(); ++i) {
    static const std::set<std::string> names{"classify",    "fixed-points", "render-julia", "render-scan",
                                             "scan",        "solve-event",  "verify-shift", "exotic",
                                             "potential",   "repro-paper"};
    if (names.count(argv[i])) section = argv[i];
  }
  app.config_formatter(std::make_shared<JsonConfig>(section));
  app.set_config("--config", "", "JSON file of option values for the subcommand; command-line flags take precedence");
  Options o;
  std::map<CLI::App*, std::function<int(const Options&, std::ostream&)>> handlers;

  auto sub = [&](const std::string& name, const std::string& help,
                 std::function<int(const Options&, std::ostream&)> fn) {
    CLI::App* s = app.add_subcommand(name, help);
    s->allow_config_extras(false);
    s->add_option("--jobs", o.jobs, "Worker threads for grid workloads")->capture_default_str()->check(
        CLI::PositiveNumber);
    handlers[s] = std::move(fn);
    return s;
  };

  CLI::App* classify = sub("classify", "Fates of the critical orbits", run_classify);
  add_map(classify, o);
  add_classifier(classify, o);

  CLI::App* fixed = sub("fixed-points", "Fixed points, multipliers and the Newton-map test", run_fixed_points);
  add_map(fixed, o);
  fixed->add_option("--newton-tol", o.newton_tol, "Multiplier bound for the Newton test")->capture_default_str();

  CLI::App* rj = sub("render-julia", "Basin picture of the dynamical plane (PPM)", run_render_julia);
  add_map(rj, o);
  add_classifier(rj, o);
  add_window(rj, o, 512);
  rj->add_option("--out", o.out, "Image path; default julia_k<k>_w<w>_<res>.ppm");
  rj->add_option("--mask-out", o.mask_out, "Also write <prefix>.pgm labels and <prefix>.json sidecar");
  rj->add_option("--thin-factor", o.thin_factor, "Distance-estimate threshold in pixels")->capture_default_str();

  CLI::App* rs = sub("render-scan", "Nine-colour parameter-plane picture (PPM)", run_render_scan);
  add_grid(rs, o);
  add_classifier(rs, o);
  rs->add_option("--out", o.out, "Image path");
  rs->add_option("--csv", o.csv, "Also write the scan CSV");

  CLI::App* sc = sub("scan", "Nine-colour parameter-plane scan (CSV)", run_scan);
  add_grid(sc, o);
  add_classifier(sc, o);
  sc->add_option("--out", o.out, "CSV path; default standard output");

  CLI::App* se = sub("solve-event", "Locate a parameter event on a line of constant k", run_solve_event);
  se->add_option("--k", o.map.k, "Slice parameter k")->required();
  se->add_option("--event", o.event, "period2-v, fixed-u, fixed-v, v-bounded or u-other")
      ->required()
      ->check(CLI::IsMember({"period2-v", "fixed-u", "fixed-v", "v-bounded", "u-other"}));
  se->add_option("--bracket", o.bracket, "lo hi")->expected(2)->required();
  add_classifier(se, o);

  CLI::App* vs = sub("verify-shift", "Check the full-shift coding of a Cantor Julia set", run_verify_shift);
  add_map(vs, o);
  add_classifier(vs, o);
  add_window(vs, o, TrapConfig{}.resolution);
  vs->add_option("--depth", o.depth, "Word length")->capture_default_str();
  vs->add_option("--samples", o.samples, "Random words when exhaustive search is too large")->capture_default_str();
  vs->add_option("--seed", o.seed, "Seed for random words")->capture_default_str();
  vs->add_option("--solver-tol", o.solver_tol, "Preimage residual bound")->capture_default_str();
  vs->add_flag("--no-recheck", o.no_recheck, "Skip the double-resolution recheck");

  CLI::App* ex = sub("exotic", "Exotic-basin verdict with evidence", run_exotic);
  add_map(ex, o);
  add_classifier(ex, o);
  add_window(ex, o, ExoticConfig{}.resolution);
  ex->add_option("--thin-factor", o.thin_factor, "Distance-estimate threshold in pixels")->capture_default_str();
  ex->add_flag("--no-figure-eight", o.no_figure_eight, "Skip the figure-eight level check");

  CLI::App* pot = sub("potential", "Green function, level curves and saddle levels", run_potential);
  add_map(pot, o);
  add_window(pot, o, FigureEightConfig{}.resolution);
  pot->add_option("--z", o.z, "Evaluate G at 're' or 're,im'");
  pot->add_option("--level", o.level, "Trace the level curve G = t");
  pot->add_option("--saddles", o.saddles, "Saddle levels up to this preimage depth");
  pot->add_flag("--figure-eight", o.figure_eight, "Level through the escaping critical point");
  pot->add_option("--epsilon", o.epsilon, "Relative band for the figure-eight check")->capture_default_str();
  pot->add_option("--green-max-iter", o.green_max_iter, "Iteration cap for G")->capture_default_str();

  CLI::App* rp = sub("repro-paper", "Run the milestone suite and write a summary table", run_repro_paper);
  rp->add_option("--out-dir", o.out_dir, "Output directory; default repro-paper under $RATDYN_OUT_DIR");
  rp->add_option("--criteria", o.criteria, "Run only these criteria (1-9)")->check(CLI::Range(1, 9));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ConfigError& e) {
    err << "error: unknown or malformed config entry (" << e.what() << ")\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      std::ostringstream help, unused;
      app.exit(e, help, unused);
      out << help.str();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  for (const auto& [s, fn] : handlers) {
    if (!s->parsed()) continue;
    try {
      return fn(o, out);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return exit_code_for(e.kind());
    } catch (const Json::exception& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}

}  // namespace ratdyn
