#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ratdyn/cli.hpp"
#include "ratdyn/error.hpp"
#include "ratdyn/exotic.hpp"
#include "ratdyn/json_io.hpp"
#include "ratdyn/potential.hpp"
#include "ratdyn/scan.hpp"
#include "ratdyn/symbolic.hpp"

namespace py = pybind11;
using namespace ratdyn;

namespace {

MapParams params_of(const std::string& json) { return decode_params(Json::parse(json)); }

Window window_of(const std::vector<double>& v) {
  if (v.size() != 4) throw Error(ErrorKind::Validation, "window takes re_min, im_min, re_max, im_max");
  Window w{v[0], v[1], v[2], v[3]};
  w.validate();
  return w;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core: reports are returned as canonical JSON text.";

  // Messages start with the error kind, e.g. "HypothesisFailed: ...".
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  m.def("params", [](const std::string& j) { return dump(encode(params_of(j))); },
        "Normalised {a, b, c} for {a, b, c} or {k, w} input.");
  m.def("to_kw", [](const std::string& j) { return dump(encode(to_kw(params_of(j)))); });
  m.def("escape_radius", [](const std::string& j) { return escape_radius(params_of(j)); });
  m.def("classify", [](const std::string& j, int max_iter) {
    ClassifierConfig cc;
    cc.max_iter = max_iter;
    return dump(encode(critical_fates(mark(params_of(j)), cc)));
  }, py::arg("params"), py::arg("max_iter") = ClassifierConfig{}.max_iter);
  m.def("fixed_points", [](const std::string& j, double tol) { return dump(encode(is_newton(params_of(j), tol))); },
        py::arg("params"), py::arg("tol") = 1e-2);
  m.def("green", [](const std::string& j, std::complex<double> z) { return dump(encode(green_infinity(params_of(j), z))); });
  m.def("solve_event", [](double k, const std::string& event, double lo, double hi) {
    if (event == "period2-v") return dump(encode(solve_period2_v(k, lo, hi)));
    if (event == "fixed-u") return dump(encode(solve_fixed_u(k, lo, hi)));
    if (event == "fixed-v") return dump(encode(solve_fixed_v(k, lo, hi)));
    if (event == "v-bounded") return dump(encode(bisect_event(k, predicate_v_bounded(k), lo, hi, event)));
    if (event == "u-other") return dump(encode(bisect_event(k, predicate_u_other(k), lo, hi, event)));
    throw Error(ErrorKind::Validation, "unknown event '" + event + "'");
  });
  m.def("basin_mask", [](const std::string& j, const std::vector<double>& window, int resolution, int jobs,
                          std::optional<Complex> w) {
    const MapParams p = params_of(j);
    if (!w) {
      try {
        w = mark(p).w;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotInFamilySlice) throw;
      }
    }
    MaskConfig mc;
    mc.jobs = jobs;
    BasinMask mask;
    {
      py::gil_scoped_release release;
      mask = basin_mask(p, w, window_of(window), resolution, mc);
    }
    py::array_t<std::uint8_t> out({mask.labels.height, mask.labels.width});
    std::copy(mask.labels.data.begin(), mask.labels.data.end(), out.mutable_data());
    return py::make_tuple(out, dump(mask_sidecar(mask)));
  }, py::arg("params"), py::arg("window"), py::arg("resolution"), py::arg("jobs") = 1,
     py::arg("w") = py::none());
  m.def("exotic_verdict", [](const std::string& j, int resolution, int jobs) {
    ExoticConfig ec;
    ec.resolution = resolution;
    ec.mask.jobs = jobs;
    const MapParams p = params_of(j);
    py::gil_scoped_release release;
    return dump(encode(exotic_verdict(p, ec)));
  }, py::arg("params"), py::arg("resolution") = ExoticConfig{}.resolution, py::arg("jobs") = 1);
  m.def("verify_shift", [](const std::string& j, int depth, int resolution, int jobs) {
    const MapParams p = params_of(j);
    TrapConfig tc;
    tc.resolution = resolution;
    tc.jobs = jobs;
    ShiftConfig sc;
    sc.depth = depth;
    sc.jobs = jobs;
    py::gil_scoped_release release;
    return dump(encode(verify_full_shift(p, build_trap(p, tc), sc)));
  }, py::arg("params"), py::arg("depth") = ShiftConfig{}.depth, py::arg("resolution") = TrapConfig{}.resolution,
     py::arg("jobs") = 1);
  m.def("scan_csv", [](double k_min, double k_max, double w_min, double w_max, int nk, int nw, int jobs) {
    ScanGrid g;
    g.k_min = k_min;
    g.k_max = k_max;
    g.w_min = w_min;
    g.w_max = w_max;
    g.nk = nk;
    g.nw = nw;
    g.jobs = jobs;
    py::gil_scoped_release release;
    return scan_csv(scan(g));
  }, py::arg("k_min"), py::arg("k_max"), py::arg("w_min"), py::arg("w_max"), py::arg("nk"), py::arg("nw"),
     py::arg("jobs") = 1);
  m.def("cli", [](const std::vector<std::string>& args) {
    std::vector<std::string> full{"ratdyn"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "Run one command line; returns (exit_code, stdout, stderr).");
}
