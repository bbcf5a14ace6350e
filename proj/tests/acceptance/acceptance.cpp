// Prints one PASS/FAIL line per acceptance criterion; exits non-zero on any failure.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "ratdyn/repro.hpp"

using namespace ratdyn;
namespace fs = std::filesystem;

namespace {

const std::map<int, std::string> kTitles{
    {1, "exotic-map constants: (k, w) recovery and attracting fixed point at 2"},
    {2, "milestone roots at k = 0.85"},
    {3, "boundary events at k = 0.85"},
    {4, "qualitative milestone at (0.85, 1.63045)"},
    {5, "k = 0.81 gallery"},
    {6, "small-residue asymptotics, one and two poles"},
    {7, "potential functional equations and figure-eight transition"},
    {8, "full-shift verification"},
    {9, "connectivity monitors on the gallery and 50 random slice maps"},
    {10, "repro output identical for 1 and 8 workers"},
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Empty when both directories hold the same files with the same bytes.
std::string compare_dirs(const fs::path& a, const fs::path& b) {
  std::map<std::string, fs::path> fa, fb;
  for (const auto& e : fs::directory_iterator(a)) fa[e.path().filename().string()] = e.path();
  for (const auto& e : fs::directory_iterator(b)) fb[e.path().filename().string()] = e.path();
  if (fa.size() != fb.size()) return "file count " + std::to_string(fa.size()) + " vs " + std::to_string(fb.size());
  for (const auto& [name, path] : fa) {
    const auto it = fb.find(name);
    if (it == fb.end()) return "missing " + name;
    if (slurp(path) != slurp(it->second)) return "differs: " + name;
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "ratdyn_acceptance";
  fs::remove_all(root);

  ReproConfig parallel;
  parallel.jobs = 8;
  parallel.out_dir = (root / "jobs8").string();
  const ReproResult r = run_repro(parallel);

  bool all = true;
  for (int c = 1; c <= 9; ++c) {
    const bool pass = r.criterion_pass(c);
    all = all && pass;
    std::printf("criterion %2d: %s  %s\n", c, pass ? "PASS" : "FAIL", kTitles.at(c).c_str());
    for (const ReproCheck& chk : r.checks)
      if (chk.criterion == c) std::printf("    %-28s %s  %s\n", chk.id.c_str(), chk.pass ? "ok  " : "FAIL", chk.detail.c_str());
  }

  ReproConfig serial = parallel;
  serial.jobs = 1;
  serial.out_dir = (root / "jobs1").string();
  run_repro(serial);
  const std::string diff = compare_dirs(root / "jobs1", root / "jobs8");
  const bool same = diff.empty();
  all = all && same;
  std::printf("criterion 10: %s  %s\n", same ? "PASS" : "FAIL", kTitles.at(10).c_str());
  std::printf("    %-28s %s  %s\n", "byte_identical_outputs", same ? "ok  " : "FAIL",
              same ? (std::to_string(r.files.size()) + " files compared").c_str() : diff.c_str());
  return all ? 0 : 1;
}
