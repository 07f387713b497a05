// Compares the OpenMP kernels against the serial reference loops on the
// heavy exhaustive checks and reports wall times plus agreement.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sclab/compilers.hpp"
#include "sclab/config.hpp"
#include "sclab/enumerate.hpp"
#include "sclab/gsos.hpp"
#include "sclab/parallel.hpp"
#include "sclab/tau_tilde.hpp"

using namespace sclab;

namespace {

struct BenchCase {
  std::string name;
  std::function<std::string()> body;  // returns a result fingerprint
};

double time_ms(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string fingerprint(const Verdict& v) {
  std::string out = v.holds ? "holds" : "fails";
  if (v.witness) {
    for (const auto& [k, val] : v.witness->fields) out += "|" + k + "=" + val;
  }
  return out;
}

} // namespace

int main(int argc, char** argv) {
  Config cfg = fixture_config();
  // Default to the reduced bounds the heavier acceptance rows use, so a
  // full run stays in the tens of seconds. Pass --full for fixture bounds.
  uint32_t depth = 3;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--full") depth = cfg.universe.term_depth;
  }
  Universe u = cfg.universe;
  u.term_depth = depth;

  std::vector<BenchCase> cases;
  cases.push_back({"beh-families", [&] {
                     const auto fam = behavior_families(CompilerId::Sandbox, u,
                                                        enumerate_terms(u, Lang::Source));
                     return std::to_string(fam.source.size());
                   }});
  cases.push_back(
      {"check-fac-identity", [&] { return fingerprint(check_fac(CompilerId::Identity, u,
                                                                FacDirection::Preserve)); }});
  cases.push_back({"check-preserve-sandbox-ni", [&] {
                     return fingerprint(
                         check_preservation(CompilerId::Sandbox, Hyperproperty::ni(), u));
                   }});
  cases.push_back({"check-modl-sandbox-erase", [&] {
                     return fingerprint(check_modl(SyntaxMap::SandboxAssigns, BehMap::Erase, u));
                   }});
  cases.push_back({"check-rhp-sandbox-backtranslation", [&] {
                     return fingerprint(check_rhp(CompilerId::Sandbox, u,
                                                  RhpMode::Backtranslation));
                   }});
  cases.push_back(
      {"check-layered-fuel16", [&] { return fingerprint(check_layered(u, 16)); }});

  std::printf("%-36s %12s %12s %9s  %s\n", "check", "serial ms", "openmp ms", "speedup",
              "agree");
  for (const auto& c : cases) {
    std::string serial_result, parallel_result;
    par::set_enabled(false);
    const double serial_ms = time_ms([&] { serial_result = c.body(); });
    par::set_enabled(par::compiled_with_openmp());
    const double parallel_ms = time_ms([&] { parallel_result = c.body(); });
    const bool agree = serial_result == parallel_result;
    std::printf("%-36s %12.1f %12.1f %8.2fx  %s\n", c.name.c_str(), serial_ms, parallel_ms,
                parallel_ms > 0 ? serial_ms / parallel_ms : 0.0, agree ? "yes" : "NO");
    if (!agree) {
      std::printf("  serial:   %s\n  parallel: %s\n", serial_result.c_str(),
                  parallel_result.c_str());
      return 1;
    }
  }
  if (!par::compiled_with_openmp()) {
    std::printf("note: built without OpenMP; both columns ran the serial kernels\n");
  }
  return 0;
}
