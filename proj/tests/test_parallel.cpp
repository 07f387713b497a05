#include <doctest.h>

#include <atomic>

#include "sclab/compilers.hpp"
#include "sclab/gsos.hpp"
#include "sclab/parallel.hpp"
#include "test_util.hpp"

using namespace sclab;
using namespace sclab::test;

namespace {

struct ParallelGuard {
  bool saved = par::enabled();
  ~ParallelGuard() { par::set_enabled(saved); }
};

} // namespace

TEST_CASE("first_failure returns the minimum failing index in both modes") {
  ParallelGuard guard;
  auto failing = [](std::size_t i) { return i == 97 || i == 531 || i == 98; };

  par::set_enabled(false);
  CHECK(par::first_failure(1000, failing) == 97);
  CHECK(par::first_failure_serial(1000, failing) == 97);
  CHECK(!par::first_failure(50, failing).has_value());

  par::set_enabled(true);
  CHECK(par::first_failure(1000, failing) == 97);
  CHECK(!par::first_failure(0, failing).has_value());
}

TEST_CASE("for_each_index covers every index exactly once") {
  ParallelGuard guard;
  for (bool parallel : {false, true}) {
    par::set_enabled(parallel);
    std::vector<std::atomic<int>> hits(257);
    par::for_each_index(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("checkers give identical verdicts and witnesses in both modes") {
  ParallelGuard guard;
  const Universe u = tiny_universe();

  auto render_witness = [](const Verdict& v) {
    std::string out = v.holds ? "holds" : "fails";
    if (v.witness) {
      for (const auto& [k, val] : v.witness->fields) out += "|" + k + "=" + val;
    }
    return out;
  };

  par::set_enabled(false);
  const std::string pres_serial =
      render_witness(check_preservation(CompilerId::Identity, Hyperproperty::ni(), u));
  const std::string rhp_serial =
      render_witness(check_rhp(CompilerId::Identity, u, RhpMode::Search));
  const std::string modl_serial =
      render_witness(check_modl(SyntaxMap::SandboxAssigns, BehMap::Incl, u));
  const std::string fac_serial =
      render_witness(check_fac(CompilerId::Sandbox, u, FacDirection::Both));

  par::set_enabled(par::compiled_with_openmp());
  const std::string pres_parallel =
      render_witness(check_preservation(CompilerId::Identity, Hyperproperty::ni(), u));
  const std::string rhp_parallel =
      render_witness(check_rhp(CompilerId::Identity, u, RhpMode::Search));
  const std::string modl_parallel =
      render_witness(check_modl(SyntaxMap::SandboxAssigns, BehMap::Incl, u));
  const std::string fac_parallel =
      render_witness(check_fac(CompilerId::Sandbox, u, FacDirection::Both));

  CHECK(pres_serial == pres_parallel);
  CHECK(rhp_serial == rhp_parallel);
  CHECK(modl_serial == modl_parallel);
  CHECK(fac_serial == fac_parallel);
}
