#include <doctest.h>

#include <json.hpp>
#include <fstream>
#include <sstream>

#include "sclab/cli.hpp"
#include "test_util.hpp"

using namespace sclab;
using namespace sclab::test;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

// A small configuration so whole-enumeration commands stay fast.
std::string write_tiny_config() {
  const std::string path = "/tmp/sclab_tiny_config.json";
  std::ofstream f(path);
  f << R"({"vars":[{"name":"h","level":"high"},{"name":"l","level":"low"}],
           "vmax":2,"fuel":8,"term_depth":3,"ctx_depth":2,"literal_pool":[0,1,2]})";
  return path;
}

} // namespace

TEST_CASE("run prints the documented trace") {
  const CliResult r =
      cli({"run", "--lang", "target", "--term", "obs(h := 42)", "--store", "h=1,l=0"});
  CHECK(r.code == 0);
  CHECK(r.out == "{h=1,l=0} ! {h=42,l=0} OK\n");

  // The JSON form mirrors the tokens and carries the fired rules.
  const CliResult j =
      cli({"--json", "run", "--lang", "target", "--term", "obs(h := 42)", "--store", "h=1,l=0"});
  CHECK(j.code == 0);
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed.at("result").at("trace") ==
        nlohmann::json({"{h=1,l=0}", "!", "{h=42,l=0}", "OK"}));
  CHECK(parsed.at("result").at("rules") == nlohmann::json({"bang1"}));
}

TEST_CASE("the shipped fixture configuration matches the built-in default") {
  const Config from_file = load_config(std::string(SCLAB_SOURCE_DIR) + "/configs/fixture.json");
  CHECK(from_file.universe == fixture_config().universe);
}

TEST_CASE("check preserve exit codes follow the verdict") {
  const std::string cfg = write_tiny_config();

  const CliResult fails =
      cli({"--config", cfg, "check", "preserve", "--compiler", "identity", "--hyperprop", "ni"});
  CHECK(fails.code == 1);
  CHECK(fails.out.find("fails") != std::string::npos);
  CHECK(fails.out.find("witness") != std::string::npos);

  const CliResult holds =
      cli({"--config", cfg, "check", "preserve", "--compiler", "sandbox", "--hyperprop", "ni"});
  CHECK(holds.code == 0);
  CHECK(holds.out.find("holds") != std::string::npos);
}

TEST_CASE("usage and configuration errors exit with 2") {
  CHECK(cli({"check", "nope"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"run", "--term", "h := 1"}).code == 2);                       // missing --store
  CHECK(cli({"run", "--term", "h :=", "--store", "h=0,l=0"}).code == 2);   // syntax error
  CHECK(cli({"--config", "/nonexistent.json", "repro", "--list"}).code == 2);
  CHECK(cli({"--vmax", "1", "run", "--term", "h := 42", "--store", "h=0,l=0"}).code == 2);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::string cfg = write_tiny_config();
  const std::vector<std::string> cmd = {"--config", cfg,          "--json",     "check",
                                        "preserve", "--compiler", "identity",   "--hyperprop",
                                        "ni"};
  const CliResult first = cli(cmd);
  const CliResult second = cli(cmd);
  CHECK(first.code == 1);
  CHECK(first.out == second.out);

  // Timings are opt-in so they do not break determinism.
  const auto j = nlohmann::json::parse(first.out);
  CHECK(!j.contains("wall_ms"));
}

TEST_CASE("failing witnesses replay through beh") {
  const std::string cfg = write_tiny_config();
  const CliResult fails = cli({"--config", cfg, "--json", "check", "preserve", "--compiler",
                               "identity", "--hyperprop", "ni"});
  REQUIRE(fails.code == 1);
  const auto j = nlohmann::json::parse(fails.out);
  const auto& w = j.at("result").at("witness");
  const std::string compiled = w.at("compiled").get<std::string>();
  const std::string context = w.at("context").get<std::string>();
  const std::string trace1 = w.at("trace1").get<std::string>();
  const std::string store1 = w.at("store1").get<std::string>();

  // Re-running the compiled program in the offending context from the
  // witness store reproduces the reported trace.
  const CliResult replay = cli({"--config", cfg, "beh", "--lang", "target", "--term", compiled,
                                "--ctx", context});
  CHECK(replay.code == 0);
  CHECK(replay.out.find(trace1) != std::string::npos);
  // Pin the first line to the witness store's own run.
  const CliResult single = cli({"--config", cfg, "run", "--lang", "target", "--term",
                                "obs(" + compiled + ")", "--store", store1});
  CHECK(single.code == 0);
}

TEST_CASE("repro rows can be listed and run individually") {
  const CliResult list = cli({"repro", "--list"});
  CHECK(list.code == 0);
  CHECK(list.out.find("lemma-identity-ni") != std::string::npos);

  const std::string cfg = write_tiny_config();
  const CliResult row = cli({"--config", cfg, "repro", "hygiene-roundtrip"});
  CHECK(row.code == 0);
  CHECK(row.out.find("[ OK ] hygiene-roundtrip") != std::string::npos);

  const CliResult unknown = cli({"--config", cfg, "repro", "nope"});
  CHECK(unknown.code == 2);
}

TEST_CASE("tau-tilde reports members and the corollary verdict") {
  const std::string cfg = write_tiny_config();
  const CliResult r = cli({"--config", cfg, "--json", "tau-tilde", "--compiler", "sandbox",
                           "--hyperprop", "ni", "--limit", "3"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("result").at("corollary").at("agree").get<bool>());
  CHECK(j.at("result").at("members").size() <= 3);
  CHECK(j.at("result").at("distinct_members").get<std::size_t>() > 0);
}

TEST_CASE("explicit hyperproperty files load") {
  const std::string cfg = write_tiny_config();
  const std::string path = "/tmp/sclab_explicit.json";
  {
    // The behavior of `skip` in the tiny universe: one silent step per
    // store, nine stores.
    nlohmann::json member = nlohmann::json::array();
    for (int h = 0; h <= 2; ++h) {
      for (int l = 0; l <= 2; ++l) {
        const std::string s =
            "{h=" + std::to_string(h) + ",l=" + std::to_string(l) + "}";
        member.push_back(s + " " + s + " OK");
      }
    }
    std::ofstream f(path);
    f << nlohmann::json{{"behaviors", {member}}};
  }
  const CliResult holds = cli({"--config", cfg, "check", "ni-robust", "--lang", "source",
                               "--term", "skip", "--hyperprop", "explicit:" + path});
  CHECK(holds.code == 0);
  const CliResult fails = cli({"--config", cfg, "check", "ni-robust", "--lang", "source",
                               "--term", "l := 1", "--hyperprop", "explicit:" + path});
  CHECK(fails.code == 1);
}
