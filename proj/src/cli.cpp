#include "sclab/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>

#include "sclab/enumerate.hpp"
#include "sclab/gsos.hpp"
#include "sclab/insertion.hpp"
#include "sclab/parallel.hpp"
#include "sclab/report.hpp"
#include "sclab/repro.hpp"
#include "sclab/tau_tilde.hpp"
#include "sclab/text.hpp"

namespace sclab {

namespace {

Lang lang_from_name(const std::string& name) {
  if (name == "source") return Lang::Source;
  if (name == "target") return Lang::Target;
  throw ConfigError("unknown language '" + name + "' (expected source|target)");
}

Hyperproperty hyperprop_from_name(const std::string& name, const Universe& u) {
  if (name == "ni") return Hyperproperty::ni();
  if (name == "top") return Hyperproperty::top();
  if (name == "never:H") return Hyperproperty::never_event(Event::H);
  if (name == "never:!") return Hyperproperty::never_event(Event::Bang);
  if (name.rfind("explicit:", 0) == 0) {
    const std::string path = name.substr(9);
    std::ifstream in(path);
    if (!in) throw ConfigError("hyperprop: cannot open '" + path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("hyperprop: ") + e.what());
    }
    std::vector<Behavior> behaviors;
    for (const auto& member : j.at("behaviors")) {
      Behavior b;
      for (const auto& line : member) {
        b.traces.push_back(parse_trace(line.get<std::string>(), u));
      }
      behaviors.push_back(std::move(b));
    }
    return Hyperproperty::explicit_set(
        std::make_shared<ExplicitSet>(ExplicitSet::from_behaviors(behaviors)));
  }
  throw ConfigError("unknown hyperproperty '" + name +
                    "' (expected ni|top|never:H|never:!|explicit:<file>)");
}

nlohmann::json trace_json(const Trace& t, const Universe& u) {
  return nlohmann::json(trace_tokens(t, u));
}

nlohmann::json behavior_json(const Behavior& b, const Universe& u) {
  nlohmann::json j = nlohmann::json::array();
  for (const Trace& t : b.traces) j.push_back(trace_json(t, u));
  return j;
}

struct CliOptions {
  Config config;
  bool json = false;
  bool timings = false;
};

void emit(const Report& report, const CliOptions& opt, std::ostream& out) {
  if (opt.json) {
    out << report.to_json(opt.timings).dump(2) << "\n";
  } else {
    out << report.text;
    if (opt.timings) out << "wall_ms: " << report.wall_ms << "\n";
  }
}

Report verdict_report(const std::string& command, const Verdict& v, const CliOptions& opt) {
  Report r;
  r.command = command;
  r.bounds = config_to_json(opt.config);
  r.ok = v.holds;
  r.body = verdict_to_json(v);
  r.text = command + ": " + verdict_to_text(v);
  return r;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"secure-compilation workbench for two WHILE languages"};
  app.require_subcommand(1);

  CliOptions opt;
  opt.config = fixture_config();

  std::string config_path;
  bool serial = false;
  std::string vars_spec;
  std::string literals_spec;
  app.add_option("--config", config_path, "configuration file (JSON)");
  app.add_flag("--json", opt.json, "emit the report as JSON");
  app.add_flag("--timings", opt.timings, "include wall time in the report");
  app.add_flag("--serial", serial, "run the exhaustive loops on the serial reference kernels");
  auto* vmax_opt = app.add_option("--vmax", opt.config.universe.vmax, "value bound");
  auto* fuel_opt = app.add_option("--fuel", opt.config.universe.fuel, "steps per run");
  auto* depth_opt =
      app.add_option("--term-depth", opt.config.universe.term_depth, "max AST nodes per term");
  auto* ctx_opt =
      app.add_option("--ctx-depth", opt.config.universe.ctx_depth, "max observer layers");
  auto* cap_opt =
      app.add_option("--cap", opt.config.universe.enumeration_cap, "enumeration cardinality cap");
  app.add_option("--vars", vars_spec, "variables as name:level pairs, e.g. h:high,l:low");
  app.add_option("--literals", literals_spec, "literal pool, e.g. 0,1,2,42");

  // run
  auto* run_cmd = app.add_subcommand("run", "execute one program from one store");
  std::string run_lang = "source", run_term, run_store;
  run_cmd->add_option("--lang", run_lang, "source|target");
  run_cmd->add_option("--term", run_term, "program text")->required();
  run_cmd->add_option("--store", run_store, "initial store, e.g. h=1,l=0")->required();

  // beh
  auto* beh_cmd = app.add_subcommand("beh", "whole behavior over every initial store");
  std::string beh_lang = "source", beh_term, beh_ctx;
  beh_cmd->add_option("--lang", beh_lang, "source|target");
  beh_cmd->add_option("--term", beh_term, "program text")->required();
  beh_cmd->add_option("--ctx", beh_ctx, "context text (defaults to the bare hole)");

  // check
  auto* check_cmd = app.add_subcommand("check", "run one checker");
  std::string check_name;
  check_cmd
      ->add_option("name", check_name,
                   "ni-robust|ctxeq|fac|modl|mmodl|rhp|preserve|layered|insertion")
      ->required();
  std::string chk_lang = "source", chk_term, chk_term2, chk_hyperprop = "ni";
  std::string chk_compiler = "identity", chk_direction = "preserve", chk_mode = "search";
  std::string chk_s = "s_sandbox", chk_b = "b_erase", chk_t = "t_id";
  uint32_t chk_fuel = 0;
  std::size_t chk_samples = 1000;
  uint64_t chk_seed = 0xC0FFEE;
  bool chk_exhaustive = false;
  check_cmd->add_option("--lang", chk_lang, "source|target");
  check_cmd->add_option("--term", chk_term, "program text");
  check_cmd->add_option("--term2", chk_term2, "second program text (ctxeq)");
  check_cmd->add_option("--hyperprop", chk_hyperprop, "ni|top|never:H|never:!|explicit:<file>");
  check_cmd->add_option("--compiler", chk_compiler, "identity|sandbox");
  check_cmd->add_option("--direction", chk_direction, "preserve|reflect|both (fac)");
  check_cmd->add_option("--mode", chk_mode, "search|backtranslation (rhp)");
  check_cmd->add_option("--s", chk_s, "syntax map: s_embed|s_sandbox (modl)");
  check_cmd->add_option("--b", chk_b, "behavior map: b_incl|b_erase (modl, mmodl)");
  check_cmd->add_option("--t", chk_t, "context map: t_id (mmodl)");
  check_cmd->add_option("--layered-fuel", chk_fuel, "unfolding depth (layered; default: fuel)");
  check_cmd->add_option("--samples", chk_samples, "sample count (insertion)");
  check_cmd->add_option("--seed", chk_seed, "sample seed (insertion)");
  check_cmd->add_flag("--exhaustive", chk_exhaustive, "exhaust all observable sets (insertion)");

  // tau-tilde
  auto* tt_cmd = app.add_subcommand("tau-tilde", "translated hyperproperty and inclusion verdict");
  std::string tt_compiler = "identity", tt_hyperprop = "ni";
  std::size_t tt_limit = 0;
  tt_cmd->add_option("--compiler", tt_compiler, "identity|sandbox");
  tt_cmd->add_option("--hyperprop", tt_hyperprop, "ni|top|never:H|never:!|explicit:<file>");
  tt_cmd->add_option("--limit", tt_limit, "emit at most N members (0 = all)");

  // repro
  auto* repro_cmd = app.add_subcommand("repro", "reproduction suite");
  std::string repro_scope = "all";
  bool repro_list = false;
  repro_cmd->add_option("scope", repro_scope, "all or one row id");
  repro_cmd->add_flag("--list", repro_list, "list row ids");

  std::vector<std::string> argv = args;
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends
      out << app.help() << "\n";
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    if (!config_path.empty()) {
      const bool json_flag = opt.json;
      opt.config = load_config(config_path);
      opt.json = json_flag || opt.config.format == OutputFormat::Json;
      // Explicit flags still win over the file.
      if (*vmax_opt || *fuel_opt || *depth_opt || *ctx_opt || *cap_opt) {
        throw ConfigError("pass bounds either in the config file or as flags, not both");
      }
    }
    if (!vars_spec.empty()) {
      opt.config.universe.vars.clear();
      std::size_t pos = 0;
      while (pos <= vars_spec.size()) {
        const std::size_t comma = vars_spec.find(',', pos);
        const std::string item =
            vars_spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos)
          throw ConfigError("--vars items must look like name:high or name:low");
        const std::string name = item.substr(0, colon);
        const std::string level = item.substr(colon + 1);
        if (level != "high" && level != "low")
          throw ConfigError("--vars level must be high or low");
        opt.config.universe.vars.push_back(
            {name, level == "high" ? Level::High : Level::Low});
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
    if (!literals_spec.empty()) {
      opt.config.universe.literal_pool.clear();
      std::size_t pos = 0;
      while (pos <= literals_spec.size()) {
        const std::size_t comma = literals_spec.find(',', pos);
        const std::string item = literals_spec.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        opt.config.universe.literal_pool.push_back(
            static_cast<uint32_t>(std::stoul(item)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
    opt.config.universe.validate();
    if (serial) par::set_enabled(false);

    const Universe& u = opt.config.universe;
    Report report;

    if (*run_cmd) {
      const Lang lang = lang_from_name(run_lang);
      const TermPtr p = parse_term(run_term, lang, u);
      const Store s0 = parse_store(run_store, u);
      std::vector<std::string> rules;
      const Trace t = run(lang, s0, p, u.fuel, u, &rules);
      report.command = "run";
      report.bounds = config_to_json(opt.config);
      report.ok = true;
      report.body = {{"trace", trace_json(t, u)},
                     {"rules", rules},
                     {"fuel_limited", t.fuel_limited()}};
      report.text = render_trace(t, u) + "\n";
    } else if (*beh_cmd) {
      const Lang lang = lang_from_name(beh_lang);
      const TermPtr p = parse_term(beh_term, lang, u);
      const Ctx c = beh_ctx.empty() ? Ctx{lang, 0} : parse_ctx(beh_ctx, lang, u);
      const StoreSpace space(u);
      const Behavior b = beh(lang, c, p, space);
      report.command = "beh";
      report.bounds = config_to_json(opt.config);
      report.ok = true;
      report.body = {{"behavior", behavior_json(b, u)}, {"fuel_limited", b.fuel_limited()}};
      report.text = render_behavior(b, u);
    } else if (*check_cmd) {
      if (check_name == "ni-robust") {
        if (chk_term.empty()) throw ConfigError("check ni-robust needs --term");
        const Lang lang = lang_from_name(chk_lang);
        const Verdict v = robust_sat(lang, parse_term(chk_term, lang, u),
                                     hyperprop_from_name(chk_hyperprop, u), u);
        report = verdict_report("check ni-robust", v, opt);
      } else if (check_name == "ctxeq") {
        if (chk_term.empty() || chk_term2.empty())
          throw ConfigError("check ctxeq needs --term and --term2");
        const Lang lang = lang_from_name(chk_lang);
        const Verdict v = ctx_equiv(lang, parse_term(chk_term, lang, u),
                                    parse_term(chk_term2, lang, u), u);
        report = verdict_report("check ctxeq", v, opt);
      } else if (check_name == "fac") {
        FacDirection dir;
        if (chk_direction == "preserve") dir = FacDirection::Preserve;
        else if (chk_direction == "reflect") dir = FacDirection::Reflect;
        else if (chk_direction == "both") dir = FacDirection::Both;
        else throw ConfigError("--direction must be preserve|reflect|both");
        const Verdict v = check_fac(compiler_from_name(chk_compiler), u, dir);
        report = verdict_report("check fac", v, opt);
      } else if (check_name == "modl") {
        const Verdict v =
            check_modl(syntax_map_from_name(chk_s), beh_map_from_name(chk_b), u);
        report = verdict_report("check modl", v, opt);
      } else if (check_name == "mmodl") {
        const Verdict v =
            check_mmodl(ctx_map_from_name(chk_t), beh_map_from_name(chk_b), u);
        report = verdict_report("check mmodl", v, opt);
      } else if (check_name == "rhp") {
        RhpMode mode;
        if (chk_mode == "search") mode = RhpMode::Search;
        else if (chk_mode == "backtranslation") mode = RhpMode::Backtranslation;
        else throw ConfigError("--mode must be search|backtranslation");
        const Verdict v = check_rhp(compiler_from_name(chk_compiler), u, mode);
        report = verdict_report("check rhp", v, opt);
      } else if (check_name == "preserve") {
        const Verdict v = check_preservation(compiler_from_name(chk_compiler),
                                             hyperprop_from_name(chk_hyperprop, u), u);
        report = verdict_report("check preserve", v, opt);
      } else if (check_name == "layered") {
        const Verdict v = check_layered(u, chk_fuel == 0 ? u.fuel : chk_fuel);
        report = verdict_report("check layered", v, opt);
      } else if (check_name == "insertion") {
        const Lang lang = lang_from_name(chk_lang);
        const InsertionResult r =
            chk_exhaustive ? check_insertion_exhaustive(lang, u)
                           : check_insertion_sampled(lang, u, chk_samples, chk_seed);
        report = verdict_report("check insertion", r.verdict, opt);
        report.body["abstract_traces"] = r.abstract_count;
        report.body["observable_traces"] = r.observable_count;
        report.body["property_sets_checked"] = r.property_sets_checked;
        report.body["hyperproperties_checked"] = r.hyperproperties_checked;
        report.text += "abstract traces: " + std::to_string(r.abstract_count) +
                       ", observable traces: " + std::to_string(r.observable_count) + "\n";
      } else {
        throw ConfigError("unknown check '" + check_name + "'");
      }
    } else if (*tt_cmd) {
      const CompilerId c = compiler_from_name(tt_compiler);
      const Hyperproperty h = hyperprop_from_name(tt_hyperprop, u);
      nlohmann::json members = nlohmann::json::array();
      std::size_t emitted = 0;
      const TauTildeStats stats =
          tau_tilde_visit(c, h, u, [&](const Behavior& member, bool is_new, const TermPtr& p,
                                       const Ctx& ctx) {
            if (!is_new) return;
            if (tt_limit != 0 && emitted >= tt_limit) return;
            ++emitted;
            members.push_back({{"behavior", behavior_json(member, u)},
                               {"program", render_term(p)},
                               {"target_context", render_ctx(ctx)}});
          });
      const CorollaryVerdict cv = check_corollary(c, h, u);
      report.command = "tau-tilde";
      report.bounds = config_to_json(opt.config);
      report.ok = cv.agree;
      report.body = {{"members", members},
                     {"robust_programs", stats.robust_programs},
                     {"distinct_members", stats.distinct_members},
                     {"fuel_limited", stats.fuel_limited},
                     {"corollary",
                      {{"preservation_holds", cv.preservation_holds},
                       {"inclusion_holds", cv.inclusion_holds},
                       {"agree", cv.agree}}}};
      if (cv.preservation_witness)
        report.body["corollary"]["preservation_witness"] =
            witness_to_json(*cv.preservation_witness);
      if (cv.inclusion_witness)
        report.body["corollary"]["inclusion_witness"] = witness_to_json(*cv.inclusion_witness);
      report.text = "tau-tilde(" + compiler_name(c) + ", " + h.name() + "): " +
                    std::to_string(stats.distinct_members) + " distinct members from " +
                    std::to_string(stats.robust_programs) + " robust programs\n" +
                    "preservation: " + (cv.preservation_holds ? "holds" : "fails") +
                    ", inclusion: " + (cv.inclusion_holds ? "holds" : "fails") +
                    ", agree: " + (cv.agree ? "yes" : "no") + "\n";
      if (!opt.json && emitted > 0 && emitted <= 32) {
        for (const auto& m : members) {
          report.text += "member from " + m["program"].get<std::string>() + " in " +
                         m["target_context"].get<std::string>() + "\n";
        }
      }
    } else if (*repro_cmd) {
      if (repro_list) {
        report.command = "repro";
        report.bounds = config_to_json(opt.config);
        report.ok = true;
        nlohmann::json ids = nlohmann::json::array();
        for (const auto& id : repro_row_ids()) {
          ids.push_back(id);
          report.text += id + "\n";
        }
        report.body = {{"rows", ids}};
      } else {
        const auto rows = run_repro(repro_scope, opt.config);
        bool all_ok = true;
        nlohmann::json jrows = nlohmann::json::array();
        for (const auto& row : rows) {
          all_ok = all_ok && row.ok;
          jrows.push_back({{"id", row.id},
                           {"criterion", row.criterion},
                           {"description", row.description},
                           {"expectation", row.expectation},
                           {"ok", row.ok},
                           {"detail", row.detail}});
          if (opt.timings) jrows.back()["wall_ms"] = row.wall_ms;
          report.text += std::string(row.ok ? "[ OK ] " : "[FAIL] ") + row.id + ": " +
                         row.detail + "\n";
        }
        report.command = "repro";
        report.bounds = config_to_json(opt.config);
        report.ok = all_ok;
        report.body = {{"rows", jrows}, {"all_ok", all_ok}};
        report.text += all_ok ? "all rows green\n" : "some rows red\n";
      }
    }

    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    emit(report, opt, out);
    return report.ok ? 0 : 1;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

} // namespace sclab
