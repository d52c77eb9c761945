#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "minerl/checker.hpp"
#include "minerl/interp.hpp"
#include "minerl/parser.hpp"
#include "minerl/pretty.hpp"
#include "minerl/report.hpp"

using namespace minerl;

namespace {

enum Exit { kOk = 0, kFail = 1, kParse = 2, kInternal = 3 };

bool use_color() {
  if (const char* c = std::getenv("MINERL_COLOR")) return std::string(c) == "1";
  return isatty(STDERR_FILENO);
}

OracleStrategy parse_oracle(const std::string& s) {
  if (s == "true") return OracleStrategy::always_true();
  if (s == "false") return OracleStrategy::always_false();
  if (s.rfind("seed:", 0) == 0) return OracleStrategy::seeded(std::stoull(s.substr(5)));
  throw CLI::ValidationError("--oracle", "expected true, false or seed:N");
}

struct Config {
  std::string mode;
  std::string input;
  std::string expect;
  bool json = false;
  std::size_t fuel = 10000;
  std::string oracle = "true";
  std::size_t budget = 1000000;
  std::size_t max_solutions = 64;
  bool no_exhaustiveness = false;
  bool trace = false;
};

int execute(const Config& cfg) {
  std::ifstream in(cfg.input);
  if (!in) {
    std::cerr << "cannot open " << cfg.input << "\n";
    return kInternal;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  TypeStore store;
  Program prog;
  try {
    prog = parse_program(buf.str(), store);
  } catch (const ParseError& e) {
    if (cfg.json)
      std::cout << parse_error_json(e.line(), e.col(), e.what()).dump(2) << "\n";
    else
      std::cerr << cfg.input << ":" << e.line() << ":" << e.col() << ": parse error: " << e.what() << "\n";
    return kParse;
  }

  nlohmann::ordered_json out;
  int code = kOk;
  if (cfg.mode != "run") {
    CheckOptions opt;
    opt.exhaustiveness = !cfg.no_exhaustiveness;
    opt.tally.budget = cfg.budget;
    opt.tally.max_solutions = cfg.max_solutions;
    if (cfg.trace) opt.trace = &std::cerr;
    if (!cfg.expect.empty()) {
      std::map<std::string, TypeVarId> vars;
      try {
        opt.expected = parse_type(cfg.expect, store, vars);
      } catch (const ParseError& e) {
        std::cerr << "--expect: " << e.what() << "\n";
        return kParse;
      }
    }
    CheckResult r = check_program(store, prog, opt);
    if (cfg.json)
      out = check_json(store, r);
    else
      (r.ok ? std::cout : std::cerr) << check_text(store, r, cfg.input, use_color());
    if (!r.ok) code = r.timeout ? kInternal : kFail;
  }
  if (cfg.mode != "check" && code == kOk) {
    RunResult rr = run(prog, cfg.fuel, parse_oracle(cfg.oracle));
    if (cfg.json) {
      if (cfg.mode == "run")
        out = run_json(rr);
      else
        out["run"] = run_json(rr);
    } else if (rr.kind == RunResult::Kind::Final) {
      std::cout << pretty_expr(*rr.expr) << "\n";
    } else if (rr.kind == RunResult::Kind::Stuck) {
      std::cerr << cfg.input << ":" << rr.span.line << ":" << rr.span.col << ": stuck: " << rr.reason << "\n";
    } else {
      std::cerr << cfg.input << ": out of fuel after " << rr.steps << " steps\n";
    }
    if (rr.kind == RunResult::Kind::Stuck) code = kFail;
    if (rr.kind == RunResult::Kind::OutOfFuel) code = kInternal;
  }
  if (cfg.json && !out.is_null()) std::cout << out.dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MinErl type checker and interpreter"};
  app.require_subcommand(1);
  Config cfg;
  for (const char* name : {"check", "run", "both"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "check" ? "type check a program"
                                         : std::string(name) == "run" ? "evaluate a program"
                                                                      : "type check, then evaluate");
    sub->add_option("input", cfg.input, "source file")->required();
    sub->add_option("--expect", cfg.expect, "type expected for the main expression");
    sub->add_flag("--json", cfg.json, "machine-readable output");
    sub->add_option("--fuel", cfg.fuel, "evaluation step limit")->capture_default_str();
    sub->add_option("--oracle", cfg.oracle, "true, false or seed:N")->capture_default_str();
    sub->add_option("--tally-budget", cfg.budget, "solver step limit")->capture_default_str();
    sub->add_option("--max-solutions", cfg.max_solutions, "solutions kept per tally call")->capture_default_str();
    sub->add_flag("--no-exhaustiveness", cfg.no_exhaustiveness, "skip exhaustiveness checks");
    sub->add_flag("--trace", cfg.trace, "print generated constraints to stderr");
    sub->callback([&cfg, name] { cfg.mode = name; });
  }
  CLI11_PARSE(app, argc, argv);
  try {
    return execute(cfg);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
