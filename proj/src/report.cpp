#include "minerl/report.hpp"

#include <sstream>

#include "minerl/pretty.hpp"

namespace minerl {

nlohmann::ordered_json check_json(const TypeStore& store, const CheckResult& r) {
  nlohmann::ordered_json j;
  j["status"] = r.ok ? "ok" : r.timeout ? "timeout" : "error";
  if (r.ok) j["type"] = type_to_string(store, r.main_type, true);
  auto diags = nlohmann::ordered_json::array();
  for (const auto& d : r.diagnostics) {
    nlohmann::ordered_json e;
    e["kind"] = diagnostic_kind_name(d.kind);
    e["line"] = d.span.line;
    e["col"] = d.span.col;
    e["message"] = d.message;
    if (d.residual) e["residual_type"] = type_to_string(store, *d.residual, true);
    if (d.witness) e["witness"] = *d.witness;
    diags.push_back(std::move(e));
  }
  j["diagnostics"] = std::move(diags);
  return j;
}

nlohmann::ordered_json run_json(const RunResult& r) {
  nlohmann::ordered_json j;
  switch (r.kind) {
    case RunResult::Kind::Final:
      j["status"] = "ok";
      j["value"] = pretty_expr(*r.expr);
      break;
    case RunResult::Kind::Stuck:
      j["status"] = "stuck";
      j["expr"] = pretty_expr(*r.expr);
      j["reason"] = r.reason;
      j["line"] = r.span.line;
      j["col"] = r.span.col;
      break;
    case RunResult::Kind::OutOfFuel:
      j["status"] = "timeout";
      break;
  }
  j["steps"] = r.steps;
  return j;
}

std::string check_text(const TypeStore& store, const CheckResult& r, const std::string& file, bool color) {
  std::ostringstream o;
  const char* red = color ? "\x1b[31m" : "";
  const char* yellow = color ? "\x1b[33m" : "";
  const char* reset = color ? "\x1b[0m" : "";
  for (const auto& d : r.diagnostics) {
    bool warn = d.kind == Diagnostic::Kind::UnreachableBranch;
    o << file << ":" << d.span.line << ":" << d.span.col << ": " << (warn ? yellow : red)
      << (warn ? "warning" : "error") << reset << ": " << d.message << "\n";
  }
  if (r.ok) o << type_to_string(store, r.main_type, true) << "\n";
  return o.str();
}

nlohmann::ordered_json parse_error_json(int line, int col, const std::string& message) {
  nlohmann::ordered_json e;
  e["kind"] = "ParseError";
  e["line"] = line;
  e["col"] = col;
  e["message"] = message;
  nlohmann::ordered_json j;
  j["status"] = "error";
  j["diagnostics"] = nlohmann::ordered_json::array({e});
  return j;
}

}  // namespace minerl
