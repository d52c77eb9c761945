#pragma once

#include <string>

#include "minerl/checker.hpp"
#include "minerl/interp.hpp"
#include "json.hpp"

namespace minerl {

/// Check outcome in the machine-readable layout:
/// {"status", "type"?, "diagnostics": [{"kind","line","col","message","residual_type"?,"witness"?}]}
nlohmann::ordered_json check_json(const TypeStore& store, const CheckResult& r);

/// {"status": "ok"|"stuck"|"timeout", "value"?, "expr"?, "reason"?, "line"?, "col"?, "steps"}
nlohmann::ordered_json run_json(const RunResult& r);

/// "file:line:col: kind: message" lines, optionally with ANSI colour.
std::string check_text(const TypeStore& store, const CheckResult& r, const std::string& file, bool color);

/// JSON for a parse failure, status "error" with one ParseError diagnostic.
nlohmann::ordered_json parse_error_json(int line, int col, const std::string& message);

}  // namespace minerl
