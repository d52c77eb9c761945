#pragma once

#include <string>

#include "minerl/ast.hpp"

namespace minerl {

// Printers for the concrete syntax accepted by parse_program.

std::string pretty_expr(const Expr& e);
std::string pretty_pattern(const Pattern& p);
std::string pretty_guard(const Guard& g);
std::string pretty_gpat(const GuardedPattern& pg);
std::string pretty_program(const TypeStore& store, const Program& p);

}  // namespace minerl
