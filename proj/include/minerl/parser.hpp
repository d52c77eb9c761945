#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "minerl/ast.hpp"

namespace minerl {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, std::string message, std::vector<std::string> expected = {});
  int line() const { return line_; }
  int col() const { return col_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int col_;
  std::vector<std::string> expected_;
};

/// Parses a whole program. Type annotations are interned into `store`.
Program parse_program(const std::string& text, TypeStore& store);

/// Parses a standalone type. Type variables are looked up in (and added to)
/// `vars`, so several calls can share variables.
TypeRef parse_type(const std::string& text, TypeStore& store,
                   std::map<std::string, TypeVarId>& vars);

TypeScheme parse_scheme(const std::string& text, TypeStore& store);

ExprPtr parse_expr(const std::string& text);

}  // namespace minerl
