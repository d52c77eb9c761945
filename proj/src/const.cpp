#include "minerl/const.hpp"

#include <charconv>

namespace minerl {

std::string Const::to_string() const {
  if (is_int()) return as_int().str();
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, as_float());
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos) {
    auto e = s.find('e');
    if (e == std::string::npos) {
      s += ".0";
    } else {
      s.insert(e, ".0");
    }
  }
  return s;
}

const char* guard_type_keyword(GuardType t) {
  switch (t) {
    case GuardType::IsInt: return "is_int";
    case GuardType::IsFloat: return "is_float";
    case GuardType::IsPair: return "is_pair";
    case GuardType::IsFun: return "is_fun";
  }
  return "?";
}

}  // namespace minerl
