#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

namespace minerl {

using BigInt = boost::multiprecision::cpp_int;

/// A literal constant: an exact integer or a 64-bit float.
///
/// Floats compare by bit pattern, so `0.0` and `-0.0` are different
/// constants and a NaN equals itself.
class Const {
 public:
  Const() : value_(BigInt(0)) {}
  explicit Const(BigInt i) : value_(std::move(i)) {}
  explicit Const(double d) : value_(d) {}

  static Const integer(long long i) { return Const(BigInt(i)); }

  bool is_int() const { return std::holds_alternative<BigInt>(value_); }
  bool is_float() const { return std::holds_alternative<double>(value_); }
  const BigInt& as_int() const { return std::get<BigInt>(value_); }
  double as_float() const { return std::get<double>(value_); }

  friend bool operator==(const Const& a, const Const& b) {
    if (a.is_int() != b.is_int()) return false;
    if (a.is_int()) return a.as_int() == b.as_int();
    return std::bit_cast<std::uint64_t>(a.as_float()) ==
           std::bit_cast<std::uint64_t>(b.as_float());
  }

  /// Surface spelling; floats always carry a decimal point.
  std::string to_string() const;

 private:
  std::variant<BigInt, double> value_;
};

enum class GuardType { IsInt, IsFloat, IsPair, IsFun };

const char* guard_type_keyword(GuardType t);

}  // namespace minerl
