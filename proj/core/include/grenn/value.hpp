#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace grenn {

/// Attribute sorts. Every attribute value carries exactly one of these.
enum class Sort { Bool, Int, Real, String };

/// Runtime attribute value. The variant index is the Sort.
using Value = std::variant<bool, std::int64_t, double, std::string>;

Sort sort_of(const Value& v);

std::string to_string(Sort s);

/// Renders a value for diagnostics and DOT labels.
/// Reals use shortest round-trip form unless `real_digits` limits precision.
std::string format_value(const Value& v, int real_digits = -1);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_real(double d);

}  // namespace grenn
