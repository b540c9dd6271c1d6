#include "grenn/value.hpp"

#include <charconv>
#include <cstdio>

namespace grenn {

Sort sort_of(const Value& v) { return static_cast<Sort>(v.index()); }

std::string to_string(Sort s) {
  switch (s) {
    case Sort::Bool: return "bool";
    case Sort::Int: return "int";
    case Sort::Real: return "real";
    case Sort::String: return "string";
  }
  return "?";
}

std::string format_real(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, res.ptr);
}

std::string format_value(const Value& v, int real_digits) {
  switch (sort_of(v)) {
    case Sort::Bool:
      return std::get<bool>(v) ? "true" : "false";
    case Sort::Int:
      return std::to_string(std::get<std::int64_t>(v));
    case Sort::Real: {
      double d = std::get<double>(v);
      if (real_digits < 0) return format_real(d);
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.*g", real_digits, d);
      return buf;
    }
    case Sort::String:
      return std::get<std::string>(v);
  }
  return {};
}

}  // namespace grenn
