#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace swe::toml {

// Just enough TOML for flat config files: [section] headers, scalar values
// (string, integer, float, boolean) and one-level arrays, with # comments.

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<bool, std::int64_t, double, std::string, Array> v;

  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
  bool is_number() const { return is_int() || std::holds_alternative<double>(v); }
  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_array() const { return std::holds_alternative<Array>(v); }

  bool as_bool() const;
  std::int64_t as_int() const;
  double as_double() const;  // accepts integers
  const std::string& as_string() const;
  const Array& as_array() const;
};

using Table = std::map<std::string, Value>;
using Document = std::map<std::string, Table>;

// Keys given before any [section] land in the "" table.
Document parse(const std::string& text);
Document parse_file(const std::string& path);

}  // namespace swe::toml
