#include "swe/toml.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace swe::toml {

bool Value::as_bool() const {
  if (!is_bool()) throw std::runtime_error("expected a boolean value");
  return std::get<bool>(v);
}

std::int64_t Value::as_int() const {
  if (!is_int()) throw std::runtime_error("expected an integer value");
  return std::get<std::int64_t>(v);
}

double Value::as_double() const {
  if (is_int()) return static_cast<double>(std::get<std::int64_t>(v));
  if (std::holds_alternative<double>(v)) return std::get<double>(v);
  throw std::runtime_error("expected a numeric value");
}

const std::string& Value::as_string() const {
  if (!is_string()) throw std::runtime_error("expected a string value");
  return std::get<std::string>(v);
}

const Array& Value::as_array() const {
  if (!is_array()) throw std::runtime_error("expected an array value");
  return std::get<Array>(v);
}

namespace {

struct Cursor {
  const std::string& s;
  std::size_t i = 0;
  int line = 1;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
  }
  bool eof() const { return i >= s.size(); }
  char peek() const { return s[i]; }
  void skip_ws() {
    while (!eof() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
};

std::string parse_bare_key(Cursor& c) {
  std::string key;
  while (!c.eof() &&
         (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_' ||
          c.peek() == '-')) {
    key.push_back(c.peek());
    ++c.i;
  }
  if (key.empty()) c.fail("expected a key");
  return key;
}

Value parse_value(Cursor& c);

Value parse_scalar(Cursor& c) {
  c.skip_ws();
  if (c.eof()) c.fail("expected a value");
  const char ch = c.peek();
  if (ch == '"') {
    ++c.i;
    std::string out;
    while (!c.eof() && c.peek() != '"') {
      if (c.peek() == '\\' && c.i + 1 < c.s.size()) {
        ++c.i;
        switch (c.peek()) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: c.fail("unsupported escape");
        }
        ++c.i;
      } else {
        out.push_back(c.peek());
        ++c.i;
      }
    }
    if (c.eof()) c.fail("unterminated string");
    ++c.i;
    return Value{out};
  }
  if (std::isalpha(static_cast<unsigned char>(ch))) {
    std::string word = parse_bare_key(c);
    if (word == "true") return Value{true};
    if (word == "false") return Value{false};
    if (word == "inf") return Value{std::numeric_limits<double>::infinity()};
    if (word == "nan") return Value{std::numeric_limits<double>::quiet_NaN()};
    c.fail("unquoted value '" + word + "'");
  }
  // number
  std::size_t start = c.i;
  bool is_float = false;
  if (c.peek() == '+' || c.peek() == '-') ++c.i;
  while (!c.eof()) {
    const char d = c.peek();
    if (std::isdigit(static_cast<unsigned char>(d)) || d == '_') {
      ++c.i;
    } else if (d == '.' || d == 'e' || d == 'E' || d == '+' || d == '-') {
      if ((d == '+' || d == '-') &&
          !(c.s[c.i - 1] == 'e' || c.s[c.i - 1] == 'E'))
        break;
      is_float = true;
      ++c.i;
    } else {
      break;
    }
  }
  std::string tok = c.s.substr(start, c.i - start);
  std::string cleaned;
  for (char t : tok)
    if (t != '_') cleaned.push_back(t);
  if (cleaned.empty() || cleaned == "+" || cleaned == "-") c.fail("bad number");
  try {
    if (is_float) return Value{std::stod(cleaned)};
    return Value{static_cast<std::int64_t>(std::stoll(cleaned))};
  } catch (const std::exception&) {
    c.fail("cannot parse number '" + tok + "'");
  }
}

Value parse_value(Cursor& c) {
  c.skip_ws();
  if (c.eof()) c.fail("expected a value");
  if (c.peek() == '[') {
    ++c.i;
    Array arr;
    c.skip_ws();
    if (!c.eof() && c.peek() == ']') {
      ++c.i;
      return Value{arr};
    }
    while (true) {
      arr.push_back(parse_value(c));
      c.skip_ws();
      if (c.eof()) c.fail("unterminated array");
      if (c.peek() == ',') {
        ++c.i;
        c.skip_ws();
        if (!c.eof() && c.peek() == ']') {  // trailing comma
          ++c.i;
          return Value{arr};
        }
        continue;
      }
      if (c.peek() == ']') {
        ++c.i;
        return Value{arr};
      }
      c.fail("expected ',' or ']' in array");
    }
  }
  return parse_scalar(c);
}

}  // namespace

Document parse(const std::string& text) {
  Document doc;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    Cursor c{raw, 0, lineno};
    c.skip_ws();
    if (c.eof() || c.peek() == '#') continue;
    if (c.peek() == '[') {
      ++c.i;
      c.skip_ws();
      std::string name = parse_bare_key(c);
      c.skip_ws();
      if (c.eof() || c.peek() != ']') c.fail("expected ']' after section name");
      ++c.i;
      c.skip_ws();
      if (!c.eof() && c.peek() != '#') c.fail("trailing characters after section");
      section = name;
      doc[section];  // materialize even when empty
      continue;
    }
    std::string key = parse_bare_key(c);
    c.skip_ws();
    if (c.eof() || c.peek() != '=') c.fail("expected '=' after key '" + key + "'");
    ++c.i;
    Value val = parse_value(c);
    c.skip_ws();
    if (!c.eof() && c.peek() != '#') c.fail("trailing characters after value");
    if (doc[section].count(key)) c.fail("duplicate key '" + key + "'");
    doc[section][key] = std::move(val);
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace swe::toml
