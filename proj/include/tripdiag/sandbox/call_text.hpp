// SPDX-License-Identifier: Apache-2.0
#pragma once

// Text form of a tool call, as written in prompts:
//   FlightSearch("Washington", "Myrtle Beach", "2022-03-13")
//   Events("Baltimore", ["2024-11-18", "2024-11-20"])
//   restaurants_nearby(city="Hangzhou", point="West Lake", topk=5, dist=2)

#include <cctype>
#include <string>
#include <string_view>

#include "tripdiag/sandbox/registry.hpp"

namespace tripdiag::sandbox {

namespace detail {

class CallTextParser {
public:
  explicit CallTextParser(std::string_view s) : s_(s) {}

  ToolCall run() {
    ToolCall call;
    skip();
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    call.tool_name = std::string(s_.substr(start, pos_ - start));
    if (call.tool_name.empty()) fail("expected a tool name");
    skip();
    expect('(');
    const ToolSpec* spec = find_tool(call.tool_name);
    std::size_t index = 0;
    skip();
    if (peek() != ')') {
      for (;;) {
        skip();
        std::string name;
        const auto save = pos_;
        if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
          const auto b = pos_;
          while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
          std::string word(s_.substr(b, pos_ - b));
          skip();
          if (peek() == '=') {
            ++pos_;
            name = word;
          } else {
            pos_ = save;
          }
        }
        json value = literal();
        if (name.empty()) name = (spec && index < spec->params.size()) ? spec->params[index].name : "arg" + std::to_string(index);
        for (const auto& [n, v] : call.arguments)
          if (n == name) fail("duplicate argument '" + name + "'");
        call.arguments.emplace_back(name, std::move(value));
        ++index;
        skip();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect(')');
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return call;
  }

private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw DataError("tool call text at byte " + std::to_string(pos_) + ": " + msg);
  }
  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  json literal() {
    skip();
    const char c = peek();
    if (c == '"' || c == '\'') {
      ++pos_;
      std::string out;
      while (pos_ < s_.size() && s_[pos_] != c) {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
        out += s_[pos_++];
      }
      if (pos_ >= s_.size()) fail("unterminated string");
      ++pos_;
      return out;
    }
    if (c == '[') {
      ++pos_;
      json arr = json::array();
      skip();
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      for (;;) {
        arr.push_back(literal());
        skip();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(']');
        return arr;
      }
    }
    const auto b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' || s_[pos_] == '-' ||
                                s_[pos_] == '+'))
      ++pos_;
    const std::string word(s_.substr(b, pos_ - b));
    if (word.empty()) fail("expected a value");
    if (word == "true" || word == "True") return true;
    if (word == "false" || word == "False") return false;
    if (word == "None" || word == "null") return nullptr;
    try {
      std::size_t used = 0;
      if (word.find_first_of(".eE") == std::string::npos) {
        const long long v = std::stoll(word, &used);
        if (used == word.size()) return v;
      } else {
        const double v = std::stod(word, &used);
        if (used == word.size()) return v;
      }
    } catch (const std::exception&) {
    }
    fail("unrecognized value '" + word + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `Name(arg, ...)`. Positional arguments take the parameter names
/// of the named tool when it is registered, otherwise `arg0`, `arg1`, ...
inline ToolCall parse_call_text(std::string_view text) { return detail::CallTextParser(text).run(); }

/// Inverse of parse_call_text for registered tools (positional form, in
/// parameter order whatever the order of `call.arguments`).
inline std::string render_call_text(const ToolCall& call) {
  std::vector<const json*> values;
  if (const auto* spec = find_tool(call.tool_name)) {
    for (const auto& p : spec->params)
      for (const auto& [n, v] : call.arguments)
        if (n == p.name) values.push_back(&v);
  }
  if (values.size() != call.arguments.size()) {
    values.clear();
    for (const auto& a : call.arguments) values.push_back(&a.second);
  }
  std::string out = call.tool_name + "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += values[i]->dump();
  }
  return out + ")";
}

}  // namespace tripdiag::sandbox
