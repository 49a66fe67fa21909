// Copyright 2026 The hyproj Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hyproj/sexpr.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>

namespace hyproj::sexpr {

std::string_view Datum::head() const {
  if (kind != Kind::List || items.empty() || !items.front().is_symbol()) return {};
  return items.front().text;
}

SyntaxError::SyntaxError(int line, int col, std::string expected)
    : Error(fmt::format("{}:{}: expected {}", line, col, expected)),
      line_(line),
      col_(col),
      expected_(std::move(expected)) {}

void fail(const Datum& at, const std::string& expected) {
  throw SyntaxError(at.line, at.col, expected);
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  Datum read() {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError(line_, col_, "datum");
    const int line = line_, col = col_;
    const char c = text_[pos_];
    if (c == ')') throw SyntaxError(line, col, "datum, found ')'");
    if (c == '(') {
      advance();
      Datum d;
      d.kind = Datum::Kind::List;
      d.line = line;
      d.col = col;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) throw SyntaxError(line_, col_, "')'");
        if (text_[pos_] == ')') {
          advance();
          return d;
        }
        d.items.push_back(read());
      }
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) advance();
    std::string tok(text_.substr(start, pos_ - start));
    Datum d;
    d.line = line;
    d.col = col;
    d.text = tok;
    double v = 0.0;
    if (looks_numeric(tok)) {
      const char* first = tok.data();
      if (*first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
      if (ec == std::errc() && ptr == tok.data() + tok.size() && std::isfinite(v)) {
        d.kind = Datum::Kind::Number;
        d.number = v;
        return d;
      }
      throw SyntaxError(line, col, "number");
    }
    d.kind = Datum::Kind::Symbol;
    return d;
  }

 private:
  static bool is_delim(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';';
  }

  static bool looks_numeric(const std::string& t) {
    std::size_t i = 0;
    if (t[i] == '-' || t[i] == '+') ++i;
    if (i < t.size() && t[i] == '.') ++i;
    return i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]));
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Datum> read_all(std::string_view text) {
  Reader r(text);
  std::vector<Datum> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

Datum read_one(std::string_view text) {
  Reader r(text);
  Datum d = r.read();
  if (!r.at_end()) {
    auto rest = read_all(text);
    throw SyntaxError(rest.size() > 1 ? rest[1].line : 1, rest.size() > 1 ? rest[1].col : 1,
                      "end of input");
  }
  return d;
}

Datum symbol(std::string name) {
  Datum d;
  d.kind = Datum::Kind::Symbol;
  d.text = std::move(name);
  return d;
}

Datum number(double value) {
  Datum d;
  d.kind = Datum::Kind::Number;
  d.number = value;
  d.text = format_number(value);
  return d;
}

Datum list(std::vector<Datum> items) {
  Datum d;
  d.kind = Datum::Kind::List;
  d.items = std::move(items);
  return d;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  return fmt::format("{}", value);
}

std::string to_string(const Datum& d) {
  switch (d.kind) {
    case Datum::Kind::Symbol:
      return d.text;
    case Datum::Kind::Number:
      return format_number(d.number);
    case Datum::Kind::List: {
      std::string out = "(";
      for (std::size_t i = 0; i < d.items.size(); ++i) {
        if (i) out += ' ';
        out += to_string(d.items[i]);
      }
      return out + ")";
    }
  }
  return {};
}

namespace {

void pretty(const Datum& d, int indent, int width, std::string& out) {
  std::string flat = to_string(d);
  if (!d.is_list() || static_cast<int>(flat.size()) + indent <= width || d.items.size() < 2) {
    out += flat;
    return;
  }
  out += '(';
  out += to_string(d.items[0]);
  const int inner = indent + 2;
  bool leading = true;
  for (std::size_t i = 1; i < d.items.size(); ++i) {
    // leading atoms stay on the head line
    leading = leading && !d.items[i].is_list();
    if (leading) {
      out += ' ';
      out += to_string(d.items[i]);
      continue;
    }
    out += '\n';
    out.append(static_cast<std::size_t>(inner), ' ');
    pretty(d.items[i], inner, width, out);
  }
  out += ')';
}

}  // namespace

std::string to_pretty_string(const Datum& d, int width) {
  std::string out;
  pretty(d, 0, width, out);
  return out;
}

}  // namespace hyproj::sexpr
