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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hyproj/error.hpp"

namespace hyproj::sexpr {

/// A parsed s-expression. Keywords such as `:until` are plain symbols.
struct Datum {
  enum class Kind { Symbol, Number, List };

  Kind kind = Kind::List;
  std::string text;  // symbol name, or the number's source spelling
  double number = 0.0;
  std::vector<Datum> items;
  int line = 1;
  int col = 1;

  bool is_symbol() const { return kind == Kind::Symbol; }
  bool is_symbol(std::string_view s) const {
    return kind == Kind::Symbol && text == s;
  }
  bool is_number() const { return kind == Kind::Number; }
  bool is_list() const { return kind == Kind::List; }
  /// Head symbol of a non-empty list whose first item is a symbol, else "".
  std::string_view head() const;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int col, std::string expected);
  int line() const { return line_; }
  int col() const { return col_; }
  const std::string& expected() const { return expected_; }

 private:
  int line_;
  int col_;
  std::string expected_;
};

/// Reads every top-level datum. Comments run from ';' to end of line.
std::vector<Datum> read_all(std::string_view text);

/// Reads exactly one top-level datum.
Datum read_one(std::string_view text);

Datum symbol(std::string name);
Datum number(double value);
Datum list(std::vector<Datum> items);

/// Shortest round-trip spelling of a double.
std::string format_number(double value);

/// Single-line rendering.
std::string to_string(const Datum& d);

/// Indented rendering; lists that fit in `width` columns stay on one line.
std::string to_pretty_string(const Datum& d, int width = 78);

[[noreturn]] void fail(const Datum& at, const std::string& expected);

}  // namespace hyproj::sexpr
