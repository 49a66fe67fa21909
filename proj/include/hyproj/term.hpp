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
#include <utility>
#include <vector>

#include "hyproj/sexpr.hpp"

namespace hyproj {

/// Ground or pattern term: a symbol, a number, or functor(args...).
/// Symbols starting with '?' are variables when the term is used as a pattern.
/// A compound with no arguments is normalized to a symbol.
class Term {
 public:
  enum class Kind { Symbol, Number, Compound };

  Term() = default;
  static Term sym(std::string name);
  static Term num(double value);
  static Term compound(std::string functor, std::vector<Term> args);

  Kind kind() const { return kind_; }
  /// Symbol name or functor.
  const std::string& name() const { return name_; }
  double number() const { return number_; }
  const std::vector<Term>& args() const { return args_; }
  const Term& arg(std::size_t i) const { return args_.at(i); }
  std::size_t arity() const { return args_.size(); }

  bool is_symbol() const { return kind_ == Kind::Symbol; }
  bool is_number() const { return kind_ == Kind::Number; }
  bool is_compound() const { return kind_ == Kind::Compound; }
  bool is_variable() const { return kind_ == Kind::Symbol && !name_.empty() && name_[0] == '?'; }
  bool is_ground() const;

  /// Canonical s-expression spelling; equal terms have equal spellings.
  std::string str() const;
  sexpr::Datum to_datum() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b);

 private:
  Kind kind_ = Kind::Symbol;
  std::string name_;
  double number_ = 0.0;
  std::vector<Term> args_;
};

Term term_from_datum(const sexpr::Datum& d);
Term parse_term(std::string_view text);

using Bindings = std::vector<std::pair<std::string, Term>>;

const Term* lookup(const Bindings& b, std::string_view var);

/// Structural one-way matching of `pattern` against ground `value`, extending
/// `b`. On failure `b` is left as it was.
bool match(const Term& pattern, const Term& value, Bindings& b);

/// Replaces bound variables; unbound variables are kept.
Term substitute(const Term& pattern, const Bindings& b);

}  // namespace hyproj
