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

#include "hyproj/term.hpp"

#include <algorithm>

namespace hyproj {

Term Term::sym(std::string name) {
  Term t;
  t.kind_ = Kind::Symbol;
  t.name_ = std::move(name);
  return t;
}

Term Term::num(double value) {
  Term t;
  t.kind_ = Kind::Number;
  t.number_ = value == 0.0 ? 0.0 : value;
  return t;
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  if (args.empty()) return sym(std::move(functor));
  Term t;
  t.kind_ = Kind::Compound;
  t.name_ = std::move(functor);
  t.args_ = std::move(args);
  return t;
}

bool Term::is_ground() const {
  if (is_variable()) return false;
  return std::all_of(args_.begin(), args_.end(), [](const Term& a) { return a.is_ground(); });
}

sexpr::Datum Term::to_datum() const {
  switch (kind_) {
    case Kind::Symbol:
      return sexpr::symbol(name_);
    case Kind::Number:
      return sexpr::number(number_);
    case Kind::Compound: {
      std::vector<sexpr::Datum> items;
      items.reserve(args_.size() + 1);
      items.push_back(sexpr::symbol(name_));
      for (const Term& a : args_) items.push_back(a.to_datum());
      return sexpr::list(std::move(items));
    }
  }
  return {};
}

std::string Term::str() const {
  switch (kind_) {
    case Kind::Symbol:
      return name_;
    case Kind::Number:
      return sexpr::format_number(number_);
    case Kind::Compound: {
      std::string out = "(" + name_;
      for (const Term& a : args_) {
        out += ' ';
        out += a.str();
      }
      return out + ")";
    }
  }
  return {};
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == Term::Kind::Number) return a.number_ == b.number_;
  return a.name_ == b.name_ && a.args_ == b.args_;
}

bool operator<(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  if (a.kind_ == Term::Kind::Number) return a.number_ < b.number_;
  if (a.name_ != b.name_) return a.name_ < b.name_;
  return std::lexicographical_compare(a.args_.begin(), a.args_.end(), b.args_.begin(),
                                      b.args_.end());
}

Term term_from_datum(const sexpr::Datum& d) {
  switch (d.kind) {
    case sexpr::Datum::Kind::Symbol:
      return Term::sym(d.text);
    case sexpr::Datum::Kind::Number:
      return Term::num(d.number);
    case sexpr::Datum::Kind::List: {
      if (d.items.empty() || !d.items.front().is_symbol()) sexpr::fail(d, "term with a symbol head");
      std::vector<Term> args;
      for (std::size_t i = 1; i < d.items.size(); ++i) args.push_back(term_from_datum(d.items[i]));
      return Term::compound(d.items.front().text, std::move(args));
    }
  }
  return {};
}

Term parse_term(std::string_view text) { return term_from_datum(sexpr::read_one(text)); }

const Term* lookup(const Bindings& b, std::string_view var) {
  for (const auto& [name, value] : b)
    if (name == var) return &value;
  return nullptr;
}

namespace {

bool match_rec(const Term& p, const Term& v, Bindings& b) {
  if (p.is_variable()) {
    if (p.name() == "?_") return true;
    if (const Term* bound = lookup(b, p.name())) return *bound == v;
    b.emplace_back(p.name(), v);
    return true;
  }
  if (p.kind() != v.kind()) return false;
  switch (p.kind()) {
    case Term::Kind::Symbol:
      return p.name() == v.name();
    case Term::Kind::Number:
      return p.number() == v.number();
    case Term::Kind::Compound:
      if (p.name() != v.name() || p.arity() != v.arity()) return false;
      for (std::size_t i = 0; i < p.arity(); ++i)
        if (!match_rec(p.arg(i), v.arg(i), b)) return false;
      return true;
  }
  return false;
}

}  // namespace

bool match(const Term& pattern, const Term& value, Bindings& b) {
  const std::size_t mark = b.size();
  if (match_rec(pattern, value, b)) return true;
  b.resize(mark);
  return false;
}

Term substitute(const Term& pattern, const Bindings& b) {
  if (pattern.is_variable()) {
    if (const Term* v = lookup(b, pattern.name())) return *v;
    return pattern;
  }
  if (!pattern.is_compound()) return pattern;
  std::vector<Term> args;
  args.reserve(pattern.arity());
  for (const Term& a : pattern.args()) args.push_back(substitute(a, b));
  return Term::compound(pattern.name(), std::move(args));
}

}  // namespace hyproj
