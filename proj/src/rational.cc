// Copyright 2023 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "masub/rational.h"

#include <cctype>

#include "masub/errors.h"

namespace masub {

std::string FormatRational(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

namespace {
bool IsInteger(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}
}  // namespace

Rational ParseRational(const std::string& text) {
  size_t slash = text.find('/');
  if (slash == std::string::npos) {
    if (!IsInteger(text)) {
      throw ParseError("malformed rational: '" + text + "'");
    }
    return Rational(BigInt(text));
  }
  std::string num = text.substr(0, slash);
  std::string den = text.substr(slash + 1);
  if (!IsInteger(num) || !IsInteger(den)) {
    throw ParseError("malformed rational: '" + text + "'");
  }
  BigInt d(den);
  if (d == 0) throw ParseError("zero denominator in rational: '" + text + "'");
  return Rational(BigInt(num), d);
}

}  // namespace masub
