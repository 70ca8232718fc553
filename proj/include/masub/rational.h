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

#ifndef MASUB_RATIONAL_H_
#define MASUB_RATIONAL_H_

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace masub {

// All objective values and LP points are exact rationals so that every
// certified bound is checked without rounding error.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double ToDouble(const Rational& r) { return r.convert_to<double>(); }

// Exact conversion: a double is a dyadic rational.
inline Rational FromDouble(double x) { return Rational(x); }

// Serializes as "p" or "p/q" with q > 0.
std::string FormatRational(const Rational& r);

// Accepts "p", "p/q", or a plain integer with sign. Throws ParseError on
// malformed input.
Rational ParseRational(const std::string& text);

}  // namespace masub

#endif  // MASUB_RATIONAL_H_
