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

#ifndef MASUB_ERRORS_H_
#define MASUB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace masub {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A Subset or SetTuple was used against an oracle or family built on a
// different ground set.
class DomainMismatchError : public Error {
 public:
  using Error::Error;
};

// A stated precondition was violated by the caller (e.g. marginal(f, S, v)
// with v already in S).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A brute-force routine was asked to run beyond its configured cap. Callers
// must treat this as a refusal, never as an approximate answer.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

// No feasible solution exists (or an input claimed feasible is not).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// An iterative solver failed to converge; the message carries the best bound.
class SolverError : public Error {
 public:
  using Error::Error;
};

// A certified approximation bound was violated at run time.
class BoundViolationError : public Error {
 public:
  using Error::Error;
};

}  // namespace masub

#endif  // MASUB_ERRORS_H_
