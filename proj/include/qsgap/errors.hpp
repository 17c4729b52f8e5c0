// Copyright 2026 The qsgap Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qsgap {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyInterval : Error {
  explicit EmptyInterval(const std::string& msg) : Error("empty interval: " + msg) {}
};

struct DuplicateItem : Error {
  explicit DuplicateItem(const std::string& msg) : Error("duplicate item: " + msg) {}
};

struct NotInStream : Error {
  explicit NotInStream(const std::string& msg) : Error("not in stream: " + msg) {}
};

struct NoSuccessor : Error {
  explicit NoSuccessor(const std::string& msg) : Error("no successor: " + msg) {}
};

struct NoPredecessor : Error {
  explicit NoPredecessor(const std::string& msg) : Error("no predecessor: " + msg) {}
};

struct InvalidInterval : Error {
  explicit InvalidInterval(const std::string& msg) : Error("invalid interval: " + msg) {}
};

struct ArrayMismatch : Error {
  explicit ArrayMismatch(const std::string& msg) : Error("array mismatch: " + msg) {}
};

struct DegenerateArray : Error {
  explicit DegenerateArray(const std::string& msg) : Error("degenerate array: " + msg) {}
};

struct PreconditionViolated : Error {
  explicit PreconditionViolated(const std::string& msg) : Error("precondition violated: " + msg) {}
};

struct InvalidEpsilon : Error {
  explicit InvalidEpsilon(const std::string& msg) : Error("invalid epsilon: " + msg) {}
};

struct EmptySummary : Error {
  explicit EmptySummary(const std::string& msg) : Error("empty summary: " + msg) {}
};

struct EmptyStream : Error {
  explicit EmptyStream(const std::string& msg) : Error("empty stream: " + msg) {}
};

struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& msg) : Error("length mismatch: " + msg) {}
};

struct SubjectLacksRankQuery : Error {
  explicit SubjectLacksRankQuery(const std::string& msg) : Error("subject lacks rank query: " + msg) {}
};

struct SummaryNotStreaming : Error {
  explicit SummaryNotStreaming(const std::string& msg) : Error("summary not streaming: " + msg) {}
};

struct BadFraction : Error {
  explicit BadFraction(const std::string& msg) : Error("bad fraction: " + msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

}  // namespace qsgap
