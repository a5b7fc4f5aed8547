// Copyright 2026 The qspforge Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>

namespace qspforge {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
    Config = 2,      ///< bad input, precondition or domain violation
    Convergence = 3, ///< optimizer or iterative solver gave up
    Numeric = 4,     ///< a numeric invariant was violated after computation
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string &what)
        : Error(ErrorKind::Config, what) {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string &what)
        : Error(ErrorKind::Config, what) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string &what)
        : Error(ErrorKind::Config, what) {}
};

struct ConvergenceError : Error {
    ConvergenceError(const std::string &what, double best)
        : Error(ErrorKind::Convergence, what), best_value(best) {}
    double best_value;
};

struct InvariantError : Error {
    explicit InvariantError(const std::string &what)
        : Error(ErrorKind::Numeric, what) {}
};

} // namespace qspforge
