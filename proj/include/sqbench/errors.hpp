// Copyright 2026 The sqbench Authors
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

namespace sqbench {

/// Out-of-range parameter (non-positive squeezing, transmissivity outside [0,1], ...).
using domain_error = std::domain_error;

/// A computed object violated one of its structural invariants.
class integrity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Fock matrix element could not be evaluated to the required accuracy.
class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(int row, int col, const std::string& what)
      : std::runtime_error(what + " at element (" + std::to_string(row) + "," +
                           std::to_string(col) + ")"),
        row_(row),
        col_(col) {}

  int row() const noexcept { return row_; }
  int col() const noexcept { return col_; }

 private:
  int row_;
  int col_;
};

}  // namespace sqbench
