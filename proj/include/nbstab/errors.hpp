// Copyright 2026 The nbstab Authors
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

#ifndef NBSTAB_ERRORS_HPP
#define NBSTAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nbstab {

/// Malformed user input: bad edge-list lines, bad flags, bad numbers.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A proven invariant failed at runtime. This always means a solver bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

#define NBSTAB_ENSURE(cond, msg)                                           \
  do {                                                                     \
    if (!(cond)) {                                                         \
      throw ::nbstab::InvariantViolation(std::string(msg) + " [" #cond "]"); \
    }                                                                      \
  } while (false)

}  // namespace nbstab

#endif  // NBSTAB_ERRORS_HPP
