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

#ifndef NBSTAB_RATIONAL_HPP
#define NBSTAB_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace nbstab {

/// Exact rational number in canonical form (gcd 1, positive denominator).
using Rational = mpq_class;

/// Renders as "p/q", always with a denominator ("0/1", "3/1", "-1/2").
std::string to_string(const Rational& r);

/// Parses "p/q" or a plain integer "p". Throws InputError on bad text or a
/// zero denominator.
Rational parse_rational(std::string_view text);

/// n/d in canonical form.
inline Rational ratio(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

}  // namespace nbstab

#endif  // NBSTAB_RATIONAL_HPP
