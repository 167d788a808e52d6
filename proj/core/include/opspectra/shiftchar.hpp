/*
   Copyright 2026 The opspectra Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

/**
 * @file shiftchar.hpp
 * @brief Shift operators tau_{a,b}: x^n -> (a x + b)^n, the recurrence
 *        transform under a shift, and the test of S_{p,d} = tau_{a,b}.
 */

#ifndef OPSPECTRA_SHIFTCHAR_HPP
#define OPSPECTRA_SHIFTCHAR_HPP

#include <cstddef>
#include <optional>
#include <string>

#include "opspectra/families.hpp"
#include "opspectra/formaldiff.hpp"

namespace opspectra {

struct ShiftOp {
    Rational a{1};
    Rational b{0};
    Poly apply(const Poly& f) const { return affine_compose(f, ExactScalar(a), ExactScalar(b)); }
};

/// M_k = ((a-1)x + b)^k / k!; M_0..M_K are generated eagerly. Throws
/// IdentityOperator for (1,0) and DegenerateAffine for a = 0.
FormalDiffOp shift_as_diffop(const ShiftOp& s, std::size_t K = kDefaultHorizon);

/// alpha_n = a_n/a, beta_n = (b_n - b)/a, gamma_n = c_n/a.
Recurrence3 msz_transform(const Recurrence3& rec, const Rational& a, const Rational& b);

struct Theorem1Verdict {
    bool equal = false;  ///< S_{p,d} p_n = tau_{a,b} p_n for every n <= horizon.
    std::size_t horizon = 0;
    std::optional<std::size_t> witness;
    std::string diagnostic;
    // Necessary conditions, evaluated independently of the direct comparison.
    bool d_is_power_of_a = false;   ///< d_n = a^n, n <= horizon.
    bool a_is_minus_one = false;
    bool b_n_constant = false;
    std::optional<Rational> b_n;    ///< the constant value when b_n_constant.
    bool q_symmetric = false;       ///< q_n = p_n(x + b/2) has parity (-1)^n.
    std::string label() const { return equal ? "EqualUpToHorizon" : "NotEqual"; }
};

/// Decides S_{p,d} = tau_{a,b} on p_0..p_horizon exactly. Throws
/// NotOrthogonal when p has no three-term recurrence, BadParameter when
/// d_0 != 1 or d is not real, DegenerateAffine when a = 0.
Theorem1Verdict theorem1_check(const PolySeq& p, const SequenceSpec& d, const Rational& a, const Rational& b,
                               std::size_t horizon = 32);

}  // namespace opspectra

#endif  // OPSPECTRA_SHIFTCHAR_HPP
