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
 * @file formaldiff.hpp
 * @brief Formal differential operators  eta(y) = sum_k M_k(x) y^(k)  with
 *        deg M_k <= k, generated lazily.
 */

#ifndef OPSPECTRA_FORMALDIFF_HPP
#define OPSPECTRA_FORMALDIFF_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opspectra/families.hpp"
#include "opspectra/poly.hpp"
#include "opspectra/sequence.hpp"

namespace opspectra {

enum class OpProvenance { Classical, Koornwinder, Synthesized, UserGiven };
std::string to_string(OpProvenance p);

class FormalDiffOp {
public:
    /// M_k from k and the already generated M_0..M_{k-1}.
    using Generator = std::function<Poly(std::size_t k, const std::vector<Poly>& previous)>;

    FormalDiffOp(Generator gen, std::optional<std::size_t> known_order, OpProvenance provenance,
                 std::string label, std::vector<std::string> diagnostics = {});

    /// Finite list M_0..M_r; the order is the last non-zero index.
    static FormalDiffOp finite(std::vector<Poly> M, OpProvenance provenance = OpProvenance::UserGiven,
                               std::string label = "user");

    /// M_k, memoized. Throws Error if the generator breaks deg M_k <= k.
    Poly coeff(std::size_t k) const;
    std::vector<Poly> coeffs(std::size_t upto) const;
    /// m_{kk}, the x^k coefficient of M_k.
    ExactScalar diag(std::size_t k) const { return coeff(k).coeff(k); }

    std::optional<std::size_t> known_order() const { return state_->known_order; }
    OpProvenance provenance() const { return state_->provenance; }
    const std::string& label() const { return state_->label; }
    const std::vector<std::string>& diagnostics() const { return state_->diagnostics; }

    /// sum_{k <= deg y} M_k y^(k).
    Poly apply(const Poly& y) const;

private:
    struct State {
        Generator gen;
        std::optional<std::size_t> known_order;
        OpProvenance provenance;
        std::string label;
        std::vector<std::string> diagnostics;
        mutable std::mutex mu;
        mutable std::vector<Poly> cache;
    };
    std::shared_ptr<State> state_;
};

inline Poly apply(const FormalDiffOp& op, const Poly& y) { return op.apply(y); }

/// (1-x^2) f'' + (beta - alpha - (alpha+beta+2) x) f' + f.
FormalDiffOp classical_jacobi(const Rational& alpha, const Rational& beta);
/// f'' - 2x f' + f.
FormalDiffOp classical_hermite();
/// 2x f'' + 2(alpha+1-x) f' + f.
FormalDiffOp classical_laguerre(const Rational& alpha);
/// "jacobi:a,b", "hermite" or "laguerre:a".
FormalDiffOp classical(std::string_view name);

/// The unique eta with eta p_n = d_n p_n, built by the recursion
///   M_k p_k^(k) = (d_k - d_0) p_k - sum_{j=1}^{k-1} M_j p_k^(j),  M_0 = d_0.
FormalDiffOp synthesized_operator(const PolySeq& p, const SequenceSpec& d);

/// d_n = -K binom(n+alpha+1, n-1) - n + 1, written as -K (r^{alpha+2}_{n-1})^2 - n + 1.
SequenceSpec koornwinder_eigenvalues(const Rational& alpha, const Rational& K);

/// The operator displayed for the Koornwinder-type Laguerre family, taken
/// literally (rising factorial for the Pochhammer symbol).
Poly koornwinder_printed_coeff(const Rational& alpha, const Rational& K, std::size_t k);
FormalDiffOp koornwinder_printed(const Rational& alpha, const Rational& K);

/// Operator with eigenfunctions L^{alpha,K}_n. The synthesized operator is
/// authoritative; diagnostics record where the printed display disagrees with
/// it and whether the printed operator satisfies the eigen-relation.
/// Throws DegenerateEigenvalue(n) if some d_n, n <= horizon, vanishes.
FormalDiffOp koornwinder(const Rational& alpha, const Rational& K, std::size_t horizon = kDefaultHorizon);

struct OrderProbe {
    enum class Kind { FiniteOrder, NoVanishingUpTo, ZeroOperator };
    Kind kind;
    std::size_t order = 0;  ///< FiniteOrder: r.
    std::size_t horizon = 0;
    /// Last index below the horizon with M_k != 0 (informational).
    std::optional<std::size_t> last_nonzero;
};
OrderProbe order_probe(const FormalDiffOp& op, std::size_t horizon = kDefaultHorizon);

}  // namespace opspectra

#endif  // OPSPECTRA_FORMALDIFF_HPP
