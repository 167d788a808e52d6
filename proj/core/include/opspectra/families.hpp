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
 * @file families.hpp
 * @brief Catalog of polynomial sequences, their three-term recurrences,
 *        Laguerre norms and connection coefficients.
 */

#ifndef OPSPECTRA_FAMILIES_HPP
#define OPSPECTRA_FAMILIES_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opspectra/exact.hpp"
#include "opspectra/poly.hpp"
#include "opspectra/sequence.hpp"

namespace opspectra {

/// Default verification horizon shared by every module.
inline constexpr std::size_t kDefaultHorizon = 64;

enum class FamilyKind {
    Laguerre,
    Jacobi,
    Hermite,
    ChebyshevT,
    ChebyshevU,
    ScaledChebyshevT,
    KoornwinderLaguerre,
    Translate,
    UserTable,
};

/// A graded polynomial sequence (p_n). Copies share one memo cache, which is
/// guarded by a mutex, so a PolySeq may be queried from several threads.
class PolySeq {
public:
    static PolySeq laguerre(const Rational& alpha);
    static PolySeq jacobi(const Rational& alpha, const Rational& beta);
    static PolySeq hermite();
    static PolySeq chebyshev_t();
    static PolySeq chebyshev_u();
    /// p_0 = T_0, p_n = 2 T_n.
    static PolySeq scaled_chebyshev_t();
    static PolySeq koornwinder(const Rational& alpha, const Rational& K);
    /// p_n(x) = inner_n(x + shift).
    static PolySeq translate(const PolySeq& inner, const Rational& shift);
    /// Explicit list; index beyond the table throws DomainError.
    static PolySeq user_table(std::vector<Poly> polys);

    /// "laguerre:1/2", "jacobi:a,b", "hermite", "chebyshevT", "chebyshevU",
    /// "scaledT", "koornwinder:a,K", "translate:<family>,s".
    static PolySeq parse(std::string_view text);

    FamilyKind kind() const;
    const Rational& alpha() const;
    const Rational& beta() const;
    const Rational& K() const;
    const Rational& shift() const;
    /// Inner family of a Translate; throws otherwise.
    const PolySeq& inner() const;
    /// Table length for UserTable, otherwise nullopt (unbounded).
    std::optional<std::size_t> size() const;

    Poly operator()(std::size_t n) const;
    BasisFn basis() const;
    /// Canonical text accepted by parse() (UserTable yields "usertable[n]").
    std::string name() const;
    /// True for the catalog OPS kinds; UserTable is never assumed orthogonal.
    bool is_catalog_ops() const;

    friend bool operator==(const PolySeq& a, const PolySeq& b);
    friend bool operator!=(const PolySeq& a, const PolySeq& b) { return !(a == b); }

private:
    struct Impl;
    explicit PolySeq(std::shared_ptr<Impl> impl);
    std::shared_ptr<Impl> impl_;
};

Poly make_poly(const PolySeq& seq, std::size_t n);

/// Laguerre norm r^beta_k = sqrt(prod_{i<=k} (1 + beta/i)); beta > -1.
Surd laguerre_norm(const Rational& beta, std::size_t k);

/// Coefficients of from_n in the `to` basis, by exact back-substitution. When
/// a tabulated connection relation applies the two must agree; a mismatch
/// throws Error.
std::vector<ExactScalar> connection(const PolySeq& from, const PolySeq& to, std::size_t n);
/// The tabulated relations only (Laguerre parameter steps, T/U/scaled T).
std::optional<std::vector<ExactScalar>> known_connection(const PolySeq& from, const PolySeq& to,
                                                         std::size_t n);

struct Recurrence3 {
    SequenceSpec a, b, c;
};

/// x p_n = a_n p_{n+1} + b_n p_n + c_n p_{n-1}, checked against the generator
/// for n < horizon. Throws NotOrthogonal for sequences without such a
/// recurrence (or with a_{n-1} c_n not positive, which rules out a
/// positive-definite functional).
Recurrence3 recurrence_coeffs(const PolySeq& seq, std::size_t horizon = kDefaultHorizon);

}  // namespace opspectra

#endif  // OPSPECTRA_FAMILIES_HPP
