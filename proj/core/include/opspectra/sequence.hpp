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
 * @file sequence.hpp
 * @brief Symbolic scalar sequences indexed by n >= 0.
 *
 * A `ClosedForm` is a finite table of exact values followed by a tail
 *
 *     s_n = sum_t sqrt(m_t) * b_t^n * N_t(n)/D_t(n) * prod_f (r^{beta_f}_{a_f n + c_f})^{e_f}
 *
 * where r^beta_k is the Laguerre norm (Gamma-ratio square root, see
 * families.hpp). The class is closed under sums, products, index shifts,
 * residue restriction and conjugation, which is all the operator-theoretic
 * code needs, and it is rich enough that square-summability and series
 * convergence can be decided from the growth exponents of the tail terms.
 *
 * `SequenceSpec` wraps a closed form with the tag it was built from, so that
 * reports and JSON keep the user's vocabulary.
 */

#ifndef OPSPECTRA_SEQUENCE_HPP
#define OPSPECTRA_SEQUENCE_HPP

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opspectra/exact.hpp"
#include "opspectra/poly.hpp"

namespace opspectra {

enum class Verdict { Yes, No, Undecidable };
std::string to_string(Verdict v);

/// (r^beta_{a n + c})^e.
struct NormFactor {
    Rational beta;
    long a = 1;
    long c = 0;
    int e = 1;
};
bool operator==(const NormFactor& x, const NormFactor& y);
bool operator<(const NormFactor& x, const NormFactor& y);

/// Squared Laguerre norm R^beta_k = prod_{i=1}^k (1 + beta/i).
Rational laguerre_norm_squared(const Rational& beta, std::size_t k);

struct TailTerm {
    Integer radicand{1};
    ExactScalar base{1};
    std::vector<NormFactor> factors;
    Poly num;
    Poly den{1};

    /// Growth exponent: deg N - deg D + sum e*beta/2.
    Rational sigma() const;
};

struct SeriesVerdict {
    Verdict converges = Verdict::Undecidable;
    /// Tail sums sum_{u>n} are O(n^tail_exponent); nullopt means geometric decay.
    std::optional<Rational> tail_exponent;
    /// True when the tail bound is also the exact order (a single dominant term).
    bool tail_exact = false;
};

enum class ZeroStatus { Zero, NonZero, Unknown };

class ClosedForm {
public:
    ClosedForm() = default;

    static ClosedForm constant(const Surd& c);
    static ClosedForm polynomial(const Poly& p);
    static ClosedForm rational(const Poly& num, const Poly& den);
    static ClosedForm geometric(const ExactScalar& base, const Poly& factor);
    /// (r^beta_{a n + c})^e; entries with a n + c < 0 read as 0.
    static ClosedForm norm_power(const Rational& beta, int e, long a = 1, long c = 0);
    /// Explicit values for n < prefix.size(), then `tail` (indexed absolutely).
    static ClosedForm with_prefix(std::vector<Surd> prefix, const ClosedForm& tail);
    /// Known prefix, unknown tail; eval beyond the prefix throws.
    static ClosedForm opaque(std::vector<Surd> prefix);

    bool is_opaque() const { return opaque_; }
    std::size_t start() const { return prefix_.size(); }
    const std::vector<Surd>& prefix() const { return prefix_; }
    const std::vector<TailTerm>& terms() const { return terms_; }

    Surd eval(std::size_t n) const;
    std::complex<double> eval_complex(std::size_t n) const;

    ClosedForm operator+(const ClosedForm& o) const;
    ClosedForm operator-(const ClosedForm& o) const;
    ClosedForm operator*(const ClosedForm& o) const;
    ClosedForm operator-() const;
    ClosedForm scaled(const Surd& s) const;
    /// n -> s_{n+m}; indices below zero read as 0.
    ClosedForm shift(long m) const;
    /// n -> s_{P n + r}.
    ClosedForm restrict(long period, long residue) const;
    ClosedForm conj() const;
    /// s_n - s_{n-1} with s_{-1} = 0.
    ClosedForm difference() const;
    /// Inverse of a single-term tail without prefix; throws otherwise. Poles
    /// below `valid_from` are allowed (those entries read as 0).
    ClosedForm inverse(std::size_t valid_from = 0) const;
    /// The symbolic tail alone, with the table dropped; meaningful from start().
    ClosedForm tail_only() const;

    bool is_constant() const;
    ZeroStatus zero_status() const;
    bool is_zero() const { return zero_status() == ZeroStatus::Zero; }
    friend bool operator==(const ClosedForm& a, const ClosedForm& b);

    /// Smallest period P such that every base b has b^P real positive, among P <= 12.
    long period() const;
    std::optional<Surd> limit() const;
    Verdict l2() const;
    SeriesVerdict series() const;

    /// Mini-language text that parses back to an equal form.
    std::string to_string() const;

private:
    void normalize();
    bool tail_valid_at(std::size_t n) const;
    Surd tail_eval(std::size_t n) const;
    void check_poles() const;

    std::vector<Surd> prefix_;
    std::vector<TailTerm> terms_;
    bool opaque_ = false;
};

enum class SeqTag {
    FiniteSupport,
    EventuallyConstant,
    PolynomialInN,
    RationalInN,
    Geometric,
    SignAlternating,
    LaguerreNormReciprocal,
    LaguerreNorm,
    DifferenceOf,
    UserTableWithTail,
    Opaque,
    Sum,
    Product,
    Scaled,
    Shift,
    Restrict,
    Conj,
    Expr,
};
std::string to_string(SeqTag t);

class SequenceSpec;

/// Construction record of a SequenceSpec; mirrors the JSON schema.
struct SeqNode {
    SeqTag tag = SeqTag::Expr;
    std::vector<Surd> table;
    ExactScalar value;    // EventuallyConstant c, Scaled factor (if scalar)
    Surd scale;           // Scaled factor
    Poly p1, p2;          // polynomial, numerator/denominator, geometric factor
    ExactScalar base{1};  // Geometric
    Rational beta;        // LaguerreNorm*
    int power = 1;        // LaguerreNorm
    long shift = 0;       // Shift amount, Restrict period
    long residue = 0;     // Restrict residue
    std::string text;     // Expr source / Opaque note
    std::vector<SequenceSpec> children;
};

class SequenceSpec {
public:
    SequenceSpec();

    static SequenceSpec finite_support(std::vector<Surd> table);
    static SequenceSpec eventually_constant(std::vector<Surd> prefix, const ExactScalar& c);
    static SequenceSpec polynomial(const Poly& p);
    static SequenceSpec rational(const Poly& num, const Poly& den);
    static SequenceSpec geometric(const ExactScalar& base, const Poly& factor);
    static SequenceSpec sign_alternating(const Poly& p);
    static SequenceSpec laguerre_norm_reciprocal(const Rational& beta);
    /// (r^beta_n)^power.
    static SequenceSpec laguerre_norm(const Rational& beta, int power);
    static SequenceSpec difference_of(const SequenceSpec& s);
    static SequenceSpec table_with_tail(std::vector<Surd> prefix, const SequenceSpec& tail);
    static SequenceSpec opaque(std::vector<Surd> prefix, std::string note);
    static SequenceSpec from_form(const ClosedForm& form, std::string text = {});

    /// Mini-language; see README. Errors are ParseError with a 1-based column.
    static SequenceSpec parse(std::string_view text);

    SequenceSpec operator+(const SequenceSpec& o) const;
    SequenceSpec operator-(const SequenceSpec& o) const;
    SequenceSpec operator*(const SequenceSpec& o) const;
    SequenceSpec scaled(const Surd& s) const;
    SequenceSpec shift(long m) const;
    SequenceSpec restrict(long period, long residue) const;
    SequenceSpec conj() const;

    Surd eval(std::size_t n) const { return form_->eval(n); }
    /// Throws DomainError when the value is irrational.
    ExactScalar eval_scalar(std::size_t n) const;
    std::complex<double> eval_complex(std::size_t n) const { return form_->eval_complex(n); }
    std::vector<Surd> values(std::size_t count) const;

    const ClosedForm& form() const { return *form_; }
    const SeqNode& node() const { return *node_; }
    SeqTag tag() const { return node_->tag; }
    std::string describe() const { return form_->to_string(); }

private:
    SequenceSpec(std::shared_ptr<const SeqNode> node, std::shared_ptr<const ClosedForm> form);
    static SequenceSpec make(SeqNode node, ClosedForm form);

    std::shared_ptr<const SeqNode> node_;
    std::shared_ptr<const ClosedForm> form_;
};

Verdict l2_membership(const SequenceSpec& s);
SeriesVerdict series_verdict(const SequenceSpec& s);

}  // namespace opspectra

#endif  // OPSPECTRA_SEQUENCE_HPP
