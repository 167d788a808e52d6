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
 * @file exact.hpp
 * @brief Exact scalars: complex numbers with arbitrary-precision rational parts,
 *        and finite sums of rational multiples of square roots (surds).
 *
 * `ExactScalar` is the coefficient field Q(i) of every symbolic computation.
 * `Surd` extends it by square roots of positive rationals; it is closed under
 * addition and multiplication and is what normalized (orthonormal-basis)
 * coordinates live in, since norm ratios of the catalog families are square
 * roots of rationals.
 *
 * Both types are canonical, so `==` decides equality exactly.
 */

#ifndef OPSPECTRA_EXACT_HPP
#define OPSPECTRA_EXACT_HPP

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace opspectra {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "7", "-3/4" or a finite decimal such as "0.25" exactly.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
Rational factorial(unsigned long n);
/// Generalized binomial t(t-1)...(t-k+1)/k!; zero for negative k.
Rational binomial(const Rational& t, long k);
/// Rising factorial (t)_k = t(t+1)...(t+k-1).
Rational rising_factorial(const Rational& t, unsigned long k);

class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
    ExactScalar(int value) : re_(value) {}   // NOLINT(google-explicit-constructor)
    ExactScalar(Rational re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
    ExactScalar(Rational re, Rational im);

    /// Accepts "a/b", "a/b+c/di", "-2i", "i", decimals.
    static ExactScalar parse(std::string_view text);

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    ExactScalar conj() const { return {re_, -im_}; }
    /// |z|^2, exact.
    Rational norm2() const { return re_ * re_ + im_ * im_; }
    ExactScalar inverse() const;
    ExactScalar pow(long k) const;

    std::complex<double> to_complex() const;
    std::string to_string() const;

    ExactScalar& operator+=(const ExactScalar& o);
    ExactScalar& operator-=(const ExactScalar& o);
    ExactScalar& operator*=(const ExactScalar& o);
    ExactScalar& operator/=(const ExactScalar& o);

    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
    friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }
    ExactScalar operator-() const { return {-re_, -im_}; }

    friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

private:
    Rational re_;
    Rational im_;
};

/// n = square^2 * free with `free` square-free and positive. Throws if n <= 0
/// or if n has a prime factor beyond the trial-division bound that cannot be
/// certified.
std::pair<Integer, Integer> square_free_decompose(const Integer& n);

/// A finite sum  sum_m c_m * sqrt(m)  over distinct square-free m >= 1.
class Surd {
public:
    Surd() = default;
    Surd(const ExactScalar& c);  // NOLINT(google-explicit-constructor)
    Surd(long v) : Surd(ExactScalar(v)) {}  // NOLINT(google-explicit-constructor)
    Surd(int v) : Surd(ExactScalar(v)) {}   // NOLINT(google-explicit-constructor)
    Surd(const Rational& q) : Surd(ExactScalar(q)) {}  // NOLINT(google-explicit-constructor)

    /// sqrt(q) for q >= 0.
    static Surd sqrt(const Rational& q);

    bool is_zero() const { return terms_.empty(); }
    bool is_single_term() const { return terms_.size() <= 1; }
    /// The value when it lies in Q(i).
    std::optional<ExactScalar> as_scalar() const;
    const std::map<Integer, ExactScalar>& terms() const { return terms_; }

    Surd conj() const;
    /// |z|^2 as a surd.
    Surd norm2() const { return *this * conj(); }
    /// Only single-term surds are invertible here.
    Surd inverse() const;

    /// Each component correctly rounded to double.
    std::complex<double> to_complex() const;
    std::string to_string() const;

    Surd& operator+=(const Surd& o);
    Surd& operator-=(const Surd& o);
    Surd& operator*=(const Surd& o);
    Surd& operator/=(const Surd& o) { return *this *= o.inverse(); }

    friend Surd operator+(Surd a, const Surd& b) { return a += b; }
    friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
    friend Surd operator*(const Surd& a, const Surd& b);
    friend Surd operator/(Surd a, const Surd& b) { return a /= b; }
    Surd operator-() const;

    friend bool operator==(const Surd& a, const Surd& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Surd& a, const Surd& b) { return !(a == b); }

private:
    void add_term(const Integer& radicand, const ExactScalar& c);
    std::map<Integer, ExactScalar> terms_;
};

}  // namespace opspectra

#endif  // OPSPECTRA_EXACT_HPP
