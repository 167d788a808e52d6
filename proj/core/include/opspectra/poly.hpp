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

#ifndef OPSPECTRA_POLY_HPP
#define OPSPECTRA_POLY_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opspectra/exact.hpp"

namespace opspectra {

/// Dense univariate polynomial over Q(i). Trailing zeros are always trimmed,
/// so the zero polynomial has no coefficients and no degree.
class Poly {
public:
    Poly() = default;
    Poly(const ExactScalar& c);  // NOLINT(google-explicit-constructor)
    Poly(long c) : Poly(ExactScalar(c)) {}  // NOLINT(google-explicit-constructor)
    Poly(int c) : Poly(ExactScalar(c)) {}   // NOLINT(google-explicit-constructor)
    explicit Poly(std::vector<ExactScalar> coeffs);

    static Poly x() { return monomial(1); }
    static Poly monomial(std::size_t k, const ExactScalar& c = ExactScalar(1));

    /// nullopt for the zero polynomial.
    std::optional<std::size_t> degree() const;
    bool is_zero() const { return c_.empty(); }
    const std::vector<ExactScalar>& coeffs() const { return c_; }
    /// Coefficient of x^k; zero beyond the degree.
    ExactScalar coeff(std::size_t k) const;
    /// Leading coefficient; throws on the zero polynomial.
    const ExactScalar& leading() const;

    ExactScalar operator()(const ExactScalar& x) const;
    Poly conj() const;
    Poly pow(unsigned k) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const ExactScalar& s);

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const ExactScalar& s) { return a *= s; }
    friend Poly operator*(const ExactScalar& s, Poly a) { return a *= s; }
    Poly operator-() const;

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// Human form, e.g. "3/2 - 2*x + x^2".
    std::string to_string(const std::string& var = "x") const;

private:
    void trim();
    std::vector<ExactScalar> c_;
};

Poly derivative(const Poly& f, std::size_t k = 1);
/// f(a x + b); a must be non-zero.
Poly affine_compose(const Poly& f, const ExactScalar& a, const ExactScalar& b);
/// Euclidean division; throws DivisionByZero for g = 0.
std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g);
/// Monic gcd (zero when both inputs are zero).
Poly gcd(const Poly& f, const Poly& g);

/// Graded basis accessor: returns the n-th basis polynomial, degree n.
using BasisFn = std::function<Poly(std::size_t)>;

/// Unique (c_j) with f = sum_j c_j basis_j, by back-substitution.
std::vector<ExactScalar> change_basis(const Poly& f, const BasisFn& basis);
/// sum_j c_j basis_j.
Poly expand(const std::vector<ExactScalar>& coeffs, const BasisFn& basis);

}  // namespace opspectra

#endif  // OPSPECTRA_POLY_HPP
