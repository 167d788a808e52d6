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

#include <doctest.h>

#include <cmath>
#include <random>

#include "opspectra/error.hpp"
#include "opspectra/exact.hpp"
#include "opspectra/poly.hpp"
#include "oracles/oracles.hpp"

using namespace opspectra;

namespace {

Poly P(std::initializer_list<Rational> c) {
    std::vector<ExactScalar> v;
    for (const auto& q : c) v.emplace_back(q);
    return Poly(v);
}

BasisFn from_list(const std::vector<Poly>& b) {
    return [b](std::size_t n) { return b.at(n); };
}

}  // namespace

TEST_CASE("rational parsing is exact") {
    CHECK(parse_rational("-3/4") == Rational(-3, 4));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational(" 7 ") == Rational(7));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
}

TEST_CASE("complex scalars") {
    const ExactScalar a = ExactScalar::parse("1/2+3i");
    const ExactScalar b = ExactScalar::parse("-2i");
    CHECK(a.re() == Rational(1, 2));
    CHECK(a.im() == Rational(3));
    CHECK(b.im() == Rational(-2));
    CHECK((a + b) - b == a);
    CHECK(a * a.inverse() == ExactScalar(1));
    CHECK(a.conj().im() == Rational(-3));
    CHECK(ExactScalar::parse(a.to_string()) == a);
    CHECK_THROWS_AS(ExactScalar(0).inverse(), DivisionByZero);
    CHECK(ExactScalar(-1).pow(5) == ExactScalar(-1));
    CHECK(ExactScalar(2).pow(-2) == ExactScalar(Rational(1, 4)));
}

TEST_CASE("surds are canonical") {
    CHECK(Surd::sqrt(Rational(8)) == Surd::sqrt(Rational(2)) * Surd(2));
    CHECK(Surd::sqrt(Rational(2)) * Surd::sqrt(Rational(6)) == Surd(2) * Surd::sqrt(Rational(3)));
    CHECK(Surd::sqrt(Rational(1, 2)) * Surd::sqrt(Rational(2)) == Surd(1));
    CHECK((Surd::sqrt(Rational(3)) + Surd(1)) - Surd(1) == Surd::sqrt(Rational(3)));
    CHECK(Surd::sqrt(Rational(5)).inverse() * Surd::sqrt(Rational(5)) == Surd(1));
    CHECK_THROWS((Surd::sqrt(Rational(2)) + Surd(1)).inverse());
    const auto v = Surd::sqrt(Rational(2)).to_complex();
    CHECK(v.real() == std::sqrt(2.0));
    auto [sq, fr] = square_free_decompose(Integer(72));
    CHECK(sq == 6);
    CHECK(fr == 2);
}

TEST_CASE("derivative") {
    CHECK(derivative(Poly::monomial(2), 1) == P({0, 2}));
    CHECK(derivative(Poly::monomial(4), 4) == Poly(24));
    // L_2^0 = 1 - 2x + x^2/2
    CHECK(derivative(P({1, -2, Rational(1, 2)}), 1) == P({-2, 1}));
    CHECK(derivative(Poly(5), 1).is_zero());
    CHECK_FALSE(derivative(Poly(5), 1).degree().has_value());

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Poly f = oracle::random_poly(rng, 12);
        Poly g = oracle::random_poly(rng, 9);
        const ExactScalar a(oracle::random_rational(rng)), b(oracle::random_rational(rng));
        for (std::size_t k : {0u, 1u, 3u, 7u}) {
            CHECK(derivative(f, k) == oracle::derivative_power_rule(f, k));
            CHECK(derivative(f * a + g * b, k) == derivative(f, k) * a + derivative(g, k) * b);
        }
    }
}

TEST_CASE("affine composition") {
    CHECK(affine_compose(Poly::monomial(2), 1, 0) == Poly::monomial(2));
    CHECK(affine_compose(Poly::x(), -1, 5) == P({5, -1}));
    CHECK(affine_compose(P({-1, 0, 2}), -1, 0) == P({-1, 0, 2}));
    CHECK_THROWS_AS(affine_compose(Poly::x(), 0, 1), DegenerateAffine);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Poly f = oracle::random_poly(rng, 10);
        ExactScalar a(oracle::random_rational(rng));
        if (a.is_zero()) a = ExactScalar(3);
        const ExactScalar b(oracle::random_rational(rng));
        const Poly g = affine_compose(f, a, b);
        CHECK(g.degree() == f.degree());
        CHECK(affine_compose(g, a.inverse(), -b / a) == f);
        const ExactScalar x(oracle::random_rational(rng));
        CHECK(g(x) == f(a * x + b));
    }
}

TEST_CASE("change of basis against a dense solve") {
    const auto lag0 = oracle::laguerre_recurrence(0, 40);
    const auto lag_half = oracle::laguerre_recurrence(Rational(1, 2), 40);
    const auto lag_3half = oracle::laguerre_recurrence(Rational(3, 2), 40);
    CHECK(change_basis(Poly(1), from_list(lag0)) == std::vector<ExactScalar>{1});
    CHECK(change_basis(Poly::monomial(2), from_list(lag0)) == std::vector<ExactScalar>{2, -4, 2});
    CHECK(change_basis(lag_3half[1], from_list(lag_half)) == std::vector<ExactScalar>{1, 1});

    std::mt19937_64 rng(3);
    for (std::size_t deg : {0u, 1u, 5u, 17u, 32u}) {
        Poly f = oracle::random_poly(rng, deg);
        const auto c = change_basis(f, from_list(lag_half));
        CHECK(c == oracle::coords_by_solve(f, lag_half));
        CHECK(expand(c, from_list(lag_half)) == f);
    }
}

TEST_CASE("polynomial algebra") {
    std::mt19937_64 rng(5);
    Poly f = oracle::random_poly(rng, 6), g = oracle::random_poly(rng, 4);
    CHECK(*(f * g).degree() == 10);
    auto [q, r] = divmod(f, g);
    CHECK(q * g + r == f);
    CHECK(gcd(f * g, g * P({1, 1})) == gcd(g, g));
    CHECK(Poly().to_string() == "0");
    CHECK(P({1, -2, Rational(1, 2)}).to_string() == "1 - 2*x + 1/2*x^2");
}
