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

#include "opspectra/error.hpp"
#include "opspectra/sequence.hpp"

using namespace opspectra;

namespace {

SequenceSpec S(const char* text) { return SequenceSpec::parse(text); }

// Partial sums of |s_n|^2 in floating point; evidence for l2 verdicts.
double partial_square_sum(const SequenceSpec& s, std::size_t count) {
    double acc = 0;
    for (std::size_t n = 0; n < count; ++n) acc += std::norm(s.eval_complex(n));
    return acc;
}

}  // namespace

TEST_CASE("mini-language evaluates exactly") {
    auto d = S("-2n+1");
    CHECK(d.tag() == SeqTag::PolynomialInN);
    CHECK(d.eval_scalar(0) == ExactScalar(1));
    CHECK(d.eval_scalar(2) == ExactScalar(-3));
    auto alt = S("(-1)^n");
    CHECK(alt.tag() == SeqTag::SignAlternating);
    CHECK(alt.eval_scalar(3) == ExactScalar(-1));
    auto r = S("1/(n+1)");
    CHECK(r.tag() == SeqTag::RationalInN);
    CHECK(r.eval_scalar(3) == ExactScalar(Rational(1, 4)));
    auto g = S("(1/2)^n*(n+1)");
    CHECK(g.tag() == SeqTag::Geometric);
    CHECK(g.eval_scalar(2) == ExactScalar(Rational(3, 4)));
    auto t = S("table:[1, 2, 3/2]+tail:const:5");
    CHECK(t.tag() == SeqTag::EventuallyConstant);
    CHECK(t.eval_scalar(2) == ExactScalar(Rational(3, 2)));
    CHECK(t.eval_scalar(40) == ExactScalar(5));
    auto u = S("table:[7]+tail:1/n");
    CHECK(u.eval_scalar(0) == ExactScalar(7));
    CHECK(u.eval_scalar(4) == ExactScalar(Rational(1, 4)));
    CHECK(S("3n/2 + 3/4 + (-1)^n/4").eval_scalar(1) == ExactScalar(2));
    CHECK(S("2^n").eval_scalar(10) == ExactScalar(1024));
    CHECK(S("i^n").eval_scalar(3) == ExactScalar(Rational(0), Rational(-1)));
}

TEST_CASE("parse errors carry columns") {
    try {
        S("2n + )");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.column == 6);
    }
    CHECK_THROWS_AS(S("n^n"), ParseError);
    CHECK_THROWS_AS(S("1/(n+2^n)"), ParseError);
    CHECK_THROWS_AS(S("1/(n-3)"), ParseError);
    CHECK(S("table:[0,0,0,0]+tail:1/(n-3)").eval_scalar(4) == ExactScalar(1));
    CHECK_THROWS_AS(S("table:[1,2"), ParseError);
}

TEST_CASE("text form round-trips") {
    for (const char* text : {"-2n+1", "(-1)^n*(n^2+1)/(n+3)", "table:[1,2]+tail:(1/3)^n", "rinv(3/2)",
                             "sqrt(2)*n + rnorm(1/2)^2", "(1/2+1/2i)^n"}) {
        const auto s = S(text);
        const auto back = S(s.describe().c_str());
        CHECK_MESSAGE(back.form() == s.form(), text);
        for (std::size_t n = 0; n < 12; ++n) CHECK(back.eval(n) == s.eval(n));
    }
}

TEST_CASE("Laguerre norm factors") {
    auto r = SequenceSpec::laguerre_norm(1, 1);
    CHECK(r.eval(0) == Surd(1));
    CHECK(r.eval(1) == Surd::sqrt(2));
    CHECK(r.eval(2) == Surd::sqrt(3));
    // r_{n-1}^2 = r_n^2 * n/(n+beta) is absorbed into a rational factor
    auto sq = SequenceSpec::laguerre_norm(Rational(1, 2), 2);
    auto shifted = sq.shift(-1);
    for (std::size_t n = 1; n < 8; ++n) CHECK(shifted.eval(n) == sq.eval(n - 1));
    CHECK(shifted.eval(0) == Surd(0));
}

TEST_CASE("l2 membership decisions") {
    CHECK(l2_membership(SequenceSpec::eventually_constant({}, 2)) == Verdict::No);
    CHECK(l2_membership(SequenceSpec::eventually_constant({1, 2}, 0)) == Verdict::Yes);
    CHECK(l2_membership(SequenceSpec::finite_support({1, 2, 3})) == Verdict::Yes);
    CHECK(l2_membership(S("1/(n+1)")) == Verdict::Yes);
    CHECK(l2_membership(S("1/sqrt(2)")) == Verdict::No);
    CHECK(l2_membership(S("n")) == Verdict::No);
    CHECK(l2_membership(S("(1/2)^n*n^5")) == Verdict::Yes);
    CHECK(l2_membership(S("2^n/(n+1)")) == Verdict::No);
    CHECK(l2_membership(S("(-1)^n/(n+1)")) == Verdict::Yes);
    CHECK(l2_membership(S("1 + (-1)^n")) == Verdict::No);
    CHECK(l2_membership(S("(1+(-1)^n)/(n+1)")) == Verdict::Yes);
    for (const char* beta : {"1/2", "1", "3/2", "3"}) {
        const auto s = SequenceSpec::laguerre_norm_reciprocal(parse_rational(beta));
        CHECK(l2_membership(s) == (parse_rational(beta) > 1 ? Verdict::Yes : Verdict::No));
    }
    CHECK(l2_membership(SequenceSpec::opaque({1, 2}, "unknown")) == Verdict::Undecidable);
    // rnorm(1)_n - rnorm(1)_{n+1} could cancel at leading order
    CHECK(l2_membership(S("rnorm(1) - rnorm(1, 1, 1)")) == Verdict::Undecidable);

    const double pi2_6 = M_PI * M_PI / 6;
    CHECK(partial_square_sum(S("1/(n+1)"), 5000) < pi2_6);
    CHECK(partial_square_sum(SequenceSpec::laguerre_norm_reciprocal(2), 5000) < 10.0);
}

TEST_CASE("differences and shifts use the zero convention below index 0") {
    auto d = S("-2n+1");
    auto c = SequenceSpec::difference_of(d);
    CHECK(c.eval_scalar(0) == ExactScalar(1));
    for (std::size_t k = 1; k < 10; ++k) CHECK(c.eval_scalar(k) == ExactScalar(-2));
    CHECK(d.shift(1).eval_scalar(0) == ExactScalar(-1));
    CHECK(d.shift(-2).eval_scalar(1) == ExactScalar(0));
    CHECK(d.shift(-2).eval_scalar(2) == ExactScalar(1));
}

TEST_CASE("restriction to residue classes") {
    auto s = S("(-1)^n*(n+1)");
    auto even = s.restrict(2, 0);
    auto odd = s.restrict(2, 1);
    CHECK(even.form().period() == 1);
    CHECK(s.form().period() == 2);
    for (std::size_t n = 0; n < 6; ++n) {
        CHECK(even.eval(n) == s.eval(2 * n));
        CHECK(odd.eval(n) == s.eval(2 * n + 1));
    }
}

TEST_CASE("series convergence and limits") {
    CHECK(series_verdict(S("1/(n+1)^2")).converges == Verdict::Yes);
    CHECK(*series_verdict(S("1/(n+1)^3")).tail_exponent == Rational(-2));
    CHECK(series_verdict(S("1/(n+1)")).converges == Verdict::No);
    CHECK(series_verdict(S("(-1)^n/(n+1)")).converges == Verdict::Yes);
    CHECK(series_verdict(S("(1/3)^n")).converges == Verdict::Yes);
    CHECK(!series_verdict(S("(1/3)^n")).tail_exponent);
    CHECK(*S("1 + 1/(n+1)").form().limit() == Surd(1));
    CHECK(*S("(2n+1)/(n+1) + (1/2)^n").form().limit() == Surd(2));
    CHECK(!S("(-1)^n").form().limit());
}

TEST_CASE("products cancel exactly") {
    // (1 - (-1)^n)/(2(n+1)) vanishes on even n; (1 + (-1)^n)/2 vanishes on odd n
    auto f = S("(1 - (-1)^n)/(2n+2)");
    auto w = S("(1 + (-1)^n)/2");
    CHECK((f * w).form().is_zero());
    CHECK(S("n - n").form().is_zero());
    CHECK(S("(n^2-1)/(n+1)").form() == S("n-1").form());
}
