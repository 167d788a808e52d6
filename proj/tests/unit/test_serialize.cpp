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

#include <random>
#include <sstream>

#include "opspectra/error.hpp"
#include "opspectra/serialize.hpp"
#include "oracles/oracles.hpp"

using namespace opspectra;
using opspectra::io::json;

TEST_CASE("scalars and polynomials round-trip") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const ExactScalar z(oracle::random_rational(rng, 1000), oracle::random_rational(rng, 5));
        CHECK(io::scalar_from_json(io::to_json(z)) == z);
        const Poly p = oracle::random_poly(rng, 6);
        CHECK(io::poly_from_json(json::parse(io::to_json(p).dump())) == p);
    }
    const Rational big(Integer("123456789012345678901234567890"), Integer(7));
    const json jb = io::to_json(ExactScalar(big));
    CHECK(jb[0].is_string());
    CHECK(io::scalar_from_json(jb) == ExactScalar(big));
    CHECK(io::to_json(Poly::x() * ExactScalar(2)) == json::parse(R"({"coeffs":[[0,1,0,1],[2,1,0,1]]})"));
}

TEST_CASE("surds round-trip") {
    const Surd s = Surd::sqrt(Rational(8, 3)) + Surd(ExactScalar(Rational(1, 2), Rational(-1)));
    CHECK(io::surd_from_json(io::to_json(s)) == s);
}

TEST_CASE("sequences round-trip through their text") {
    for (const char* t : {"-2n+1", "(-1)^n", "table:[1,2,3]+tail:n^2", "(1/2)^n*(n+1)", "rinv(3/2)", "1/(n+1)",
                          "3n/2+3/4+(-1)^n/4", "sqrt(2)*n"}) {
        const auto s = SequenceSpec::parse(t);
        const auto back = io::sequence_from_json(json::parse(io::to_json(s).dump()));
        for (std::size_t n = 0; n < 20; ++n) CHECK(back.eval(n) == s.eval(n));
    }
    const auto op = SequenceSpec::opaque({Surd(1), Surd(5)}, "measured");
    const auto back = io::sequence_from_json(io::to_json(op));
    CHECK(back.form().is_opaque());
    CHECK(back.eval(1) == Surd(5));
    CHECK(io::sequence_from_json(json::parse(R"({"tag":"FiniteSupport","table":[[1,1,0,1],[0,1,0,1],[3,2,0,1]]})"))
              .eval(2) == Surd(Rational(3, 2)));
    CHECK_THROWS_AS(io::sequence_from_json(json::parse(R"({"tag":"Sum"})")), ParseError);
}

TEST_CASE("families round-trip") {
    const std::vector<PolySeq> fams{PolySeq::laguerre(Rational(1, 2)), PolySeq::jacobi(Rational(1, 2), Rational(1, 3)),
                                    PolySeq::hermite(), PolySeq::chebyshev_t(), PolySeq::chebyshev_u(),
                                    PolySeq::scaled_chebyshev_t(), PolySeq::koornwinder(Rational(1, 2), Rational(1)),
                                    PolySeq::translate(PolySeq::chebyshev_t(), Rational(-3, 2)),
                                    PolySeq::user_table({Poly(1), Poly::x() - Poly(ExactScalar(2))})};
    for (const auto& f : fams) {
        const auto back = io::family_from_json(json::parse(io::to_json(f).dump()));
        const std::size_t upto = f.size() ? *f.size() : 6;
        for (std::size_t n = 0; n < upto; ++n) CHECK(back(n) == f(n));
    }
    CHECK(io::family_from_text_or_json(R"({"kind":"laguerre","alpha":"1/1"})")(1) == PolySeq::laguerre(Rational(1))(1));
    CHECK(io::family_from_text_or_json("hermite")(3) == PolySeq::hermite()(3));
}

TEST_CASE("operators, vectors and matrices") {
    const FormalDiffOp op = FormalDiffOp::finite({Poly(ExactScalar(1)), Poly::x(), Poly()});
    const json j = io::to_json(op, 3);
    CHECK(j["order"] == 1);
    const auto back = io::operator_from_json(j);
    CHECK(back.apply(Poly::x().pow(3)) == op.apply(Poly::x().pow(3)));

    const auto v = HqVector::finite({Surd(1), Surd(), Surd::sqrt(Rational(2))}, "laguerre:0", true);
    const auto vb = io::vector_from_json(io::to_json(v));
    CHECK(vb.entries() == v.entries());
    CHECK(vb.normalized);

    const auto A = matrix_rep(PolySeq::laguerre(Rational(0)), SequenceSpec::parse("-2n+1"),
                              PolySeq::laguerre(Rational(1)), false, 6);
    const json m = io::to_json(A, 3);
    CHECK(m["entries"].size() == 28);
    CHECK(m["row_tails"].size() == 3);
    CHECK(m["rule"].get<std::string>().rfind("example1", 0) == 0);
}

TEST_CASE("reports are deterministic") {
    const auto A = matrix_rep(PolySeq::laguerre(Rational(2)), SequenceSpec::parse("-2n+1"),
                              PolySeq::laguerre(Rational(1)), false, 16);
    const auto c = classify(A);
    const std::string a = io::dump(io::to_json(c));
    CHECK(a == io::dump(io::to_json(classify(A))));
    const json j = json::parse(a);
    CHECK(j["thin"] == true);
    CHECK(j["closable"] == true);
    CHECK(j["classes"].size() == 1);
    CHECK(j["classes"][0]["head"] == 0);

    std::ostringstream os;
    io::write_residual_csv(os, {{{1, 2}, 8, 0.5}});
    CHECK(os.str() == "lambda_re,lambda_im,N,residual\n1,2,8,0.5\n");
}
