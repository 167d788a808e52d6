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

#include "opspectra/error.hpp"
#include "opspectra/thinmat.hpp"

using namespace opspectra;

namespace {

const Rational kAlpha(1, 2);

StructuredMatrix ex1(const char* d, std::size_t h = 32) {
    return matrix_rep(PolySeq::laguerre(kAlpha), SequenceSpec::parse(d), PolySeq::laguerre(kAlpha + 1), false, h);
}

StructuredMatrix ex2(const char* d, std::size_t h = 32) {
    return matrix_rep(PolySeq::laguerre(kAlpha + 1), SequenceSpec::parse(d), PolySeq::laguerre(kAlpha), false, h);
}

StructuredMatrix parity(const char* d, std::size_t h = 32) {
    return matrix_rep(PolySeq::scaled_chebyshev_t(), SequenceSpec::parse(d), PolySeq::chebyshev_u(), false, h);
}

// Direct check of the partition: rows j, k are in one part iff a_j - mu a_k
// vanishes beyond the horizon for mu from the tails at two far columns.
bool same_part_by_entries(const StructuredMatrix& A, std::size_t j, std::size_t k) {
    const std::size_t far = 2000;
    for (std::size_t c = far; c < far + 4; ++c) {
        const auto aj = A.entry_complex(j, c);
        const auto ak = A.entry_complex(k, c);
        if ((std::abs(aj) < 1e-12) != (std::abs(ak) < 1e-12)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("row equivalence of catalog rows") {
    const auto A = ex2("-2n+1");
    const auto e = row_equiv(A.row_spec(2), A.row_spec(5));
    CHECK(e.kind == EquivKind::Equivalent);
    REQUIRE(e.mu);
    CHECK(*e.mu == Surd(1));

    const auto B = ex1("n^2");
    // Row tails are constants -(2j+1).
    const auto f = row_equiv(B.row_spec(1), B.row_spec(3));
    CHECK(f.kind == EquivKind::Equivalent);
    REQUIRE(f.mu);
    CHECK(*f.mu == Surd(Rational(3, 7)));

    const auto C = ex2("2-(1/2)^n");
    const auto g = row_equiv(C.row_spec(0), C.row_spec(4));
    CHECK(g.kind == EquivKind::Equivalent);
    CHECK_FALSE(g.mu);

    const auto D = parity("-2n+1");
    CHECK(row_equiv(D.row_spec(0), D.row_spec(1)).kind == EquivKind::NotEquivalent);
    CHECK(row_equiv(D.row_spec(0), D.row_spec(2)).kind == EquivKind::Equivalent);
}

TEST_CASE("constant differences: one class, thin, closable") {
    const auto A = ex2("-2n+1");
    const auto c = classify(A);
    REQUIRE(c.classes.size() == 1);
    CHECK(c.classes[0].head == 0);
    CHECK_FALSE(c.has_l2_rows());
    for (std::size_t j = 0; j < 40; ++j) CHECK(c.m(j) == Surd(1));
    CHECK(is_thin(c));
    CHECK(closability_verdict(c) == Closability::Closable);
    const auto b = is_blocked(c);
    CHECK(b.blocked);
    CHECK(b.vacuous);
}

TEST_CASE("square-summable differences give I = {0}") {
    const auto c = classify(ex2("2-(1/2)^n"));
    CHECK(c.classes.empty());
    CHECK(c.has_l2_rows());
    CHECK(is_thin(c));
    CHECK(closability_verdict(c) == Closability::Closable);
    CHECK_FALSE(noncontinuity_witness(c));
}

TEST_CASE("period-two multiplier") {
    const auto A = ex1("3n/2+3/4+(-1)^n/4");
    const auto c = classify(A);
    REQUIRE(c.classes.size() == 1);
    CHECK(c.period == 2);
    CHECK(c.m(0) == Surd(1));
    CHECK(c.m(1) == Surd(2));
    CHECK(c.m(7) == Surd(2));
    CHECK(c.m(10) == Surd(1));
    const auto mf = c.m_form();
    REQUIRE(mf);
    for (std::size_t j = 0; j < 30; ++j) CHECK(mf->eval(j) == c.m(j));
    CHECK(is_thin(c));
}

TEST_CASE("parity matrix is blocked with two classes") {
    const auto A = parity("-2n+1");
    const auto c = classify(A);
    REQUIRE(c.classes.size() == 2);
    CHECK(c.classes[0].head == 0);
    CHECK(c.classes[1].head == 1);
    CHECK(c.classes.size() + (c.has_l2_rows() ? 1 : 0) <= 3);
    for (std::size_t j = 0; j < 12; ++j)
        for (std::size_t k = 0; k < 12; ++k) CHECK((c.part_of(j) == c.part_of(k)) == same_part_by_entries(A, j, k));
    const auto b = is_blocked(c);
    CHECK(b.blocked);
    CHECK_FALSE(b.vacuous);
    CHECK(b.certified);
    CHECK(is_thin(c));
    CHECK(closability_verdict(c) == Closability::Closable);
}

TEST_CASE("blocked with a square-summable multiplier is not closable") {
    const auto A = parity("(-2n+1)*(1+(-1)^n)/2 + (1-(-1)^n)/(n+1)");
    const auto c = classify(A);
    REQUIRE(c.classes.size() == 2);
    CHECK_FALSE(is_thin(c));
    const auto b = is_blocked(c);
    CHECK(b.blocked);
    CHECK(b.certified);
    CHECK(closability_verdict(c) == Closability::NotClosable);
    CHECK(closability_verdict(A) == Closability::NotClosable);
}

TEST_CASE("generic example1 diagonal is vacuously blocked") {
    const auto c = classify(ex1("n^2"));
    REQUIRE(c.classes.size() == 1);
    CHECK(c.m(3) == Surd(7));
    CHECK(is_blocked(c).vacuous);
    CHECK(is_thin(c));
}

TEST_CASE("constant diagonal has no non-l2 rows") {
    const auto c = classify(ex2("5"));
    CHECK(c.classes.empty());
    CHECK(is_blocked(c).vacuous);
}

TEST_CASE("thinning rows are square-summable") {
    for (const auto* d : {"-2n+1", "n^2", "3n/2+3/4+(-1)^n/4"}) {
        const auto A = std::string(d) == "-2n+1" ? parity(d) : ex1(d);
        const auto c = classify(A);
        for (std::size_t j = 0; j < 20; ++j) {
            CHECK(c.thinning_row(j).l2() == Verdict::Yes);
            for (std::size_t k = j; k < 40; ++k) CHECK(c.thinning_row(j).eval(k) == c.thinning(j, k));
        }
    }
}

TEST_CASE("graph closure relation on graph points") {
    const auto A = ex2("-2n+1");
    const auto c = classify(A);
    const auto& prov = A.provenance();
    for (std::size_t n : {0, 3, 9}) {
        std::vector<Surd> x;
        for (const auto& v : connection(prov.p, prov.q, n)) x.emplace_back(v);
        std::vector<Surd> y;
        const Surd dn = prov.d.eval(n);
        for (const auto& v : x) y.push_back(v * dn);
        const auto rep = graph_closure_relation(c, HqVector::finite(x), HqVector::finite(y), 30);
        CHECK(rep.checked == 31);
        REQUIRE(rep.exact_zero);
        CHECK(*rep.exact_zero);
        y[0] += Surd(1);
        const auto bad = graph_closure_relation(c, HqVector::finite(x), HqVector::finite(y), 30);
        CHECK_FALSE(*bad.exact_zero);
    }
}

TEST_CASE("non-continuity witness") {
    const auto c = classify(ex2("-2n+1", 24));
    const auto w = noncontinuity_witness(c, 512);
    REQUIRE(w);
    CHECK(w->head == 0);
    CHECK(w->holds);
    CHECK(w->value_at_head == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w->norms.back().second < 0.03);
}

TEST_CASE("opaque rows are refused") {
    const auto A = matrix_rep(PolySeq::hermite(), SequenceSpec::parse("n"), PolySeq::laguerre(kAlpha), false, 12);
    CHECK_THROWS_AS(classify(A), ClassificationRefused);
    CHECK(closability_verdict(A) == Closability::Unknown);
}
