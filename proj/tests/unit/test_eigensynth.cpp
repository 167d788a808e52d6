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

#include "opspectra/eigensynth.hpp"
#include "opspectra/error.hpp"
#include "oracles/oracles.hpp"

using namespace opspectra;

namespace {

Poly P(std::initializer_list<Rational> c) {
    std::vector<ExactScalar> v;
    for (const auto& q : c) v.emplace_back(q);
    return Poly(v);
}

// All m_{k,i} (k <= K, i <= k) at once from eta p_n = d_n p_n, n <= K, by a
// dense exact solve of the coefficient equations.
std::vector<Poly> synthesize_by_solve(const std::vector<Poly>& p, const std::vector<ExactScalar>& d, std::size_t K) {
    std::vector<std::pair<std::size_t, std::size_t>> unknowns;
    for (std::size_t k = 0; k <= K; ++k)
        for (std::size_t i = 0; i <= k; ++i) unknowns.emplace_back(k, i);
    const std::size_t N = unknowns.size();
    std::vector<std::vector<ExactScalar>> A;
    std::vector<ExactScalar> b;
    for (std::size_t n = 0; n <= K; ++n) {
        std::vector<Poly> derivs;
        for (std::size_t k = 0; k <= K; ++k) derivs.push_back(oracle::derivative_power_rule(p[n], k));
        for (std::size_t r = 0; r <= n; ++r) {
            std::vector<ExactScalar> row(N);
            for (std::size_t u = 0; u < N; ++u) {
                const auto [k, i] = unknowns[u];
                if (i <= r) row[u] = derivs[k].coeff(r - i);
            }
            A.push_back(row);
            b.push_back(d[n] * p[n].coeff(r));
        }
    }
    const auto sol = oracle::solve(A, b);
    std::vector<Poly> M(K + 1);
    for (std::size_t u = 0; u < N; ++u) M[unknowns[u].first] += Poly::monomial(unknowns[u].second, sol[u]);
    return M;
}

SequenceSpec minus_2n_plus_1() { return SequenceSpec::parse("-2n+1"); }

}  // namespace

TEST_CASE("synthesis recovers the classical operators") {
    for (const Rational a : {Rational(0), Rational(1, 2), Rational(7, 3)}) {
        const auto op = synthesize({PolySeq::laguerre(a), minus_2n_plus_1()}, 8);
        CHECK(op.coeff(0) == Poly(1));
        CHECK(op.coeff(1) == P({2 * (a + 1), -2}));
        CHECK(op.coeff(2) == P({0, 2}));
        for (std::size_t k = 3; k <= 8; ++k) CHECK(op.coeff(k).is_zero());
    }
    const auto h = synthesize({PolySeq::hermite(), minus_2n_plus_1()}, 8);
    CHECK(h.coeff(1) == P({0, -2}));
    CHECK(h.coeff(2) == Poly(1));
    for (std::size_t k = 3; k <= 8; ++k) CHECK(h.coeff(k).is_zero());
}

TEST_CASE("synthesis agrees with a dense solve of the coefficient equations") {
    std::mt19937_64 rng(5);
    const std::size_t K = 6;
    for (const auto& fam : {PolySeq::koornwinder(Rational(1, 2), 1), PolySeq::jacobi(1, Rational(1, 2)),
                            PolySeq::chebyshev_u()}) {
        std::vector<Surd> table;
        std::vector<ExactScalar> dv;
        for (std::size_t n = 0; n <= K; ++n) {
            ExactScalar v(oracle::random_rational(rng));
            if (v.is_zero()) v = 1;
            dv.push_back(v);
            table.emplace_back(v);
        }
        const auto d = SequenceSpec::finite_support(table);
        std::vector<Poly> ps;
        for (std::size_t n = 0; n <= K; ++n) ps.push_back(fam(n));
        const auto M = synthesize_by_solve(ps, dv, K);
        const auto op = synthesize({fam, d}, K);
        for (std::size_t k = 0; k <= K; ++k) CHECK(op.coeff(k) == M[k]);
        for (std::size_t n = 1; n <= K; ++n) CHECK(lemma_ks_lambda(op, n) == dv[n] - dv[0]);
    }
    // Koornwinder eigenvalues: eigen-relation for n <= 6.
    const auto kd = koornwinder_eigenvalues(Rational(1, 2), 1);
    const auto kp = PolySeq::koornwinder(Rational(1, 2), 1);
    const auto kop = synthesize({kp, kd}, 6);
    for (std::size_t n = 0; n <= 6; ++n) CHECK(kop.apply(kp(n)) == kp(n) * kd.eval_scalar(n));
}

TEST_CASE("synthesis is invariant under rescaling each p_n") {
    std::mt19937_64 rng(9);
    const auto L = PolySeq::laguerre(Rational(1, 3));
    std::vector<Poly> scaled;
    for (std::size_t n = 0; n <= 10; ++n) {
        ExactScalar s(oracle::random_rational(rng), oracle::random_rational(rng));
        if (s.is_zero()) s = 3;
        scaled.push_back(L(n) * (n == 0 ? ExactScalar(1) : s));
    }
    const auto d = SequenceSpec::parse("table:[2,-1,5]+tail:n^2");
    const auto a = synthesize({L, d}, 10);
    const auto b = synthesize({PolySeq::user_table(scaled), d}, 10);
    for (std::size_t k = 0; k <= 10; ++k) CHECK(a.coeff(k) == b.coeff(k));
}

TEST_CASE("Lemma KS eigenvalues") {
    const auto ma = classical_laguerre(Rational(1, 2));
    for (std::size_t n = 0; n <= 12; ++n) CHECK(lemma_ks_lambda(ma, n) == ExactScalar(-2 * static_cast<long>(n)));
    const auto ce = counterexample_operator();
    CHECK(lemma_ks_lambda(ce, 3) == ExactScalar(-1));
    CHECK(lemma_ks_lambda(ce, 4) == ExactScalar(-1));
    CHECK(lemma_ks_lambda(ce, 0) == ExactScalar(0));
    const auto r4 = counterexample_operator(CounterexampleVariant::Remark4);
    CHECK(lemma_ks_lambda(r4, 4) == ExactScalar(Rational(288) - Rational(4, 3)));
    const auto dce = implied_eigenvalues(ce);
    CHECK(dce.tag() == SeqTag::PolynomialInN);
    for (std::size_t n = 0; n <= 10; ++n)
        CHECK(dce.eval(n) == Surd(ExactScalar(Rational(4, 3)) + lemma_ks_lambda(ce, n)));
}

TEST_CASE("counterexample operator has no fourth eigenpolynomial") {
    const auto op = counterexample_operator();
    CHECK(op.coeff(4) == P({0, -3, 0, 0, Rational(1, 72)}));
    CHECK(op.known_order() == std::size_t{4});
    const auto d = implied_eigenvalues(op);
    const auto all = eigen_solve_all(op, d, 6);
    REQUIRE(all.size() == 5);
    for (std::size_t n = 1; n <= 3; ++n) {
        CHECK(all[n].kind == SolveOutcome::Kind::Solution);
        CHECK(all[n].p.degree() == n);
        CHECK(op.apply(all[n].p) == all[n].p * d.eval_scalar(n));
    }
    CHECK(all[4].kind == SolveOutcome::Kind::NoSolution);
    CHECK(all[4].witness == 3);
    CHECK_FALSE(all[4].witness_alpha.is_zero());

    // A degree-4 polynomial with eigenvalue d_4 would have to have zero x^3 part
    // relative to p_3; check directly that no monic quartic works.
    std::vector<std::vector<ExactScalar>> A;
    std::vector<ExactScalar> b;
    // eta(x^4 + c3 x^3 + c2 x^2 + c1 x + c0) = d_4 (...), unknowns c0..c3.
    std::vector<Poly> basis{Poly(1), Poly::monomial(1), Poly::monomial(2), Poly::monomial(3)};
    const ExactScalar d4 = d.eval_scalar(4);
    const Poly lhs4 = op.apply(Poly::monomial(4)) - Poly::monomial(4) * d4;
    for (std::size_t r = 0; r <= 4; ++r) {
        std::vector<ExactScalar> row;
        for (const auto& e : basis) row.push_back((op.apply(e) - e * d4).coeff(r));
        A.push_back(row);
        b.push_back(-lhs4.coeff(r));
    }
    // Rows r = 0..3 form a square system; with the x^3 row singular the
    // solver must fail or the x^4 row must be violated.
    bool solvable = true;
    try {
        std::vector<std::vector<ExactScalar>> sq(A.begin(), A.begin() + 4);
        std::vector<ExactScalar> sb(b.begin(), b.begin() + 4);
        const auto c = oracle::solve(sq, sb);
        Poly cand = Poly::monomial(4);
        for (std::size_t i = 0; i < 4; ++i) cand += basis[i] * c[i];
        solvable = op.apply(cand) == cand * d4;
    } catch (const std::runtime_error&) {
        solvable = false;
    }
    CHECK_FALSE(solvable);

    const auto r4 = counterexample_operator(CounterexampleVariant::Remark4);
    const auto all4 = eigen_solve_all(r4, implied_eigenvalues(r4), 4);
    REQUIRE(all4.size() == 5);
    CHECK(all4[4].kind == SolveOutcome::Kind::Solution);
    CHECK(all4[4].p.degree() == std::size_t{4});
}

TEST_CASE("non-uniqueness") {
    // lambda_n = n(n-3)/2: lambda_1 = lambda_2 and lambda_3 = lambda_0.
    const auto op = FormalDiffOp::finite({Poly(1), P({0, -1}), Poly::monomial(2, ExactScalar(Rational(1, 2)))});
    const auto d = implied_eigenvalues(op);
    const auto all = eigen_solve_all(op, d, 5);
    REQUIRE(all.size() == 6);
    CHECK(all[2].kind == SolveOutcome::Kind::NonUnique);
    CHECK(all[2].free_indices == std::vector<std::size_t>{1});
    CHECK(all[3].kind == SolveOutcome::Kind::NonUnique);
    CHECK(all[3].free_indices == std::vector<std::size_t>{0});
    // p_3 + c and p_2 - k p_1 remain eigenfunctions.
    for (const Rational c : {Rational(1), Rational(-7, 2)}) {
        const Poly q = all[3].p + Poly(ExactScalar(c));
        CHECK(op.apply(q) == q * d.eval_scalar(3));
        const Poly r = all[2].p - all[1].p * ExactScalar(c);
        CHECK(op.apply(r) == r * d.eval_scalar(2));
    }
}

TEST_CASE("eigen_solve round trip and error paths") {
    const auto L = PolySeq::laguerre(Rational(1, 2));
    const auto d = SequenceSpec::parse("n^2+1");
    const auto op = synthesize({L, d}, 16);
    const auto all = eigen_solve_all(op, d, 16);
    REQUIRE(all.size() == 17);
    for (std::size_t n = 0; n <= 16; ++n) {
        CHECK(all[n].kind == SolveOutcome::Kind::Solution);
        CHECK(all[n].p == L(n) * L(n).leading().inverse());
    }
    CHECK(eigen_solve(op, d, 1, {Poly(1)}).alphas.size() == 1);
    CHECK_THROWS_AS(eigen_solve(op, SequenceSpec::parse("table:[1]+tail:n^2+3"), 1, {Poly(1)}),
                    IncompatibleEigenvalue);
    CHECK_THROWS_AS(eigen_solve(op, SequenceSpec::parse("table:[1,2]+tail:n^2+2"), 2, {Poly(1), L(1)}),
                    IncompatibleEigenvalue);
    CHECK_THROWS_AS(eigen_solve(op, SequenceSpec::parse("n^2+2"), 1, {Poly(1)}), PreconditionError);
    CHECK_THROWS_AS(eigen_solve(op, d, 2, {Poly(1), Poly::monomial(1)}), PreconditionError);
    CHECK_THROWS_AS(validate({L, SequenceSpec::parse("n-2")}, 8), DegenerateEigenvalue);
    CHECK_THROWS_AS(validate({L, SequenceSpec::parse("3")}, 8), BadParameter);
}

TEST_CASE("expanded recursion equations") {
    const auto H = PolySeq::hermite();
    const auto mh = classical_hermite();
    const EigenPair hp{H, minus_2n_plus_1()};
    for (std::size_t n = 0; n <= 12; ++n) CHECK(expanded_recursion_check(mh, hp, n).ok());
    const auto L = PolySeq::laguerre(Rational(1, 2));
    const EigenPair lp{L, minus_2n_plus_1()};
    CHECK(expanded_recursion_check(classical_laguerre(Rational(1, 2)), lp, 2).ok());
    const auto kp = PolySeq::koornwinder(Rational(1, 2), 1);
    const auto kd = koornwinder_eigenvalues(Rational(1, 2), 1);
    const auto kop = koornwinder(Rational(1, 2), 1, 12);
    for (std::size_t n = 0; n <= 8; ++n) CHECK(expanded_recursion_check(kop, {kp, kd}, n).ok());

    // Corrupt m_{10}.
    const auto bad = FormalDiffOp::finite({Poly(1), P({1, -2}), Poly(1)});
    const auto r = expanded_recursion_check(bad, hp, 3);
    CHECK_FALSE(r.ok());
    CHECK(std::find(r.failing.begin(), r.failing.end(), "e") != r.failing.end());
    // Corrupt the leading coefficient instead.
    const auto bad2 = FormalDiffOp::finite({Poly(1), P({0, -3}), Poly(1)});
    const auto r2 = expanded_recursion_check(bad2, hp, 3);
    CHECK(std::find(r2.failing.begin(), r2.failing.end(), "a") != r2.failing.end());
}

TEST_CASE("infinite-order perturbation") {
    const auto L = PolySeq::laguerre(Rational(1, 2));
    const EigenPair pair{L, minus_2n_plus_1()};
    const auto bump = SequenceSpec::finite_support({Surd(0), Surd(0), Surd(1)});
    const auto rep = perturbation_diagonal(pair, pair.d + bump, 12);
    CHECK(rep.first_index == 2);
    CHECK(rep.agree);
    CHECK(rep.vanishing.empty());
    CHECK(rep.by_recursion[2] == ExactScalar(Rational(1, 2)));
    CHECK(rep.by_recursion[0].is_zero());
    CHECK(rep.by_recursion[1].is_zero());
    for (std::size_t j = 2; j <= 12; ++j) CHECK_FALSE(rep.by_resynthesis[j].is_zero());
    CHECK_THROWS_AS(perturbation_diagonal(pair, pair.d, 12), NoPerturbation);

    // A change at d_0 moves M_0 as well.
    const auto rep0 = perturbation_diagonal(pair, pair.d + SequenceSpec::finite_support({Surd(2)}), 8);
    CHECK(rep0.agree);

    // Changing d at index 3 changes every M_j, j >= 3.
    const auto a = synthesize(pair, 12);
    const auto b = synthesize({L, pair.d + SequenceSpec::finite_support({0, 0, 0, Surd(7)})}, 12);
    for (std::size_t j = 0; j < 3; ++j) CHECK(a.coeff(j) == b.coeff(j));
    for (std::size_t j = 3; j <= 12; ++j) CHECK(a.coeff(j) != b.coeff(j));
}
