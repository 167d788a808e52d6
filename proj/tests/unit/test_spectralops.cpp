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

#include "opspectra/error.hpp"
#include "opspectra/spectralops.hpp"
#include "oracles/oracles.hpp"

using namespace opspectra;

namespace {

SequenceSpec seq(const char* s) { return SequenceSpec::parse(s); }

OperatorClass make(OpVariant v, const Rational& a, const char* d) { return OperatorClass(v, a, seq(d)); }

std::vector<Surd> random_vector(std::mt19937_64& rng, std::size_t len) {
    std::vector<Surd> v;
    for (std::size_t i = 0; i < len; ++i)
        v.emplace_back(ExactScalar(oracle::random_rational(rng, 7), oracle::random_rational(rng, 3)));
    return v;
}

// <u, v> = sum u_k conj(v_k) over the first n coordinates.
Surd inner(const std::vector<Surd>& u, const std::function<Surd(std::size_t)>& v, std::size_t n) {
    Surd acc;
    for (std::size_t k = 0; k < n && k < u.size(); ++k) acc += u[k] * v(k).conj();
    return acc;
}

constexpr OpVariant kAll[] = {OpVariant::A, OpVariant::B, OpVariant::C, OpVariant::D};

}  // namespace

TEST_CASE("class entries agree with the connection-based matrix") {
    for (OpVariant v : kAll) {
        for (const char* d : {"-2n+1", "n^2-3n", "(-1)^n + 1/(n+1)"}) {
            const auto cls = make(v, Rational(3, 2), d);
            const auto A = cls.matrix(12);
            for (std::size_t k = 0; k <= 12; ++k)
                for (std::size_t t = 0; t <= k; ++t) CHECK(cls.entry(t, k) == A.entry(t, k));
            for (std::size_t k = 0; k <= 12; ++k)
                for (std::size_t t = 0; t <= k; ++t)
                    CHECK(std::abs(cls.entry_complex(t, k) - A.entry(t, k).to_complex()) < 1e-12 * (1 + std::abs(cls.entry_complex(t, k))));
        }
    }
}

TEST_CASE("parameter ranges") {
    CHECK_THROWS_AS(make(OpVariant::A, Rational(0), "n"), BadParameter);
    CHECK_NOTHROW(make(OpVariant::B, Rational(-1, 2), "n"));
    CHECK_THROWS_AS(make(OpVariant::D, Rational(-1), "n"), BadParameter);
    CHECK(parse_variant("c") == OpVariant::C);
    CHECK_THROWS_AS(parse_variant("E"), BadParameter);
}

TEST_CASE("adjoint duality <Tx, g> = <x, T* g>") {
    std::mt19937_64 rng(20261018);
    // d chosen so that every class has finite vectors in D(T*) with a non-zero tail sum.
    for (OpVariant v : kAll) {
        const Rational a = v == OpVariant::B ? Rational(3) : Rational(1, 2);
        const auto cls = make(v, a, v == OpVariant::D ? "2-(1/2)^n" : "-2n+1");
        const auto A = cls.matrix(16);
        for (int trial = 0; trial < 3; ++trial) {
            const auto x = random_vector(rng, 17);
            auto g = random_vector(rng, 17);
            if (v == OpVariant::C) {
                // Tail conj(sum (d_t - d_{t+1}) g_t) must vanish: sum g_t = 0 here.
                Surd s;
                for (std::size_t t = 0; t + 1 < g.size(); ++t) s += g[t];
                g.back() = -s;
            }
            const HqVector gv = HqVector::finite(g, cls.q().name(), cls.normalized());
            REQUIRE(adjoint_domain_test(cls, gv).verdict == DomainVerdict::InDomain);
            const HqVector tg = adjoint_apply(cls, gv);
            std::vector<Surd> Ax(17);
            for (std::size_t t = 0; t < 17; ++t)
                for (std::size_t k = t; k < 17; ++k) Ax[t] += A.entry(t, k) * x[k];
            const Surd lhs = inner(Ax, [&](std::size_t t) { return g[t]; }, 17);
            const Surd rhs = inner(x, [&](std::size_t k) { return tg.at(k); }, 17);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("adjoint of a basic vector in class A") {
    const auto cls = make(OpVariant::A, Rational(1, 2), "n^2");
    const std::size_t s = 3;
    const auto tg = adjoint_apply(cls, HqVector::unit(s, {}, true));
    const Surd ds = cls.d().eval(s);
    const Surd step = cls.d().eval(s) - cls.d().eval(s + 1);
    for (std::size_t k = 0; k < 12; ++k) {
        Surd expect;
        if (k == s) expect = ds;
        if (k > s) expect = step * laguerre_norm(Rational(3, 2), s) * laguerre_norm(Rational(3, 2), k).inverse();
        CHECK(tg.at(k) == expect);
    }
    CHECK(adjoint_apply(cls, HqVector::finite({})).at(5).is_zero());
}

TEST_CASE("four-class domain table for basic vectors") {
    // Class A: every basic vector, any d.
    for (const char* d : {"-2n+1", "n^3", "(-1)^n*n"})
        for (std::size_t s = 0; s < 8; ++s)
            CHECK(adjoint_domain_test(make(OpVariant::A, Rational(1, 3), d), HqVector::unit(s, {}, true)).verdict ==
                  DomainVerdict::InDomain);
    // Class C: q_j iff d_j = d_{j+1}; one repeated adjacent pair at j = 2.
    const auto c = OperatorClass(OpVariant::C, Rational(0),
                                 SequenceSpec::table_with_tail({Surd(1), Surd(4), Surd(7), Surd(7)}, seq("3n-2")));
    for (std::size_t j = 0; j < 10; ++j) {
        const bool repeated = c.d().eval(j) == c.d().eval(j + 1);
        CHECK(repeated == (j == 2));
        CHECK((adjoint_domain_test(c, HqVector::unit(j)).verdict == DomainVerdict::InDomain) == repeated);
    }
    // Class B: same verdict for every s, equal to l2 of (d_k - d_{k-1})/r_k^a.
    for (const auto& [alpha, expect] : {std::pair{Rational(1, 2), false}, std::pair{Rational(2), true}}) {
        const auto b = make(OpVariant::B, alpha, "-2n+1");
        for (std::size_t s = 0; s < 6; ++s)
            CHECK((adjoint_domain_test(b, HqVector::unit(s, {}, true)).verdict == DomainVerdict::InDomain) == expect);
    }
    // Class D: q_j iff (d_k - d_{k-1}) in l2.
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(adjoint_domain_test(make(OpVariant::D, Rational(0), "2-(1/2)^n"), HqVector::unit(j)).verdict ==
              DomainVerdict::InDomain);
        CHECK(adjoint_domain_test(make(OpVariant::D, Rational(0), "n"), HqVector::unit(j)).verdict ==
              DomainVerdict::NotInDomain);
    }
}

TEST_CASE("infinite vectors give partial-sum evidence only") {
    const auto cls = make(OpVariant::D, Rational(0), "n");
    HqVector g{"", false, seq("1/(n+1)")};
    const auto cert = adjoint_domain_test(cls, g);
    CHECK(cert.verdict == DomainVerdict::Undecidable);
    CHECK(cert.partial_sums.size() == kLadder.size());
    CHECK_THROWS_AS(adjoint_apply(cls, g), DomainError);
}

TEST_CASE("closure agrees with T on basic vectors") {
    const std::vector<OperatorClass> classes{make(OpVariant::A, Rational(1, 2), "-2n+1"),
                                             make(OpVariant::A, Rational(2), "n^2+(-1)^n"),
                                             make(OpVariant::B, Rational(3), "-2n+1"),
                                             make(OpVariant::D, Rational(0), "2-(1/2)^n"),
                                             make(OpVariant::D, Rational(1, 2), "1/(n+1)")};
    for (const auto& cls : classes) {
        const auto A = cls.matrix(12);
        for (std::size_t j = 0; j <= 12; ++j) {
            const auto e = HqVector::unit(j, {}, cls.normalized());
            const auto col = column_action(A, j).entries();
            CHECK(closure_apply(cls, e).entries() == col);
            CHECK(closure_apply(cls, e, ClosureForm::TailSum).entries() == col);
        }
    }
    // Class D, e_j: d_j - d_{j-1} above the diagonal, d_j on it.
    const auto d = make(OpVariant::D, Rational(0), "2-(1/2)^n");
    const auto img = closure_apply(d, HqVector::unit(4));
    for (std::size_t s = 0; s < 4; ++s) CHECK(img.at(s) == d.d().eval(4) - d.d().eval(3));
    CHECK(img.at(4) == d.d().eval(4));
    CHECK(closure_apply(d, HqVector::finite({})).entries().empty());
}

TEST_CASE("closure forms agree on finite vectors") {
    std::mt19937_64 rng(7);
    for (const auto& alpha : {Rational(1, 2), Rational(5, 3)}) {
        const auto cls = make(OpVariant::A, alpha, "-2n+1");
        for (int trial = 0; trial < 4; ++trial) {
            const auto g = HqVector::finite(random_vector(rng, 10), {}, true);
            const auto a = closure_apply(cls, g);
            CHECK(a.entries() == closure_apply(cls, g, ClosureForm::TailSum).entries());
            CHECK(a.entries() == closure_apply_m_alpha(alpha, g).entries());
        }
    }
}

TEST_CASE("closure preconditions") {
    CHECK_THROWS_AS(closure_apply(make(OpVariant::C, Rational(0), "n"), HqVector::unit(1)), PreconditionError);
    CHECK_THROWS_AS(closure_apply(make(OpVariant::D, Rational(0), "n"), HqVector::unit(1)), PreconditionError);
    CHECK_THROWS_AS(closure_apply(make(OpVariant::B, Rational(1), "-2n+1"), HqVector::unit(1)), PreconditionError);
}

TEST_CASE("class B with the Laguerre diagonal is closable for alpha > 1") {
    const auto d = seq("-2n+1");
    const auto diff = d.form().difference();
    CHECK(diff.eval(0) == Surd(1));
    for (std::size_t k = 1; k < 20; ++k) CHECK(diff.eval(k) == Surd(-2));
    for (const auto& alpha : {Rational(3, 2), Rational(2), Rational(7)}) {
        const auto cls = OperatorClass(OpVariant::B, alpha, d);
        CHECK(closure_formula_applies(cls) == Verdict::Yes);
        CHECK(class_closability(cls) == Closability::Closable);
    }
    CHECK(closure_formula_applies(OperatorClass(OpVariant::B, Rational(1), d)) == Verdict::No);
    CHECK(closure_formula_applies(OperatorClass(OpVariant::B, Rational(1, 2), d)) == Verdict::No);
}

TEST_CASE("necessary conditions on graph points") {
    const auto cls = make(OpVariant::D, Rational(1, 2), "-2n+1");
    for (std::size_t n : {0, 2, 5}) {
        std::vector<Surd> f;
        for (const auto& c : connection(cls.p(), cls.q(), n)) f.emplace_back(c);
        std::vector<Surd> g;
        for (const auto& c : f) g.push_back(c * cls.d().eval(n));
        const auto fv = HqVector::finite(f);
        const auto rep = thm6_necessary_check(ClosureWitness(cls.d(), fv, HqVector::finite(g), 1024), 32);
        CHECK(rep.all_passed());
        g.resize(std::max<std::size_t>(g.size(), 3));
        g[2] += Surd(1);
        const auto bad = thm6_necessary_check(ClosureWitness(cls.d(), fv, HqVector::finite(g), 1024), 32);
        CHECK_FALSE(bad.b_exact);
        REQUIRE(bad.b_first_failure);
        CHECK(*bad.b_first_failure == 2);
    }
    const auto zero = thm6_necessary_check(ClosureWitness(cls.d(), HqVector::finite({}), HqVector::finite({}), 1024));
    CHECK(zero.all_passed());
}

TEST_CASE("sufficient conditions: finite f") {
    std::mt19937_64 rng(3);
    const auto cls = make(OpVariant::D, Rational(0), "-2n+1");
    const auto A = cls.matrix(10);
    for (int trial = 0; trial < 4; ++trial) {
        const auto f = random_vector(rng, 9);
        const auto res = thm7_sufficient_construct(cls.d(), HqVector::finite(f));
        REQUIRE(res.status == Thm7Status::Accepted);
        REQUIRE(res.g);
        for (std::size_t t = 0; t < 12; ++t) {
            Surd tf;
            for (std::size_t k = t; k < f.size(); ++k) tf += A.entry(t, k) * f[k];
            CHECK(res.g->at(t) == tf);
        }
        CHECK(res.converged);
        for (const auto& [n, v] : res.convergence)
            if (n >= 256) CHECK(v < 1e-9);
    }
}

TEST_CASE("sufficient conditions: tailed f") {
    const auto d = seq("n+1");
    const auto ok = thm7_sufficient_construct(d, HqVector{"", false, seq("1/(n+1)^3")});
    CHECK(ok.status == Thm7Status::Accepted);
    // S = zeta(3) - 1.
    CHECK(ok.S.real() == doctest::Approx(0.2020569031595942).epsilon(1e-9));
    REQUIRE(ok.convergence.size() == 4);
    for (std::size_t i = 1; i < 4; ++i) CHECK(ok.convergence[i].second < ok.convergence[i - 1].second);

    // d = 1,1,2,2,3,3,... and f supported on odd n: f (d_u - d_{u-1}) = 0 but f d = 1/2 there.
    const auto rej = thm7_sufficient_construct(seq("(2n+3)/4 + (-1)^n/4"), HqVector{"", false, seq("(1-(-1)^n)/(2n+2)")});
    CHECK(rej.status == Thm7Status::RejectedII);

    // Slow tails violate (iii).
    const auto slow = thm7_sufficient_construct(seq("n+1"), HqVector{"", false, seq("rinv(1)/(n+1)")});
    CHECK(slow.status == Thm7Status::RejectedIII);
}

TEST_CASE("approximate eigenvectors") {
    const auto d = seq("1+(1/2)^n");
    const ExactScalar lambda(3);
    const std::size_t K = 9;
    const auto ae = approx_eigen_recursion(d, lambda, K);
    REQUIRE(ae.g.size() == K + 1);
    CHECK(ae.g[K] == Surd(1));
    const Surd expect = (d.eval(K - 1) - d.eval(K)) / (d.eval(K - 1) - Surd(lambda));
    for (std::size_t s = 0; s < K; ++s) CHECK(ae.g[s] == expect);
    CHECK(ae.boundary_defect == doctest::Approx(std::abs(d.eval_complex(K) - 3.0)));
    double n2 = 0;
    for (const auto& v : ae.g) n2 += std::norm(v.to_complex());
    for (const auto& [N, r] : ae.residuals) CHECK(r == doctest::Approx(ae.boundary_defect / std::sqrt(n2)));
    CHECK_THROWS_AS(approx_eigen_recursion(seq("-2n+1"), ExactScalar(-3), 4), DivisionByZero);

    for (std::size_t N : kLadder) CHECK(std::abs(prefix_indicator_residual(d, 3.0, N) - 2.0) < 1e-6);
    CHECK(std::abs(prefix_indicator_residual(d, {1.0, 1.0}, 512) - 1.0) < 1e-6);
}

TEST_CASE("truncation spectra are the diagonal") {
    const auto c = make(OpVariant::C, Rational(1, 2), "-2n+1");
    const auto ev = truncation_spectrum(c, 4);
    REQUIRE(ev.size() == 4);
    const double want[] = {-5, -3, -1, 1};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(ev[static_cast<std::size_t>(i)] - want[i]) < 1e-12);
    CHECK(std::abs(truncation_spectrum(c, 1).at(0) - 1.0) < 1e-15);

    for (OpVariant v : kAll) {
        const auto cls = make(v, Rational(1, 2), "-2n+1");
        const auto spec = truncation_spectrum(cls, 128);
        REQUIRE(spec.size() == 128);
        for (std::size_t i = 0; i < 128; ++i) CHECK(std::abs(spec[i] - (-2.0 * static_cast<double>(127 - i) + 1)) < 1e-9);
    }
    const auto cls = make(OpVariant::D, Rational(0), "table:[1/2,-3,7/4,2,-1/5,0,4,9]+tail:n");
    const auto spec = truncation_spectrum(cls, 8);
    std::vector<double> diag{0.5, -3, 1.75, 2, -0.2, 0, 4, 9};
    std::sort(diag.begin(), diag.end());
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(spec[i] - diag[i]) < 1e-9);

    const auto a = make(OpVariant::A, Rational(1, 2), "n^2");
    const Eigen::MatrixXcd M = truncation(a, 10);
    const Eigen::MatrixXcd R = truncate(a.matrix(10), 10);
    CHECK((M - R).norm() < 1e-10 * R.norm());
}

TEST_CASE("residual map") {
    const auto cls = make(OpVariant::D, Rational(0), "1+(1/2)^n");
    const std::vector<std::complex<double>> grid{{3, 0}, {1, 1}, {0, 0}};
    const auto map = residual_map(cls, grid, {16, 32});
    REQUIRE(map.size() == 6);
    for (const auto& p : map) CHECK(p.sigma_min >= 0);
    CHECK(map[0].N == 16);
    CHECK(map[5].N == 32);
    CHECK(map[0].sigma_min > 0);
}
