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

#include "opspectra/eigensynth.hpp"

#include <algorithm>

#include "opspectra/error.hpp"

namespace opspectra {

namespace {

// p(n, r) = n!/(n-r)!, zero for r > n.
Rational falling(std::size_t n, std::size_t r) {
    if (r > n) return 0;
    Rational out(1);
    for (std::size_t i = 0; i < r; ++i) out *= static_cast<unsigned long>(n - i);
    return out;
}

}  // namespace

void validate(const EigenPair& pair, std::size_t horizon) {
    const ExactScalar d0 = pair.d.eval_scalar(0);
    bool constant = true;
    for (std::size_t n = 0; n <= horizon; ++n) {
        const ExactScalar v = pair.d.eval_scalar(n);
        if (v.is_zero()) throw DegenerateEigenvalue(n);
        constant = constant && v == d0;
        if (pair.p(n).degree() != n)
            throw BadParameter(pair.p.name() + " is not graded at n=" + std::to_string(n));
    }
    if (constant) throw BadParameter("d is constant on 0.." + std::to_string(horizon));
}

FormalDiffOp synthesize(const EigenPair& pair, std::size_t K) {
    validate(pair, K);
    FormalDiffOp op = synthesized_operator(pair.p, pair.d);
    op.coeff(K);
    return op;
}

ExactScalar lemma_ks_lambda(const FormalDiffOp& op, std::size_t n) {
    ExactScalar out;
    for (std::size_t r = 1; r <= n; ++r) out += op.diag(r) * ExactScalar(falling(n, r));
    return out;
}

SequenceSpec implied_eigenvalues(const FormalDiffOp& op, std::size_t horizon) {
    const ExactScalar m0 = op.coeff(0).coeff(0);
    if (auto r = op.known_order()) {
        Poly out(m0);
        Poly fall(1);
        for (std::size_t k = 1; k <= *r; ++k) {
            fall *= Poly(std::vector<ExactScalar>{ExactScalar(-static_cast<long>(k - 1)), ExactScalar(1)});
            out += fall * op.diag(k);
        }
        return SequenceSpec::polynomial(out);
    }
    std::vector<Surd> table;
    for (std::size_t n = 0; n <= horizon; ++n) table.emplace_back(m0 + lemma_ks_lambda(op, n));
    return SequenceSpec::opaque(std::move(table), "eigenvalues of " + op.label());
}

std::string to_string(SolveOutcome::Kind k) {
    switch (k) {
        case SolveOutcome::Kind::Solution: return "Solution";
        case SolveOutcome::Kind::NoSolution: return "NoSolution";
        case SolveOutcome::Kind::NonUnique: return "NonUnique";
    }
    return "?";
}

SolveOutcome eigen_solve(const FormalDiffOp& op, const SequenceSpec& d, std::size_t n,
                         const std::vector<Poly>& prior) {
    if (prior.size() < n) throw PreconditionError("eigen_solve needs p_0..p_{n-1}");
    for (std::size_t j = 0; j < n; ++j) {
        if (prior[j].degree() != j) throw PreconditionError("prior p_" + std::to_string(j) + " has wrong degree");
        if (op.apply(prior[j]) != prior[j] * d.eval_scalar(j))
            throw PreconditionError("prior p_" + std::to_string(j) + " is not an eigenfunction");
    }
    const ExactScalar d0 = d.eval_scalar(0);
    const ExactScalar dn = d.eval_scalar(n);
    if (op.coeff(0) != Poly(d0))
        throw IncompatibleEigenvalue(0, "M_0 = " + op.coeff(0).to_string() + " but d_0 = " + d0.to_string());
    const ExactScalar lambda = lemma_ks_lambda(op, n);
    if (dn - d0 != lambda)
        throw IncompatibleEigenvalue(n, "d_n - d_0 = " + (dn - d0).to_string() + " but lambda_n = " + lambda.to_string());

    SolveOutcome out;
    out.n = n;
    // sum_{k=1}^n p(n,k) R_{k-1} x^{n-k} with R_{k-1} = M_k - m_kk x^k.
    Poly s;
    for (std::size_t k = 1; k <= n; ++k) {
        const Poly Mk = op.coeff(k);
        const Poly R = Mk - Poly::monomial(k, Mk.coeff(k));
        if (!R.is_zero()) s += R * Poly::monomial(n - k, ExactScalar(falling(n, k)));
    }
    const BasisFn basis = [&prior](std::size_t j) { return prior.at(j); };
    out.alphas = change_basis(s, basis);
    out.alphas.resize(n);
    out.betas.assign(n, ExactScalar());
    for (std::size_t j = 0; j < n; ++j) {
        const ExactScalar gap = dn - d.eval_scalar(j);
        const ExactScalar& a = out.alphas[j];
        if (!gap.is_zero()) {
            out.betas[j] = a / gap;
        } else if (!a.is_zero()) {
            out.kind = SolveOutcome::Kind::NoSolution;
            out.witness = j;
            out.witness_alpha = a;
            return out;
        } else {
            out.free_indices.push_back(j);
        }
    }
    out.correction = expand(out.betas, basis);
    out.p = Poly::monomial(n) + out.correction;
    if (op.apply(out.p) != out.p * dn) throw Error("eigen_solve produced a non-solution at n=" + std::to_string(n));
    out.kind = out.free_indices.empty() ? SolveOutcome::Kind::Solution : SolveOutcome::Kind::NonUnique;
    return out;
}

std::vector<SolveOutcome> eigen_solve_all(const FormalDiffOp& op, const SequenceSpec& d, std::size_t upto) {
    std::vector<SolveOutcome> out;
    std::vector<Poly> prior;
    for (std::size_t n = 0; n <= upto; ++n) {
        out.push_back(eigen_solve(op, d, n, prior));
        if (out.back().kind == SolveOutcome::Kind::NoSolution) break;
        prior.push_back(out.back().p);
    }
    return out;
}

RecursionCheck expanded_recursion_check(const FormalDiffOp& op, const EigenPair& pair, std::size_t n) {
    RecursionCheck out;
    const ExactScalar d0 = pair.d.eval_scalar(0);
    const ExactScalar lhs_factor = pair.d.eval_scalar(n) - d0;
    const ExactScalar M0 = op.coeff(0).coeff(0);
    if (lhs_factor == -M0) out.failing.push_back("precondition");
    if (op.coeff(0) != Poly(d0)) out.failing.push_back("M0");
    const Poly pn = pair.p(n);
    auto label = [n](std::size_t r) -> std::string {
        if (r == n) return "a";
        if (r == 0) return "e";
        if (r == 1) return "d";
        if (r + 1 == n) return "b";
        return "c";
    };
    std::vector<Poly> M;
    for (std::size_t k = 0; k <= n; ++k) M.push_back(op.coeff(k));
    for (std::size_t r = 0; r <= n; ++r) {
        // sum_{k>=1} sum_{s} m_{k, r-s+k} p_{ns} p(s,k), max(r,k) <= s <= min(n, r+k).
        ExactScalar rhs;
        for (std::size_t k = 1; k <= n; ++k)
            for (std::size_t s = std::max(r, k); s <= std::min(n, r + k); ++s)
                rhs += M[k].coeff(r + k - s) * pn.coeff(s) * ExactScalar(falling(s, k));
        if (lhs_factor * pn.coeff(r) != rhs) {
            const std::string l = label(r);
            if (std::find(out.failing.begin(), out.failing.end(), l) == out.failing.end()) out.failing.push_back(l);
        }
    }
    return out;
}

FormalDiffOp counterexample_operator(CounterexampleVariant v) {
    const Rational c = v == CounterexampleVariant::Abstract ? Rational(1, 72) : Rational(12);
    const Poly M4 = Poly::monomial(4, ExactScalar(c)) - Poly::monomial(1, 3);
    return FormalDiffOp::finite({Poly(ExactScalar(Rational(4, 3))), Poly::monomial(1, ExactScalar(Rational(-1, 3))),
                                 Poly::monomial(1, -1), Poly(), M4},
                                OpProvenance::UserGiven,
                                v == CounterexampleVariant::Abstract ? "counterexample:abstract" : "counterexample:remark4");
}

PerturbationReport perturbation_diagonal(const EigenPair& pair, const SequenceSpec& d_prime, std::size_t horizon) {
    PerturbationReport out;
    std::optional<std::size_t> first;
    for (std::size_t j = 0; j <= horizon && !first; ++j)
        if (pair.d.eval(j) != d_prime.eval(j)) first = j;
    if (!first) throw NoPerturbation();
    out.first_index = *first;

    // Differences of d_j - d_0 drive the diagonal; with d_0 unchanged this is d'_j - d_j.
    const ExactScalar shift0 = d_prime.eval_scalar(0) - pair.d.eval_scalar(0);
    out.by_recursion.assign(horizon + 1, ExactScalar());
    for (std::size_t j = std::max<std::size_t>(*first, 1); j <= horizon; ++j) {
        ExactScalar v = (d_prime.eval_scalar(j) - pair.d.eval_scalar(j) - shift0) / ExactScalar(factorial(j));
        for (std::size_t r = std::max<std::size_t>(*first, 1); r < j; ++r)
            v -= out.by_recursion[r] / ExactScalar(factorial(j - r));
        out.by_recursion[j] = v;
    }
    out.by_recursion[0] = shift0;

    const FormalDiffOp base = synthesize(pair, horizon);
    const FormalDiffOp pert = synthesize(EigenPair{pair.p, d_prime}, horizon);
    for (std::size_t j = 0; j <= horizon; ++j) out.by_resynthesis.push_back(pert.diag(j) - base.diag(j));
    out.agree = out.by_recursion == out.by_resynthesis;
    for (std::size_t j = *first; j <= horizon; ++j)
        if (out.by_resynthesis[j].is_zero()) out.vanishing.push_back(j);
    return out;
}

}  // namespace opspectra
