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

#include "opspectra/formaldiff.hpp"

#include <utility>

#include "opspectra/error.hpp"

namespace opspectra {

std::string to_string(OpProvenance p) {
    switch (p) {
        case OpProvenance::Classical: return "classical";
        case OpProvenance::Koornwinder: return "koornwinder";
        case OpProvenance::Synthesized: return "synthesized";
        case OpProvenance::UserGiven: return "user";
    }
    return "?";
}

FormalDiffOp::FormalDiffOp(Generator gen, std::optional<std::size_t> known_order, OpProvenance provenance,
                           std::string label, std::vector<std::string> diagnostics)
    : state_(std::make_shared<State>()) {
    state_->gen = std::move(gen);
    state_->known_order = known_order;
    state_->provenance = provenance;
    state_->label = std::move(label);
    state_->diagnostics = std::move(diagnostics);
}

FormalDiffOp FormalDiffOp::finite(std::vector<Poly> M, OpProvenance provenance, std::string label) {
    while (!M.empty() && M.back().is_zero()) M.pop_back();
    for (std::size_t k = 0; k < M.size(); ++k)
        if (M[k].degree().value_or(0) > k)
            throw BadParameter("coefficient M_" + std::to_string(k) + " has degree above " + std::to_string(k));
    std::optional<std::size_t> order;
    if (!M.empty()) order = M.size() - 1;
    auto gen = [M = std::move(M)](std::size_t k, const std::vector<Poly>&) { return k < M.size() ? M[k] : Poly(); };
    return FormalDiffOp(std::move(gen), order, provenance, std::move(label));
}

Poly FormalDiffOp::coeff(std::size_t k) const {
    std::lock_guard<std::mutex> lock(state_->mu);
    auto& cache = state_->cache;
    while (cache.size() <= k) {
        const std::size_t j = cache.size();
        Poly m = state_->gen(j, cache);
        if (m.degree().value_or(0) > j)
            throw Error(state_->label + ": generated M_" + std::to_string(j) + " exceeds degree " + std::to_string(j));
        cache.push_back(std::move(m));
    }
    return cache[k];
}

std::vector<Poly> FormalDiffOp::coeffs(std::size_t upto) const {
    coeff(upto);
    std::lock_guard<std::mutex> lock(state_->mu);
    return {state_->cache.begin(), state_->cache.begin() + static_cast<std::ptrdiff_t>(upto + 1)};
}

Poly FormalDiffOp::apply(const Poly& y) const {
    if (y.is_zero()) return {};
    const std::size_t n = *y.degree();
    Poly out;
    Poly dy = y;
    for (std::size_t k = 0; k <= n; ++k) {
        const Poly m = coeff(k);
        if (!m.is_zero()) out += m * dy;
        dy = derivative(dy);
    }
    return out;
}

namespace {

Poly lin(const Rational& c0, const Rational& c1) {
    return Poly(std::vector<ExactScalar>{ExactScalar(c0), ExactScalar(c1)});
}

}  // namespace

FormalDiffOp classical_jacobi(const Rational& alpha, const Rational& beta) {
    if (alpha <= -1 || beta <= -1) throw BadParameter("Jacobi operator needs alpha, beta > -1");
    if (alpha + beta == -1) throw BadParameter("Jacobi operator needs alpha + beta != -1");
    return FormalDiffOp::finite({Poly(1), lin(beta - alpha, -(alpha + beta + 2)), lin(1, 0) - Poly::monomial(2)},
                                OpProvenance::Classical, "jacobi:" + to_string(alpha) + "," + to_string(beta));
}

FormalDiffOp classical_hermite() {
    return FormalDiffOp::finite({Poly(1), lin(0, -2), Poly(1)}, OpProvenance::Classical, "hermite");
}

FormalDiffOp classical_laguerre(const Rational& alpha) {
    if (alpha <= -1) throw BadParameter("Laguerre operator needs alpha > -1");
    return FormalDiffOp::finite({Poly(1), lin(2 * (alpha + 1), -2), lin(0, 2)}, OpProvenance::Classical,
                                "laguerre:" + to_string(alpha));
}

FormalDiffOp classical(std::string_view name) {
    const PolySeq p = PolySeq::parse(name);
    switch (p.kind()) {
        case FamilyKind::Jacobi: return classical_jacobi(p.alpha(), p.beta());
        case FamilyKind::Hermite: return classical_hermite();
        case FamilyKind::Laguerre: return classical_laguerre(p.alpha());
        default: throw BadParameter("no classical operator for " + p.name());
    }
}

FormalDiffOp synthesized_operator(const PolySeq& p, const SequenceSpec& d) {
    const ExactScalar d0 = d.eval_scalar(0);
    auto gen = [p, d, d0](std::size_t k, const std::vector<Poly>& M) -> Poly {
        if (k == 0) return Poly(d0);
        const Poly pk = p(k);
        Poly rhs = pk * (d.eval_scalar(k) - d0);
        Poly dj = pk;
        for (std::size_t j = 1; j < k; ++j) {
            dj = derivative(dj);
            if (!M[j].is_zero()) rhs -= M[j] * dj;
        }
        // p_k^(k) = k! p_kk, a non-zero constant.
        const ExactScalar top = ExactScalar(factorial(k)) * pk.leading();
        return rhs * top.inverse();
    };
    return FormalDiffOp(std::move(gen), std::nullopt, OpProvenance::Synthesized,
                        "synthesized(" + p.name() + ", " + d.describe() + ")");
}

SequenceSpec koornwinder_eigenvalues(const Rational& alpha, const Rational& K) {
    const ClosedForm binom_part = ClosedForm::norm_power(alpha + 2, 2, 1, -1).scaled(Surd(Rational(-K)));
    const ClosedForm linear = ClosedForm::polynomial(lin(1, -1));
    return SequenceSpec::from_form(binom_part + linear);
}

Poly koornwinder_printed_coeff(const Rational& alpha, const Rational& K, std::size_t k) {
    if (k == 0) return Poly(1);
    if (k == 1) return lin(alpha + 1, -K);
    Rational sum;
    const long kk = static_cast<long>(k);
    for (long j = 1; j <= kk; ++j) {
        Rational term = binomial(alpha + 1, j - 1) * binomial(alpha + 2, kk - j) *
                        rising_factorial(alpha + 3, static_cast<unsigned long>(kk - j));
        if ((kk + j + 1) % 2 != 0) term = -term;
        sum += term;
    }
    return Poly::monomial(k, ExactScalar(K * sum / factorial(k)));
}

FormalDiffOp koornwinder_printed(const Rational& alpha, const Rational& K) {
    auto gen = [alpha, K](std::size_t k, const std::vector<Poly>&) { return koornwinder_printed_coeff(alpha, K, k); };
    return FormalDiffOp(std::move(gen), std::nullopt, OpProvenance::Koornwinder,
                        "koornwinder-printed:" + to_string(alpha) + "," + to_string(K));
}

FormalDiffOp koornwinder(const Rational& alpha, const Rational& K, std::size_t horizon) {
    const PolySeq p = PolySeq::koornwinder(alpha, K);
    const SequenceSpec d = koornwinder_eigenvalues(alpha, K);
    for (std::size_t n = 0; n <= horizon; ++n)
        if (d.eval(n).is_zero()) throw DegenerateEigenvalue(n);

    const FormalDiffOp synth = synthesized_operator(p, d);
    const FormalDiffOp printed = koornwinder_printed(alpha, K);
    std::vector<std::string> diag;
    constexpr std::size_t kCompare = 6;
    for (std::size_t k = 0; k <= kCompare; ++k) {
        const Poly a = synth.coeff(k);
        const Poly b = printed.coeff(k);
        if (a != b)
            diag.push_back("printed M_" + std::to_string(k) + " = " + b.to_string() + " differs from synthesized M_" +
                           std::to_string(k) + " = " + a.to_string());
    }
    for (std::size_t n = 0; n <= kCompare; ++n) {
        const Poly residual = printed.apply(p(n)) - p(n) * d.eval_scalar(n);
        if (!residual.is_zero()) {
            diag.push_back("printed operator fails the eigen-relation at n=" + std::to_string(n) +
                           " with residual " + residual.to_string());
            break;
        }
    }
    auto gen = [synth](std::size_t k, const std::vector<Poly>&) { return synth.coeff(k); };
    return FormalDiffOp(std::move(gen), std::nullopt, OpProvenance::Koornwinder,
                        "koornwinder:" + to_string(alpha) + "," + to_string(K), std::move(diag));
}

OrderProbe order_probe(const FormalDiffOp& op, std::size_t horizon) {
    OrderProbe out;
    out.horizon = horizon;
    for (std::size_t k = 0; k <= horizon; ++k)
        if (!op.coeff(k).is_zero()) out.last_nonzero = k;
    if (auto r = op.known_order()) {
        out.kind = OrderProbe::Kind::FiniteOrder;
        out.order = *r;
        return out;
    }
    out.kind = out.last_nonzero ? OrderProbe::Kind::NoVanishingUpTo : OrderProbe::Kind::ZeroOperator;
    return out;
}

}  // namespace opspectra
