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

#include "opspectra/spectralops.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "opspectra/error.hpp"

namespace opspectra {

namespace {

using cplx = std::complex<double>;

std::vector<Surd> coefficients(const HqVector& g) {
    if (!g.is_finite()) throw DomainError("the operation needs a finitely supported vector");
    return g.entries();
}

Surd delta(const SequenceSpec& d, std::size_t k) { return k == 0 ? d.eval(0) : d.eval(k) - d.eval(k - 1); }

cplx delta_complex(const SequenceSpec& d, std::size_t k) {
    return k == 0 ? d.eval_complex(0) : d.eval_complex(k) - d.eval_complex(k - 1);
}

}  // namespace

// ----------------------------------------------------------- OperatorClass

std::string to_string(OpVariant v) {
    switch (v) {
        case OpVariant::A: return "A";
        case OpVariant::B: return "B";
        case OpVariant::C: return "C";
        case OpVariant::D: return "D";
    }
    return "?";
}

OpVariant parse_variant(const std::string& text) {
    if (text == "A" || text == "a") return OpVariant::A;
    if (text == "B" || text == "b") return OpVariant::B;
    if (text == "C" || text == "c") return OpVariant::C;
    if (text == "D" || text == "d") return OpVariant::D;
    throw BadParameter("operator class must be one of A, B, C, D (got '" + text + "')");
}

OperatorClass::OperatorClass(OpVariant variant, Rational alpha, SequenceSpec d)
    : variant_(variant), alpha_(std::move(alpha)), d_(std::move(d)) {
    if (variant_ == OpVariant::A && alpha_ <= 0) throw BadParameter("class A needs alpha > 0");
    if (variant_ != OpVariant::A && alpha_ <= -1) throw BadParameter("classes B, C, D need alpha > -1");
}

PolySeq OperatorClass::p() const {
    const bool lower = variant_ == OpVariant::A || variant_ == OpVariant::C;
    return PolySeq::laguerre(lower ? alpha_ : alpha_ + 1);
}

PolySeq OperatorClass::q() const {
    const bool lower = variant_ == OpVariant::A || variant_ == OpVariant::C;
    return PolySeq::laguerre(lower ? alpha_ + 1 : alpha_);
}

std::string OperatorClass::name() const {
    return "class " + to_string(variant_) + " (alpha=" + to_string(alpha_) + ", d=" + d_.describe() + ")";
}

std::optional<Rational> OperatorClass::beta() const {
    if (variant_ == OpVariant::A) return alpha_ + 1;
    if (variant_ == OpVariant::B) return alpha_;
    return std::nullopt;
}

Surd OperatorClass::r(std::size_t k) const { return laguerre_norm(*beta(), k); }

double OperatorClass::r_double(std::size_t k) const {
    const double b = beta()->get_d();
    const double kd = static_cast<double>(k);
    return std::exp(0.5 * (std::lgamma(kd + b + 1) - std::lgamma(b + 1) - std::lgamma(kd + 1)));
}

Surd OperatorClass::w(std::size_t t) const {
    switch (variant_) {
        case OpVariant::A: return (d_.eval(t) - d_.eval(t + 1)) * r(t);
        case OpVariant::B: return r(t);
        case OpVariant::C: return d_.eval(t) - d_.eval(t + 1);
        case OpVariant::D: return Surd(1);
    }
    return {};
}

Surd OperatorClass::phi(std::size_t k) const {
    switch (variant_) {
        case OpVariant::A: return r(k).inverse();
        case OpVariant::B: return delta(d_, k) * r(k).inverse();
        case OpVariant::C: return Surd(1);
        case OpVariant::D: return delta(d_, k);
    }
    return {};
}

ClosedForm OperatorClass::phi_form() const {
    switch (variant_) {
        case OpVariant::A: return ClosedForm::norm_power(*beta(), -1);
        case OpVariant::C: return ClosedForm::constant(Surd(1));
        default: break;
    }
    if (d_.form().is_opaque()) throw DomainError("opaque diagonal has no closed-form differences");
    const ClosedForm diff = d_.form().difference();
    return variant_ == OpVariant::B ? diff * ClosedForm::norm_power(*beta(), -1) : diff;
}

Surd OperatorClass::entry(std::size_t t, std::size_t k) const {
    if (t > k) return {};
    if (t == k) return d_.eval(k);
    return w(t) * phi(k);
}

cplx OperatorClass::w_complex(std::size_t t) const {
    switch (variant_) {
        case OpVariant::A: return (d_.eval_complex(t) - d_.eval_complex(t + 1)) * r_double(t);
        case OpVariant::B: return r_double(t);
        case OpVariant::C: return d_.eval_complex(t) - d_.eval_complex(t + 1);
        case OpVariant::D: return 1.0;
    }
    return {};
}

cplx OperatorClass::phi_complex(std::size_t k) const {
    switch (variant_) {
        case OpVariant::A: return 1.0 / r_double(k);
        case OpVariant::B: return delta_complex(d_, k) / r_double(k);
        case OpVariant::C: return 1.0;
        case OpVariant::D: return delta_complex(d_, k);
    }
    return {};
}

cplx OperatorClass::entry_complex(std::size_t t, std::size_t k) const {
    if (t > k) return {};
    if (t == k) return d_.eval_complex(k);
    return w_complex(t) * phi_complex(k);
}

StructuredMatrix OperatorClass::matrix(std::size_t horizon) const {
    return matrix_rep(p(), d_, q(), normalized(), horizon);
}

// ------------------------------------------------------------------ adjoint

std::string to_string(DomainVerdict v) {
    switch (v) {
        case DomainVerdict::InDomain: return "InDomain";
        case DomainVerdict::NotInDomain: return "NotInDomain";
        case DomainVerdict::Undecidable: return "Undecidable";
    }
    return "?";
}

DomainCertificate adjoint_domain_test(const OperatorClass& cls, const HqVector& g) {
    DomainCertificate cert;
    if (!g.is_finite()) {
        // Partial sums of |(T* g)_k|^2 as evidence; the tail is not in the catalog.
        cplx acc;
        double total = 0;
        std::size_t k = 0;
        try {
            for (std::size_t N : kLadder) {
                for (; k <= N; ++k) {
                    const cplx gk = g.coeffs.eval_complex(k);
                    total += std::norm(gk * std::conj(cls.d().eval_complex(k)) + std::conj(cls.phi_complex(k)) * acc);
                    acc += std::conj(cls.w_complex(k)) * gk;
                }
                cert.partial_sums.emplace_back(N, total);
            }
        } catch (const Error&) {
        }
        cert.reason = "adjoint coefficients of an infinite vector are outside the sequence catalog";
        return cert;
    }

    const std::vector<Surd> gs = g.entries();
    std::vector<Surd> prefix;
    Surd acc;
    for (std::size_t k = 0; k < gs.size(); ++k) {
        prefix.push_back(gs[k] * cls.d().eval(k).conj() + cls.phi(k).conj() * acc);
        acc += cls.w(k).conj() * gs[k];
    }
    ClosedForm tail;
    if (!acc.is_zero()) {
        try {
            tail = cls.phi_form().conj().scaled(acc);
        } catch (const DomainError& e) {
            cert.reason = e.what();
            return cert;
        }
    }
    cert.inner = ClosedForm::with_prefix(std::move(prefix), tail);
    switch (cert.inner->l2()) {
        case Verdict::Yes:
            cert.verdict = DomainVerdict::InDomain;
            cert.reason = "coefficients of T* g are square-summable";
            break;
        case Verdict::No:
            cert.verdict = DomainVerdict::NotInDomain;
            cert.reason = "coefficients of T* g are not square-summable";
            break;
        case Verdict::Undecidable:
            cert.reason = "square-summability of " + cert.inner->to_string() + " is undecidable";
            break;
    }
    return cert;
}

HqVector adjoint_apply(const OperatorClass& cls, const HqVector& g) {
    const DomainCertificate cert = adjoint_domain_test(cls, g);
    if (cert.verdict != DomainVerdict::InDomain) throw DomainError("vector is not in D(T*): " + cert.reason);
    return HqVector{cls.q().name(), cls.normalized(), SequenceSpec::from_form(*cert.inner)};
}

// ------------------------------------------------------------------ closure

Verdict closure_formula_applies(const OperatorClass& cls) {
    switch (cls.variant()) {
        case OpVariant::A: return Verdict::Yes;
        case OpVariant::C: return Verdict::No;
        default: break;
    }
    try {
        return cls.phi_form().l2();
    } catch (const DomainError&) {
        return Verdict::Undecidable;
    }
}

HqVector closure_apply(const OperatorClass& cls, const HqVector& g, ClosureForm form) {
    if (cls.variant() == OpVariant::C)
        throw PreconditionError("class C has no closure formula; use the thin/blocked criterion");
    if (closure_formula_applies(cls) != Verdict::Yes)
        throw PreconditionError("closure formula needs (phi_k) in l2 for " + cls.name());
    const std::vector<Surd> gs = coefficients(g);
    std::vector<Surd> phig(gs.size());
    for (std::size_t k = 0; k < gs.size(); ++k)
        if (!gs[k].is_zero()) phig[k] = cls.phi(k) * gs[k];

    std::vector<Surd> out(gs.size());
    if (form == ClosureForm::WithLimit) {
        Surd ell;
        for (const auto& v : phig) ell += v;
        Surd partial;
        for (std::size_t s = 0; s < gs.size(); ++s) {
            partial += phig[s];
            out[s] = gs[s] * cls.d().eval(s) + cls.w(s) * (ell - partial);
        }
    } else {
        Surd tail;
        for (std::size_t s = gs.size(); s-- > 0;) {
            out[s] = gs[s] * cls.d().eval(s) + cls.w(s) * tail;
            tail += phig[s];
        }
    }
    return HqVector::finite(std::move(out), cls.q().name(), cls.normalized());
}

HqVector closure_apply_m_alpha(const Rational& alpha, const HqVector& g) {
    if (alpha <= 0) throw BadParameter("the m^alpha closure needs alpha > 0");
    const std::vector<Surd> gs = coefficients(g);
    std::vector<Surd> r;
    for (std::size_t k = 0; k < gs.size(); ++k) r.push_back(laguerre_norm(alpha + 1, k));
    Surd ell;
    for (std::size_t k = 0; k < gs.size(); ++k) ell += gs[k] * r[k].inverse();
    std::vector<Surd> out(gs.size());
    Surd partial;
    for (std::size_t s = 0; s < gs.size(); ++s) {
        partial += gs[s] * r[s].inverse();
        out[s] = gs[s] * Surd(1 - 2 * static_cast<long>(s)) + Surd(2) * r[s] * (ell - partial);
    }
    return HqVector::finite(std::move(out), PolySeq::laguerre(alpha + 1).name(), true);
}

Closability class_closability(const OperatorClass& cls, std::size_t horizon) {
    if (closure_formula_applies(cls) == Verdict::Yes) return Closability::Closable;
    return closability_verdict(cls.matrix(horizon), horizon);
}

// --------------------------------------------------------- closure witness

ClosureWitness::ClosureWitness(SequenceSpec d, HqVector f, HqVector g, std::size_t cutoff)
    : d_(std::move(d)), f_(std::move(f)), g_exact_(std::move(g)), cutoff_(cutoff) {
    g_.resize(cutoff_ + 1);
    for (std::size_t k = 0; k <= cutoff_; ++k) g_[k] = g_exact_->coeffs.eval_complex(k);
    tabulate();
}

ClosureWitness::ClosureWitness(SequenceSpec d, HqVector f, std::vector<cplx> g)
    : d_(std::move(d)), f_(std::move(f)), cutoff_(g.empty() ? 0 : g.size() - 1), g_(std::move(g)) {
    tabulate();
}

void ClosureWitness::tabulate() {
    fv_.resize(cutoff_ + 1);
    dv_.resize(cutoff_ + 1);
    ddv_.resize(cutoff_ + 1);
    for (std::size_t k = 0; k <= cutoff_; ++k) {
        fv_[k] = f_.coeffs.eval_complex(k);
        dv_[k] = d_.eval_complex(k);
        ddv_[k] = k == 0 ? dv_[0] : dv_[k] - dv_[k - 1];
    }
}

cplx ClosureWitness::h(std::size_t n, std::size_t u) const {
    if (n == 0) throw DomainError("the approximating family starts at n = 1");
    if (u > n) return {};
    if (n > cutoff_) throw DomainError("h_n beyond the tabulated range");
    const double nd = static_cast<double>(n);
    const double r = 1.0 / (nd * nd * std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(n, 2000))) *
                            (std::abs(ddv_[u]) + std::abs(dv_[u]) + 1));
    return fv_[u] + r;
}

std::vector<cplx> ClosureWitness::t_row(std::size_t n) const {
    std::vector<cplx> t(n + 1);
    cplx tail;
    for (std::size_t k = n + 1; k-- > 0;) {
        const cplx hk = h(n, k);
        t[k] = tail + hk * dv_[k];
        tail += hk * ddv_[k];
    }
    return t;
}

double ClosureWitness::defect(std::size_t n) const {
    const auto t = t_row(n);
    double s = 0;
    for (std::size_t k = 0; k <= n; ++k) s += std::norm(t[k] - g_at(k));
    for (std::size_t k = n + 1; k <= cutoff_; ++k) s += std::norm(g_at(k));
    return s;
}

bool Thm6Report::all_passed() const {
    return b_exact && std::all_of(numeric.begin(), numeric.end(), [](const ConditionCheck& c) { return c.passed; });
}

Thm6Report thm6_necessary_check(const ClosureWitness& w, std::size_t horizon, double tol) {
    if (!w.g_exact()) throw PreconditionError("condition (b) needs g exactly");
    Thm6Report rep;
    const SequenceSpec& d = w.d();
    const HqVector& f = w.f();
    const HqVector& g = *w.g_exact();
    const Surd base = g.at(0) - f.at(0) * d.eval(0);
    Surd partial;
    rep.b_exact = true;
    for (std::size_t k = 1; k <= horizon; ++k) {
        partial += f.at(k) * delta(d, k);
        if (g.at(k) != base + f.at(k) * d.eval(k) - partial) {
            rep.b_exact = false;
            rep.b_first_failure = k;
            break;
        }
    }

    const std::size_t n = std::min(kLadder.back(), w.cutoff());
    ConditionCheck a2{"(a2) h_{n,u} -> f_u", false, 0, {}};
    for (std::size_t u = 0; u <= std::min<std::size_t>(n, 16); ++u)
        a2.value = std::max(a2.value, std::abs(w.h(n, u) - w.f().coeffs.eval_complex(u)));
    a2.passed = a2.value < tol;
    a2.detail = "max over u <= 16 at n = " + std::to_string(n);

    ConditionCheck a3{"(a3) h_{n,n} d_n -> 0", false, 0, {}};
    a3.value = std::abs(w.h(n, n) * d.eval_complex(n));
    a3.passed = a3.value < tol;
    a3.detail = "at n = " + std::to_string(n);

    ConditionCheck a4{"(a4) sum h_{n,u}(d_u - d_{u-1}) -> g_0 - f_0 d_0", false, 0, {}};
    cplx s;
    for (std::size_t u = 1; u <= n; ++u) s += w.h(n, u) * delta_complex(d, u);
    a4.value = std::abs(s - base.to_complex());
    a4.passed = a4.value < tol;
    a4.detail = "at n = " + std::to_string(n);

    rep.numeric = {a2, a3, a4};
    return rep;
}

std::string to_string(Thm7Status s) {
    switch (s) {
        case Thm7Status::Accepted: return "Accepted";
        case Thm7Status::RejectedI: return "Rejected(i)";
        case Thm7Status::RejectedII: return "Rejected(ii)";
        case Thm7Status::RejectedIII: return "Rejected(iii)";
        case Thm7Status::Undecidable: return "Rejected(Undecidable)";
    }
    return "?";
}

namespace {

constexpr std::size_t kWitnessCutoff = 4096;
constexpr std::size_t kSeriesTerms = 1u << 16;

void log_convergence(Thm7Result& res, const ClosureWitness& w, double tol) {
    res.converged = true;
    for (std::size_t n : kLadder) {
        const double v = w.defect(n);
        res.convergence.emplace_back(n, v);
        if (n >= 256 && !(v < tol)) res.converged = false;
    }
}

}  // namespace

Thm7Result thm7_sufficient_construct(const SequenceSpec& d, const HqVector& f, double tol) {
    Thm7Result res;
    if (f.coeffs.form().is_opaque()) {
        res.detail = "f has no closed form";
        return res;
    }
    if (f.l2() == Verdict::No) throw PreconditionError("f is not in H(q)");

    if (f.is_finite()) {
        const std::vector<Surd> fs = f.entries();
        Surd S;
        for (std::size_t u = 1; u < fs.size(); ++u) S += fs[u] * delta(d, u);
        std::vector<Surd> g(fs.size());
        Surd partial;
        for (std::size_t k = 0; k < fs.size(); ++k) {
            if (k > 0) partial += fs[k] * delta(d, k);
            g[k] = S - partial + fs[k] * d.eval(k);
        }
        res.status = Thm7Status::Accepted;
        res.S_exact = S;
        res.S = S.to_complex();
        res.g = HqVector::finite(g, f.basis, f.normalized);
        for (const auto& v : g) res.g_numeric.push_back(v.to_complex());
        res.detail = "finite f: g = T f";
        log_convergence(res, ClosureWitness(d, f, *res.g, kWitnessCutoff), tol);
        return res;
    }

    if (d.form().is_opaque()) {
        res.detail = "d has no closed form";
        return res;
    }
    const ClosedForm terms = f.coeffs.form() * d.form().difference();
    const SeriesVerdict sv = terms.series();
    if (sv.converges == Verdict::No) {
        res.status = Thm7Status::RejectedI;
        res.detail = "sum f_u (d_u - d_{u-1}) diverges";
        return res;
    }
    if (sv.converges == Verdict::Undecidable) {
        res.detail = "convergence of sum f_u (d_u - d_{u-1}) is undecidable";
        return res;
    }
    // Tail sums R_n = O(n^rho); (n+1)|R_n|^2 -> 0 iff rho < -1/2.
    Verdict iii = Verdict::Yes;
    if (sv.tail_exponent && *sv.tail_exponent >= Rational(-1, 2)) iii = sv.tail_exact ? Verdict::No : Verdict::Undecidable;
    // With (iii), R is in l2 and g = R + f d.
    Verdict ii = Verdict::Undecidable;
    if (iii == Verdict::Yes) ii = (f.coeffs.form() * d.form()).l2();

    if (ii == Verdict::No) {
        res.status = Thm7Status::RejectedII;
        res.detail = "g = R + f d is not square-summable";
    } else if (iii == Verdict::No) {
        res.status = Thm7Status::RejectedIII;
        res.detail = "tail sums decay like n^" + to_string(*sv.tail_exponent);
    } else if (ii == Verdict::Undecidable || iii == Verdict::Undecidable) {
        res.detail = "conditions (ii)/(iii) are undecidable for this tail";
    } else {
        res.status = Thm7Status::Accepted;
        res.detail = "symbolic: series converges, f d in l2, tail exponent below -1/2";
    }

    // Numeric S and g from backward tail sums.
    std::vector<cplx> R(kWitnessCutoff + 1);
    cplx tail;
    for (std::size_t u = kSeriesTerms; u > kWitnessCutoff; --u) tail += terms.eval_complex(u);
    for (std::size_t u = kWitnessCutoff; u > 0; --u) {
        R[u] = tail;
        tail += terms.eval_complex(u);
    }
    R[0] = tail;
    res.S = tail;
    res.g_numeric.resize(kWitnessCutoff + 1);
    for (std::size_t k = 0; k <= kWitnessCutoff; ++k)
        res.g_numeric[k] = R[k] + f.coeffs.eval_complex(k) * d.eval_complex(k);
    if (res.status == Thm7Status::Accepted) log_convergence(res, ClosureWitness(d, f, res.g_numeric), tol);
    return res;
}

// ----------------------------------------------------------- eigen probes

ApproxEigen approx_eigen_recursion(const SequenceSpec& d, const ExactScalar& lambda, std::size_t K,
                                   const std::vector<std::size_t>& ladder) {
    ApproxEigen out;
    out.g.assign(K + 1, Surd());
    out.g[K] = Surd(1);
    const Surd lam(lambda);
    Surd acc = delta(d, K);
    for (std::size_t s = K; s-- > 0;) {
        const Surd gap = d.eval(s) - lam;
        if (gap.is_zero()) throw DivisionByZero("lambda equals d_" + std::to_string(s));
        out.g[s] = -acc / gap;
        acc += delta(d, s) * out.g[s];
    }
    const cplx lc(lambda.re().get_d(), lambda.im().get_d());
    out.boundary_defect = std::abs(d.eval_complex(K) - lc);

    std::vector<cplx> gc;
    double norm2 = 0;
    for (const auto& v : out.g) {
        gc.push_back(v.to_complex());
        norm2 += std::norm(gc.back());
    }
    for (std::size_t N : ladder) {
        if (N <= K) continue;
        // (T - lambda) g, rows 0..K; rows beyond K vanish.
        double res = 0;
        cplx tail;
        for (std::size_t s = K + 1; s-- > 0;) {
            res += std::norm((d.eval_complex(s) - lc) * gc[s] + tail);
            tail += delta_complex(d, s) * gc[s];
        }
        out.residuals.emplace_back(N, std::sqrt(res / norm2));
    }
    return out;
}

double prefix_indicator_residual(const SequenceSpec& d, cplx lambda, std::size_t N) {
    double res = 0;
    cplx tail;
    for (std::size_t s = N + 1; s-- > 0;) {
        res += std::norm(d.eval_complex(s) + tail - lambda);
        tail += delta_complex(d, s);
    }
    return std::sqrt(res / static_cast<double>(N + 1));
}

// ------------------------------------------------------------- truncation

Eigen::MatrixXcd truncation(const OperatorClass& cls, std::size_t N) {
    const auto n = static_cast<Eigen::Index>(N);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    std::vector<cplx> w(N);
    std::vector<cplx> phi(N);
    for (std::size_t k = 0; k < N; ++k) {
        w[k] = cls.w_complex(k);
        phi[k] = cls.phi_complex(k);
    }
    for (std::size_t k = 0; k < N; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        M(kk, kk) = cls.d().eval_complex(k);
        for (std::size_t t = 0; t < k; ++t) M(static_cast<Eigen::Index>(t), kk) = w[t] * phi[k];
    }
    return M;
}

std::vector<cplx> truncation_spectrum(const OperatorClass& cls, std::size_t N) {
    if (N == 0) return {};
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(truncation(cls, N), false);
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](const cplx& a, const cplx& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return ev;
}

std::vector<ResidualPoint> residual_map(const OperatorClass& cls, const std::vector<cplx>& grid,
                                        const std::vector<std::size_t>& sizes) {
    std::vector<ResidualPoint> out;
    for (std::size_t N : sizes) {
        const Eigen::MatrixXcd M = truncation(cls, N);
        const auto I = Eigen::MatrixXcd::Identity(M.rows(), M.cols());
        for (const cplx& lam : grid) {
            Eigen::BDCSVD<Eigen::MatrixXcd> svd(M - lam * I);
            const auto& sv = svd.singularValues();
            out.push_back({lam, N, sv.size() ? sv(sv.size() - 1) : 0.0});
        }
    }
    return out;
}

}  // namespace opspectra
