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

#include "opspectra/matrixrep.hpp"

#include <algorithm>

#include "opspectra/error.hpp"

namespace opspectra {

// ------------------------------------------------------------------ HqVector

HqVector HqVector::finite(std::vector<Surd> c, std::string basis, bool normalized) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
    return HqVector{std::move(basis), normalized, SequenceSpec::finite_support(std::move(c))};
}

HqVector HqVector::unit(std::size_t k, std::string basis, bool normalized) {
    std::vector<Surd> c(k + 1);
    c[k] = Surd(1);
    return finite(std::move(c), std::move(basis), normalized);
}

bool HqVector::is_finite() const { return !coeffs.form().is_opaque() && coeffs.form().terms().empty(); }

std::vector<Surd> HqVector::entries() const {
    if (!is_finite()) throw DomainError("coordinates of an infinite vector cannot be listed");
    std::vector<Surd> c = coeffs.form().prefix();
    while (!c.empty() && c.back().is_zero()) c.pop_back();
    return c;
}

HqVector embed(const Poly& f, const PolySeq& q) {
    std::vector<Surd> c;
    for (const auto& v : change_basis(f, q.basis())) c.emplace_back(v);
    return HqVector::finite(std::move(c), q.name(), false);
}

Poly to_poly(const HqVector& g, const PolySeq& q) {
    if (g.normalized) throw PreconditionError("to_poly needs unnormalized coordinates");
    std::vector<ExactScalar> c;
    for (const auto& v : g.entries()) {
        auto s = v.as_scalar();
        if (!s) throw DomainError("irrational coordinate has no polynomial image");
        c.push_back(*s);
    }
    return expand(c, q.basis());
}

// ---------------------------------------------------------------- RowPattern

Surd RowPattern::entry(std::size_t j, std::size_t k) const {
    if (k < j) return {};
    if (k == j) return diag.eval(j);
    Surd acc;
    for (const auto& [w, phi] : terms) acc += w.eval(j) * phi.eval(k);
    return acc;
}

std::complex<double> RowPattern::entry_complex(std::size_t j, std::size_t k) const {
    if (k < j) return {};
    if (k == j) return diag.eval_complex(j);
    std::complex<double> acc;
    for (const auto& [w, phi] : terms) acc += w.eval_complex(j) * phi.eval_complex(k);
    return acc;
}

ClosedForm RowPattern::tail(std::size_t j) const {
    ClosedForm acc;
    for (const auto& [w, phi] : terms) acc = acc + phi.scaled(w.eval(j));
    return acc;
}

// ---------------------------------------------------------- StructuredMatrix

StructuredMatrix::StructuredMatrix(MatrixProvenance prov, std::size_t horizon, std::vector<std::vector<Surd>> columns,
                                   std::optional<RowPattern> pattern)
    : prov_(std::move(prov)), horizon_(horizon), cols_(std::move(columns)), pattern_(std::move(pattern)) {}

const std::vector<Surd>& StructuredMatrix::column(std::size_t k) const {
    if (k > horizon_) throw DomainError("column " + std::to_string(k) + " lies beyond the horizon");
    return cols_[k];
}

Surd StructuredMatrix::entry(std::size_t j, std::size_t k) const {
    if (j > k) return {};
    if (k <= horizon_) return cols_[k][j];
    if (!pattern_) throw DomainError("entry beyond the horizon of a matrix without a row pattern");
    return pattern_->entry(j, k);
}

std::complex<double> StructuredMatrix::entry_complex(std::size_t j, std::size_t k) const {
    if (j > k) return {};
    if (k <= horizon_) return cols_[k][j].to_complex();
    if (!pattern_) throw DomainError("entry beyond the horizon of a matrix without a row pattern");
    return pattern_->entry_complex(j, k);
}

RowSpec StructuredMatrix::row_spec(std::size_t j) const {
    std::vector<Surd> known;
    if (!pattern_) {
        for (std::size_t k = 0; k <= horizon_; ++k) known.push_back(entry(j, k));
        return RowSpec{ClosedForm::opaque(std::move(known)), true, "opaque"};
    }
    for (std::size_t k = 0; k <= j; ++k) known.push_back(pattern_->entry(j, k));
    return RowSpec{ClosedForm::with_prefix(std::move(known), pattern_->tail(j)), false, pattern_->rule};
}

// ---------------------------------------------------------------- matrix_rep

namespace {

ClosedForm one() { return ClosedForm::constant(Surd(1)); }

ClosedForm alternating() { return ClosedForm::geometric(ExactScalar(-1), Poly(1)); }

std::vector<RowPattern> candidate_patterns(const ClosedForm& d, std::optional<Rational> norm_beta) {
    std::vector<RowPattern> out;
    const Surd half(Rational(1, 2));
    const ClosedForm step2 = d - d.shift(2);
    out.push_back({"example1: a_jk = d_j - d_{j+1}", d, {{d - d.shift(1), one()}}});
    out.push_back({"example2: a_jk = d_k - d_{k-1}", d, {{one(), d.difference()}}});
    out.push_back({"parity: a_jk = d_j - d_{j+2} for even k - j",
                   d,
                   {{step2.scaled(half), one()}, {(step2 * alternating()).scaled(half), alternating()}}});
    if (norm_beta) {
        const ClosedForm up = ClosedForm::norm_power(*norm_beta, 1);
        const ClosedForm down = ClosedForm::norm_power(*norm_beta, -1);
        for (auto& pat : out) {
            pat.rule += " * r_j/r_k (beta=" + to_string(*norm_beta) + ")";
            for (auto& [w, phi] : pat.terms) {
                w = w * up;
                phi = phi * down;
            }
        }
    }
    return out;
}

bool reproduces(const RowPattern& pat, const std::vector<std::vector<Surd>>& cols) {
    for (std::size_t k = 0; k < cols.size(); ++k)
        for (std::size_t j = 0; j <= k; ++j)
            if (pat.entry(j, k) != cols[k][j]) return false;
    return true;
}

}  // namespace

StructuredMatrix matrix_rep(const PolySeq& p, const SequenceSpec& d, const PolySeq& q, bool normalized,
                            std::size_t horizon) {
    if (normalized && q.kind() != FamilyKind::Laguerre)
        throw BadParameter("normalized coordinates are available for Laguerre bases only");
    if (auto s = p.size()) horizon = std::min(horizon, *s - 1);
    if (auto s = q.size()) horizon = std::min(horizon, *s - 1);

    // p_i in the q basis, shared by every column.
    std::vector<std::vector<ExactScalar>> p_in_q(horizon + 1);
    for (std::size_t i = 0; i <= horizon; ++i) p_in_q[i] = connection(p, q, i);
    std::vector<Surd> dv;
    for (std::size_t i = 0; i <= horizon; ++i) dv.push_back(d.eval(i));
    std::vector<Surd> r;
    if (normalized)
        for (std::size_t i = 0; i <= horizon; ++i) r.push_back(laguerre_norm(q.alpha(), i));

    std::vector<std::vector<Surd>> cols(horizon + 1);
    for (std::size_t k = 0; k <= horizon; ++k) {
        // q_k = sum_i c_i p_i, so E(q_k) = sum_i c_i d_i p_i.
        const auto c = connection(q, p, k);
        std::vector<Surd> col(k + 1);
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i].is_zero()) continue;
            const Surd w = Surd(c[i]) * dv[i];
            for (std::size_t t = 0; t < p_in_q[i].size(); ++t)
                if (!p_in_q[i][t].is_zero()) col[t] += w * Surd(p_in_q[i][t]);
        }
        if (normalized) {
            const Surd inv = r[k].inverse();
            for (std::size_t t = 0; t <= k; ++t) col[t] = col[t] * r[t] * inv;
        }
        cols[k] = std::move(col);
    }

    std::optional<RowPattern> pattern;
    if (!d.form().is_opaque()) {
        const std::optional<Rational> beta = normalized ? std::optional<Rational>(q.alpha()) : std::nullopt;
        for (auto& cand : candidate_patterns(d.form(), beta)) {
            if (reproduces(cand, cols)) {
                pattern = std::move(cand);
                break;
            }
        }
    }
    return StructuredMatrix(MatrixProvenance{p, d, q, normalized}, horizon, std::move(cols), std::move(pattern));
}

HqVector column_action(const StructuredMatrix& A, std::size_t k) {
    return HqVector::finite(A.column(k), A.provenance().q.name(), A.provenance().normalized);
}

std::vector<Surd> point_eigencheck(const StructuredMatrix& A, std::size_t n) {
    if (n > A.horizon()) throw PreconditionError("point_eigencheck index beyond the horizon");
    const auto& prov = A.provenance();
    std::vector<Surd> v;
    for (const auto& c : connection(prov.p, prov.q, n)) v.emplace_back(c);
    v.resize(n + 1);
    if (prov.normalized)
        for (std::size_t t = 0; t <= n; ++t) v[t] *= laguerre_norm(prov.q.alpha(), t);
    const Surd dn = prov.d.eval(n);
    std::vector<Surd> res(n + 1);
    for (std::size_t t = 0; t <= n; ++t) {
        Surd acc;
        for (std::size_t k = t; k <= n; ++k)
            if (!v[k].is_zero()) acc += A.entry(t, k) * v[k];
        res[t] = acc - dn * v[t];
    }
    return res;
}

Eigen::MatrixXcd truncate(const StructuredMatrix& A, std::size_t N) {
    if (N > A.horizon()) throw PreconditionError("truncation size exceeds the horizon");
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t j = 0; j <= k; ++j)
            M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = A.column(k)[j].to_complex();
    return M;
}

std::optional<std::size_t> constant_tail_row(const StructuredMatrix& A) {
    if (!A.pattern()) return std::nullopt;
    for (std::size_t j = 0; j <= A.horizon(); ++j) {
        const ClosedForm t = A.pattern()->tail(j);
        if (t.is_constant() && !t.is_zero()) return j;
    }
    return std::nullopt;
}

}  // namespace opspectra
