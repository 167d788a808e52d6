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

#include "opspectra/thinmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "opspectra/error.hpp"

namespace opspectra {

std::string to_string(EquivKind k) {
    switch (k) {
        case EquivKind::Equivalent: return "Equivalent";
        case EquivKind::NotEquivalent: return "NotEquivalent";
        case EquivKind::Undecidable: return "Undecidable";
    }
    return "?";
}

std::string to_string(Closability v) {
    switch (v) {
        case Closability::Closable: return "Closable";
        case Closability::NotClosable: return "NotClosable";
        case Closability::Unknown: return "Unknown";
    }
    return "?";
}

namespace {

bool grows(const TailTerm& t) {
    const Rational m2 = t.base.norm2();
    return m2 > 1 || (m2 == 1 && t.sigma() >= Rational(-1, 2));
}

const TailTerm* dominant(const ClosedForm& f) {
    const TailTerm* best = nullptr;
    for (const auto& t : f.terms()) {
        if (!best) {
            best = &t;
            continue;
        }
        const int c = cmp(t.base.norm2(), best->base.norm2());
        if (c > 0 || (c == 0 && t.sigma() > best->sigma())) best = &t;
    }
    return best;
}

// mu with a - mu b of lower order, read off the dominant term of b.
std::optional<Surd> leading_ratio(const ClosedForm& a, const ClosedForm& b) {
    const TailTerm* tb = dominant(b);
    if (!tb) return std::nullopt;
    for (const auto& t : a.terms()) {
        if (t.radicand == tb->radicand && t.base == tb->base && t.factors == tb->factors && t.sigma() == tb->sigma()) {
            const ExactScalar la = t.num.leading() / t.den.leading();
            const ExactScalar lb = tb->num.leading() / tb->den.leading();
            return Surd(la / lb);
        }
    }
    return std::nullopt;
}

// Distinct bases of non-l2 terms cannot cancel against each other.
bool disjoint_growth(const ClosedForm& a, const ClosedForm& b) {
    for (const auto& x : a.terms()) {
        if (!grows(x)) continue;
        for (const auto& y : b.terms())
            if (grows(y) && x.base == y.base) return false;
    }
    return true;
}

bool bases_positive(const ClosedForm& f) {
    return std::all_of(f.terms().begin(), f.terms().end(),
                       [](const TailTerm& t) { return t.base.is_real() && sgn(t.base.re()) > 0; });
}

bool parallel(const std::vector<Surd>& v, const std::vector<Surd>& u) {
    for (std::size_t t = 0; t < v.size(); ++t)
        for (std::size_t s = t + 1; s < v.size(); ++s)
            if (v[t] * u[s] != v[s] * u[t]) return false;
    return true;
}

bool all_zero(const std::vector<Surd>& v) {
    return std::all_of(v.begin(), v.end(), [](const Surd& s) { return s.is_zero(); });
}

std::size_t first_nonzero(const std::vector<Surd>& v) {
    for (std::size_t t = 0; t < v.size(); ++t)
        if (!v[t].is_zero()) return t;
    return v.size();
}

// The weights restricted to one residue are proportional to a fixed vector.
bool proportional_on_residue(const std::vector<ClosedForm>& restricted, const std::vector<Surd>& v) {
    const std::size_t piv = first_nonzero(v);
    for (std::size_t t = 0; t < restricted.size(); ++t) {
        if (t == piv) continue;
        if ((restricted[t].scaled(v[piv]) - restricted[piv].scaled(v[t])).zero_status() != ZeroStatus::Zero)
            return false;
    }
    return true;
}

std::vector<Surd> weights_at(const std::vector<ClosedForm>& w, std::size_t j) {
    std::vector<Surd> out;
    for (const auto& f : w) out.push_back(f.eval(j));
    return out;
}

ClosedForm residue_indicator(long period, long r) {
    if (period == 1) return ClosedForm::constant(Surd(1));
    const Surd half(Rational(1, 2));
    const ClosedForm alt = ClosedForm::geometric(ExactScalar(-1), Poly(1));
    const ClosedForm one = ClosedForm::constant(Surd(1));
    return (r == 0 ? one + alt : one - alt).scaled(half);
}

struct Group {
    std::vector<Surd> direction;
    std::vector<long> residues;
    std::vector<std::size_t> finite_members;
    std::vector<std::size_t> exceptions;
};

}  // namespace

// -------------------------------------------------------------- row_equiv

RowEquivalence row_equiv(const RowSpec& a, const RowSpec& b) {
    if (a.opaque || b.opaque || a.row.is_opaque() || b.row.is_opaque()) return {};
    const Verdict la = a.row.l2();
    const Verdict lb = b.row.l2();
    if (la == Verdict::Undecidable || lb == Verdict::Undecidable) return {};
    if (la == Verdict::Yes && lb == Verdict::Yes) return {EquivKind::Equivalent, std::nullopt};
    if (la != lb) return {EquivKind::NotEquivalent, std::nullopt};
    if (auto mu = leading_ratio(a.row, b.row)) {
        const Verdict v = (a.row - b.row.scaled(*mu)).l2();
        if (v == Verdict::Yes) return {EquivKind::Equivalent, mu};
        if (v == Verdict::No) return {EquivKind::NotEquivalent, std::nullopt};
        return {};
    }
    if (disjoint_growth(a.row, b.row)) return {EquivKind::NotEquivalent, std::nullopt};
    return {};
}

// ----------------------------------------------------------- Classification

std::size_t Classification::part_of(std::size_t j) const {
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const RowClass& c = classes[i];
        if (j < tail_from) {
            if (std::find(c.finite_members.begin(), c.finite_members.end(), j) != c.finite_members.end()) return i + 1;
            continue;
        }
        const long r = static_cast<long>(j % static_cast<std::size_t>(period));
        if (std::find(c.residues.begin(), c.residues.end(), r) == c.residues.end()) continue;
        if (std::find(c.exceptions.begin(), c.exceptions.end(), j) != c.exceptions.end()) continue;
        return i + 1;
    }
    return 0;
}

bool Classification::has_l2_rows() const {
    if (!l2_residues.empty()) return true;
    for (std::size_t j = 0; j <= std::max(horizon, tail_from); ++j)
        if (part_of(j) == 0) return true;
    return false;
}

std::vector<std::size_t> Classification::members(std::size_t part, std::size_t upto) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j <= upto; ++j)
        if (part_of(j) == part) out.push_back(j);
    return out;
}

std::size_t Classification::head_of(std::size_t j) const {
    const std::size_t p = part_of(j);
    if (p == 0) throw DomainError("rows of N_0 have no head");
    return classes[p - 1].head;
}

Surd Classification::m(std::size_t j) const {
    const std::size_t p = part_of(j);
    if (p == 0) return {};
    const RowClass& c = classes[p - 1];
    return reduced[c.pivot].first.eval(j) * c.pivot_head.inverse();
}

ClosedForm Classification::m_on_residue(std::size_t class_index, long residue) const {
    const RowClass& c = classes.at(class_index);
    return reduced[c.pivot].first.tail_only().restrict(period, residue).scaled(c.pivot_head.inverse());
}

std::optional<ClosedForm> Classification::m_form() const {
    if (period > 2) return std::nullopt;
    ClosedForm tail;
    for (const auto& c : classes) {
        const ClosedForm w = reduced[c.pivot].first.tail_only().scaled(c.pivot_head.inverse());
        for (long r : c.residues) tail = tail + w * residue_indicator(period, r);
    }
    std::vector<Surd> prefix;
    for (std::size_t j = 0; j < tail_from; ++j) prefix.push_back(m(j));
    return ClosedForm::with_prefix(std::move(prefix), tail);
}

Surd Classification::thinning(std::size_t j, std::size_t k) const {
    const Surd a = A_->entry(j, k);
    const std::size_t p = part_of(j);
    if (p == 0) return a;
    return a - m(j) * A_->entry(classes[p - 1].head, k);
}

std::complex<double> Classification::thinning_complex(std::size_t j, std::size_t k) const {
    const std::complex<double> a = A_->entry_complex(j, k);
    const std::size_t p = part_of(j);
    if (p == 0) return a;
    return a - m(j).to_complex() * A_->entry_complex(classes[p - 1].head, k);
}

ClosedForm Classification::thinning_row(std::size_t j) const {
    const RowPattern& pat = *A_->pattern();
    std::vector<Surd> prefix;
    for (std::size_t k = 0; k <= j; ++k) prefix.push_back(thinning(j, k));
    ClosedForm tail = pat.tail(j);
    if (const std::size_t p = part_of(j); p != 0) tail = tail - pat.tail(classes[p - 1].head).scaled(m(j));
    return ClosedForm::with_prefix(std::move(prefix), tail);
}

// ---------------------------------------------------------------- classify

Classification classify(const StructuredMatrix& A, std::size_t horizon) {
    if (!A.pattern()) throw ClassificationRefused("matrix rows are opaque (no catalog row pattern)");
    horizon = std::min(horizon, A.horizon());
    const RowPattern& pat = *A.pattern();

    // Profiles modulo l2: drop square-summable ones, merge proportional ones.
    std::vector<std::pair<ClosedForm, ClosedForm>> red;
    for (const auto& [w, phi] : pat.terms) {
        const Verdict v = phi.l2();
        if (v == Verdict::Undecidable)
            throw ClassificationRefused("square-summability of the row profile " + phi.to_string() + " is undecidable");
        if (v == Verdict::Yes || w.is_zero()) continue;
        bool merged = false;
        for (auto& [w2, phi2] : red) {
            if (disjoint_growth(phi, phi2)) continue;
            auto mu = leading_ratio(phi, phi2);
            if (!mu || (phi - phi2.scaled(*mu)).l2() != Verdict::Yes)
                throw ClassificationRefused("row profiles are neither independent nor proportional modulo l2");
            w2 = w2 + w.scaled(*mu);
            merged = true;
            break;
        }
        if (!merged) red.emplace_back(w, phi);
    }
    red.erase(std::remove_if(red.begin(), red.end(), [](const auto& t) { return t.first.is_zero(); }), red.end());

    Classification c;
    c.A_ = std::make_shared<const StructuredMatrix>(A);
    c.horizon = horizon;
    c.reduced = red;
    long period = 1;
    for (const auto& [w, phi] : pat.terms) period = std::lcm(period, std::lcm(w.period(), phi.period()));
    for (const auto& [w, phi] : red) period = std::lcm(period, w.period());
    c.period = period;
    std::size_t from = 0;
    for (const auto& [w, phi] : red) from = std::max(from, w.start());
    // Start the symbolic region on a multiple of the period.
    from = (from + static_cast<std::size_t>(period) - 1) / static_cast<std::size_t>(period) * static_cast<std::size_t>(period);
    if (from > horizon) throw ClassificationRefused("row weights are tabulated beyond the horizon");
    c.tail_from = from;

    std::vector<ClosedForm> W;
    for (const auto& [w, phi] : red) W.push_back(w);

    std::vector<Group> groups;
    auto group_for = [&](const std::vector<Surd>& dir) -> Group& {
        for (auto& g : groups)
            if (parallel(g.direction, dir)) return g;
        groups.push_back(Group{dir, {}, {}, {}});
        return groups.back();
    };

    for (long r = 0; r < period; ++r) {
        std::vector<ClosedForm> tr;
        bool zero = true;
        for (const auto& w : W) {
            tr.push_back(w.tail_only().restrict(period, r));
            if (!tr.back().is_zero()) zero = false;
            if (!bases_positive(tr.back()))
                throw ClassificationRefused("row weights have no real positive period");
        }
        if (zero) {
            c.l2_residues.push_back(r);
            continue;
        }
        std::optional<std::vector<Surd>> dir;
        const std::size_t limit = from + static_cast<std::size_t>(period) * (horizon + 2);
        for (std::size_t j = from + static_cast<std::size_t>(r); j <= limit; j += static_cast<std::size_t>(period)) {
            auto v = weights_at(W, j);
            if (!all_zero(v)) {
                dir = std::move(v);
                break;
            }
        }
        if (!dir) throw ClassificationRefused("row weights vanish on a long stretch of residue " + std::to_string(r));
        if (!proportional_on_residue(tr, *dir))
            throw ClassificationRefused("row classes vary within residue " + std::to_string(r) + " mod " +
                                        std::to_string(period));
        Group& g = group_for(*dir);
        g.residues.push_back(r);
        const std::size_t piv = first_nonzero(*dir);
        for (std::size_t j = from + static_cast<std::size_t>(r); j <= horizon; j += static_cast<std::size_t>(period))
            if (W[piv].eval(j).is_zero()) g.exceptions.push_back(j);
    }
    for (std::size_t j = 0; j < from; ++j) {
        auto v = weights_at(W, j);
        if (all_zero(v)) continue;
        group_for(v).finite_members.push_back(j);
    }

    for (auto& g : groups) {
        RowClass rc;
        rc.residues = g.residues;
        rc.finite_members = g.finite_members;
        rc.exceptions = g.exceptions;
        std::optional<std::size_t> head;
        if (!g.finite_members.empty()) head = g.finite_members.front();
        if (!head) {
            for (std::size_t j = from;; ++j) {
                const long r = static_cast<long>(j % static_cast<std::size_t>(period));
                if (std::find(g.residues.begin(), g.residues.end(), r) != g.residues.end() &&
                    std::find(g.exceptions.begin(), g.exceptions.end(), j) == g.exceptions.end()) {
                    head = j;
                    break;
                }
            }
        }
        rc.head = *head;
        rc.pivot = first_nonzero(g.direction);
        rc.pivot_head = W[rc.pivot].eval(rc.head);
        if (!rc.pivot_head.is_single_term())
            throw ClassificationRefused("multiplier normalization needs a single-term head weight");
        std::ostringstream rule;
        if (!rc.residues.empty()) {
            rule << "j >= " << from << ", j mod " << period << " in {";
            for (std::size_t i = 0; i < rc.residues.size(); ++i) rule << (i ? "," : "") << rc.residues[i];
            rule << "}";
            if (!rc.exceptions.empty()) rule << " minus " << rc.exceptions.size() << " l2 rows";
        }
        if (!rc.finite_members.empty()) {
            rule << (rc.residues.empty() ? "" : "; ") << "rows {";
            for (std::size_t i = 0; i < rc.finite_members.size(); ++i) rule << (i ? "," : "") << rc.finite_members[i];
            rule << "}";
        }
        rc.rule = rule.str();
        c.classes.push_back(std::move(rc));
    }
    std::sort(c.classes.begin(), c.classes.end(), [](const RowClass& a, const RowClass& b) { return a.head < b.head; });
    return c;
}

// ------------------------------------------------------------ predicates

bool is_thin(const Classification& c) {
    bool undecided = false;
    for (std::size_t i = 0; i < c.classes.size(); ++i) {
        const RowClass& rc = c.classes[i];
        if (!rc.infinite()) return false;
        bool outside_l2 = false;
        for (long r : rc.residues) {
            const Verdict v = c.m_on_residue(i, r).l2();
            if (v == Verdict::No) outside_l2 = true;
            if (v == Verdict::Undecidable) undecided = true;
        }
        if (outside_l2) continue;
        if (!undecided) return false;
    }
    if (undecided) throw ThinUndecidable("square-summability of a multiplier sequence is undecidable");
    return true;
}

BlockedReport is_blocked(const Classification& c) {
    BlockedReport rep;
    const StructuredMatrix& A = c.matrix();
    const RowPattern& pat = *A.pattern();
    const std::size_t parts = c.classes.size() + (c.has_l2_rows() ? 1 : 0);
    if (parts <= 1) {
        rep.blocked = rep.vacuous = true;
        rep.detail = "single part";
        return rep;
    }

    // Explicit entries up to the point where every table has ended.
    std::size_t K0 = std::max(c.horizon, c.tail_from);
    for (const auto& [w, phi] : pat.terms) K0 = std::max({K0, w.start(), phi.start()});
    for (std::size_t k = 0; k <= K0; ++k) {
        for (std::size_t j = 0; j <= k; ++j) {
            if (c.part_of(j) != c.part_of(k) && !A.entry(j, k).is_zero()) {
                rep.detail = "a_{" + std::to_string(j) + "," + std::to_string(k) + "} != 0 across parts";
                return rep;
            }
        }
    }

    const long P = c.period;
    std::vector<std::size_t> part_of_residue(static_cast<std::size_t>(P));
    for (long s = 0; s < P; ++s) part_of_residue[static_cast<std::size_t>(s)] = c.part_of(K0 + 1 + ((s - static_cast<long>((K0 + 1) % static_cast<std::size_t>(P))) % P + P) % P);

    // Rows up to K0, columns beyond.
    for (std::size_t j = 0; j <= K0; ++j) {
        const ClosedForm tail = pat.tail(j).tail_only();
        for (long s = 0; s < P; ++s) {
            if (part_of_residue[static_cast<std::size_t>(s)] == c.part_of(j)) continue;
            if (!tail.restrict(P, s).is_zero()) {
                rep.detail = "row " + std::to_string(j) + " meets residue " + std::to_string(s) + " of another part";
                return rep;
            }
        }
    }
    // Rows beyond K0, residue by residue.
    for (long r = 0; r < P; ++r) {
        std::vector<ClosedForm> wr;
        std::vector<ClosedForm> wfull;
        for (const auto& [w, phi] : pat.terms) {
            wr.push_back(w.tail_only().restrict(P, r));
            wfull.push_back(w);
        }
        for (long s = 0; s < P; ++s) {
            if (part_of_residue[static_cast<std::size_t>(s)] == part_of_residue[static_cast<std::size_t>(r)]) continue;
            std::vector<ClosedForm> phis;
            bool trivially_zero = true;
            for (std::size_t t = 0; t < pat.terms.size(); ++t) {
                phis.push_back(pat.terms[t].second.tail_only().restrict(P, s));
                if (!wr[t].is_zero() && !phis.back().is_zero()) trivially_zero = false;
            }
            if (trivially_zero) continue;
            std::optional<std::vector<Surd>> dir;
            for (std::size_t j = K0 + 1; j <= K0 + static_cast<std::size_t>(P) * 64 && !dir; ++j) {
                if (static_cast<long>(j % static_cast<std::size_t>(P)) != r) continue;
                auto v = weights_at(wfull, j);
                if (!all_zero(v)) dir = std::move(v);
            }
            if (!dir || !proportional_on_residue(wr, *dir)) {
                rep.certified = false;
                rep.detail = "row weights on residue " + std::to_string(r) + " are not proportional";
                return rep;
            }
            ClosedForm combo;
            for (std::size_t t = 0; t < phis.size(); ++t) combo = combo + phis[t].scaled((*dir)[t]);
            if (!combo.is_zero()) {
                rep.detail = "residue " + std::to_string(r) + " rows meet residue " + std::to_string(s);
                return rep;
            }
        }
    }
    rep.blocked = true;
    rep.detail = std::to_string(parts) + " parts, no entries across parts";
    return rep;
}

Closability closability_verdict(const Classification& c) {
    try {
        if (is_thin(c)) return Closability::Closable;
    } catch (const ThinUndecidable&) {
        return Closability::Unknown;
    }
    return is_blocked(c).blocked ? Closability::NotClosable : Closability::Unknown;
}

Closability closability_verdict(const StructuredMatrix& A, std::size_t horizon) {
    try {
        return closability_verdict(classify(A, horizon));
    } catch (const ClassificationRefused&) {
        return Closability::Unknown;
    }
}

// -------------------------------------------------------- graph relations

RelationReport graph_closure_relation(const Classification& c, const HqVector& x, const HqVector& y, std::size_t N) {
    const std::vector<Surd> xs = x.entries();
    RelationReport rep;
    bool exact = true;
    for (std::size_t t = 0; t <= N; ++t) {
        Surd vx;
        for (std::size_t k = 0; k < xs.size(); ++k)
            if (!xs[k].is_zero()) vx += c.thinning(t, k) * xs[k];
        Surd rhs = vx;
        if (const std::size_t p = c.part_of(t); p != 0) rhs += y.at(c.classes[p - 1].head) * c.m(t);
        const Surd res = y.at(t) - rhs;
        if (!res.is_zero()) {
            exact = false;
            if (!rep.first_failure) rep.first_failure = t;
            rep.max_residual = std::max(rep.max_residual, std::abs(res.to_complex()));
        }
        ++rep.checked;
    }
    rep.exact_zero = exact;
    return rep;
}

std::optional<NonContinuityWitness> noncontinuity_witness(const Classification& c, std::size_t N, double tol) {
    if (c.classes.empty()) return std::nullopt;
    NonContinuityWitness w;
    w.head = c.classes.front().head;
    const StructuredMatrix& A = c.matrix();
    std::vector<std::complex<double>> row(N + 1);
    std::vector<double> s(N + 1);
    double acc = 0;
    for (std::size_t t = 0; t <= N; ++t) {
        row[t] = A.entry_complex(w.head, t);
        acc += std::norm(row[t]);
        s[t] = acc;
    }
    for (std::size_t n = std::max<std::size_t>(N / 8, 1); n <= N; n *= 2)
        if (s[n] > 0) w.norms.emplace_back(n, 1.0 / std::sqrt(s[n]));
    std::complex<double> value;
    for (std::size_t t = 0; t <= N; ++t) value += row[t] * std::conj(row[t]) / s[N];
    w.value_at_head = value.real();
    bool decreasing = w.norms.size() >= 2;
    for (std::size_t i = 1; i < w.norms.size(); ++i) decreasing = decreasing && w.norms[i].second < w.norms[i - 1].second;
    w.holds = decreasing && std::abs(value - 1.0) < tol;
    return w;
}

}  // namespace opspectra
