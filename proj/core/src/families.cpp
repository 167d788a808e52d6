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

#include "opspectra/families.hpp"

#include <mutex>
#include <utility>

#include "opspectra/error.hpp"

namespace opspectra {

struct PolySeq::Impl {
    FamilyKind kind = FamilyKind::UserTable;
    Rational alpha, beta, K, shift;
    std::shared_ptr<const PolySeq> inner;
    std::vector<Poly> table;

    mutable std::mutex mu;
    mutable std::vector<Poly> cache;

    Poly next(std::size_t n) const;  // requires cache.size() == n
};

namespace {

Poly lin(const Rational& c0, const Rational& c1) {
    return Poly(std::vector<ExactScalar>{ExactScalar(c0), ExactScalar(c1)});
}

Poly laguerre_poly(const Rational& alpha, std::size_t n) {
    std::vector<ExactScalar> c(n + 1);
    const Rational top = Rational(static_cast<long>(n)) + alpha;
    for (std::size_t k = 0; k <= n; ++k) {
        Rational v = binomial(top, static_cast<long>(n - k)) / factorial(k);
        if (k % 2 == 1) v = -v;
        c[k] = ExactScalar(v);
    }
    return Poly(std::move(c));
}

Poly jacobi_poly(const Rational& a, const Rational& b, std::size_t n) {
    const Rational nn(static_cast<long>(n));
    const Poly xm = lin(Rational(-1, 2), Rational(1, 2));  // (x-1)/2
    const Poly xp = lin(Rational(1, 2), Rational(1, 2));   // (x+1)/2
    Poly out;
    for (std::size_t s = 0; s <= n; ++s) {
        const Rational w = binomial(nn + a, static_cast<long>(n - s)) * binomial(nn + b, static_cast<long>(s));
        if (w == 0) continue;
        out += xm.pow(static_cast<unsigned>(s)) * xp.pow(static_cast<unsigned>(n - s)) * ExactScalar(w);
    }
    return out;
}

void require_gt(const Rational& v, long bound, const char* what) {
    if (v <= bound) throw BadParameter(std::string(what) + " must exceed " + std::to_string(bound));
}

}  // namespace

Poly PolySeq::Impl::next(std::size_t n) const {
    const Poly x = Poly::x();
    auto prev = [&](std::size_t back) { return cache[n - back]; };
    switch (kind) {
        case FamilyKind::Laguerre:
            return laguerre_poly(alpha, n);
        case FamilyKind::Jacobi:
            return jacobi_poly(alpha, beta, n);
        case FamilyKind::Hermite:
            if (n == 0) return Poly(1);
            if (n == 1) return Poly::monomial(1, 2);
            return x * prev(1) * ExactScalar(2) - prev(2) * ExactScalar(2 * static_cast<long>(n - 1));
        case FamilyKind::ChebyshevT:
        case FamilyKind::ChebyshevU:
            if (n == 0) return Poly(1);
            if (n == 1) return Poly::monomial(1, kind == FamilyKind::ChebyshevT ? 1 : 2);
            return x * prev(1) * ExactScalar(2) - prev(2);
        case FamilyKind::ScaledChebyshevT: {
            // 2T_{n} = 2x (2T_{n-1}) - 2T_{n-2}, with p_1 = 2x and 2T_0 = 2.
            if (n == 0) return Poly(1);
            if (n == 1) return Poly::monomial(1, 2);
            const Poly before = n == 2 ? Poly(2) : prev(2);
            return x * prev(1) * ExactScalar(2) - before;
        }
        case FamilyKind::KoornwinderLaguerre: {
            const Poly L = laguerre_poly(alpha, n);
            const Rational top = Rational(static_cast<long>(n)) + alpha;
            const Rational c0 = Rational(1) + K * binomial(top, static_cast<long>(n) - 1);
            const Rational c1 = K * binomial(top, static_cast<long>(n));
            return L * ExactScalar(c0) + derivative(L) * ExactScalar(c1);
        }
        case FamilyKind::Translate:
            return affine_compose((*inner)(n), 1, ExactScalar(shift));
        case FamilyKind::UserTable:
            if (n >= table.size())
                throw DomainError("user table has no polynomial of index " + std::to_string(n));
            return table[n];
    }
    throw Error("unreachable family kind");
}

PolySeq::PolySeq(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

PolySeq PolySeq::laguerre(const Rational& alpha) {
    require_gt(alpha, -1, "Laguerre alpha");
    auto p = std::make_shared<Impl>();
    p->kind = FamilyKind::Laguerre;
    p->alpha = alpha;
    return PolySeq(p);
}

PolySeq PolySeq::jacobi(const Rational& alpha, const Rational& beta) {
    require_gt(alpha, -1, "Jacobi alpha");
    require_gt(beta, -1, "Jacobi beta");
    auto p = std::make_shared<Impl>();
    p->kind = FamilyKind::Jacobi;
    p->alpha = alpha;
    p->beta = beta;
    return PolySeq(p);
}

PolySeq PolySeq::hermite() {
    auto p = std::make_shared<Impl>();
    p->kind = FamilyKind::Hermite;
    return PolySeq(p);
}

PolySeq PolySeq::chebyshev_t() {
    auto p = std::make_shared<Impl>();
    p->kind = FamilyKind::ChebyshevT;
    return PolySeq(p);
}

PolySeq PolySeq::chebyshev_u() {
    auto p = std::make_shared<Impl>();
    p->kind = FamilyKind::ChebyshevU;
    return PolySeq(p);
}

PolySeq PolySeq::scaled_chebyshev_t() {
    auto p = std::make_shared<Impl>();
    p->kind = FamilyKind::ScaledChebyshevT;
    return PolySeq(p);
}

PolySeq PolySeq::koornwinder(const Rational& alpha, const Rational& K) {
    require_gt(alpha, -1, "Koornwinder alpha");
    if (K <= 0) throw BadParameter("Koornwinder K must be positive");
    auto p = std::make_shared<Impl>();
    p->kind = FamilyKind::KoornwinderLaguerre;
    p->alpha = alpha;
    p->K = K;
    return PolySeq(p);
}

PolySeq PolySeq::translate(const PolySeq& inner, const Rational& shift) {
    auto p = std::make_shared<Impl>();
    p->kind = FamilyKind::Translate;
    p->shift = shift;
    p->inner = std::make_shared<const PolySeq>(inner);
    return PolySeq(p);
}

PolySeq PolySeq::user_table(std::vector<Poly> polys) {
    for (std::size_t n = 0; n < polys.size(); ++n)
        if (polys[n].degree() != n)
            throw BadParameter("user table entry " + std::to_string(n) + " does not have degree " +
                               std::to_string(n));
    auto p = std::make_shared<Impl>();
    p->kind = FamilyKind::UserTable;
    p->table = std::move(polys);
    return PolySeq(p);
}

FamilyKind PolySeq::kind() const { return impl_->kind; }
const Rational& PolySeq::alpha() const { return impl_->alpha; }
const Rational& PolySeq::beta() const { return impl_->beta; }
const Rational& PolySeq::K() const { return impl_->K; }
const Rational& PolySeq::shift() const { return impl_->shift; }

const PolySeq& PolySeq::inner() const {
    if (!impl_->inner) throw BadParameter("not a translated family");
    return *impl_->inner;
}

std::optional<std::size_t> PolySeq::size() const {
    if (impl_->kind == FamilyKind::UserTable) return impl_->table.size();
    if (impl_->kind == FamilyKind::Translate) return impl_->inner->size();
    return std::nullopt;
}

Poly PolySeq::operator()(std::size_t n) const {
    if (impl_->kind == FamilyKind::UserTable) return impl_->next(n);
    std::lock_guard<std::mutex> lock(impl_->mu);
    while (impl_->cache.size() <= n) impl_->cache.push_back(impl_->next(impl_->cache.size()));
    return impl_->cache[n];
}

BasisFn PolySeq::basis() const {
    PolySeq self = *this;
    return [self](std::size_t n) { return self(n); };
}

std::string PolySeq::name() const {
    switch (impl_->kind) {
        case FamilyKind::Laguerre: return "laguerre:" + to_string(impl_->alpha);
        case FamilyKind::Jacobi: return "jacobi:" + to_string(impl_->alpha) + "," + to_string(impl_->beta);
        case FamilyKind::Hermite: return "hermite";
        case FamilyKind::ChebyshevT: return "chebyshevT";
        case FamilyKind::ChebyshevU: return "chebyshevU";
        case FamilyKind::ScaledChebyshevT: return "scaledT";
        case FamilyKind::KoornwinderLaguerre:
            return "koornwinder:" + to_string(impl_->alpha) + "," + to_string(impl_->K);
        case FamilyKind::Translate: return "translate:" + impl_->inner->name() + "," + to_string(impl_->shift);
        case FamilyKind::UserTable: return "usertable[" + std::to_string(impl_->table.size()) + "]";
    }
    return "?";
}

bool PolySeq::is_catalog_ops() const {
    switch (impl_->kind) {
        case FamilyKind::UserTable: return false;
        case FamilyKind::Translate: return impl_->inner->is_catalog_ops();
        default: return true;
    }
}

bool operator==(const PolySeq& a, const PolySeq& b) {
    if (a.impl_ == b.impl_) return true;
    const auto& x = *a.impl_;
    const auto& y = *b.impl_;
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case FamilyKind::Laguerre: return x.alpha == y.alpha;
        case FamilyKind::Jacobi: return x.alpha == y.alpha && x.beta == y.beta;
        case FamilyKind::KoornwinderLaguerre: return x.alpha == y.alpha && x.K == y.K;
        case FamilyKind::Translate: return x.shift == y.shift && *x.inner == *y.inner;
        case FamilyKind::UserTable: return x.table == y.table;
        default: return true;
    }
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
}

std::vector<Rational> parse_params(std::string_view args, std::size_t count, std::string_view family) {
    std::vector<Rational> out;
    std::size_t pos = 0;
    while (pos <= args.size()) {
        const std::size_t comma = args.find(',', pos);
        const std::string_view piece = trim(args.substr(pos, comma == std::string_view::npos ? args.npos : comma - pos));
        try {
            out.push_back(parse_rational(piece));
        } catch (const Error&) {
            throw ParseError("bad parameter '" + std::string(piece) + "' for " + std::string(family), pos + 1);
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (out.size() != count)
        throw ParseError(std::string(family) + " expects " + std::to_string(count) + " parameter(s)", 1);
    return out;
}

}  // namespace

PolySeq PolySeq::parse(std::string_view text) {
    text = trim(text);
    const std::size_t colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    auto no_args = [&](PolySeq s) {
        if (colon != std::string_view::npos) throw ParseError(std::string(head) + " takes no parameters", colon + 1);
        return s;
    };
    if (head == "laguerre") return laguerre(parse_params(args, 1, head)[0]);
    if (head == "jacobi") {
        const auto p = parse_params(args, 2, head);
        return jacobi(p[0], p[1]);
    }
    if (head == "koornwinder") {
        const auto p = parse_params(args, 2, head);
        return koornwinder(p[0], p[1]);
    }
    if (head == "hermite") return no_args(hermite());
    if (head == "chebyshevT") return no_args(chebyshev_t());
    if (head == "chebyshevU") return no_args(chebyshev_u());
    if (head == "scaledT") return no_args(scaled_chebyshev_t());
    if (head == "translate") {
        const std::size_t comma = args.rfind(',');
        if (comma == std::string_view::npos) throw ParseError("translate expects <family>,<shift>", colon + 2);
        return translate(parse(args.substr(0, comma)), parse_params(args.substr(comma + 1), 1, head)[0]);
    }
    throw ParseError("unknown family '" + std::string(head) + "'", 1);
}

Poly make_poly(const PolySeq& seq, std::size_t n) { return seq(n); }

Surd laguerre_norm(const Rational& beta, std::size_t k) {
    require_gt(beta, -1, "Laguerre norm beta");
    return Surd::sqrt(laguerre_norm_squared(beta, k));
}

std::optional<std::vector<ExactScalar>> known_connection(const PolySeq& from, const PolySeq& to,
                                                         std::size_t n) {
    std::vector<ExactScalar> v(n + 1);
    const FamilyKind f = from.kind();
    const FamilyKind t = to.kind();
    if (f == FamilyKind::Laguerre && t == FamilyKind::Laguerre) {
        if (from.alpha() == to.alpha() + 1) {
            for (auto& c : v) c = 1;
            return v;
        }
        if (to.alpha() == from.alpha() + 1) {
            v[n] = 1;
            if (n >= 1) v[n - 1] = -1;
            return v;
        }
        return std::nullopt;
    }
    const bool from_t = f == FamilyKind::ChebyshevT || f == FamilyKind::ScaledChebyshevT;
    if (from_t && t == FamilyKind::ChebyshevU) {
        // 2T_n = U_n - U_{n-2} (n >= 2), T_0 = U_0, 2T_1 = U_1.
        const Rational w = (f == FamilyKind::ChebyshevT && n >= 1) ? Rational(1, 2) : Rational(1);
        v[n] = w;
        if (n >= 2) v[n - 2] = ExactScalar(Rational(-w));
        return v;
    }
    if (f == FamilyKind::ChebyshevU && (t == FamilyKind::ChebyshevT || t == FamilyKind::ScaledChebyshevT)) {
        // U_{2m} = T_0 + 2 sum T_{2k}, U_{2m+1} = 2 sum T_{2k+1}.
        for (std::size_t j = n % 2; j <= n; j += 2)
            v[j] = (t == FamilyKind::ChebyshevT && j != 0) ? 2 : 1;
        return v;
    }
    return std::nullopt;
}

std::vector<ExactScalar> connection(const PolySeq& from, const PolySeq& to, std::size_t n) {
    std::vector<ExactScalar> v = change_basis(from(n), to.basis());
    v.resize(n + 1);
    if (auto known = known_connection(from, to, n); known && *known != v)
        throw Error("connection " + from.name() + " -> " + to.name() + " disagrees with the tabulated relation at n=" +
                    std::to_string(n));
    return v;
}

namespace {

struct RawRecurrence {
    std::vector<ExactScalar> a, b, c;
};

// Exact coefficients read off leading terms, then the remainder must vanish.
RawRecurrence raw_recurrence(const PolySeq& seq, std::size_t horizon) {
    RawRecurrence r;
    const Poly x = Poly::x();
    for (std::size_t n = 0; n < horizon; ++n) {
        const Poly pn = seq(n);
        const Poly pn1 = seq(n + 1);
        Poly rest = x * pn;
        const ExactScalar a = pn.leading() / pn1.leading();
        rest -= pn1 * a;
        const ExactScalar b = rest.coeff(n) / pn.leading();
        rest -= pn * b;
        ExactScalar c;
        if (n >= 1) {
            const Poly pm = seq(n - 1);
            c = rest.coeff(n - 1) / pm.leading();
            rest -= pm * c;
        }
        if (!rest.is_zero())
            throw NotOrthogonal(seq.name() + " has no three-term recurrence at n=" + std::to_string(n));
        if (!b.is_real() || !a.is_real() || !c.is_real())
            throw NotOrthogonal(seq.name() + " has non-real recurrence coefficients at n=" + std::to_string(n));
        if (n >= 1 && sgn((r.a[n - 1] * c).re()) <= 0)
            throw NotOrthogonal(seq.name() + " violates a_{n-1} c_n > 0 at n=" + std::to_string(n));
        r.a.push_back(a);
        r.b.push_back(b);
        r.c.push_back(c);
    }
    return r;
}

SequenceSpec poly_seq(const Poly& p) { return SequenceSpec::polynomial(p); }

SequenceSpec constant(const Rational& c) { return SequenceSpec::polynomial(Poly(ExactScalar(c))); }

// num(n)/den(n) from index `from` on, explicit exact values below.
SequenceSpec rational_tail(const std::vector<ExactScalar>& head, const Poly& num, const Poly& den) {
    const ClosedForm tail = ClosedForm::polynomial(num) * ClosedForm::polynomial(den).inverse(head.size());
    std::vector<Surd> prefix(head.begin(), head.end());
    return SequenceSpec::from_form(ClosedForm::with_prefix(std::move(prefix), tail));
}

SequenceSpec with_zero_head(const SequenceSpec& tail) { return SequenceSpec::table_with_tail({Surd(0)}, tail); }

std::optional<Recurrence3> closed_recurrence(const PolySeq& seq, const RawRecurrence& raw) {
    const Poly n = Poly::x();
    const Rational half(1, 2);
    switch (seq.kind()) {
        case FamilyKind::Laguerre: {
            const Rational& al = seq.alpha();
            return Recurrence3{poly_seq(lin(-1, -1)), poly_seq(lin(al + 1, 2)), poly_seq(lin(-al, -1))};
        }
        case FamilyKind::Jacobi: {
            const Rational& al = seq.alpha();
            const Rational& be = seq.beta();
            const Rational s = al + be;
            const Poly two_n_s = lin(s, 2);
            const Poly a_num = lin(1, 1) * lin(s + 1, 1) * ExactScalar(2);
            const Poly a_den = lin(s + 1, 2) * lin(s + 2, 2);
            const Poly b_num(ExactScalar(be * be - al * al));
            const Poly b_den = two_n_s * lin(s + 2, 2);
            const Poly c_num = lin(al, 1) * lin(be, 1) * ExactScalar(2);
            const Poly c_den = two_n_s * lin(s + 1, 2);
            return Recurrence3{rational_tail({raw.a[0]}, a_num, a_den), rational_tail({raw.b[0]}, b_num, b_den),
                               rational_tail({ExactScalar(0)}, c_num, c_den)};
        }
        case FamilyKind::Hermite:
            return Recurrence3{constant(half), constant(0), poly_seq(n)};
        case FamilyKind::ChebyshevT:
            return Recurrence3{SequenceSpec::eventually_constant({Surd(1)}, ExactScalar(half)), constant(0),
                               with_zero_head(constant(half))};
        case FamilyKind::ChebyshevU:
            return Recurrence3{constant(half), constant(0), with_zero_head(constant(half))};
        case FamilyKind::ScaledChebyshevT:
            return Recurrence3{constant(half), constant(0),
                               SequenceSpec::eventually_constant({Surd(0), Surd(1)}, ExactScalar(half))};
        default:
            return std::nullopt;
    }
}

bool agrees(const SequenceSpec& s, const std::vector<ExactScalar>& v, std::size_t from) {
    for (std::size_t n = from; n < v.size(); ++n)
        if (s.eval(n) != Surd(v[n])) return false;
    return true;
}

}  // namespace

Recurrence3 recurrence_coeffs(const PolySeq& seq, std::size_t horizon) {
    if (seq.kind() == FamilyKind::Translate) {
        Recurrence3 r = recurrence_coeffs(seq.inner(), horizon);
        // x p_n(x) = (x+s) q_n(x+s) - s q_n(x+s): only b shifts.
        r.b = r.b - constant(seq.shift());
        const RawRecurrence raw = raw_recurrence(seq, horizon);
        if (!agrees(r.a, raw.a, 0) || !agrees(r.b, raw.b, 0) || !agrees(r.c, raw.c, 1))
            throw Error("translated recurrence disagrees with the generator for " + seq.name());
        return r;
    }
    if (auto sz = seq.size(); sz && *sz < horizon + 1) {
        if (*sz < 2) throw NotOrthogonal("user table too short for a recurrence");
        horizon = *sz - 1;
    }
    const RawRecurrence raw = raw_recurrence(seq, horizon);
    if (auto closed = closed_recurrence(seq, raw)) {
        if (!agrees(closed->a, raw.a, 0) || !agrees(closed->b, raw.b, 0) || !agrees(closed->c, raw.c, 1))
            throw Error("closed-form recurrence disagrees with the generator for " + seq.name());
        return *closed;
    }
    auto table = [](const std::vector<ExactScalar>& v, const std::string& note) {
        return SequenceSpec::opaque(std::vector<Surd>(v.begin(), v.end()), note);
    };
    const std::string note = "recurrence of " + seq.name() + " (exact table)";
    return Recurrence3{table(raw.a, note), table(raw.b, note), table(raw.c, note)};
}

}  // namespace opspectra
