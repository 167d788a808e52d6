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

#include "opspectra/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "opspectra/error.hpp"

namespace opspectra {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "Yes";
        case Verdict::No: return "No";
        case Verdict::Undecidable: return "Undecidable";
    }
    return "?";
}

bool operator==(const NormFactor& x, const NormFactor& y) {
    return x.beta == y.beta && x.a == y.a && x.c == y.c && x.e == y.e;
}

bool operator<(const NormFactor& x, const NormFactor& y) {
    if (x.beta != y.beta) return x.beta < y.beta;
    return std::tie(x.a, x.c, x.e) < std::tie(y.a, y.c, y.e);
}

Rational laguerre_norm_squared(const Rational& beta, std::size_t k) {
    Rational out(1);
    for (std::size_t i = 1; i <= k; ++i) out *= Rational(1) + beta / Rational(static_cast<long>(i));
    return out;
}

Rational TailTerm::sigma() const {
    Rational s(static_cast<long>(num.degree().value_or(0)) - static_cast<long>(den.degree().value_or(0)));
    for (const auto& f : factors) s += f.beta * f.e / 2;
    return s;
}

namespace {

int cmp_scalar(const ExactScalar& a, const ExactScalar& b) {
    if (int c = cmp(a.re(), b.re()); c != 0) return c;
    return cmp(a.im(), b.im());
}

bool key_less(const TailTerm& x, const TailTerm& y) {
    if (int c = cmp(x.radicand, y.radicand); c != 0) return c < 0;
    if (int c = cmp_scalar(x.base, y.base); c != 0) return c < 0;
    return x.factors < y.factors;
}

bool key_equal(const TailTerm& x, const TailTerm& y) {
    return x.radicand == y.radicand && x.base == y.base && x.factors == y.factors;
}

// Groups for asymptotics ignore the radicand: sqrt(m) for distinct square-free
// m are independent, so leading coefficients never cancel across radicands.
struct Group {
    ExactScalar base;
    std::vector<NormFactor> factors;
    Rational sigma;
};

std::vector<Group> asymptotic_groups(const std::vector<TailTerm>& terms) {
    std::vector<Group> out;
    for (const auto& t : terms) {
        auto it = std::find_if(out.begin(), out.end(), [&](const Group& g) {
            return g.base == t.base && g.factors == t.factors;
        });
        if (it == out.end()) {
            out.push_back({t.base, t.factors, t.sigma()});
        } else if (t.sigma() > it->sigma) {
            it->sigma = t.sigma();
        }
    }
    return out;
}

Poly linear(const Rational& c0, const Rational& c1) {
    return Poly(std::vector<ExactScalar>{ExactScalar(c0), ExactScalar(c1)});
}

// R_{an+c} / R_{an} as num/den polynomials in n.
std::pair<Poly, Poly> norm_shift_ratio(const Rational& beta, long a, long c) {
    Poly num(1), den(1);
    if (c > 0) {
        for (long t = 1; t <= c; ++t) {
            num *= linear(Rational(t) + beta, Rational(a));
            den *= linear(Rational(t), Rational(a));
        }
    } else {
        for (long t = c + 1; t <= 0; ++t) {
            num *= linear(Rational(t), Rational(a));
            den *= linear(Rational(t) + beta, Rational(a));
        }
    }
    return {num, den};
}

Surd norm_factor_value(const NormFactor& f, std::size_t n) {
    const long idx = f.a * static_cast<long>(n) + f.c;
    if (idx < 0) throw DomainError("norm factor evaluated at a negative index");
    const Rational r2 = laguerre_norm_squared(f.beta, static_cast<std::size_t>(idx));
    const int e = std::abs(f.e);
    Rational even(1);
    for (int i = 0; i < e / 2; ++i) even *= r2;
    Surd v = (e % 2 == 1) ? Surd::sqrt(r2) * Surd(even) : Surd(even);
    return f.e < 0 ? v.inverse() : v;
}

double norm_factor_double(const NormFactor& f, std::size_t n) {
    const double k = static_cast<double>(f.a * static_cast<long>(n) + f.c);
    const double b = f.beta.get_d();
    const double log_r2 = std::lgamma(k + 1.0 + b) - std::lgamma(1.0 + b) - std::lgamma(k + 1.0);
    return std::exp(0.5 * f.e * log_r2);
}

std::complex<double> poly_complex(const Poly& p, double x) {
    std::complex<double> acc;
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + it->to_complex();
    return acc;
}

std::complex<double> base_power(const ExactScalar& b, std::size_t n) {
    if (b.is_real()) {
        const double v = b.re().get_d();
        return {std::pow(v, static_cast<double>(n)), 0.0};
    }
    return std::pow(b.to_complex(), static_cast<double>(n));
}

// Canonical factor list: odd parts with |e| = 1, even parts shifted to c = 0
// with the ratio absorbed into the rational coefficient.
void canonicalize_factors(TailTerm& t) {
    std::map<std::tuple<Rational, long, long>, int> merged;
    for (const auto& f : t.factors) {
        if (sgn(f.beta) == 0 || f.e == 0) continue;
        merged[{f.beta, f.a, f.c}] += f.e;
    }
    std::map<std::tuple<Rational, long, long>, int> odd;
    std::map<std::pair<Rational, long>, int> even;
    auto absorb = [&](const Rational& beta, long a, long c, int e_even) {
        if (e_even == 0) return;
        even[{beta, a}] += e_even;
        if (c == 0) return;
        auto [num, den] = norm_shift_ratio(beta, a, c);
        const int half = std::abs(e_even) / 2;
        for (int i = 0; i < half; ++i) {
            if (e_even > 0) {
                t.num *= num;
                t.den *= den;
            } else {
                t.num *= den;
                t.den *= num;
            }
        }
    };
    for (const auto& [key, e] : merged) {
        if (e == 0) continue;
        const auto& [beta, a, c] = key;
        if (e % 2 != 0) {
            const int s = e > 0 ? 1 : -1;
            odd[key] = s;
            absorb(beta, a, c, e - s);
        } else {
            absorb(beta, a, c, e);
        }
    }
    t.factors.clear();
    for (const auto& [key, e] : odd) t.factors.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), e});
    for (const auto& [key, e] : even)
        if (e != 0) t.factors.push_back({key.first, key.second, 0, e});
    std::sort(t.factors.begin(), t.factors.end());
}

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

// Integer roots of a polynomial lie within the Cauchy bound.
long cauchy_bound(const Poly& p) {
    if (p.is_zero() || *p.degree() == 0) return 0;
    const double lead = std::abs(p.leading().to_complex());
    double m = 0;
    for (std::size_t i = 0; i + 1 < p.coeffs().size(); ++i)
        m = std::max(m, std::abs(p.coeffs()[i].to_complex()) / lead);
    return static_cast<long>(std::ceil(1.0 + m)) + 1;
}

}  // namespace

// ----------------------------------------------------------------- ClosedForm

ClosedForm ClosedForm::constant(const Surd& c) {
    ClosedForm out;
    for (const auto& [m, coef] : c.terms()) {
        TailTerm t;
        t.radicand = m;
        t.num = Poly(coef);
        out.terms_.push_back(std::move(t));
    }
    out.normalize();
    return out;
}

ClosedForm ClosedForm::polynomial(const Poly& p) { return rational(p, Poly(1)); }

ClosedForm ClosedForm::rational(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw DivisionByZero("rational sequence with zero denominator");
    ClosedForm out;
    TailTerm t;
    t.num = num;
    t.den = den;
    out.terms_.push_back(std::move(t));
    out.check_poles();
    out.normalize();
    return out;
}

ClosedForm ClosedForm::geometric(const ExactScalar& base, const Poly& factor) {
    if (base.is_zero()) throw BadParameter("geometric base must be non-zero");
    ClosedForm out;
    TailTerm t;
    t.base = base;
    t.num = factor;
    out.terms_.push_back(std::move(t));
    out.normalize();
    return out;
}

ClosedForm ClosedForm::norm_power(const Rational& beta, int e, long a, long c) {
    if (beta <= -1) throw BadParameter("Laguerre norm needs beta > -1");
    if (a < 1) throw BadParameter("norm index slope must be positive");
    ClosedForm out;
    // Indices a n + c < 0 carry no norm; they read as 0.
    if (c < 0) out.prefix_.resize(static_cast<std::size_t>((-c + a - 1) / a));
    TailTerm t;
    t.num = Poly(1);
    t.factors.push_back({beta, a, c, e});
    out.terms_.push_back(std::move(t));
    out.normalize();
    return out;
}

ClosedForm ClosedForm::with_prefix(std::vector<Surd> prefix, const ClosedForm& tail) {
    if (tail.opaque_ && prefix.size() < tail.start())
        throw BadParameter("prefix shorter than the known part of an opaque tail");
    ClosedForm out = tail;
    const std::size_t old = tail.start();
    if (prefix.size() < old) {
        for (std::size_t n = prefix.size(); n < old; ++n) prefix.push_back(tail.prefix_[n]);
    }
    out.prefix_ = std::move(prefix);
    if (out.opaque_) return out;
    out.normalize();
    return out;
}

ClosedForm ClosedForm::opaque(std::vector<Surd> prefix) {
    ClosedForm out;
    out.prefix_ = std::move(prefix);
    out.opaque_ = true;
    return out;
}

bool ClosedForm::tail_valid_at(std::size_t n) const {
    for (const auto& t : terms_) {
        if (t.den(ExactScalar(static_cast<long>(n))).is_zero()) return false;
        for (const auto& f : t.factors)
            if (f.a * static_cast<long>(n) + f.c < 0) return false;
    }
    return true;
}

Surd ClosedForm::tail_eval(std::size_t n) const {
    Surd acc;
    const ExactScalar x(static_cast<long>(n));
    for (const auto& t : terms_) {
        ExactScalar c = t.num(x) / t.den(x) * t.base.pow(static_cast<long>(n));
        Surd v = t.radicand == 1 ? Surd(c) : Surd::sqrt(Rational(t.radicand)) * Surd(c);
        for (const auto& f : t.factors) v *= norm_factor_value(f, n);
        acc += v;
    }
    return acc;
}

void ClosedForm::check_poles() const {
    long bound = static_cast<long>(start());
    for (const auto& t : terms_) {
        bound = std::max(bound, cauchy_bound(t.den));
        for (const auto& f : t.factors)
            if (f.c < 0) bound = std::max(bound, (-f.c + f.a - 1) / f.a);
    }
    for (long n = static_cast<long>(start()); n <= bound; ++n)
        if (!tail_valid_at(static_cast<std::size_t>(n)))
            throw BadParameter("sequence tail undefined at n=" + std::to_string(n));
}

void ClosedForm::normalize() {
    if (opaque_) return;
    for (auto& t : terms_) canonicalize_factors(t);
    std::sort(terms_.begin(), terms_.end(), key_less);
    std::vector<TailTerm> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && key_equal(merged.back(), t)) {
            TailTerm& m = merged.back();
            m.num = m.num * t.den + t.num * m.den;
            m.den = m.den * t.den;
        } else {
            merged.push_back(std::move(t));
        }
    }
    terms_.clear();
    for (auto& t : merged) {
        if (t.num.is_zero()) continue;
        Poly g = gcd(t.num, t.den);
        if (!g.is_zero() && *g.degree() > 0) {
            t.num = divmod(t.num, g).first;
            t.den = divmod(t.den, g).first;
        }
        const ExactScalar lead = t.den.leading();
        if (lead != ExactScalar(1)) {
            const ExactScalar inv = lead.inverse();
            t.num *= inv;
            t.den *= inv;
        }
        terms_.push_back(std::move(t));
    }
    while (!prefix_.empty()) {
        const std::size_t n = prefix_.size() - 1;
        if (!tail_valid_at(n) || tail_eval(n) != prefix_.back()) break;
        prefix_.pop_back();
    }
}

Surd ClosedForm::eval(std::size_t n) const {
    if (n < prefix_.size()) return prefix_[n];
    if (opaque_) throw DomainError("sequence value unknown beyond index " + std::to_string(prefix_.size() - 1));
    return tail_eval(n);
}

std::complex<double> ClosedForm::eval_complex(std::size_t n) const {
    if (n < prefix_.size()) return prefix_[n].to_complex();
    if (opaque_) throw DomainError("sequence value unknown beyond its prefix");
    std::complex<double> acc;
    const double x = static_cast<double>(n);
    for (const auto& t : terms_) {
        std::complex<double> v = poly_complex(t.num, x) / poly_complex(t.den, x) * base_power(t.base, n);
        if (t.radicand != 1) v *= std::sqrt(t.radicand.get_d());
        for (const auto& f : t.factors) v *= norm_factor_double(f, n);
        acc += v;
    }
    return acc;
}

ClosedForm ClosedForm::operator+(const ClosedForm& o) const {
    ClosedForm out;
    out.opaque_ = opaque_ || o.opaque_;
    std::size_t len = std::max(start(), o.start());
    if (out.opaque_) {
        len = std::min(opaque_ ? start() : len, o.opaque_ ? o.start() : len);
    }
    for (std::size_t n = 0; n < len; ++n) out.prefix_.push_back(eval(n) + o.eval(n));
    if (out.opaque_) return out;
    out.terms_ = terms_;
    out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
    out.normalize();
    return out;
}

ClosedForm ClosedForm::operator-(const ClosedForm& o) const { return *this + (-o); }

ClosedForm ClosedForm::operator-() const { return scaled(Surd(-1)); }

ClosedForm ClosedForm::operator*(const ClosedForm& o) const {
    ClosedForm out;
    out.opaque_ = opaque_ || o.opaque_;
    std::size_t len = std::max(start(), o.start());
    if (out.opaque_) {
        len = std::min(opaque_ ? start() : len, o.opaque_ ? o.start() : len);
    }
    for (std::size_t n = 0; n < len; ++n) out.prefix_.push_back(eval(n) * o.eval(n));
    if (out.opaque_) return out;
    for (const auto& x : terms_) {
        for (const auto& y : o.terms_) {
            TailTerm t;
            Integer g;
            mpz_gcd(g.get_mpz_t(), x.radicand.get_mpz_t(), y.radicand.get_mpz_t());
            t.radicand = (x.radicand / g) * (y.radicand / g);
            t.base = x.base * y.base;
            t.factors = x.factors;
            t.factors.insert(t.factors.end(), y.factors.begin(), y.factors.end());
            t.num = x.num * y.num * ExactScalar(Rational(g));
            t.den = x.den * y.den;
            out.terms_.push_back(std::move(t));
        }
    }
    out.normalize();
    return out;
}

ClosedForm ClosedForm::scaled(const Surd& s) const { return *this * constant(s); }

ClosedForm ClosedForm::shift(long m) const {
    ClosedForm out;
    out.opaque_ = opaque_;
    if (m >= 0) {
        const std::size_t len = start() > static_cast<std::size_t>(m) ? start() - m : 0;
        for (std::size_t n = 0; n < len; ++n) out.prefix_.push_back(eval(n + m));
    } else {
        const std::size_t k = static_cast<std::size_t>(-m);
        for (std::size_t n = 0; n < start() + k; ++n) out.prefix_.push_back(n < k ? Surd() : eval(n - k));
    }
    if (opaque_) return out;
    const ExactScalar sm(m);
    for (const auto& x : terms_) {
        TailTerm t = x;
        t.num = affine_compose(x.num, 1, sm) * x.base.pow(m);
        t.den = affine_compose(x.den, 1, sm);
        for (auto& f : t.factors) f.c += f.a * m;
        out.terms_.push_back(std::move(t));
    }
    out.normalize();
    return out;
}

ClosedForm ClosedForm::restrict(long period, long residue) const {
    if (period < 1 || residue < 0) throw BadParameter("restrict needs period >= 1 and residue >= 0");
    ClosedForm out;
    out.opaque_ = opaque_;
    const long s = static_cast<long>(start());
    const long len = s > residue ? (s - residue + period - 1) / period : 0;
    for (long n = 0; n < len; ++n) out.prefix_.push_back(eval(static_cast<std::size_t>(period * n + residue)));
    if (opaque_) return out;
    for (const auto& x : terms_) {
        TailTerm t = x;
        t.base = x.base.pow(period);
        t.num = affine_compose(x.num, period, residue) * x.base.pow(residue);
        t.den = affine_compose(x.den, period, residue);
        for (auto& f : t.factors) {
            f.c = f.a * residue + f.c;
            f.a *= period;
        }
        out.terms_.push_back(std::move(t));
    }
    out.normalize();
    return out;
}

ClosedForm ClosedForm::conj() const {
    ClosedForm out;
    out.opaque_ = opaque_;
    for (const auto& v : prefix_) out.prefix_.push_back(v.conj());
    for (const auto& x : terms_) {
        TailTerm t = x;
        t.base = x.base.conj();
        t.num = x.num.conj();
        t.den = x.den.conj();
        out.terms_.push_back(std::move(t));
    }
    out.normalize();
    return out;
}

ClosedForm ClosedForm::difference() const { return *this - shift(-1); }

ClosedForm ClosedForm::inverse(std::size_t valid_from) const {
    if (opaque_ || prefix_.size() > valid_from || terms_.size() != 1)
        throw BadParameter("only a single-term sequence without table can be inverted");
    const TailTerm& x = terms_.front();
    TailTerm t;
    t.radicand = x.radicand;
    t.base = x.base.inverse();
    t.num = x.den * ExactScalar(Rational(1, 1) / Rational(x.radicand));
    t.den = x.num;
    t.factors = x.factors;
    for (auto& f : t.factors) f.e = -f.e;
    ClosedForm out;
    out.prefix_.resize(valid_from);
    out.terms_.push_back(std::move(t));
    out.check_poles();
    out.normalize();
    return out;
}

ClosedForm ClosedForm::tail_only() const {
    if (opaque_) throw DomainError("an opaque sequence has no symbolic tail");
    ClosedForm out = *this;
    out.prefix_.clear();
    return out;
}

bool ClosedForm::is_constant() const {
    if (opaque_ || !prefix_.empty()) return false;
    if (terms_.empty()) return true;
    for (const auto& t : terms_) {
        if (t.base != ExactScalar(1) || !t.factors.empty() || t.num.degree().value_or(0) != 0 ||
            t.den != Poly(1))
            return false;
    }
    return true;
}

ZeroStatus ClosedForm::zero_status() const {
    for (const auto& v : prefix_)
        if (!v.is_zero()) return ZeroStatus::NonZero;
    if (opaque_) return ZeroStatus::Unknown;
    return terms_.empty() ? ZeroStatus::Zero : ZeroStatus::NonZero;
}

bool operator==(const ClosedForm& a, const ClosedForm& b) {
    if (a.opaque_ || b.opaque_) return false;
    return (a - b).zero_status() == ZeroStatus::Zero;
}

long ClosedForm::period() const {
    long p = 1;
    for (const auto& t : terms_) {
        ExactScalar power = t.base;
        for (long q = 1; q <= 12; ++q) {
            if (power.is_real() && sgn(power.re()) > 0) {
                p = lcm_long(p, q);
                break;
            }
            power *= t.base;
        }
    }
    return p;
}

std::optional<Surd> ClosedForm::limit() const {
    if (opaque_) return std::nullopt;
    Surd lim;
    for (const auto& t : terms_) {
        const Rational m2 = t.base.norm2();
        if (m2 < 1) continue;
        if (m2 > 1) return std::nullopt;
        const Rational s = t.sigma();
        if (s < 0) continue;
        if (s > 0 || t.base != ExactScalar(1) || !t.factors.empty()) return std::nullopt;
        const ExactScalar lead = t.num.leading() / t.den.leading();
        lim += t.radicand == 1 ? Surd(lead) : Surd::sqrt(Rational(t.radicand)) * Surd(lead);
    }
    return lim;
}

Verdict ClosedForm::l2() const {
    if (opaque_) return Verdict::Undecidable;
    const auto groups = asymptotic_groups(terms_);
    if (groups.empty()) return Verdict::Yes;
    Rational m2(0);
    for (const auto& g : groups) m2 = std::max(m2, g.base.norm2());
    if (m2 < 1) return Verdict::Yes;
    std::vector<const Group*> top;
    if (m2 > 1) {
        for (const auto& g : groups)
            if (g.base.norm2() == m2) top.push_back(&g);
    } else {
        bool have = false;
        Rational best;
        for (const auto& g : groups) {
            if (g.base.norm2() != 1) continue;
            if (!have || g.sigma > best) best = g.sigma;
            have = true;
        }
        if (best < Rational(-1, 2)) return Verdict::Yes;
        for (const auto& g : groups)
            if (g.base.norm2() == 1 && g.sigma == best) top.push_back(&g);
    }
    // Dominant terms with distinct bases cannot cancel in mean square.
    for (std::size_t i = 0; i < top.size(); ++i)
        for (std::size_t j = i + 1; j < top.size(); ++j)
            if (top[i]->base == top[j]->base) return Verdict::Undecidable;
    return Verdict::No;
}

SeriesVerdict ClosedForm::series() const {
    SeriesVerdict out;
    if (opaque_) return out;
    const auto groups = asymptotic_groups(terms_);
    std::vector<const Group*> divergent;
    std::optional<Rational> tau;
    int tau_holders = 0;
    bool tau_base_one = false;
    for (const auto& g : groups) {
        const Rational m2 = g.base.norm2();
        if (m2 < 1) continue;
        if (m2 > 1) {
            divergent.push_back(&g);
            continue;
        }
        Rational t;
        bool conv = false;
        if (g.sigma < -1) {
            conv = true;
            t = g.sigma + 1;
        } else if (g.base != ExactScalar(1) && g.sigma < 0) {
            conv = true;  // Dirichlet test: bounded partial sums of b^n, coefficients of bounded variation
            t = g.sigma;
        }
        if (!conv) {
            divergent.push_back(&g);
            continue;
        }
        if (!tau || t > *tau) {
            tau = t;
            tau_holders = 1;
            tau_base_one = g.base == ExactScalar(1) && g.sigma < -1;
        } else if (t == *tau) {
            ++tau_holders;
        }
    }
    if (divergent.empty()) {
        out.converges = Verdict::Yes;
        out.tail_exponent = tau;
        out.tail_exact = !tau || (tau_holders == 1 && tau_base_one);
        return out;
    }
    for (std::size_t i = 0; i < divergent.size(); ++i)
        for (std::size_t j = i + 1; j < divergent.size(); ++j)
            if (divergent[i]->base == divergent[j]->base) return out;
    out.converges = Verdict::No;
    return out;
}

std::string ClosedForm::to_string() const {
    std::ostringstream os;
    if (opaque_ || !prefix_.empty()) {
        os << (opaque_ ? "opaque:[" : "table:[");
        for (std::size_t i = 0; i < prefix_.size(); ++i) os << (i ? ", " : "") << prefix_[i].to_string();
        os << "]";
        if (opaque_) return os.str();
        os << "+tail:";
    }
    if (terms_.empty()) {
        os << "0";
        return os.str();
    }
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        std::vector<std::string> parts;
        if (t.radicand != 1) parts.push_back("sqrt(" + t.radicand.get_str() + ")");
        if (t.base != ExactScalar(1)) parts.push_back("(" + t.base.to_string() + ")^n");
        const bool unit_num = t.num == Poly(1);
        if (!unit_num) parts.push_back("(" + t.num.to_string("n") + ")");
        for (const auto& f : t.factors) {
            std::string s = "rnorm(" + f.beta.get_str();
            if (f.a != 1 || f.c != 0) s += ", " + std::to_string(f.a) + ", " + std::to_string(f.c);
            s += ")";
            if (f.e != 1) s += "^(" + std::to_string(f.e) + ")";
            parts.push_back(s);
        }
        if (parts.empty()) parts.push_back("1");
        for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "*" : "") << parts[i];
        if (t.den != Poly(1)) os << "/(" << t.den.to_string("n") << ")";
    }
    return os.str();
}

// --------------------------------------------------------------------- parser

namespace {

class SeqParser {
public:
    explicit SeqParser(std::string_view s) : s_(s) {}

    ClosedForm parse_all(SeqTag& tag) {
        skip();
        ClosedForm out;
        if (consume_word("table:")) {
            auto table = parse_table();
            skip();
            if (consume_word("+tail:")) {
                skip();
                const bool is_const = consume_word("const:");
                floor_ = table.size();
                ClosedForm tail = parse_expr();
                if (is_const && !tail.is_constant()) fail("tail:const: needs a constant");
                tag = is_const ? SeqTag::EventuallyConstant : SeqTag::UserTableWithTail;
                out = ClosedForm::with_prefix(std::move(table), tail);
            } else {
                tag = SeqTag::FiniteSupport;
                out = ClosedForm::with_prefix(std::move(table), ClosedForm());
            }
        } else if (consume_word("opaque:")) {
            tag = SeqTag::Opaque;
            out = ClosedForm::opaque(parse_table());
        } else {
            tag = SeqTag::Expr;
            out = parse_expr();
        }
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_ + 1); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    bool consume(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!consume(c)) fail(std::string("expected '") + c + "'");
    }

    bool consume_word(std::string_view w) {
        skip();
        if (s_.substr(pos_, w.size()) == w) {
            pos_ += w.size();
            return true;
        }
        return false;
    }

    std::vector<Surd> parse_table() {
        expect('[');
        std::vector<Surd> out;
        if (consume(']')) return out;
        do {
            out.push_back(constant_of(parse_expr(), "table entry"));
        } while (consume(','));
        expect(']');
        return out;
    }

    Surd constant_of(const ClosedForm& f, const char* what) {
        if (!f.is_constant()) fail(std::string(what) + " must be a constant");
        return f.eval(0);
    }

    Rational rational_of(const ClosedForm& f, const char* what) {
        auto v = constant_of(f, what).as_scalar();
        if (!v || !v->is_real()) fail(std::string(what) + " must be a real rational");
        return v->re();
    }

    ClosedForm parse_expr() {
        ClosedForm acc = parse_term();
        for (;;) {
            if (consume('+')) {
                acc = acc + parse_term();
            } else if (peek('-')) {
                ++pos_;
                acc = acc - parse_term();
            } else {
                return acc;
            }
        }
    }

    bool starts_atom() {
        skip();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' || c == 'n' || c == 'i' ||
               c == 's' || c == 'r';
    }

    ClosedForm parse_term() {
        ClosedForm acc = parse_power();
        for (;;) {
            if (consume('*')) {
                acc = acc * parse_power();
            } else if (peek('/')) {
                const std::size_t col = pos_;
                ++pos_;
                ClosedForm d = parse_power();
                try {
                    acc = acc * invert(d);
                } catch (const Error& e) {
                    throw ParseError(std::string("unsupported divisor: ") + e.what(), col + 1);
                }
            } else if (starts_atom()) {
                acc = acc * parse_power();
            } else {
                return acc;
            }
        }
    }

    long parse_int_exponent() {
        bool neg = false;
        const bool paren = consume('(');
        if (consume('-')) neg = true;
        skip();
        const std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (b == pos_) fail("expected integer exponent or n");
        const long v = std::stol(std::string(s_.substr(b, pos_ - b)));
        if (paren) expect(')');
        return neg ? -v : v;
    }

    ClosedForm parse_power() {
        if (consume('-')) return -parse_power();
        if (consume('+')) return parse_power();
        const std::size_t col = pos_;
        ClosedForm a = parse_atom();
        if (!consume('^')) return a;
        skip();
        if (pos_ < s_.size() && s_[pos_] == 'n' &&
            (pos_ + 1 >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[pos_ + 1])))) {
            ++pos_;
            if (!a.is_constant()) throw ParseError("base of ^n must be a constant", col + 1);
            auto b = a.eval(0).as_scalar();
            if (!b || b->is_zero()) throw ParseError("base of ^n must be a non-zero element of Q(i)", col + 1);
            return ClosedForm::geometric(*b, Poly(1));
        }
        const long k = parse_int_exponent();
        ClosedForm base = k < 0 ? invert(a) : a;
        ClosedForm out = ClosedForm::constant(Surd(1));
        for (long i = 0; i < std::labs(k); ++i) out = out * base;
        return out;
    }

    ClosedForm parse_atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::size_t b = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
            try {
                return ClosedForm::constant(Surd(parse_rational(s_.substr(b, pos_ - b))));
            } catch (const ParseError&) {
                throw ParseError("malformed number", b + 1);
            }
        }
        if (c == '(') {
            ++pos_;
            ClosedForm inner = parse_expr();
            expect(')');
            return inner;
        }
        if (consume_word("sqrt")) {
            expect('(');
            const Rational q = rational_of(parse_expr(), "sqrt argument");
            expect(')');
            if (sgn(q) < 0) fail("sqrt of a negative number");
            return ClosedForm::constant(Surd::sqrt(q));
        }
        if (consume_word("rnorm") || consume_word("rinv")) {
            const bool inv = s_[pos_ - 1] == 'v';
            expect('(');
            const Rational beta = rational_of(parse_expr(), "norm parameter");
            long a = 1, off = 0;
            if (consume(',')) {
                a = parse_signed_int();
                expect(',');
                off = parse_signed_int();
            }
            expect(')');
            if (beta <= -1) fail("norm parameter must exceed -1");
            if (a < 1) fail("norm index slope must be positive");
            return ClosedForm::norm_power(beta, inv ? -1 : 1, a, off);
        }
        if (c == 'n') {
            ++pos_;
            return ClosedForm::polynomial(Poly::x());
        }
        if (c == 'i') {
            ++pos_;
            return ClosedForm::constant(Surd(ExactScalar(Rational(0), Rational(1))));
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    // Poles are tolerated below the table length of a tail expression.
    ClosedForm invert(const ClosedForm& d) const {
        try {
            return d.inverse();
        } catch (const BadParameter&) {
            if (floor_ == 0) throw;
            return d.inverse(floor_);
        }
    }

    long parse_signed_int() {
        bool neg = consume('-');
        skip();
        const std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (b == pos_) fail("expected integer");
        const long v = std::stol(std::string(s_.substr(b, pos_ - b)));
        return neg ? -v : v;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t floor_ = 0;  // tail expressions only need to be defined from here on
};

}  // namespace

// --------------------------------------------------------------- SequenceSpec

std::string to_string(SeqTag t) {
    switch (t) {
        case SeqTag::FiniteSupport: return "FiniteSupport";
        case SeqTag::EventuallyConstant: return "EventuallyConstant";
        case SeqTag::PolynomialInN: return "PolynomialInN";
        case SeqTag::RationalInN: return "RationalInN";
        case SeqTag::Geometric: return "Geometric";
        case SeqTag::SignAlternating: return "SignAlternating";
        case SeqTag::LaguerreNormReciprocal: return "LaguerreNormReciprocal";
        case SeqTag::LaguerreNorm: return "LaguerreNorm";
        case SeqTag::DifferenceOf: return "DifferenceOf";
        case SeqTag::UserTableWithTail: return "UserTableWithTail";
        case SeqTag::Opaque: return "Opaque";
        case SeqTag::Sum: return "Sum";
        case SeqTag::Product: return "Product";
        case SeqTag::Scaled: return "Scaled";
        case SeqTag::Shift: return "Shift";
        case SeqTag::Restrict: return "Restrict";
        case SeqTag::Conj: return "Conj";
        case SeqTag::Expr: return "Expr";
    }
    return "?";
}

SequenceSpec::SequenceSpec() : SequenceSpec(finite_support({})) {}

SequenceSpec::SequenceSpec(std::shared_ptr<const SeqNode> node, std::shared_ptr<const ClosedForm> form)
    : node_(std::move(node)), form_(std::move(form)) {}

SequenceSpec SequenceSpec::make(SeqNode node, ClosedForm form) {
    return SequenceSpec(std::make_shared<const SeqNode>(std::move(node)),
                        std::make_shared<const ClosedForm>(std::move(form)));
}

SequenceSpec SequenceSpec::finite_support(std::vector<Surd> table) {
    SeqNode n;
    n.tag = SeqTag::FiniteSupport;
    n.table = table;
    return make(std::move(n), ClosedForm::with_prefix(std::move(table), ClosedForm()));
}

SequenceSpec SequenceSpec::eventually_constant(std::vector<Surd> prefix, const ExactScalar& c) {
    SeqNode n;
    n.tag = SeqTag::EventuallyConstant;
    n.table = prefix;
    n.value = c;
    return make(std::move(n), ClosedForm::with_prefix(std::move(prefix), ClosedForm::constant(Surd(c))));
}

SequenceSpec SequenceSpec::polynomial(const Poly& p) {
    SeqNode n;
    n.tag = SeqTag::PolynomialInN;
    n.p1 = p;
    return make(std::move(n), ClosedForm::polynomial(p));
}

SequenceSpec SequenceSpec::rational(const Poly& num, const Poly& den) {
    SeqNode n;
    n.tag = SeqTag::RationalInN;
    n.p1 = num;
    n.p2 = den;
    return make(std::move(n), ClosedForm::rational(num, den));
}

SequenceSpec SequenceSpec::geometric(const ExactScalar& base, const Poly& factor) {
    SeqNode n;
    n.tag = SeqTag::Geometric;
    n.base = base;
    n.p1 = factor;
    return make(std::move(n), ClosedForm::geometric(base, factor));
}

SequenceSpec SequenceSpec::sign_alternating(const Poly& p) {
    SeqNode n;
    n.tag = SeqTag::SignAlternating;
    n.p1 = p;
    return make(std::move(n), ClosedForm::geometric(ExactScalar(-1), p));
}

SequenceSpec SequenceSpec::laguerre_norm_reciprocal(const Rational& beta) {
    SeqNode n;
    n.tag = SeqTag::LaguerreNormReciprocal;
    n.beta = beta;
    n.power = -1;
    return make(std::move(n), ClosedForm::norm_power(beta, -1));
}

SequenceSpec SequenceSpec::laguerre_norm(const Rational& beta, int power) {
    if (power == -1) return laguerre_norm_reciprocal(beta);
    SeqNode n;
    n.tag = SeqTag::LaguerreNorm;
    n.beta = beta;
    n.power = power;
    return make(std::move(n), ClosedForm::norm_power(beta, power));
}

SequenceSpec SequenceSpec::difference_of(const SequenceSpec& s) {
    SeqNode n;
    n.tag = SeqTag::DifferenceOf;
    n.children.push_back(s);
    return make(std::move(n), s.form().difference());
}

SequenceSpec SequenceSpec::table_with_tail(std::vector<Surd> prefix, const SequenceSpec& tail) {
    SeqNode n;
    n.tag = SeqTag::UserTableWithTail;
    n.table = prefix;
    n.children.push_back(tail);
    return make(std::move(n), ClosedForm::with_prefix(std::move(prefix), tail.form()));
}

SequenceSpec SequenceSpec::opaque(std::vector<Surd> prefix, std::string note) {
    SeqNode n;
    n.tag = SeqTag::Opaque;
    n.table = prefix;
    n.text = std::move(note);
    return make(std::move(n), ClosedForm::opaque(std::move(prefix)));
}

SequenceSpec SequenceSpec::from_form(const ClosedForm& form, std::string text) {
    SeqNode n;
    n.tag = SeqTag::Expr;
    n.text = text.empty() ? form.to_string() : std::move(text);
    return make(std::move(n), form);
}

SequenceSpec SequenceSpec::parse(std::string_view text) {
    SeqTag tag = SeqTag::Expr;
    ClosedForm form = SeqParser(text).parse_all(tag);
    SeqNode n;
    n.tag = tag;
    n.text = std::string(text);
    if (tag == SeqTag::Expr && form.start() == 0 && form.terms().size() == 1) {
        // Name the catalog family the expression falls into.
        const TailTerm& t = form.terms().front();
        if (t.radicand == 1 && t.factors.empty()) {
            if (t.base == ExactScalar(1)) {
                n.tag = t.den == Poly(1) ? SeqTag::PolynomialInN : SeqTag::RationalInN;
                n.p1 = t.num;
                n.p2 = t.den;
            } else if (t.den == Poly(1)) {
                n.tag = t.base == ExactScalar(-1) ? SeqTag::SignAlternating : SeqTag::Geometric;
                n.base = t.base;
                n.p1 = t.num;
            }
        } else if (t.radicand == 1 && t.base == ExactScalar(1) && t.num == Poly(1) && t.den == Poly(1) &&
                   t.factors.size() == 1 && t.factors[0].a == 1 && t.factors[0].c == 0) {
            n.tag = t.factors[0].e == -1 ? SeqTag::LaguerreNormReciprocal : SeqTag::LaguerreNorm;
            n.beta = t.factors[0].beta;
            n.power = t.factors[0].e;
        }
    } else if (tag == SeqTag::Expr && form.terms().empty() && form.start() == 0) {
        n.tag = SeqTag::PolynomialInN;
    } else if (tag != SeqTag::Expr) {
        n.table = form.prefix();
    }
    return make(std::move(n), std::move(form));
}

SequenceSpec SequenceSpec::operator+(const SequenceSpec& o) const {
    SeqNode n;
    n.tag = SeqTag::Sum;
    n.children = {*this, o};
    return make(std::move(n), form() + o.form());
}

SequenceSpec SequenceSpec::operator-(const SequenceSpec& o) const { return *this + o.scaled(Surd(-1)); }

SequenceSpec SequenceSpec::operator*(const SequenceSpec& o) const {
    SeqNode n;
    n.tag = SeqTag::Product;
    n.children = {*this, o};
    return make(std::move(n), form() * o.form());
}

SequenceSpec SequenceSpec::scaled(const Surd& s) const {
    SeqNode n;
    n.tag = SeqTag::Scaled;
    n.scale = s;
    n.children = {*this};
    return make(std::move(n), form().scaled(s));
}

SequenceSpec SequenceSpec::shift(long m) const {
    SeqNode n;
    n.tag = SeqTag::Shift;
    n.shift = m;
    n.children = {*this};
    return make(std::move(n), form().shift(m));
}

SequenceSpec SequenceSpec::restrict(long period, long residue) const {
    SeqNode n;
    n.tag = SeqTag::Restrict;
    n.shift = period;
    n.residue = residue;
    n.children = {*this};
    return make(std::move(n), form().restrict(period, residue));
}

SequenceSpec SequenceSpec::conj() const {
    SeqNode n;
    n.tag = SeqTag::Conj;
    n.children = {*this};
    return make(std::move(n), form().conj());
}

ExactScalar SequenceSpec::eval_scalar(std::size_t n) const {
    auto v = eval(n).as_scalar();
    if (!v) throw DomainError("sequence value at n=" + std::to_string(n) + " is irrational");
    return *v;
}

std::vector<Surd> SequenceSpec::values(std::size_t count) const {
    std::vector<Surd> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) out.push_back(eval(n));
    return out;
}

Verdict l2_membership(const SequenceSpec& s) { return s.form().l2(); }

SeriesVerdict series_verdict(const SequenceSpec& s) { return s.form().series(); }

}  // namespace opspectra
