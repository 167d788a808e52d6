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

#include "opspectra/exact.hpp"

#include <mpfr.h>

#include <cctype>
#include <sstream>

#include "opspectra/error.hpp"

namespace opspectra {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// Correctly rounded sum of c_m * sqrt(m) for real rational c_m.
double round_surd_component(const std::map<Integer, ExactScalar>& terms, bool imaginary) {
    constexpr mpfr_prec_t kPrec = 320;
    mpfr_t acc, term, root;
    mpfr_inits2(kPrec, acc, term, root, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(acc, 1);
    for (const auto& [m, c] : terms) {
        const Rational& part = imaginary ? c.im() : c.re();
        if (sgn(part) == 0) continue;
        mpfr_set_z(root, m.get_mpz_t(), MPFR_RNDN);
        mpfr_sqrt(root, root, MPFR_RNDN);
        mpfr_set_q(term, part.get_mpq_t(), MPFR_RNDN);
        mpfr_mul(term, term, root, MPFR_RNDN);
        mpfr_add(acc, acc, term, MPFR_RNDN);
    }
    const double out = mpfr_get_d(acc, MPFR_RNDN);
    mpfr_clears(acc, term, root, static_cast<mpfr_ptr>(nullptr));
    return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string s = trim(text);
    if (s.empty()) throw ParseError("empty number", 1);
    bool neg = false;
    std::size_t pos = 0;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        pos = 1;
    }
    std::string body = s.substr(pos);
    Rational out;
    if (auto slash = body.find('/'); slash != std::string::npos) {
        std::string num = trim(body.substr(0, slash));
        std::string den = trim(body.substr(slash + 1));
        if (!all_digits(num) || !all_digits(den)) throw ParseError("malformed rational '" + s + "'", 1);
        Integer d(den, 10);
        if (d == 0) throw ParseError("zero denominator in '" + s + "'", slash + pos + 2);
        out = Rational(Integer(num, 10), d);
    } else if (auto dot = body.find('.'); dot != std::string::npos) {
        std::string ip = body.substr(0, dot);
        std::string fp = body.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (!all_digits(ip) || (!fp.empty() && !all_digits(fp)))
            throw ParseError("malformed decimal '" + s + "'", 1);
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
        out = Rational(Integer(ip + fp, 10), scale);
    } else {
        if (!all_digits(body)) throw ParseError("malformed number '" + s + "'", 1);
        out = Rational(Integer(body, 10));
    }
    out.canonicalize();
    return neg ? Rational(-out) : out;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational factorial(unsigned long n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

Rational binomial(const Rational& t, long k) {
    if (k < 0) return Rational(0);
    Rational num(1);
    for (long i = 0; i < k; ++i) num *= (t - i);
    return num / factorial(static_cast<unsigned long>(k));
}

Rational rising_factorial(const Rational& t, unsigned long k) {
    Rational out(1);
    for (unsigned long i = 0; i < k; ++i) out *= (t + i);
    return out;
}

// ---------------------------------------------------------------- ExactScalar

ExactScalar::ExactScalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
}

ExactScalar ExactScalar::parse(std::string_view text) {
    std::string s = trim(text);
    if (s.empty()) throw ParseError("empty scalar", 1);
    if (s.back() != 'i') return ExactScalar(parse_rational(s));
    // Imaginary part present: split at the last +/- that is not leading.
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if (body[i] == '+' || body[i] == '-') {
            split = i;
            break;
        }
    }
    auto imag_of = [](std::string t) {
        t = trim(t);
        if (t.empty() || t == "+") return Rational(1);
        if (t == "-") return Rational(-1);
        return parse_rational(t);
    };
    if (split == std::string::npos) return {Rational(0), imag_of(body)};
    return {parse_rational(body.substr(0, split)), imag_of(body.substr(split))};
}

ExactScalar ExactScalar::inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero scalar");
    Rational n = norm2();
    return {re_ / n, -im_ / n};
}

ExactScalar ExactScalar::pow(long k) const {
    if (k < 0) return inverse().pow(-k);
    ExactScalar out(1);
    ExactScalar base = *this;
    while (k > 0) {
        if (k & 1) out *= base;
        base *= base;
        k >>= 1;
    }
    return out;
}

std::complex<double> ExactScalar::to_complex() const { return {re_.get_d(), im_.get_d()}; }

std::string ExactScalar::to_string() const {
    if (is_real()) return re_.get_str();
    std::ostringstream os;
    if (sgn(re_) != 0) {
        os << re_.get_str();
        if (sgn(im_) > 0) os << '+';
    }
    os << im_.get_str() << 'i';
    return os.str();
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
    if (is_real() && o.is_real()) {
        re_ *= o.re_;
        return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
}

ExactScalar& ExactScalar::operator/=(const ExactScalar& o) {
    if (o.is_zero()) throw DivisionByZero("division by zero scalar");
    if (is_real() && o.is_real()) {
        re_ /= o.re_;
        return *this;
    }
    return *this *= o.inverse();
}

// ----------------------------------------------------------------------- Surd

std::pair<Integer, Integer> square_free_decompose(const Integer& n) {
    if (sgn(n) <= 0) throw BadParameter("square_free_decompose needs a positive integer");
    Integer rest = n;
    Integer square(1);
    Integer free(1);
    auto strip = [&](unsigned long p) {
        unsigned long e = 0;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++e;
        }
        for (unsigned long i = 0; i < e / 2; ++i) square *= p;
        if (e % 2 == 1) free *= p;
    };
    strip(2);
    constexpr unsigned long kTrialBound = 1UL << 20;
    unsigned long p = 3;
    for (; p <= kTrialBound; p += 2) {
        if (rest == 1) break;
        if (Integer(p) * p > rest) break;
        strip(p);
    }
    if (rest != 1) {
        if (Integer(p) * p > rest || mpz_probab_prime_p(rest.get_mpz_t(), 30) > 0) {
            free *= rest;
        } else if (mpz_perfect_square_p(rest.get_mpz_t())) {
            Integer r;
            mpz_sqrt(r.get_mpz_t(), rest.get_mpz_t());
            square *= r;
        } else {
            throw Error("radicand has large composite cofactor " + rest.get_str() +
                        "; cannot certify a square-free form");
        }
    }
    return {square, free};
}

Surd::Surd(const ExactScalar& c) {
    if (!c.is_zero()) terms_.emplace(Integer(1), c);
}

Surd Surd::sqrt(const Rational& q) {
    if (sgn(q) < 0) throw BadParameter("sqrt of a negative rational");
    Surd out;
    if (sgn(q) == 0) return out;
    // sqrt(a/b) = sqrt(a*b)/b
    Integer ab = q.get_num() * q.get_den();
    auto [square, free] = square_free_decompose(ab);
    out.terms_.emplace(free, ExactScalar(Rational(square, q.get_den())));
    return out;
}

std::optional<ExactScalar> Surd::as_scalar() const {
    if (terms_.empty()) return ExactScalar(0);
    if (terms_.size() == 1 && terms_.begin()->first == 1) return terms_.begin()->second;
    return std::nullopt;
}

Surd Surd::conj() const {
    Surd out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, c.conj());
    return out;
}

Surd Surd::inverse() const {
    if (terms_.empty()) throw DivisionByZero("inverse of zero surd");
    if (terms_.size() != 1) throw Error("inverse of a multi-term surd is not supported");
    const auto& [m, c] = *terms_.begin();
    // 1/(c sqrt m) = sqrt(m) / (c m)
    Surd out;
    out.terms_.emplace(m, c.inverse() / ExactScalar(Rational(m)));
    return out;
}

std::complex<double> Surd::to_complex() const {
    return {round_surd_component(terms_, false), round_surd_component(terms_, true)};
}

std::string Surd::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        const bool compound = !c.is_real() || m != 1;
        if (m == 1) {
            os << (c.is_real() ? c.to_string() : "(" + c.to_string() + ")");
        } else {
            if (compound && !c.is_real()) os << '(' << c.to_string() << ")";
            else os << c.to_string();
            os << "*sqrt(" << m.get_str() << ")";
        }
    }
    return os.str();
}

void Surd::add_term(const Integer& radicand, const ExactScalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(radicand, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Surd& Surd::operator+=(const Surd& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Surd& Surd::operator-=(const Surd& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Surd operator*(const Surd& a, const Surd& b) {
    Surd out;
    for (const auto& [m1, c1] : a.terms_) {
        for (const auto& [m2, c2] : b.terms_) {
            // sqrt(m1) sqrt(m2) = g sqrt((m1/g)(m2/g)) with g = gcd(m1, m2), both square-free
            Integer g;
            mpz_gcd(g.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
            Integer m = (m1 / g) * (m2 / g);
            out.add_term(m, c1 * c2 * ExactScalar(Rational(g)));
        }
    }
    return out;
}

Surd& Surd::operator*=(const Surd& o) {
    *this = *this * o;
    return *this;
}

Surd Surd::operator-() const {
    Surd out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

}  // namespace opspectra
