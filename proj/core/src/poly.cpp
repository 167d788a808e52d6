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

#include "opspectra/poly.hpp"

#include <sstream>

#include "opspectra/error.hpp"

namespace opspectra {

Poly::Poly(const ExactScalar& c) {
    if (!c.is_zero()) c_.push_back(c);
}

Poly::Poly(std::vector<ExactScalar> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(std::size_t k, const ExactScalar& c) {
    if (c.is_zero()) return {};
    std::vector<ExactScalar> v(k + 1);
    v[k] = c;
    return Poly(std::move(v));
}

void Poly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

std::optional<std::size_t> Poly::degree() const {
    if (c_.empty()) return std::nullopt;
    return c_.size() - 1;
}

ExactScalar Poly::coeff(std::size_t k) const { return k < c_.size() ? c_[k] : ExactScalar(0); }

const ExactScalar& Poly::leading() const {
    if (c_.empty()) throw DomainError("leading coefficient of the zero polynomial");
    return c_.back();
}

ExactScalar Poly::operator()(const ExactScalar& x) const {
    ExactScalar acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly Poly::conj() const {
    std::vector<ExactScalar> v;
    v.reserve(c_.size());
    for (const auto& c : c_) v.push_back(c.conj());
    return Poly(std::move(v));
}

Poly Poly::pow(unsigned k) const {
    Poly out(1);
    for (unsigned i = 0; i < k; ++i) out *= *this;
    return out;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<ExactScalar> v(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(v));
}

Poly& Poly::operator*=(const Poly& o) {
    *this = *this * o;
    return *this;
}

Poly& Poly::operator*=(const ExactScalar& s) {
    if (s.is_zero()) {
        c_.clear();
        return *this;
    }
    for (auto& c : c_) c *= s;
    return *this;
}

Poly Poly::operator-() const {
    Poly out = *this;
    for (auto& c : out.c_) c = -c;
    return out;
}

std::string Poly::to_string(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        const ExactScalar& c = c_[k];
        if (c.is_zero()) continue;
        std::string body;
        bool negative = false;
        if (c.is_real()) {
            negative = sgn(c.re()) < 0;
            Rational mag = abs(c.re());
            if (k == 0 || mag != 1) body = mag.get_str();
        } else {
            body = "(" + c.to_string() + ")";
        }
        if (k > 0) {
            if (!body.empty()) body += "*";
            body += var;
            if (k > 1) body += "^" + std::to_string(k);
        }
        if (first) {
            os << (negative ? "-" : "") << body;
        } else {
            os << (negative ? " - " : " + ") << body;
        }
        first = false;
    }
    return os.str();
}

Poly derivative(const Poly& f, std::size_t k) {
    const auto& c = f.coeffs();
    if (c.size() <= k) return {};
    std::vector<ExactScalar> v(c.size() - k);
    for (std::size_t i = k; i < c.size(); ++i) {
        // i!/(i-k)!
        Integer falling(1);
        for (std::size_t t = 0; t < k; ++t) falling *= static_cast<unsigned long>(i - t);
        v[i - k] = c[i] * ExactScalar(Rational(falling));
    }
    return Poly(std::move(v));
}

Poly affine_compose(const Poly& f, const ExactScalar& a, const ExactScalar& b) {
    if (a.is_zero()) throw DegenerateAffine();
    // Horner in the substituted variable.
    const Poly lin(std::vector<ExactScalar>{b, a});
    Poly acc;
    const auto& c = f.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * lin + Poly(*it);
    return acc;
}

std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g) {
    if (g.is_zero()) throw DivisionByZero("polynomial division by zero");
    const std::size_t dg = *g.degree();
    const ExactScalar inv_lead = g.leading().inverse();
    Poly r = f;
    std::vector<ExactScalar> q;
    while (!r.is_zero() && *r.degree() >= dg) {
        const std::size_t shift = *r.degree() - dg;
        const ExactScalar factor = r.leading() * inv_lead;
        if (q.size() < shift + 1) q.resize(shift + 1);
        q[shift] += factor;
        r -= Poly::monomial(shift, factor) * g;
    }
    return {Poly(std::move(q)), r};
}

Poly gcd(const Poly& f, const Poly& g) {
    Poly a = f;
    Poly b = g;
    while (!b.is_zero()) {
        Poly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a * a.leading().inverse();
}

std::vector<ExactScalar> change_basis(const Poly& f, const BasisFn& basis) {
    if (f.is_zero()) return {};
    const std::size_t n = *f.degree();
    std::vector<ExactScalar> out(n + 1);
    Poly rest = f;
    for (std::size_t j = n + 1; j-- > 0;) {
        const ExactScalar cj = rest.coeff(j);
        if (cj.is_zero()) continue;
        const Poly bj = basis(j);
        if (bj.degree() != j) throw BadParameter("basis is not graded at index " + std::to_string(j));
        out[j] = cj / bj.leading();
        rest -= bj * out[j];
    }
    return out;
}

Poly expand(const std::vector<ExactScalar>& coeffs, const BasisFn& basis) {
    Poly out;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        if (!coeffs[j].is_zero()) out += basis(j) * coeffs[j];
    return out;
}

}  // namespace opspectra
