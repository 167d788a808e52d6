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

#include "opspectra/shiftchar.hpp"

#include <algorithm>

#include "opspectra/error.hpp"

namespace opspectra {

FormalDiffOp shift_as_diffop(const ShiftOp& s, std::size_t K) {
    if (s.a == 0) throw DegenerateAffine();
    if (s.a == 1 && s.b == 0) throw IdentityOperator();
    const Poly base(std::vector<ExactScalar>{ExactScalar(s.b), ExactScalar(Rational(s.a - 1))});
    auto gen = [base](std::size_t k, const std::vector<Poly>& prev) -> Poly {
        if (k == 0) return Poly(1);
        // M_k = M_{k-1} * base / k.
        return prev[k - 1] * base * ExactScalar(Rational(1, static_cast<long>(k)));
    };
    FormalDiffOp op(std::move(gen), std::nullopt, OpProvenance::UserGiven,
                    "shift:" + to_string(s.a) + "," + to_string(s.b));
    op.coeff(K);
    return op;
}

Recurrence3 msz_transform(const Recurrence3& rec, const Rational& a, const Rational& b) {
    if (a == 0) throw DegenerateAffine();
    const Surd inv(Rational(1) / a);
    const SequenceSpec shift_b = SequenceSpec::polynomial(Poly(ExactScalar(b)));
    return Recurrence3{rec.a.scaled(inv), (rec.b - shift_b).scaled(inv), rec.c.scaled(inv)};
}

Theorem1Verdict theorem1_check(const PolySeq& p, const SequenceSpec& d, const Rational& a, const Rational& b,
                               std::size_t horizon) {
    if (a == 0) throw DegenerateAffine();
    if (auto sz = p.size()) {
        if (*sz < 3) throw NotOrthogonal("user table too short for a recurrence");
        horizon = std::min(horizon, *sz - 2);
    }
    if (d.eval(0) != Surd(1)) throw BadParameter("d_0 must be 1");
    for (std::size_t n = 0; n <= horizon; ++n)
        if (!d.eval_scalar(n).is_real()) throw BadParameter("d must be real");
    const Recurrence3 rec = recurrence_coeffs(p, horizon + 1);

    Theorem1Verdict v;
    v.horizon = horizon;
    const ShiftOp tau{a, b};
    for (std::size_t n = 0; n <= horizon && !v.witness; ++n) {
        const Poly pn = p(n);
        if (pn * d.eval_scalar(n) != tau.apply(pn)) v.witness = n;
    }
    v.equal = !v.witness;

    std::optional<std::size_t> power_witness;
    ExactScalar an(1);
    for (std::size_t n = 0; n <= horizon && !power_witness; ++n) {
        if (d.eval_scalar(n) != an) power_witness = n;
        an *= ExactScalar(a);
    }
    v.d_is_power_of_a = !power_witness;
    v.a_is_minus_one = a == -1;
    const Surd b0 = rec.b.eval(0);
    std::optional<std::size_t> bn_witness;
    for (std::size_t n = 1; n <= horizon && !bn_witness; ++n)
        if (rec.b.eval(n) != b0) bn_witness = n;
    v.b_n_constant = !bn_witness;
    if (v.b_n_constant) v.b_n = b0.as_scalar()->re();

    v.q_symmetric = true;
    for (std::size_t n = 0; n <= horizon && v.q_symmetric; ++n) {
        const Poly q = affine_compose(p(n), 1, ExactScalar(Rational(b / 2)));
        const Poly reflected = affine_compose(q, -1, 0);
        v.q_symmetric = reflected == (n % 2 ? -q : q);
    }

    const bool conditions = v.d_is_power_of_a && v.a_is_minus_one && v.b_n_constant && *v.b_n == b / 2 && v.q_symmetric;
    if (v.equal) {
        if (!conditions) throw Error("shift characterization: equality holds but a necessary condition fails");
        v.diagnostic = "all conditions hold up to n=" + std::to_string(horizon);
        return v;
    }
    if (!v.d_is_power_of_a)
        v.diagnostic = "d_n != a^n at n=" + std::to_string(*power_witness);
    else if (!v.a_is_minus_one)
        v.diagnostic = "a != -1";
    else if (!v.b_n_constant)
        v.diagnostic = "b_n not constant (b_0 != b_" + std::to_string(*bn_witness) + ")";
    else if (*v.b_n != b / 2)
        v.diagnostic = "b_n = " + to_string(*v.b_n) + " != b/2";
    else
        v.diagnostic = "S(p_n) != tau(p_n)";
    return v;
}

}  // namespace opspectra
