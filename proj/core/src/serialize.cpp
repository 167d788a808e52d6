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

#include "opspectra/serialize.hpp"

#include <ostream>
#include <sstream>

#include "opspectra/error.hpp"

namespace opspectra::io {

namespace {

json int_to_json(const Integer& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

Integer int_from_json(const json& j) {
    if (j.is_number_integer()) return Integer(j.get<long>());
    if (j.is_string()) return Integer(j.get<std::string>());
    throw ParseError("expected an integer or a decimal string", 0);
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

// ------------------------------------------------------------------- exact

json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw ParseError("expected a rational as \"p/q\" or an integer", 0);
}

json to_json(const ExactScalar& z) {
    return json::array({int_to_json(z.re().get_num()), int_to_json(z.re().get_den()), int_to_json(z.im().get_num()),
                        int_to_json(z.im().get_den())});
}

ExactScalar scalar_from_json(const json& j) {
    if (j.is_string()) return ExactScalar::parse(j.get<std::string>());
    if (j.is_number_integer()) return ExactScalar(j.get<long>());
    if (!j.is_array() || (j.size() != 4 && j.size() != 2)) throw ParseError("scalar must be [re_num, re_den, im_num, im_den]", 0);
    Rational re(int_from_json(j[0]), int_from_json(j[1]));
    re.canonicalize();
    if (j.size() == 2) return ExactScalar(re);
    Rational im(int_from_json(j[2]), int_from_json(j[3]));
    im.canonicalize();
    return ExactScalar(re, im);
}

json to_json(const Surd& s) {
    json terms = json::array();
    for (const auto& [m, c] : s.terms()) terms.push_back(json::array({int_to_json(m), to_json(c)}));
    return json{{"terms", terms}, {"text", s.to_string()}};
}

Surd surd_from_json(const json& j) {
    if (!j.is_object()) return Surd(scalar_from_json(j));
    Surd out;
    for (const auto& t : j.at("terms")) {
        const Integer m = int_from_json(t.at(0));
        const Surd c(scalar_from_json(t.at(1)));
        out += m == 1 ? c : Surd::sqrt(Rational(m)) * c;
    }
    return out;
}

json to_json(const Poly& p) {
    json c = json::array();
    if (p.degree())
        for (std::size_t k = 0; k <= *p.degree(); ++k) c.push_back(to_json(p.coeff(k)));
    return json{{"coeffs", c}};
}

Poly poly_from_json(const json& j) {
    std::vector<ExactScalar> c;
    for (const auto& v : j.at("coeffs")) c.push_back(scalar_from_json(v));
    return Poly(std::move(c));
}

// ------------------------------------------------------------ SequenceSpec

json to_json(const SequenceSpec& s) {
    const SeqNode& n = s.node();
    json j{{"tag", to_string(n.tag)}};
    if (s.form().is_opaque()) {
        json table = json::array();
        for (const auto& v : s.form().prefix()) table.push_back(to_json(v));
        j["table"] = table;
        j["note"] = n.text;
        return j;
    }
    j["text"] = s.form().to_string();
    switch (n.tag) {
        case SeqTag::PolynomialInN: j["p"] = to_json(n.p1); break;
        case SeqTag::RationalInN:
            j["num"] = to_json(n.p1);
            j["den"] = to_json(n.p2);
            break;
        case SeqTag::Geometric:
        case SeqTag::SignAlternating:
            j["base"] = to_json(n.base);
            j["factor"] = to_json(n.p1);
            break;
        case SeqTag::LaguerreNorm:
        case SeqTag::LaguerreNormReciprocal:
            j["beta"] = to_json(n.beta);
            j["power"] = n.power;
            break;
        default: break;
    }
    return j;
}

SequenceSpec sequence_from_json(const json& j) {
    if (j.is_string()) return SequenceSpec::parse(j.get<std::string>());
    const std::string tag = j.value("tag", std::string("Expr"));
    auto table = [&]() {
        std::vector<Surd> t;
        for (const auto& v : j.at("table")) t.push_back(surd_from_json(v));
        return t;
    };
    if (tag == "Opaque") return SequenceSpec::opaque(table(), j.value("note", std::string()));
    if (j.contains("text")) return SequenceSpec::parse(j.at("text").get<std::string>());
    if (tag == "FiniteSupport") return SequenceSpec::finite_support(table());
    if (tag == "PolynomialInN") return SequenceSpec::polynomial(poly_from_json(j.at("p")));
    if (tag == "RationalInN") return SequenceSpec::rational(poly_from_json(j.at("num")), poly_from_json(j.at("den")));
    if (tag == "Geometric") return SequenceSpec::geometric(scalar_from_json(j.at("base")), poly_from_json(j.at("factor")));
    if (tag == "LaguerreNorm") return SequenceSpec::laguerre_norm(rational_from_json(j.at("beta")), j.value("power", 1));
    if (tag == "UserTableWithTail") return SequenceSpec::table_with_tail(table(), sequence_from_json(j.at("tail")));
    throw ParseError("sequence JSON needs \"text\" or a known tag (got " + tag + ")", 0);
}

// ------------------------------------------------------------------ PolySeq

json to_json(const PolySeq& p) {
    switch (p.kind()) {
        case FamilyKind::Laguerre: return {{"kind", "laguerre"}, {"alpha", to_json(p.alpha())}};
        case FamilyKind::Jacobi:
            return {{"kind", "jacobi"}, {"alpha", to_json(p.alpha())}, {"beta", to_json(p.beta())}};
        case FamilyKind::Hermite: return {{"kind", "hermite"}};
        case FamilyKind::ChebyshevT: return {{"kind", "chebyshevT"}};
        case FamilyKind::ChebyshevU: return {{"kind", "chebyshevU"}};
        case FamilyKind::ScaledChebyshevT: return {{"kind", "scaledT"}};
        case FamilyKind::KoornwinderLaguerre:
            return {{"kind", "koornwinder"}, {"alpha", to_json(p.alpha())}, {"K", to_json(p.K())}};
        case FamilyKind::Translate:
            return {{"kind", "translate"}, {"inner", to_json(p.inner())}, {"shift", to_json(p.shift())}};
        case FamilyKind::UserTable: {
            json polys = json::array();
            for (std::size_t n = 0; n < *p.size(); ++n) polys.push_back(to_json(p(n)));
            return {{"kind", "usertable"}, {"polys", polys}};
        }
    }
    return {};
}

PolySeq family_from_json(const json& j) {
    if (j.is_string()) return PolySeq::parse(j.get<std::string>());
    const std::string kind = j.at("kind").get<std::string>();
    auto rat = [&](const char* key) { return rational_from_json(j.at(key)); };
    if (kind == "laguerre") return PolySeq::laguerre(rat("alpha"));
    if (kind == "jacobi") return PolySeq::jacobi(rat("alpha"), rat("beta"));
    if (kind == "hermite") return PolySeq::hermite();
    if (kind == "chebyshevT") return PolySeq::chebyshev_t();
    if (kind == "chebyshevU") return PolySeq::chebyshev_u();
    if (kind == "scaledT") return PolySeq::scaled_chebyshev_t();
    if (kind == "koornwinder") return PolySeq::koornwinder(rat("alpha"), rat("K"));
    if (kind == "translate") return PolySeq::translate(family_from_json(j.at("inner")), rat("shift"));
    if (kind == "usertable") {
        std::vector<Poly> polys;
        for (const auto& p : j.at("polys")) polys.push_back(poly_from_json(p));
        return PolySeq::user_table(std::move(polys));
    }
    throw ParseError("unknown family kind '" + kind + "'", 0);
}

PolySeq family_from_text_or_json(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            return family_from_json(json::parse(text));
        } catch (const json::exception& e) {
            throw ParseError(std::string("family JSON: ") + e.what(), 0);
        }
    }
    return PolySeq::parse(text);
}

// ----------------------------------------------------------------- operators

json to_json(const FormalDiffOp& op, std::size_t upto) {
    json M = json::array();
    for (const auto& p : op.coeffs(upto)) M.push_back(to_json(p));
    json j{{"M", M}, {"provenance", to_string(op.provenance())}, {"label", op.label()}};
    j["order"] = op.known_order() ? json(*op.known_order()) : json(nullptr);
    if (!op.diagnostics().empty()) j["diagnostics"] = op.diagnostics();
    return j;
}

FormalDiffOp operator_from_json(const json& j) {
    std::vector<Poly> M;
    for (const auto& p : j.at("M")) M.push_back(poly_from_json(p));
    return FormalDiffOp::finite(std::move(M), OpProvenance::UserGiven, j.value("label", std::string("user")));
}

json to_json(const HqVector& v) {
    return {{"basis", v.basis}, {"normalized", v.normalized}, {"coeffs", to_json(v.coeffs)}};
}

HqVector vector_from_json(const json& j) {
    if (j.is_array()) {
        std::vector<Surd> c;
        for (const auto& v : j) c.push_back(surd_from_json(v));
        return HqVector::finite(std::move(c));
    }
    return HqVector{j.value("basis", std::string()), j.value("normalized", false), sequence_from_json(j.at("coeffs"))};
}

json to_json(const StructuredMatrix& A, std::size_t rows) {
    json entries = json::array();
    for (std::size_t k = 0; k <= A.horizon(); ++k)
        for (std::size_t t = 0; t <= k; ++t)
            if (const Surd v = A.column(k)[t]; !v.is_zero()) entries.push_back(json::array({t, k, to_json(v)}));
    json tails = json::array();
    if (A.pattern())
        for (std::size_t j = 0; j < rows; ++j) tails.push_back({{"row", j}, {"tail", A.pattern()->tail(j).to_string()}});
    const auto& p = A.provenance();
    json out{{"p", to_json(p.p)},
             {"q", to_json(p.q)},
             {"d", to_json(p.d)},
             {"normalized", p.normalized},
             {"horizon", A.horizon()},
             {"entries", entries},
             {"row_tails", tails}};
    out["rule"] = A.pattern() ? json(A.pattern()->rule) : json(nullptr);
    return out;
}

// ------------------------------------------------------------------- reports

json to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json to_json(const SolveOutcome& s) {
    json alphas = json::array();
    for (const auto& a : s.alphas) alphas.push_back(a.to_string());
    json betas = json::array();
    for (const auto& b : s.betas) betas.push_back(b.to_string());
    json j{{"n", s.n}, {"outcome", to_string(s.kind)}, {"alphas", alphas}, {"betas", betas}};
    if (s.kind == SolveOutcome::Kind::NoSolution) {
        j["witness"] = s.witness;
        j["witness_alpha"] = s.witness_alpha.to_string();
    } else {
        j["p"] = s.p.to_string();
    }
    if (s.kind == SolveOutcome::Kind::NonUnique) j["free_indices"] = s.free_indices;
    return j;
}

json to_json(const PerturbationReport& r) {
    json rec = json::array();
    for (const auto& v : r.by_recursion) rec.push_back(v.to_string());
    json res = json::array();
    for (const auto& v : r.by_resynthesis) res.push_back(v.to_string());
    return {{"first_index", r.first_index},
            {"by_recursion", rec},
            {"by_resynthesis", res},
            {"agree", r.agree},
            {"vanishing", r.vanishing}};
}

json to_json(const Theorem1Verdict& v) {
    json j{{"verdict", v.label()},
           {"equal", v.equal},
           {"horizon", v.horizon},
           {"diagnostic", v.diagnostic},
           {"d_is_power_of_a", v.d_is_power_of_a},
           {"a_is_minus_one", v.a_is_minus_one},
           {"b_n_constant", v.b_n_constant},
           {"q_symmetric", v.q_symmetric}};
    j["witness"] = v.witness ? json(*v.witness) : json(nullptr);
    j["b_n"] = v.b_n ? json(to_string(*v.b_n)) : json(nullptr);
    return j;
}

json to_json(const BlockedReport& b) {
    return {{"blocked", b.blocked}, {"vacuous", b.vacuous}, {"certified", b.certified}, {"detail", b.detail}};
}

json to_json(const Classification& c) {
    json classes = json::array();
    for (std::size_t i = 0; i < c.classes.size(); ++i) {
        const RowClass& rc = c.classes[i];
        json m = json::array();
        for (long r : rc.residues) m.push_back({{"residue", r}, {"m", c.m_on_residue(i, r).to_string()}});
        json finite = json::array();
        for (auto j : rc.finite_members) finite.push_back({{"row", j}, {"m", c.m(j).to_string()}});
        classes.push_back({{"head", rc.head},
                           {"rule", rc.rule},
                           {"infinite", rc.infinite()},
                           {"m_spec", m},
                           {"finite_rows", finite},
                           {"exceptions", rc.exceptions}});
    }
    json j{{"classes", classes},
           {"period", c.period},
           {"tail_from", c.tail_from},
           {"horizon", c.horizon},
           {"l2_residues", c.l2_residues},
           {"has_l2_rows", c.has_l2_rows()}};
    if (auto mf = c.m_form()) j["m"] = mf->to_string();
    try {
        j["thin"] = is_thin(c);
    } catch (const ThinUndecidable&) {
        j["thin"] = "undecidable";
    }
    const BlockedReport b = is_blocked(c);
    j["blocked"] = b.blocked;
    j["blocked_report"] = to_json(b);
    const Closability v = closability_verdict(c);
    j["closability"] = to_string(v);
    j["closable"] = v == Closability::Unknown ? json("unknown") : json(v == Closability::Closable);
    return j;
}

json to_json(const DomainCertificate& c) {
    json sums = json::array();
    for (const auto& [n, v] : c.partial_sums) sums.push_back({{"N", n}, {"sum", v}});
    json j{{"verdict", to_string(c.verdict)}, {"reason", c.reason}, {"partial_sums", sums}};
    j["inner"] = c.inner ? json(c.inner->to_string()) : json(nullptr);
    return j;
}

json to_json(const Thm6Report& r) {
    json checks = json::array();
    for (const auto& c : r.numeric)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"detail", c.detail}});
    json j{{"b_exact", r.b_exact}, {"numeric", checks}, {"all_passed", r.all_passed()}};
    j["b_first_failure"] = r.b_first_failure ? json(*r.b_first_failure) : json(nullptr);
    return j;
}

json to_json(const Thm7Result& r) {
    json conv = json::array();
    for (const auto& [n, v] : r.convergence) conv.push_back({{"n", n}, {"defect", v}});
    json j{{"status", to_string(r.status)},
           {"S", to_json(r.S)},
           {"convergence", conv},
           {"converged", r.converged},
           {"detail", r.detail}};
    j["S_exact"] = r.S_exact ? json(r.S_exact->to_string()) : json(nullptr);
    if (r.g) {
        json g = json::array();
        for (const auto& v : r.g->entries()) g.push_back(v.to_string());
        j["g"] = g;
    } else {
        json g = json::array();
        for (std::size_t k = 0; k < std::min<std::size_t>(r.g_numeric.size(), 16); ++k) g.push_back(to_json(r.g_numeric[k]));
        j["g_head"] = g;
    }
    return j;
}

json to_json(const ApproxEigen& a) {
    json g = json::array();
    for (const auto& v : a.g) g.push_back(v.to_string());
    json res = json::array();
    for (const auto& [n, v] : a.residuals) res.push_back({{"N", n}, {"residual", v}});
    return {{"g", g}, {"boundary_defect", a.boundary_defect}, {"residuals", res}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ----------------------------------------------------------------------- CSV

void write_residual_csv(std::ostream& os, const std::vector<ResidualPoint>& pts) {
    os << "lambda_re,lambda_im,N,residual\n";
    for (const auto& p : pts)
        os << format_double(p.lambda.real()) << ',' << format_double(p.lambda.imag()) << ',' << p.N << ','
           << format_double(p.sigma_min) << '\n';
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& M) {
    os << "row,col,re,im\n";
    for (Eigen::Index k = 0; k < M.cols(); ++k)
        for (Eigen::Index j = 0; j < M.rows(); ++j)
            if (M(j, k) != std::complex<double>())
                os << j << ',' << k << ',' << format_double(M(j, k).real()) << ',' << format_double(M(j, k).imag())
                   << '\n';
}

void write_curve_csv(std::ostream& os, const std::string& header,
                     const std::vector<std::pair<std::size_t, double>>& curve) {
    os << "N," << header << '\n';
    for (const auto& [n, v] : curve) os << n << ',' << format_double(v) << '\n';
}

}  // namespace opspectra::io
