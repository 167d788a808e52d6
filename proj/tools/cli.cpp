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

#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "opspectra/eigensynth.hpp"
#include "opspectra/error.hpp"
#include "opspectra/serialize.hpp"
#include "opspectra/shiftchar.hpp"
#include "opspectra/spectralops.hpp"
#include "opspectra/thinmat.hpp"

namespace opspectra::cli {

namespace {

using io::json;

/// Bad input that is not a parse error of a mathematical object.
class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::size_t horizon = kDefaultHorizon;
    double tol = 1e-9;
    std::vector<std::size_t> ladder = kLadder;
    std::string format = "json";
    std::string out;
};

struct Outcome {
    Outcome() = default;
    Outcome(json r, int s = kOk, std::optional<std::string> c = std::nullopt)
        : result(std::move(r)), status(s), csv(std::move(c)) {}

    json result;
    int status = kOk;
    std::optional<std::string> csv;
    /// Pre-rendered text (report); printed as is.
    std::optional<std::string> text;
};

// ------------------------------------------------------------------ inputs

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// "@path", or a path ending in .json, reads the file; anything else is inline text.
std::string load_text(const std::string& v) {
    if (!v.empty() && v[0] == '@') return read_file(v.substr(1));
    if (ends_with(v, ".json")) return read_file(v);
    return v;
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw UsageError(what + ": " + e.what());
    }
}

SequenceSpec load_seq(const std::string& v) {
    const std::string t = load_text(v);
    if (!t.empty() && t[0] == '{') return io::sequence_from_json(parse_json(t, "sequence JSON"));
    return SequenceSpec::parse(t);
}

PolySeq load_family(const std::string& v) { return io::family_from_text_or_json(load_text(v)); }

FormalDiffOp load_operator(const std::string& v) {
    return io::operator_from_json(parse_json(load_text(v), "operator JSON"));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

Poly load_poly(const std::string& v) {
    const std::string t = load_text(v);
    if (!t.empty() && t[0] == '{') return io::poly_from_json(parse_json(t, "polynomial JSON"));
    std::vector<ExactScalar> c;
    for (const auto& part : split(t, ',')) c.push_back(ExactScalar::parse(part));
    return Poly(std::move(c));
}

/// "e:K", "seq:<sequence>", a JSON array/object, or "c0,c1,...".
HqVector load_vector(const std::string& v, const std::string& basis, bool normalized) {
    const std::string t = load_text(v);
    if (t.rfind("e:", 0) == 0) return HqVector::unit(std::stoul(t.substr(2)), basis, normalized);
    if (t.rfind("seq:", 0) == 0) return HqVector{basis, normalized, SequenceSpec::parse(t.substr(4))};
    if (!t.empty() && (t[0] == '[' || t[0] == '{')) {
        const json j = parse_json(t, "vector JSON");
        HqVector h = io::vector_from_json(j);
        if (j.is_array()) {
            h.basis = basis;
            h.normalized = normalized;
        }
        return h;
    }
    std::vector<Surd> c;
    for (const auto& part : split(t, ',')) c.emplace_back(ExactScalar::parse(part));
    return HqVector::finite(std::move(c), basis, normalized);
}

json vector_json(const HqVector& v) {
    json j{{"basis", v.basis}, {"normalized", v.normalized}};
    if (v.is_finite()) {
        json c = json::array();
        for (const auto& x : v.entries()) c.push_back(x.to_string());
        j["coeffs"] = c;
    } else {
        j["coeffs"] = v.coeffs.form().to_string();
    }
    return j;
}

std::vector<std::size_t> parse_ladder(const std::string& s) {
    std::vector<std::size_t> out;
    for (const auto& p : split(s, ',')) out.push_back(std::stoul(p));
    return out;
}

// ------------------------------------------------------------------ output

void render_human(const json& j, const std::string& indent, std::ostream& os) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const json& v = it.value();
        const bool flat = !v.is_structured() ||
                          (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return !e.is_structured(); }));
        os << indent;
        if (j.is_object()) os << it.key() << ":";
        else os << "-";
        if (flat) {
            os << ' ' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
        } else {
            os << '\n';
            render_human(v, indent + "  ", os);
        }
    }
}

std::string heading_for(const std::string& command) {
    static const std::map<std::string, std::string> labels{
        {"synth", "Synthesized eigen-operator (uniqueness, Remark 1)"},
        {"eigensolve", "Eigenpolynomial solve (Lemma KS, Proposition 1)"},
        {"counterexample", "Fourth-order counterexample (Abstract, Remark 4)"},
        {"perturb", "Diagonal perturbation (Proposition 2)"},
        {"shiftcheck", "Dilation versus shift (Theorem 1)"},
        {"matrix", "Matrix representation (Examples 1 and 2)"},
        {"classify", "Thin and blocked matrices (closability criterion)"},
        {"adjoint-test", "Adjoint domain (Theorems 2 to 5, part (i))"},
        {"closure-apply", "Closure formulas (Theorems 2, 3 and 5)"},
        {"thm6", "Necessary conditions (Theorem 6)"},
        {"thm7", "Sufficient conditions (Theorem 7)"},
        {"eigenprobe", "Approximate eigenvectors (Remark 5)"},
        {"spectrum", "Truncation spectra and residual charts (heuristic)"},
    };
    auto it = labels.find(command);
    return it == labels.end() ? command : it->second;
}

std::string badge_for(const std::string& command) {
    if (command == "spectrum") return "numeric";
    if (command == "thm6" || command == "thm7" || command == "eigenprobe") return "exact + numeric";
    return "exact";
}

std::string csv_chart(const std::string& csv) {
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    std::vector<std::pair<std::string, double>> rows;
    std::string line;
    while (std::getline(in, line) && rows.size() < 40) {
        const auto cells = split(line, ',');
        if (cells.size() < 2) continue;
        std::string label;
        for (std::size_t i = 0; i + 1 < cells.size(); ++i) label += (i ? " " : "") + cells[i];
        // strtod accepts subnormal values, which std::stod rejects.
        char* end = nullptr;
        const double v = std::strtod(cells.back().c_str(), &end);
        if (end == cells.back().c_str()) continue;
        rows.emplace_back(label, v);
    }
    double top = 0;
    for (const auto& r : rows) top = std::max(top, std::abs(r.second));
    std::ostringstream os;
    os << "```\n" << header << "\n";
    for (const auto& [label, v] : rows) {
        const int bar = top > 0 ? static_cast<int>(std::lround(40 * std::abs(v) / top)) : 0;
        os << label << " | " << std::string(static_cast<std::size_t>(bar), '#') << ' ' << v << '\n';
    }
    os << "```\n";
    return os.str();
}

// -------------------------------------------------------------- commands

struct ClassArgs {
    std::string variant = "A";
    std::string alpha = "1/2";
    std::string d = "-2n+1";

    void add(CLI::App* sub) {
        sub->add_option("--class", variant, "operator class A, B, C or D")->capture_default_str();
        sub->add_option("--alpha", alpha, "Laguerre parameter")->capture_default_str();
        sub->add_option("--d", d, "eigenvalue sequence")->capture_default_str();
    }
    OperatorClass make() const { return OperatorClass(parse_variant(variant), parse_rational(alpha), load_seq(d)); }
};

std::string four_class_table(const SequenceSpec& d, const Rational& alpha) {
    std::ostringstream os;
    os << "| class | operator | basic vectors in D(T*), s < 8 | closure formula | closability |\n"
       << "|---|---|---|---|---|\n";
    for (OpVariant v : {OpVariant::A, OpVariant::B, OpVariant::C, OpVariant::D}) {
        try {
            const OperatorClass cls(v, alpha, d);
            std::vector<std::size_t> in;
            bool undecided = false;
            for (std::size_t s = 0; s < 8; ++s) {
                const auto verdict = adjoint_domain_test(cls, HqVector::unit(s, {}, cls.normalized())).verdict;
                if (verdict == DomainVerdict::InDomain) in.push_back(s);
                if (verdict == DomainVerdict::Undecidable) undecided = true;
            }
            std::string present = in.size() == 8 ? "all" : in.empty() ? "none" : "";
            if (present.empty())
                for (std::size_t i = 0; i < in.size(); ++i) present += (i ? "," : "") + std::to_string(in[i]);
            if (undecided) present += " (some undecidable)";
            os << "| " << to_string(v) << " | E_{" << cls.p().name() << "} in H(" << cls.q().name()
               << (cls.normalized() ? ", orthonormal" : "") << ") | " << present << " | "
               << to_string(closure_formula_applies(cls)) << " | " << to_string(class_closability(cls, 16)) << " |\n";
        } catch (const BadParameter& e) {
            os << "| " << to_string(v) << " | n/a | " << e.what() << " | | |\n";
        }
    }
    return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"opspectra: dilation operators on polynomial sequences", "opspectra"};
    app.require_subcommand(1);
    // Global options may follow the subcommand.
    app.fallthrough();
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    RunConfig cfg;
    std::optional<std::size_t> horizon_flag;
    std::string ladder_text;
    app.add_option("--horizon", horizon_flag, "exact horizon (default 64; env OPSPECTRA_HORIZON)");
    app.add_option("--tol", cfg.tol, "float tolerance")->capture_default_str();
    app.add_option("--ladder", ladder_text, "truncation ladder, comma separated (default 64,128,256,512)");
    app.add_option("--format", cfg.format, "json, human or csv")
        ->check(CLI::IsMember({"json", "human", "csv"}))
        ->capture_default_str();
    app.add_option("--out", cfg.out, "write the artifact to this file");

    std::map<std::string, std::function<Outcome()>> commands;

    // apply
    std::string op_text, poly_text;
    auto* apply = app.add_subcommand("apply", "apply an operator JSON to a polynomial");
    apply->add_option("--op", op_text, "operator JSON {\"M\": [...]}")->required();
    apply->add_option("--poly", poly_text, "polynomial JSON or coefficients c0,c1,...")->required();
    commands["apply"] = [&] {
        const Poly y = load_poly(poly_text);
        const Poly r = load_operator(op_text).apply(y);
        return Outcome{json{{"input", y.to_string()}, {"result", io::to_json(r)}, {"text", r.to_string()}}};
    };

    // synth
    std::string p_text = "laguerre:0", d_text = "-2n+1";
    std::size_t K = 8;
    auto* synth = app.add_subcommand("synth", "synthesize the formal operator with eta p_n = d_n p_n");
    synth->add_option("--p", p_text, "polynomial family")->capture_default_str();
    synth->add_option("--d", d_text, "eigenvalue sequence")->capture_default_str();
    synth->add_option("--K", K, "number of coefficients M_0..M_K")->capture_default_str();
    commands["synth"] = [&] {
        const EigenPair pair{load_family(p_text), load_seq(d_text)};
        const FormalDiffOp op = synthesize(pair, K);
        json text = json::array();
        for (std::size_t k = 0; k <= K; ++k) text.push_back(op.coeff(k).to_string());
        return Outcome{json{{"p", pair.p.name()}, {"d", pair.d.describe()}, {"K", K},
                            {"operator", io::to_json(op, K)}, {"M_text", text}}};
    };

    // eigensolve
    std::string es_op, es_d;
    std::size_t es_n = 4;
    auto* eigensolve = app.add_subcommand("eigensolve", "solve eta p_n = d_n p_n degree by degree");
    eigensolve->add_option("--op", es_op, "operator JSON")->required();
    eigensolve->add_option("--d", es_d, "eigenvalues (default: implied by the operator)");
    eigensolve->add_option("--n", es_n, "highest degree")->capture_default_str();
    auto solve_report = [&](const FormalDiffOp& op, const SequenceSpec& d, std::size_t n) {
        const auto all = eigen_solve_all(op, d, n);
        json steps = json::array();
        for (const auto& s : all) steps.push_back(io::to_json(s));
        json j = io::to_json(all.back());
        j["steps"] = steps;
        json lambdas = json::array();
        for (std::size_t k = 0; k <= n; ++k) lambdas.push_back(lemma_ks_lambda(op, k).to_string());
        j["lambdas"] = lambdas;
        return j;
    };
    commands["eigensolve"] = [&] {
        const FormalDiffOp op = load_operator(es_op);
        const SequenceSpec d = es_d.empty() ? implied_eigenvalues(op, cfg.horizon) : load_seq(es_d);
        return Outcome{solve_report(op, d, es_n)};
    };

    // counterexample
    std::string variant = "abstract";
    auto* counter = app.add_subcommand("counterexample", "the fourth-order operator without a degree-4 eigenvector");
    counter->add_option("--variant", variant, "abstract or remark4")
        ->check(CLI::IsMember({"abstract", "remark4"}))
        ->capture_default_str();
    commands["counterexample"] = [&] {
        const auto v = variant == "abstract" ? CounterexampleVariant::Abstract : CounterexampleVariant::Remark4;
        const FormalDiffOp op = counterexample_operator(v);
        json j = solve_report(op, implied_eigenvalues(op), 4);
        j["variant"] = variant;
        j["operator"] = io::to_json(op, 4);
        return Outcome{j};
    };

    // perturb
    std::string pt_p = "laguerre:0", pt_d = "-2n+1", pt_d2, pt_delta = "1";
    std::size_t pt_index = 0, pt_upto = 12;
    auto* perturb = app.add_subcommand("perturb", "diagonal differences after perturbing d");
    perturb->add_option("--p", pt_p, "polynomial family")->capture_default_str();
    perturb->add_option("--d", pt_d, "eigenvalue sequence")->capture_default_str();
    perturb->add_option("--d2", pt_d2, "perturbed sequence (default: d + delta at index)");
    perturb->add_option("--index", pt_index, "perturbed index")->capture_default_str();
    perturb->add_option("--delta", pt_delta, "perturbation size")->capture_default_str();
    perturb->add_option("--upto", pt_upto, "last diagonal index")->capture_default_str();
    commands["perturb"] = [&] {
        const EigenPair pair{load_family(pt_p), load_seq(pt_d)};
        SequenceSpec d2;
        if (!pt_d2.empty()) {
            d2 = load_seq(pt_d2);
        } else {
            std::vector<Surd> bump(pt_index + 1);
            bump[pt_index] = Surd(ExactScalar::parse(pt_delta));
            d2 = pair.d + SequenceSpec::finite_support(bump);
        }
        return Outcome{io::to_json(perturbation_diagonal(pair, d2, pt_upto))};
    };

    // shiftcheck
    std::string sc_p = "chebyshevT", sc_d = "(-1)^n", sc_a = "-1", sc_b = "0";
    std::size_t sc_upto = 32;
    auto* shift = app.add_subcommand("shiftcheck", "compare S_{p,d} with the shift x -> a x + b");
    shift->add_option("--p", sc_p, "polynomial family")->capture_default_str();
    shift->add_option("--d", sc_d, "eigenvalue sequence")->capture_default_str();
    shift->add_option("--a", sc_a, "dilation factor")->capture_default_str();
    shift->add_option("--b", sc_b, "translation")->capture_default_str();
    shift->add_option("--upto", sc_upto, "last degree compared")->capture_default_str();
    commands["shiftcheck"] = [&] {
        return Outcome{io::to_json(theorem1_check(load_family(sc_p), load_seq(sc_d), parse_rational(sc_a),
                                                  parse_rational(sc_b), sc_upto))};
    };

    // matrix
    std::string mx_p = "laguerre:0", mx_q = "laguerre:1", mx_d = "-2n+1";
    bool mx_norm = false;
    std::size_t mx_rows = 8, mx_N = 8;
    auto* matrix = app.add_subcommand("matrix", "exact matrix of E_{p,d} in H(q)");
    matrix->add_option("--p", mx_p, "eigenbasis family")->capture_default_str();
    matrix->add_option("--q", mx_q, "coordinate basis family")->capture_default_str();
    matrix->add_option("--d", mx_d, "eigenvalue sequence")->capture_default_str();
    matrix->add_flag("--normalized", mx_norm, "orthonormal Laguerre coordinates");
    matrix->add_option("--rows", mx_rows, "rows whose tails are listed")->capture_default_str();
    matrix->add_option("--N", mx_N, "truncation size for CSV output")->capture_default_str();
    commands["matrix"] = [&] {
        const auto A = matrix_rep(load_family(mx_p), load_seq(mx_d), load_family(mx_q), mx_norm, cfg.horizon);
        std::ostringstream csv;
        io::write_matrix_csv(csv, truncate(A, std::min(mx_N, A.horizon())));
        return Outcome{io::to_json(A, mx_rows), kOk, csv.str()};
    };

    // classify
    std::string cl_matrix, cl_example, cl_p, cl_q, cl_d = "-2n+1", cl_alpha = "0";
    bool cl_norm = false;
    auto* classify_cmd = app.add_subcommand("classify", "row classes, thin/blocked tests and closability");
    classify_cmd->add_option("--matrix", cl_matrix, "matrix JSON written by the matrix command");
    classify_cmd->add_option("--example", cl_example, "C3.1, C3.2 or D4.2")
        ->check(CLI::IsMember({"C3.1", "C3.2", "D4.2"}));
    classify_cmd->add_option("--p", cl_p, "eigenbasis family");
    classify_cmd->add_option("--q", cl_q, "coordinate basis family");
    classify_cmd->add_option("--d", cl_d, "eigenvalue sequence")->capture_default_str();
    classify_cmd->add_option("--alpha", cl_alpha, "Laguerre parameter of the examples")->capture_default_str();
    classify_cmd->add_flag("--normalized", cl_norm, "orthonormal Laguerre coordinates");
    commands["classify"] = [&] {
        PolySeq p = PolySeq::hermite(), q = PolySeq::hermite();
        SequenceSpec d = load_seq(cl_d);
        bool normalized = cl_norm;
        std::size_t horizon = cfg.horizon;
        const Rational a = parse_rational(cl_alpha);
        if (!cl_matrix.empty()) {
            const json m = parse_json(load_text(cl_matrix), "matrix JSON");
            p = io::family_from_json(m.at("p"));
            q = io::family_from_json(m.at("q"));
            d = io::sequence_from_json(m.at("d"));
            normalized = m.value("normalized", false);
            horizon = std::min<std::size_t>(horizon, m.value("horizon", horizon));
        } else if (cl_example == "C3.1") {
            p = PolySeq::laguerre(a);
            q = PolySeq::laguerre(a + 1);
        } else if (cl_example == "C3.2") {
            p = PolySeq::laguerre(a + 1);
            q = PolySeq::laguerre(a);
        } else if (cl_example == "D4.2") {
            p = PolySeq::scaled_chebyshev_t();
            q = PolySeq::chebyshev_u();
        } else if (!cl_p.empty() && !cl_q.empty()) {
            p = load_family(cl_p);
            q = load_family(cl_q);
        } else {
            throw UsageError("classify needs --matrix, --example or both --p and --q");
        }
        const Classification c = classify(matrix_rep(p, d, q, normalized, horizon), horizon);
        json j = io::to_json(c);
        j["p"] = p.name();
        j["q"] = q.name();
        j["d"] = d.describe();
        if (!cl_example.empty()) j["example"] = cl_example;
        return Outcome{j, j["closability"] == "Unknown" ? kRefused : kOk};
    };

    // adjoint-test
    ClassArgs at_cls;
    std::string at_g = "e:0";
    bool at_apply = false;
    std::size_t at_show = 16;
    auto* adjoint = app.add_subcommand("adjoint-test", "decide g in D(T*) for the four Laguerre classes");
    at_cls.add(adjoint);
    adjoint->add_option("--g", at_g, "vector: e:K, c0,c1,..., JSON, or seq:<sequence>")->capture_default_str();
    adjoint->add_flag("--apply", at_apply, "also list the coefficients of T* g");
    adjoint->add_option("--show", at_show, "coefficients listed with --apply")->capture_default_str();
    commands["adjoint-test"] = [&] {
        const OperatorClass cls = at_cls.make();
        const HqVector g = load_vector(at_g, cls.q().name(), cls.normalized());
        const DomainCertificate cert = adjoint_domain_test(cls, g);
        json j = io::to_json(cert);
        j["class"] = cls.name();
        if (at_apply && cert.verdict == DomainVerdict::InDomain) {
            const HqVector tg = adjoint_apply(cls, g);
            json c = json::array();
            for (std::size_t k = 0; k < at_show; ++k) c.push_back(tg.at(k).to_string());
            j["adjoint_coeffs"] = c;
        }
        return Outcome{j, cert.verdict == DomainVerdict::Undecidable ? kRefused : kOk};
    };

    // closure-apply
    ClassArgs ca_cls;
    std::string ca_g = "e:0", ca_form = "limit";
    auto* closure = app.add_subcommand("closure-apply", "closure of T at a finite vector");
    ca_cls.add(closure);
    closure->add_option("--g", ca_g, "finite vector: e:K, c0,c1,... or JSON")->capture_default_str();
    closure->add_option("--form", ca_form, "limit or tail")->check(CLI::IsMember({"limit", "tail"}))->capture_default_str();
    commands["closure-apply"] = [&] {
        const OperatorClass cls = ca_cls.make();
        const HqVector g = load_vector(ca_g, cls.q().name(), cls.normalized());
        const HqVector r = closure_apply(cls, g, ca_form == "limit" ? ClosureForm::WithLimit : ClosureForm::TailSum);
        return Outcome{json{{"class", cls.name()}, {"g", vector_json(g)}, {"closure", vector_json(r)}}};
    };

    // thm6
    std::string t6_d = "-2n+1", t6_f, t6_g;
    auto* thm6 = app.add_subcommand("thm6", "necessary conditions for (f, g) in the closed graph (class D)");
    thm6->add_option("--d", t6_d, "eigenvalue sequence")->capture_default_str();
    thm6->add_option("--f", t6_f, "vector f")->required();
    thm6->add_option("--g", t6_g, "vector g")->required();
    commands["thm6"] = [&] {
        const SequenceSpec d = load_seq(t6_d);
        const ClosureWitness w(d, load_vector(t6_f, {}, false), load_vector(t6_g, {}, false),
                               std::max<std::size_t>(cfg.ladder.back(), 1));
        const Thm6Report rep = thm6_necessary_check(w, cfg.horizon, cfg.tol);
        return Outcome{io::to_json(rep)};
    };

    // thm7
    std::string t7_d = "n+1", t7_f = "seq:1/(n+1)^3";
    auto* thm7 = app.add_subcommand("thm7", "sufficient conditions and the approximating family (class D)");
    thm7->add_option("--d", t7_d, "eigenvalue sequence")->capture_default_str();
    thm7->add_option("--f", t7_f, "vector f")->capture_default_str();
    commands["thm7"] = [&] {
        const Thm7Result r = thm7_sufficient_construct(load_seq(t7_d), load_vector(t7_f, {}, false), cfg.tol);
        std::ostringstream csv;
        io::write_curve_csv(csv, "defect", r.convergence);
        return Outcome{io::to_json(r), r.status == Thm7Status::Accepted ? kOk : kRefused, csv.str()};
    };

    // eigenprobe
    std::string ep_d = "1+(1/2)^n", ep_lambda = "3";
    std::size_t ep_K = 8;
    auto* probe = app.add_subcommand("eigenprobe", "approximate eigenvectors of the class D closure");
    probe->add_option("--d", ep_d, "eigenvalue sequence")->capture_default_str();
    probe->add_option("--lambda", ep_lambda, "spectral parameter (exact, e.g. 3 or 1/2+i)")->capture_default_str();
    probe->add_option("--K", ep_K, "seed index")->capture_default_str();
    commands["eigenprobe"] = [&] {
        const SequenceSpec d = load_seq(ep_d);
        const ExactScalar lambda = ExactScalar::parse(ep_lambda);
        const ApproxEigen ae = approx_eigen_recursion(d, lambda, ep_K, cfg.ladder);
        json j = io::to_json(ae);
        std::vector<std::pair<std::size_t, double>> curve;
        for (std::size_t N : cfg.ladder) curve.emplace_back(N, prefix_indicator_residual(d, lambda.to_complex(), N));
        json pc = json::array();
        for (const auto& [N, v] : curve) pc.push_back({{"N", N}, {"residual", v}});
        j["prefix_indicator"] = pc;
        if (!d.form().is_opaque())
            if (auto lim = d.form().limit()) j["expected_limit"] = std::abs(lim->to_complex() - lambda.to_complex());
        std::ostringstream csv;
        io::write_curve_csv(csv, "prefix_residual", curve);
        return Outcome{j, kOk, csv.str()};
    };

    // spectrum
    ClassArgs sp_cls;
    std::size_t sp_N = 16;
    std::string sp_grid;
    auto* spectrum = app.add_subcommand("spectrum", "truncation eigenvalues and residual charts");
    sp_cls.add(spectrum);
    spectrum->add_option("--N", sp_N, "truncation size")->capture_default_str();
    spectrum->add_option("--grid", sp_grid, "lambda grid re0:re1:n,im0:im1:m for residual charts");
    commands["spectrum"] = [&] {
        const OperatorClass cls = sp_cls.make();
        const auto ev = truncation_spectrum(cls, sp_N);
        json e = json::array();
        double dev = 0;
        std::vector<std::complex<double>> diag;
        for (std::size_t k = 0; k < sp_N; ++k) diag.push_back(cls.d().eval_complex(k));
        std::sort(diag.begin(), diag.end(), [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
        for (std::size_t i = 0; i < ev.size(); ++i) {
            e.push_back(io::to_json(ev[i]));
            dev = std::max(dev, std::abs(ev[i] - diag[i]));
        }
        json j{{"class", cls.name()},
               {"N", sp_N},
               {"eigenvalues", e},
               {"max_deviation_from_diagonal", dev},
               {"heuristic", true},
               {"note", "residual charts are evidence only; no spectrum claim is certified"}};
        Outcome o{j};
        if (!sp_grid.empty()) {
            const auto axes = split(sp_grid, ',');
            if (axes.size() != 2) throw UsageError("--grid needs re0:re1:n,im0:im1:m");
            auto axis = [](const std::string& s) {
                const auto p = split(s, ':');
                if (p.size() != 3) throw UsageError("grid axis must be lo:hi:count");
                const double lo = std::stod(p[0]), hi = std::stod(p[1]);
                const auto n = std::stoul(p[2]);
                std::vector<double> v;
                for (std::size_t i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
                return v;
            };
            std::vector<std::complex<double>> grid;
            for (double re : axis(axes[0]))
                for (double im : axis(axes[1])) grid.emplace_back(re, im);
            std::vector<std::size_t> sizes;
            for (std::size_t N : cfg.ladder)
                if (N <= sp_N) sizes.push_back(N);
            if (sizes.empty()) sizes.push_back(sp_N);
            const auto pts = residual_map(cls, grid, sizes);
            std::ostringstream csv;
            io::write_residual_csv(csv, pts);
            o.csv = csv.str();
            o.result["residual_points"] = pts.size();
        }
        return o;
    };

    // report
    std::vector<std::string> rp_inputs;
    bool rp_four = false;
    std::string rp_d = "-2n+1", rp_alpha = "1/2";
    auto* report = app.add_subcommand("report", "Markdown summary of artifacts");
    report->add_option("inputs", rp_inputs, "JSON or CSV artifacts");
    report->add_flag("--four-class", rp_four, "include the four-class comparison table");
    report->add_option("--d", rp_d, "eigenvalue sequence for the table")->capture_default_str();
    report->add_option("--alpha", rp_alpha, "Laguerre parameter for the table")->capture_default_str();
    commands["report"] = [&] {
        Outcome o;
        if (rp_inputs.empty() && !rp_four) {
            o.text = "";
            return o;
        }
        std::ostringstream md;
        md << "# opspectra report\n";
        if (rp_four) {
            md << "\n## Four Laguerre operator classes (`exact`)\n\nd = " << load_seq(rp_d).describe()
               << ", alpha = " << rp_alpha << "\n\n"
               << four_class_table(load_seq(rp_d), parse_rational(rp_alpha));
        }
        for (const auto& path : rp_inputs) {
            const std::string body = read_file(path);
            if (ends_with(path, ".csv")) {
                md << "\n## " << std::filesystem::path(path).filename().string() << " (`numeric`)\n\n" << csv_chart(body);
                continue;
            }
            const json j = parse_json(body, path);
            const std::string cmd = j.value("command", std::string("artifact"));
            md << "\n## " << heading_for(cmd) << " (`" << badge_for(cmd) << "`)\n\nsource: "
               << std::filesystem::path(path).filename().string() << "\n\n| field | value |\n|---|---|\n";
            for (auto it = j.begin(); it != j.end(); ++it)
                if (!it.value().is_structured() && it.key() != "command")
                    md << "| " << it.key() << " | "
                       << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump()) << " |\n";
        }
        o.text = md.str();
        return o;
    };

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? kOk : kUsage;
    }

    if (horizon_flag) {
        cfg.horizon = *horizon_flag;
    } else if (const char* env = std::getenv("OPSPECTRA_HORIZON")) {
        try {
            cfg.horizon = std::stoul(env);
        } catch (const std::exception&) {
            err << "error: OPSPECTRA_HORIZON must be a non-negative integer\n";
            return kUsage;
        }
    }
    if (cfg.horizon < 8) {
        err << "error: horizon must be at least 8\n";
        return kUsage;
    }
    if (!ladder_text.empty()) {
        try {
            cfg.ladder = parse_ladder(ladder_text);
        } catch (const std::exception&) {
            err << "error: --ladder must be a comma-separated list of sizes\n";
            return kUsage;
        }
    }
    if (cfg.ladder.empty() || !std::is_sorted(cfg.ladder.begin(), cfg.ladder.end())) {
        err << "error: the truncation ladder must be non-empty and ascending\n";
        return kUsage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    Outcome o;
    try {
        o = commands.at(name)();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const BadParameter& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: malformed number (" << e.what() << ")\n";
        return kUsage;
    } catch (const Error& e) {
        err << "refused: " << e.what() << '\n';
        return kRefused;
    }

    std::string text;
    if (o.text) {
        text = *o.text;
    } else if (cfg.format == "csv") {
        if (!o.csv) {
            err << "error: " << name << " has no CSV form\n";
            return kUsage;
        }
        text = *o.csv;
    } else {
        json j = o.result;
        j["command"] = name;
        if (cfg.format == "human") {
            std::ostringstream os;
            render_human(j, "", os);
            text = os.str();
        } else {
            text = io::dump(j);
        }
    }
    if (cfg.out.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.out);
        if (!f) {
            err << "error: cannot write '" << cfg.out << "'\n";
            return kUsage;
        }
        f << text;
    }
    return o.status;
}

}  // namespace opspectra::cli
