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

/**
 * @file serialize.hpp
 * @brief JSON and CSV forms of the library objects and reports.
 *
 * Exact values round-trip: a scalar is [re_num, re_den, im_num, im_den] with
 * integers written as JSON numbers when they fit in 64 bits and as decimal
 * strings otherwise. Reports are written with sorted keys so equal inputs
 * give byte-identical output.
 */

#ifndef OPSPECTRA_SERIALIZE_HPP
#define OPSPECTRA_SERIALIZE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "opspectra/eigensynth.hpp"
#include "opspectra/formaldiff.hpp"
#include "opspectra/matrixrep.hpp"
#include "opspectra/shiftchar.hpp"
#include "opspectra/spectralops.hpp"
#include "opspectra/thinmat.hpp"

namespace opspectra::io {

using nlohmann::json;

json to_json(const Rational& q);
Rational rational_from_json(const json& j);
json to_json(const ExactScalar& z);
ExactScalar scalar_from_json(const json& j);
/// {"terms": [[radicand, scalar], ...], "text": ...}.
json to_json(const Surd& s);
Surd surd_from_json(const json& j);

/// {"coeffs": [scalar, ...]} in increasing degree.
json to_json(const Poly& p);
Poly poly_from_json(const json& j);

/// {"tag", "text", tag fields}; "text" alone is enough to read it back.
json to_json(const SequenceSpec& s);
SequenceSpec sequence_from_json(const json& j);

/// {"kind":"laguerre","alpha":"1/2"}, {"kind":"usertable","polys":[...]}.
json to_json(const PolySeq& p);
PolySeq family_from_json(const json& j);
/// A JSON object or the text form accepted by PolySeq::parse.
PolySeq family_from_text_or_json(const std::string& text);

/// {"M": [M_0..M_upto], "order": r|null, "provenance", "label"}.
json to_json(const FormalDiffOp& op, std::size_t upto);
FormalDiffOp operator_from_json(const json& j);

json to_json(const HqVector& v);
HqVector vector_from_json(const json& j);

/// {"entries": [[j, k, value], ...] (non-zero, k <= horizon), "row_tails": [...]}.
json to_json(const StructuredMatrix& A, std::size_t rows = 8);

json to_json(const SolveOutcome& s);
json to_json(const PerturbationReport& r);
json to_json(const Theorem1Verdict& v);
json to_json(const Classification& c);
json to_json(const BlockedReport& b);
json to_json(const DomainCertificate& c);
json to_json(const Thm6Report& r);
json to_json(const Thm7Result& r);
json to_json(const ApproxEigen& a);
json to_json(std::complex<double> z);

/// Deterministic text: two-space indent, trailing newline.
std::string dump(const json& j);

void write_residual_csv(std::ostream& os, const std::vector<ResidualPoint>& pts);
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& M);
void write_curve_csv(std::ostream& os, const std::string& header,
                     const std::vector<std::pair<std::size_t, double>>& curve);

}  // namespace opspectra::io

#endif  // OPSPECTRA_SERIALIZE_HPP
