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
 * @file matrixrep.hpp
 * @brief Coefficient-space model H(Q) and exact matrices of E_{p,d} in a
 *        basis q or its orthonormal version.
 *
 * Column k of the matrix holds the coordinates of E_{p,d}(q_k); since both
 * sequences are graded the matrix is upper triangular and every column is
 * finitely supported. Entries are computed exactly for columns up to a
 * horizon. Above the diagonal the catalog matrices have the separable form
 *
 *     a_jk = sum_t w_t(j) * phi_t(k),   k > j,
 *
 * which is fitted against the exact entries and then describes every row as
 * a closed-form sequence. Matrices without such a pattern stay usable for
 * finite work but their rows are opaque.
 */

#ifndef OPSPECTRA_MATRIXREP_HPP
#define OPSPECTRA_MATRIXREP_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "opspectra/families.hpp"
#include "opspectra/sequence.hpp"

namespace opspectra {

/// g = sum_j g_j Q_j with Q = q or the orthonormal q~.
struct HqVector {
    std::string basis;
    bool normalized = false;
    SequenceSpec coeffs;

    static HqVector finite(std::vector<Surd> c, std::string basis = {}, bool normalized = false);
    /// The basic vector Q_k.
    static HqVector unit(std::size_t k, std::string basis = {}, bool normalized = false);

    /// True when only finitely many coordinates are non-zero.
    bool is_finite() const;
    /// Coordinates up to the last non-zero one; finite vectors only.
    std::vector<Surd> entries() const;
    Surd at(std::size_t j) const { return coeffs.eval(j); }
    Verdict l2() const { return l2_membership(coeffs); }
};

/// Coordinates of f in the basis q (unnormalized).
HqVector embed(const Poly& f, const PolySeq& q);
/// sum_j g_j q_j for a finite, unnormalized vector.
Poly to_poly(const HqVector& g, const PolySeq& q);

struct MatrixProvenance {
    PolySeq p;
    SequenceSpec d;
    PolySeq q;
    bool normalized = false;
};

/// a_jj = diag_j, a_jk = sum_t w_t(j) phi_t(k) for k > j, zero below.
struct RowPattern {
    std::string rule;
    ClosedForm diag;
    std::vector<std::pair<ClosedForm, ClosedForm>> terms;

    Surd entry(std::size_t j, std::size_t k) const;
    std::complex<double> entry_complex(std::size_t j, std::size_t k) const;
    /// sum_t w_t(j) phi_t as a sequence in k; equals row j for k > j.
    ClosedForm tail(std::size_t j) const;
};

/// Row j as a sequence in k: exact entries for k <= j, then the tail.
struct RowSpec {
    ClosedForm row;
    bool opaque = true;
    std::string rule;
};

class StructuredMatrix {
public:
    StructuredMatrix(MatrixProvenance prov, std::size_t horizon, std::vector<std::vector<Surd>> columns,
                     std::optional<RowPattern> pattern);

    const MatrixProvenance& provenance() const { return prov_; }
    /// Columns 0..horizon are known exactly.
    std::size_t horizon() const { return horizon_; }
    /// Rows 0..k of column k.
    const std::vector<Surd>& column(std::size_t k) const;
    /// Exact entry; beyond the horizon only through the verified pattern.
    Surd entry(std::size_t j, std::size_t k) const;
    std::complex<double> entry_complex(std::size_t j, std::size_t k) const;
    const std::optional<RowPattern>& pattern() const { return pattern_; }
    RowSpec row_spec(std::size_t j) const;

private:
    MatrixProvenance prov_;
    std::size_t horizon_;
    std::vector<std::vector<Surd>> cols_;
    std::optional<RowPattern> pattern_;
};

/// Exact matrix of E_{p,d} in H(q) (or H(q~) when normalized, which needs a
/// Laguerre q). The row pattern is chosen from the catalog (constant row
/// tails, the difference sequence of d, alternating-parity tails, each
/// optionally weighted by norm ratios) and kept only when it reproduces every
/// exact entry up to the horizon.
StructuredMatrix matrix_rep(const PolySeq& p, const SequenceSpec& d, const PolySeq& q, bool normalized = false,
                            std::size_t horizon = kDefaultHorizon);

/// Image of the basic vector k.
HqVector column_action(const StructuredMatrix& A, std::size_t k);
/// A v - d_n v for v = p_n in the coordinates of A; exactly zero when the
/// matrix is right.
std::vector<Surd> point_eigencheck(const StructuredMatrix& A, std::size_t n);
/// Top-left N x N block in double precision; N <= horizon.
Eigen::MatrixXcd truncate(const StructuredMatrix& A, std::size_t N);
/// A row whose tail is a non-zero constant, the witness that the operator is
/// unbounded (column k does not shrink in that row as k grows).
std::optional<std::size_t> constant_tail_row(const StructuredMatrix& A);

}  // namespace opspectra

#endif  // OPSPECTRA_MATRIXREP_HPP
