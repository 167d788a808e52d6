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
 * @file thinmat.hpp
 * @brief Row equivalence modulo l2, the classification (N_i, k_i^0, m) of a
 *        matrix, its thinning, and the thin/blocked closability criterion.
 *
 * Two rows a, b are equivalent when a - mu b is square-summable for some
 * non-zero mu. For a matrix with a row pattern a_jk = sum_t w_t(j) phi_t(k)
 * the class of row j is decided by the weights of the profiles phi_t that
 * are not in l2, so the partition is computed for every j at once: rows are
 * grouped by residue modulo a period of the weights, and a class is infinite
 * exactly when it owns a residue. Weights with real positive bases on a
 * residue vanish only finitely often; those exceptional rows are located up
 * to the horizon.
 */

#ifndef OPSPECTRA_THINMAT_HPP
#define OPSPECTRA_THINMAT_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opspectra/matrixrep.hpp"

namespace opspectra {

enum class EquivKind { Equivalent, NotEquivalent, Undecidable };
std::string to_string(EquivKind k);

struct RowEquivalence {
    EquivKind kind = EquivKind::Undecidable;
    /// a ~ mu b; absent when both rows are in l2 (any mu works).
    std::optional<Surd> mu;
};

RowEquivalence row_equiv(const RowSpec& a, const RowSpec& b);

/// One part N_i, i >= 1.
struct RowClass {
    std::size_t head = 0;
    /// Members j >= tail_from are the rows in `residues` mod period.
    std::vector<long> residues;
    /// Members below tail_from.
    std::vector<std::size_t> finite_members;
    /// Rows in `residues` that are l2 rows after all (found up to the horizon).
    std::vector<std::size_t> exceptions;
    /// Index of the profile used for m_j = W(j)/W(head).
    std::size_t pivot = 0;
    Surd pivot_head;
    std::string rule;

    bool infinite() const { return !residues.empty(); }
};

class Classification {
public:
    /// Parts i >= 1, ordered by head.
    std::vector<RowClass> classes;
    long period = 1;
    std::size_t tail_from = 0;
    std::size_t horizon = 0;
    /// Residues whose rows are l2 (part N_0) from tail_from on.
    std::vector<long> l2_residues;
    /// Non-l2 profiles after dropping l2 profiles and merging dependent ones,
    /// with their row weights.
    std::vector<std::pair<ClosedForm, ClosedForm>> reduced;

    /// 0 for N_0, i for classes[i-1].
    std::size_t part_of(std::size_t j) const;
    bool has_l2_rows() const;
    std::vector<std::size_t> members(std::size_t part, std::size_t upto) const;
    /// m_j = 0 on N_0, m_head = 1.
    Surd m(std::size_t j) const;
    /// m as a single closed form when the period is 1 or 2.
    std::optional<ClosedForm> m_form() const;
    /// m_j restricted to residue r of class i, local index n with j = period*n + r.
    ClosedForm m_on_residue(std::size_t class_index, long residue) const;
    std::size_t head_of(std::size_t j) const;
    /// b_jk = a_jk - m_j a_{head(j), k}.
    Surd thinning(std::size_t j, std::size_t k) const;
    std::complex<double> thinning_complex(std::size_t j, std::size_t k) const;
    ClosedForm thinning_row(std::size_t j) const;
    const StructuredMatrix& matrix() const { return *A_; }

private:
    friend Classification classify(const StructuredMatrix& A, std::size_t horizon);
    std::shared_ptr<const StructuredMatrix> A_;
};

/// Throws ClassificationRefused for opaque rows or undecidable row
/// relations.
Classification classify(const StructuredMatrix& A, std::size_t horizon = kDefaultHorizon);

/// I = {0}, or every N_i (i >= 1) infinite with m restricted to N_i not in
/// l2. Throws ThinUndecidable when some l2 test is undecidable.
bool is_thin(const Classification& c);

struct BlockedReport {
    bool blocked = false;
    /// Only one part, so the condition holds trivially.
    bool vacuous = false;
    /// False when the symbolic part of the check could not be carried out.
    bool certified = true;
    std::string detail;
};
BlockedReport is_blocked(const Classification& c);

enum class Closability { Closable, NotClosable, Unknown };
std::string to_string(Closability v);

/// Thin gives Closable; blocked and not thin gives NotClosable.
Closability closability_verdict(const Classification& c);
/// Classifies first; refusals give Unknown.
Closability closability_verdict(const StructuredMatrix& A, std::size_t horizon = kDefaultHorizon);

struct RelationReport {
    std::size_t checked = 0;
    double max_residual = 0;
    /// Exact verdict when every input is exact.
    std::optional<bool> exact_zero;
    std::optional<std::size_t> first_failure;
};
/// y_t = y_{k_i^0} m_t + (V x)_t for t <= N, with V the thinning. x finite.
RelationReport graph_closure_relation(const Classification& c, const HqVector& x, const HqVector& y, std::size_t N);

struct NonContinuityWitness {
    std::size_t head = 0;
    /// (n, ||h^(n)||) along the ladder.
    std::vector<std::pair<std::size_t, double>> norms;
    /// (T h^(N))_head.
    double value_at_head = 0;
    bool holds = false;
};
/// h_t = conj(a_{k t})/s_n for the first non-l2 head k: ||h|| -> 0 while
/// (T h)_k = 1. Absent when I = {0}.
std::optional<NonContinuityWitness> noncontinuity_witness(const Classification& c, std::size_t N = 512,
                                                          double tol = 1e-9);

}  // namespace opspectra

#endif  // OPSPECTRA_THINMAT_HPP
