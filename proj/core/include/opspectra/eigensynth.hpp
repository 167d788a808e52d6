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
 * @file eigensynth.hpp
 * @brief Synthesis of eta from (p, d), eigenvalue bookkeeping and the
 *        existence / uniqueness analysis of polynomial eigenfunctions.
 *
 * Conventions: lambda_0 = 0 and M_0 = d_0, so eigen-comparisons use d_n - d_0.
 */

#ifndef OPSPECTRA_EIGENSYNTH_HPP
#define OPSPECTRA_EIGENSYNTH_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "opspectra/families.hpp"
#include "opspectra/formaldiff.hpp"
#include "opspectra/sequence.hpp"

namespace opspectra {

struct EigenPair {
    PolySeq p;
    SequenceSpec d;
};

/// d_n != 0 for n <= horizon (DegenerateEigenvalue) and d not constant on
/// 0..horizon (BadParameter).
void validate(const EigenPair& pair, std::size_t horizon);

/// The unique eta with eta p_n = d_n p_n; M_0..M_K are computed eagerly.
FormalDiffOp synthesize(const EigenPair& pair, std::size_t K);

/// lambda_n = sum_{r=1}^n m_{rr} n!/(n-r)!; lambda_0 = 0.
ExactScalar lemma_ks_lambda(const FormalDiffOp& op, std::size_t n);

/// d_n = M_0 + lambda_n. Polynomial in n for finite-order operators,
/// otherwise an exact table up to `horizon`.
SequenceSpec implied_eigenvalues(const FormalDiffOp& op, std::size_t horizon = kDefaultHorizon);

struct SolveOutcome {
    enum class Kind { Solution, NoSolution, NonUnique };
    Kind kind = Kind::Solution;
    std::size_t n = 0;
    /// Monic p_n = x^n + q_{n-1} (Solution, or the particular solution of NonUnique).
    Poly p;
    Poly correction;
    std::vector<ExactScalar> alphas;
    /// beta_j; free indices carry 0.
    std::vector<ExactScalar> betas;
    std::size_t witness = 0;
    ExactScalar witness_alpha;
    std::vector<std::size_t> free_indices;
};
std::string to_string(SolveOutcome::Kind k);

/// Solves eta p_n = d_n p_n given eigenfunctions p_0..p_{n-1}. Throws
/// IncompatibleEigenvalue(n) when d_n - d_0 != lambda_n and
/// PreconditionError when `prior` does not consist of eigenfunctions.
SolveOutcome eigen_solve(const FormalDiffOp& op, const SequenceSpec& d, std::size_t n,
                         const std::vector<Poly>& prior);

/// eigen_solve for n = 0..upto, feeding each particular solution forward and
/// stopping after the first NoSolution.
std::vector<SolveOutcome> eigen_solve_all(const FormalDiffOp& op, const SequenceSpec& d, std::size_t upto);

struct RecursionCheck {
    bool ok() const { return failing.empty(); }
    /// Labels "a".."e" of the coefficient equations that fail, plus
    /// "precondition" when d_n - d_0 = -M_0 and "M0" when M_0 != d_0.
    std::vector<std::string> failing;
};

/// Coefficient-wise form of eta p_n = d_n p_n: (a) x^n, (b) x^{n-1},
/// (c) x^r for 2 <= r <= n-2, (d) x^1, (e) x^0.
RecursionCheck expanded_recursion_check(const FormalDiffOp& op, const EigenPair& pair, std::size_t n);

enum class CounterexampleVariant { Abstract, Remark4 };
/// M_0 = 4/3, M_1 = -x/3, M_2 = -x, M_3 = 0 and M_4 = c x^4 - 3x with c = 1/72
/// (Abstract) or c = 12 (Remark4).
FormalDiffOp counterexample_operator(CounterexampleVariant v = CounterexampleVariant::Abstract);

struct PerturbationReport {
    std::size_t first_index = 0;
    /// m~_{jj} - m_{jj} for j = 0..horizon, by the diagonal recursion.
    std::vector<ExactScalar> by_recursion;
    /// The same differences from re-synthesizing with d'.
    std::vector<ExactScalar> by_resynthesis;
    bool agree = false;
    /// Indices >= first_index where the difference vanishes.
    std::vector<std::size_t> vanishing;
};

/// Throws NoPerturbation when d' = d on 0..horizon.
PerturbationReport perturbation_diagonal(const EigenPair& pair, const SequenceSpec& d_prime,
                                         std::size_t horizon = 12);

}  // namespace opspectra

#endif  // OPSPECTRA_EIGENSYNTH_HPP
