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
 * @file spectralops.hpp
 * @brief Adjoints, closures, closure witnesses, approximate eigenvectors and
 *        truncation numerics for the four Laguerre operator classes.
 *
 * Every class has an upper-triangular matrix with diagonal d and the
 * separable form a_tk = w(t) phi(k) above the diagonal:
 *
 *   A  E_{L^a,d} in H(L~^{a+1})   w = (d_t - d_{t+1}) r_t   phi = 1/r_k
 *   B  E_{L^{a+1},d} in H(L~^a)   w = r_t                   phi = (d_k - d_{k-1})/r_k
 *   C  E_{L^a,d} in H(L^{a+1})    w = d_t - d_{t+1}         phi = 1
 *   D  E_{L^{a+1},d} in H(L^a)    w = 1                     phi = d_k - d_{k-1}
 *
 * with r the Laguerre norms of the basis and d_{-1} = 0. Exact answers use
 * Surd arithmetic; numeric probes use doubles and are labelled as such.
 */

#ifndef OPSPECTRA_SPECTRALOPS_HPP
#define OPSPECTRA_SPECTRALOPS_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opspectra/matrixrep.hpp"
#include "opspectra/thinmat.hpp"

namespace opspectra {

enum class OpVariant { A, B, C, D };
std::string to_string(OpVariant v);
OpVariant parse_variant(const std::string& text);

class OperatorClass {
public:
    /// Throws BadParameter outside a > 0 (A) or a > -1 (B, C, D).
    OperatorClass(OpVariant variant, Rational alpha, SequenceSpec d);

    OpVariant variant() const { return variant_; }
    const Rational& alpha() const { return alpha_; }
    const SequenceSpec& d() const { return d_; }
    PolySeq p() const;
    PolySeq q() const;
    bool normalized() const { return variant_ == OpVariant::A || variant_ == OpVariant::B; }
    std::string name() const;

    Surd w(std::size_t t) const;
    Surd phi(std::size_t k) const;
    /// phi as a closed form in k; throws DomainError for opaque d.
    ClosedForm phi_form() const;
    Surd entry(std::size_t t, std::size_t k) const;

    std::complex<double> w_complex(std::size_t t) const;
    std::complex<double> phi_complex(std::size_t k) const;
    std::complex<double> entry_complex(std::size_t t, std::size_t k) const;

    /// The matrix through matrix_rep, for cross-checks and classification.
    StructuredMatrix matrix(std::size_t horizon = kDefaultHorizon) const;

private:
    Surd r(std::size_t k) const;
    double r_double(std::size_t k) const;
    std::optional<Rational> beta() const;

    OpVariant variant_;
    Rational alpha_;
    SequenceSpec d_;
};

// ------------------------------------------------------------------ adjoint

enum class DomainVerdict { InDomain, NotInDomain, Undecidable };
std::string to_string(DomainVerdict v);

struct DomainCertificate {
    DomainVerdict verdict = DomainVerdict::Undecidable;
    /// The coefficient sequence of T* g when it could be formed.
    std::optional<ClosedForm> inner;
    /// (N, sum_{k<=N} |inner_k|^2), numeric evidence only.
    std::vector<std::pair<std::size_t, double>> partial_sums;
    std::string reason;
};

/// g in D(T*) iff the sequence g_k conj(d_k) + sum_{t<k} conj(a_tk) g_t is in
/// l2. Finite g give an explicit tail conj(phi_k) sum_t conj(w_t) g_t.
DomainCertificate adjoint_domain_test(const OperatorClass& cls, const HqVector& g);

/// T* g for finite g; throws DomainError when g is not in D(T*).
HqVector adjoint_apply(const OperatorClass& cls, const HqVector& g);

// ------------------------------------------------------------------ closure

/// Class A admits two equal forms: with ell = sum_k g_k/r_k, or with the
/// tail sum over k > s.
enum class ClosureForm { WithLimit, TailSum };

/// Whether the closure formula of the class applies: always for A, an l2
/// condition on phi for B and D, never for C.
Verdict closure_formula_applies(const OperatorClass& cls);

/// Closure of T at a finite g. Throws PreconditionError when the class
/// formula does not apply.
HqVector closure_apply(const OperatorClass& cls, const HqVector& g, ClosureForm form = ClosureForm::WithLimit);

/// The m^a specialization of class A: g_s(-2s+1) + 2 r_s (ell - sum_{k<=s} g_k/r_k).
HqVector closure_apply_m_alpha(const Rational& alpha, const HqVector& g);

/// Closable from the closure formula, else from the thin/blocked criterion.
Closability class_closability(const OperatorClass& cls, std::size_t horizon = 24);

// --------------------------------------------------- closure witnesses (D)

inline const std::vector<std::size_t> kLadder{64, 128, 256, 512};

/// f and g for class D with the approximating family
/// h_{n,u} = f_u + 1/(n^2 2^n (|d_u - d_{u-1}| + |d_u| + 1)) for u <= n.
/// Numeric work uses f, d and g up to `cutoff`.
class ClosureWitness {
public:
    ClosureWitness(SequenceSpec d, HqVector f, HqVector g, std::size_t cutoff = 4096);
    /// g known numerically only; entries beyond the vector read as 0.
    ClosureWitness(SequenceSpec d, HqVector f, std::vector<std::complex<double>> g);

    const SequenceSpec& d() const { return d_; }
    const HqVector& f() const { return f_; }
    const std::optional<HqVector>& g_exact() const { return g_exact_; }
    std::size_t cutoff() const { return cutoff_; }
    std::complex<double> g_at(std::size_t k) const { return k < g_.size() ? g_[k] : std::complex<double>(); }

    /// h_{n,u}; zero for u > n. n >= 1.
    std::complex<double> h(std::size_t n, std::size_t u) const;
    /// t_{n,0} .. t_{n,n}, the coordinates of T h_n.
    std::vector<std::complex<double>> t_row(std::size_t n) const;
    /// ||T h_n - g||^2 with the tail of g summed up to the cutoff.
    double defect(std::size_t n) const;

private:
    void tabulate();

    SequenceSpec d_;
    HqVector f_;
    std::optional<HqVector> g_exact_;
    std::size_t cutoff_;
    std::vector<std::complex<double>> g_;
    std::vector<std::complex<double>> fv_, dv_, ddv_;
};

struct ConditionCheck {
    std::string name;
    bool passed = false;
    /// Value at the end of the ladder (numeric conditions).
    double value = 0;
    std::string detail;
};

struct Thm6Report {
    bool b_exact = false;
    std::optional<std::size_t> b_first_failure;
    std::vector<ConditionCheck> numeric;
    bool all_passed() const;
};

/// Checks g_k = g_0 - f_0 d_0 + f_k d_k - sum_{u=1}^k f_u (d_u - d_{u-1})
/// exactly for k <= horizon, then (a2)-(a4) numerically along h.
Thm6Report thm6_necessary_check(const ClosureWitness& w, std::size_t horizon = kDefaultHorizon,
                                double tol = 1e-9);

enum class Thm7Status { Accepted, RejectedI, RejectedII, RejectedIII, Undecidable };
std::string to_string(Thm7Status s);

struct Thm7Result {
    Thm7Status status = Thm7Status::Undecidable;
    /// S exactly for finite f, numerically otherwise.
    std::optional<Surd> S_exact;
    std::complex<double> S;
    /// g exactly, for finite f.
    std::optional<HqVector> g;
    /// g_0 .. g_cutoff.
    std::vector<std::complex<double>> g_numeric;
    /// (n, ||T h_n - g||^2) along the ladder.
    std::vector<std::pair<std::size_t, double>> convergence;
    bool converged = false;
    std::string detail;
};

/// Class D sufficient conditions: (i) S = sum_{u>=1} f_u (d_u - d_{u-1})
/// converges, (ii) g in l2, (iii) (n+1)|f_n d_n - g_n|^2 -> 0.
Thm7Result thm7_sufficient_construct(const SequenceSpec& d, const HqVector& f, double tol = 1e-9);

// ----------------------------------------------------- eigen probes (D)

struct ApproxEigen {
    /// g_0 .. g_K with g_K = 1.
    std::vector<Surd> g;
    /// |d_K - lambda|, left uncancelled by the finite seed.
    double boundary_defect = 0;
    /// (N, ||(T_N - lambda) g|| / ||g||).
    std::vector<std::pair<std::size_t, double>> residuals;
};

/// g_s = -sum_{k=s+1}^K (d_k - d_{k-1}) g_k / (d_s - lambda), g_K = 1.
/// Throws DivisionByZero when lambda = d_s for some s < K.
ApproxEigen approx_eigen_recursion(const SequenceSpec& d, const ExactScalar& lambda, std::size_t K,
                                   const std::vector<std::size_t>& ladder = kLadder);

/// ||(T - lambda) 1_{[0..N]}|| / ||1_{[0..N]}|| computed from the class D
/// matrix entries.
double prefix_indicator_residual(const SequenceSpec& d, std::complex<double> lambda, std::size_t N);

// ---------------------------------------------------------- truncations

/// N x N top-left block in double precision.
Eigen::MatrixXcd truncation(const OperatorClass& cls, std::size_t N);
/// Eigenvalues of the truncation, sorted by real then imaginary part.
std::vector<std::complex<double>> truncation_spectrum(const OperatorClass& cls, std::size_t N);

struct ResidualPoint {
    std::complex<double> lambda;
    std::size_t N = 0;
    double sigma_min = 0;
};

/// Smallest singular value of T_N - lambda over a grid. Heuristic evidence
/// only: truncations never certify continuous spectrum.
std::vector<ResidualPoint> residual_map(const OperatorClass& cls, const std::vector<std::complex<double>>& grid,
                                        const std::vector<std::size_t>& sizes);

}  // namespace opspectra

#endif  // OPSPECTRA_SPECTRALOPS_HPP
