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

#include <benchmark/benchmark.h>

#include "opspectra/eigensynth.hpp"
#include "opspectra/spectralops.hpp"
#include "opspectra/thinmat.hpp"

namespace {

using namespace opspectra;

const SequenceSpec& laguerre_diagonal() {
    static const SequenceSpec d = SequenceSpec::parse("-2n+1");
    return d;
}

void BM_Synthesize(benchmark::State& state) {
    const EigenPair pair{PolySeq::laguerre(Rational(1, 2)), SequenceSpec::parse("n^2+1/(n+1)")};
    const auto K = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto op = synthesize(pair, K);
        benchmark::DoNotOptimize(op.coeff(K));
    }
}
BENCHMARK(BM_Synthesize)->Arg(8)->Arg(16)->Arg(24);

void BM_MatrixRep(benchmark::State& state) {
    const auto H = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto A = matrix_rep(PolySeq::laguerre(Rational(1, 2)), laguerre_diagonal(), PolySeq::laguerre(Rational(3, 2)),
                            true, H);
        benchmark::DoNotOptimize(A.entry(0, H));
    }
}
BENCHMARK(BM_MatrixRep)->Arg(16)->Arg(32)->Arg(64);

void BM_Classify(benchmark::State& state) {
    const auto A = matrix_rep(PolySeq::scaled_chebyshev_t(), laguerre_diagonal(), PolySeq::chebyshev_u(), false, 32);
    for (auto _ : state) {
        auto c = classify(A, 32);
        benchmark::DoNotOptimize(c.classes.size());
    }
}
BENCHMARK(BM_Classify);

void BM_AdjointDomain(benchmark::State& state) {
    const OperatorClass cls(OpVariant::A, Rational(1, 2), laguerre_diagonal());
    const HqVector g = HqVector::unit(5, {}, true);
    for (auto _ : state) benchmark::DoNotOptimize(adjoint_domain_test(cls, g).verdict);
}
BENCHMARK(BM_AdjointDomain);

void BM_TruncationSpectrum(benchmark::State& state) {
    const OperatorClass cls(OpVariant::D, Rational(1, 2), laguerre_diagonal());
    const auto N = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(truncation_spectrum(cls, N));
}
BENCHMARK(BM_TruncationSpectrum)->Arg(32)->Arg(128);

void BM_ClosureDefect(benchmark::State& state) {
    const ClosureWitness w(laguerre_diagonal(), HqVector::finite({Surd(1), Surd(2), Surd(3)}),
                           HqVector::finite({Surd(-8), Surd(-8), Surd(-15)}), 1024);
    for (auto _ : state) benchmark::DoNotOptimize(w.defect(512));
}
BENCHMARK(BM_ClosureDefect);

}  // namespace

BENCHMARK_MAIN();
