#include <benchmark/benchmark.h>

#include "qw/algebra.hpp"
#include "qw/stages.hpp"

namespace {

qw::Polynomial hf2() { return qw::Polynomial({{"empty", 0}, {"pair", 2}}); }

qw::RuleSet aip() { return qw::RuleSet{{}, {{qw::FamilyKind::AllImagePreserving, 0}}}; }

// node(x, y) = node(y, x) spelled out as an explicit equation.
qw::RuleSet explicit_swap() {
    qw::RuleSet r;
    r.explicitEquations.push_back(qw::Equation{2, 1, 1, {0, 1}, {1, 0}});
    return r;
}

void run_stages(benchmark::State& state, const qw::Polynomial& poly, const qw::RuleSet& rules, qw::Kernel kernel) {
    qw::BuildOptions opt;
    opt.kernel = kernel;
    const auto depth = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto sf = qw::build_stages(poly, rules, depth, opt);
        benchmark::DoNotOptimize(sf.size());
    }
}

void BM_ClosedFormSerial(benchmark::State& s) { run_stages(s, hf2(), aip(), qw::Kernel::Serial); }
void BM_ClosedFormParallel(benchmark::State& s) { run_stages(s, hf2(), aip(), qw::Kernel::Parallel); }
void BM_ExplicitSerial(benchmark::State& s) { run_stages(s, hf2(), explicit_swap(), qw::Kernel::Serial); }
void BM_ExplicitParallel(benchmark::State& s) { run_stages(s, hf2(), explicit_swap(), qw::Kernel::Parallel); }

void BM_CountHomomorphisms(benchmark::State& state) {
    const auto poly = hf2();
    const auto sf = qw::build_stages(poly, aip(), 3);
    // pair(x, y) = x or y on {0, 1}, with empty = 0.
    const qw::FiniteAlgebra alg(poly, 2, {{0}, {0, 1, 1, 1}});
    for (auto _ : state) benchmark::DoNotOptimize(qw::count_homomorphisms(sf, alg, 2));
}

}  // namespace

BENCHMARK(BM_ClosedFormSerial)->Arg(4)->Arg(5);
BENCHMARK(BM_ClosedFormParallel)->Arg(4)->Arg(5);
BENCHMARK(BM_ExplicitSerial)->Arg(4)->Arg(5);
BENCHMARK(BM_ExplicitParallel)->Arg(4)->Arg(5);
BENCHMARK(BM_CountHomomorphisms);

BENCHMARK_MAIN();
