#include "tdesign/codes.hpp"
#include "tdesign/designs.hpp"
#include "tdesign/gf.hpp"
#include "tdesign/oa.hpp"
#include "tdesign/rules1d.hpp"
#include "tdesign/verify.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

namespace {

void BM_FieldMul(benchmark::State& state) {
    const auto f = tdesign::gf::Field::make(3, 4);
    std::int64_t a = 1;
    std::int64_t b = 7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.mul(a, b));
        a = a % 80 + 1;
        b = b % 80 + 1;
    }
}
BENCHMARK(BM_FieldMul);

void BM_FieldInv(benchmark::State& state) {
    const auto f = tdesign::gf::Field::make(3, 4);
    std::int64_t a = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.inv(a));
        a = a % 80 + 1;
    }
}
BENCHMARK(BM_FieldInv);

void BM_CodewordEnumeration(benchmark::State& state) {
    const auto g = tdesign::codes::trace_code_generators(3, 2, 5);
    for (auto _ : state) {
        tdesign::codes::CodewordEnumerator en(g);
        std::vector<std::int64_t> row;
        std::uint64_t seen = 0;
        while (en.next(row)) ++seen;
        benchmark::DoNotOptimize(seen);
    }
}
BENCHMARK(BM_CodewordEnumeration);

void BM_StrengthLinear(benchmark::State& state) {
    const auto g = tdesign::codes::trace_code_generators(3, 2, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tdesign::oa::verify_strength_linear(g, 5));
    }
}
BENCHMARK(BM_StrengthLinear);

void BM_StrengthExhaustive(benchmark::State& state) {
    const auto a =
        tdesign::oa::from_generator(tdesign::codes::trace_code_generators(3, 2, 5));
    for (auto _ : state) {
        benchmark::DoNotOptimize(tdesign::oa::verify_strength_exhaustive(a, 5));
    }
}
BENCHMARK(BM_StrengthExhaustive);

void BM_FactoredMoment(benchmark::State& state) {
    auto array = std::make_shared<tdesign::oa::OrthogonalArray>(
        tdesign::oa::from_generator(tdesign::codes::trace_code_generators(3, 2, 5)));
    tdesign::oa::certify(*array, 5);
    const auto design =
        tdesign::designs::reduce_by_oa(tdesign::rules1d::chebyshev_rule(3), array);
    const std::vector<int> exponents = {2, 1, 0, 0, 1, 0, 0, 0, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(tdesign::verify::design_moment(design, exponents));
    }
}
BENCHMARK(BM_FactoredMoment);

void BM_VerifyDegree5(benchmark::State& state) {
    auto array = std::make_shared<tdesign::oa::OrthogonalArray>(
        tdesign::oa::from_generator(tdesign::codes::trace_code_generators(3, 2, 5)));
    tdesign::oa::certify(*array, 5);
    const auto design =
        tdesign::designs::reduce_by_oa(tdesign::rules1d::chebyshev_rule(3), array);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            tdesign::verify::verify_design(design, 5, {1e-12, 1e-12}));
    }
}
BENCHMARK(BM_VerifyDegree5);

}  // namespace

BENCHMARK_MAIN();
