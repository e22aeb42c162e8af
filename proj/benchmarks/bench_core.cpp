#include <benchmark/benchmark.h>

#include <random>

#include "ltc/coleman.hpp"

using namespace ltc;

namespace {

FieldElement random_element(const RingContext& R, std::mt19937_64& rng) {
    FieldElement x{};
    for (int i = 0; i < R.dim(); ++i) x.c[i] = rng() % R.mod();
    return x;
}

Series random_series(const RingContext& R, int D, std::mt19937_64& rng, bool zero_constant = false) {
    Series s(R, D);
    for (int i = zero_constant ? 1 : 0; i <= D; ++i) s.c[i] = random_element(R, rng);
    s.c[0] = zero_constant ? R.zero() : R.add(R.one(), R.scal(s.c[0], R.p()));
    s.prec = R.N();
    return s;
}

// p = 3 unless noted; the argument is the truncation degree
const Ctx& ctx3() {
    static Ctx c = RingContext::make(3, 16, 1, 1);
    return c;
}

void BM_SeriesMul(benchmark::State& st) {
    std::mt19937_64 rng(1);
    const int D = static_cast<int>(st.range(0));
    Series a = random_series(*ctx3(), D, rng), b = random_series(*ctx3(), D, rng);
    for (auto _ : st) benchmark::DoNotOptimize(mul(a, b));
    st.SetComplexityN(D);
}
BENCHMARK(BM_SeriesMul)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_SeriesCompose(benchmark::State& st) {
    std::mt19937_64 rng(2);
    const int D = static_cast<int>(st.range(0));
    Series g = random_series(*ctx3(), D, rng), h = random_series(*ctx3(), D, rng, true);
    for (auto _ : st) benchmark::DoNotOptimize(compose(g, h));
    st.SetComplexityN(D);
}
BENCHMARK(BM_SeriesCompose)->RangeMultiplier(2)->Range(64, 512)->Complexity();

void BM_IsoSeries(benchmark::State& st) {
    const int D = static_cast<int>(st.range(0));
    const Frame f = default_frame(*ctx3(), D);
    const FieldElement a = ctx3()->from_int(2);
    for (auto _ : st) benchmark::DoNotOptimize(iso_series(a, f, f, D));
}
BENCHMARK(BM_IsoSeries)->Arg(120)->Arg(360)->Arg(700);

void BM_NormOperator(benchmark::State& st) {
    std::mt19937_64 rng(3);
    const RingContext& R = *ctx3();
    const int D = static_cast<int>(st.range(0));
    const Frame f = default_frame(R, 3);
    Series h = random_series(R, D, rng);
    for (auto _ : st) benchmark::DoNotOptimize(norm_operator(f, h));
}
BENCHMARK(BM_NormOperator)->Arg(60)->Arg(120)->Arg(240);

// layer arithmetic and the Galois action at level m, p = 3 (degree 2 * 3^m)
void BM_LayerMul(benchmark::State& st) {
    const int m = static_cast<int>(st.range(0));
    Tower tw(cyclotomic_frame(*ctx3(), 3), m);
    const Layer& L = tw.layer(m);
    std::mt19937_64 rng(4);
    LayerElement x = L.zero(), y = L.zero();
    for (auto& a : x.c) a = random_element(*ctx3(), rng);
    for (auto& a : y.c) a = random_element(*ctx3(), rng);
    for (auto _ : st) benchmark::DoNotOptimize(L.mul(x, y));
}
BENCHMARK(BM_LayerMul)->DenseRange(0, 2);

void BM_GaloisAction(benchmark::State& st) {
    const int m = static_cast<int>(st.range(0));
    Tower tw(cyclotomic_frame(*ctx3(), 3), m);
    const Layer& L = tw.layer(m);
    const GalElt g = tw.group(m, false).generators().front();
    tw.action(m, false, g);  // build the cached matrix outside the loop
    std::mt19937_64 rng(5);
    LayerElement x = L.zero();
    for (auto& a : x.c) a = random_element(*ctx3(), rng);
    for (auto _ : st) benchmark::DoNotOptimize(tw.act(m, false, g, x));
}
BENCHMARK(BM_GaloisAction)->DenseRange(0, 2);

void BM_Pairing(benchmark::State& st) {
    const int m = static_cast<int>(st.range(0));
    Tower tw(cyclotomic_frame(*ctx3(), 3), m);
    const Layer& L = tw.layer(m);
    const TowerGroup& G = tw.group(m, false);
    auto chars = all_characters(G);
    const GalElt s = G.generators().front();
    LayerElement u = L.div(tw.act(m, false, s, L.omega()), L.omega());
    for (auto _ : st) benchmark::DoNotOptimize(pairing_eval(tw, m, u, chars.back()));
}
BENCHMARK(BM_Pairing)->DenseRange(0, 2);

void BM_ColemanRecover(benchmark::State& st) {
    const int m = static_cast<int>(st.range(0));
    Tower tw(cyclotomic_frame(*ctx3(), 3), m);
    const RingContext& R = *ctx3();
    NormCoherentSequence u =
        sequence_from_series(tw, cyclotomic_type_series(tw.frame(), R.from_int(2), tw.eval_degree(m)), m);
    for (auto _ : st) benchmark::DoNotOptimize(coleman_recover(tw, u));
}
BENCHMARK(BM_ColemanRecover)->DenseRange(0, 2);

}  // namespace

BENCHMARK_MAIN();
