#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "kbo/counting.hpp"
#include "kbo/encodings.hpp"
#include "kbo/lia.hpp"
#include "kbo/oracle.hpp"
#include "kbo/solver.hpp"

using namespace kbo;

namespace {

const KboParams& sig1() {
  static const KboParams p = load_signature("symbol g 2 1\nsymbol a 0 1\nprecedence g > a\n");
  return p;
}

const KboParams& sig2() {
  static const KboParams p = load_signature(
      "symbol h 2 1\nsymbol g 1 1\nsymbol s 1 1\nsymbol c 0 1\nprecedence h > g > s > c\n");
  return p;
}

void BM_Compare(benchmark::State& state) {
  const auto& p = sig2();
  const auto terms = enum_terms(p, {static_cast<Weight>(state.range(0)), 0});
  std::mt19937_64 rng(1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs(1024);
  for (auto& [i, j] : pairs) {
    i = rng() % terms.size();
    j = rng() % terms.size();
  }
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& [i, j] = pairs[k++ & 1023];
    benchmark::DoNotOptimize(kbo_compare(p, terms[i], terms[j]));
  }
}
BENCHMARK(BM_Compare)->Arg(5)->Arg(7);

void BM_Tnt(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tnt(8, state.range(0), sig2()));
}
BENCHMARK(BM_Tnt)->Arg(12)->Arg(40)->Arg(200);

void BM_AtLeast(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(at_least(state.range(0), sig1(), lin_var("x")));
}
BENCHMARK(BM_AtLeast)->Arg(2)->Arg(6);

void BM_Solve(benchmark::State& state) {
  static const char* formulas[] = {
      "g(x,y) >w g(y,z) & !(x = y)",
      "g(a,g(u,a)) > g(x,g(a,y))",
      "x >lex y & y >lex z",
      "g(x,x) > y & y > g(a,x) & !(y = g(x,a))",
  };
  const auto& p = sig1();
  const Formula f = parse_formula(formulas[state.range(0)], p);
  for (auto _ : state) benchmark::DoNotOptimize(solve(f, p).sat);
  state.SetLabel(formulas[state.range(0)]);
}
BENCHMARK(BM_Solve)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

// Strict chain x1 > ... > x(n+1) over n+2 constants.
void BM_ConstantsChain(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::string sig, prec = "precedence";
  for (std::size_t i = n + 2; i >= 1; --i) {
    sig += "symbol k" + std::to_string(i) + " 0 " + std::to_string(1 + i % 3) + "\n";
    prec += (i == n + 2 ? " k" : " > k") + std::to_string(i);
  }
  const KboParams p = load_signature(sig + prec + "\n");
  std::string text;
  for (std::size_t i = 1; i <= n; ++i) {
    text += (i > 1 ? " & x" : "x") + std::to_string(i) + " > x" + std::to_string(i + 1);
  }
  const Formula f = parse_formula(text, p);
  for (auto _ : state) benchmark::DoNotOptimize(solve_constants_only(f, p).sat);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConstantsChain)->RangeMultiplier(10)->Range(10, 1000)->Complexity();

void BM_Dio(benchmark::State& state) {
  static const char* systems[] = {"x1 + 3 = x0", "x1 + x2 + 1 = x0; x0 + 2 = x3"};
  const auto f = encode_dio(parse_dio(systems[state.range(0)]));
  for (auto _ : state) benchmark::DoNotOptimize(solve(f, dio_signature()).sat);
  state.SetLabel(systems[state.range(0)]);
}
BENCHMARK(BM_Dio)->DenseRange(0, 1)->Unit(benchmark::kMillisecond);

void BM_Lia(benchmark::State& state) {
  const LinSystem s{{},
                    {lin_eq(lin_var("a", -4) + lin_var("b", 5) + lin_var("c") + lin_var("d", 5) + lin_const(2),
                            lin_const(0)),
                     lin_eq(lin_var("a", -1) + lin_var("b", 5) + lin_var("c", -5) + lin_var("d", 3) + lin_const(14),
                            lin_const(0)),
                     lin_ge(lin_var("a", 3) + lin_var("b", 2), lin_var("d", 7) + lin_const(9))}};
  for (auto _ : state) benchmark::DoNotOptimize(solve_system(s).has_value());
}
BENCHMARK(BM_Lia);

}  // namespace

BENCHMARK_MAIN();
