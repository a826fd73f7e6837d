#include <benchmark/benchmark.h>

#include <random>

#include "pencil/compat.hpp"
#include "pencil/hierarchy.hpp"
#include "pencil/simulator.hpp"

namespace {

using namespace pencil;

Poly term(const char* c, Exponents e) { return Poly::monomial(Rational::parse(c), std::move(e)); }

Matrix<Rational> diag(std::vector<long> d) {
  Matrix<Rational> m(d.size(), Rational());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = Rational(d[i]);
  return m;
}

// Pseudo-sphere data: every potential is a multiple of the eta-quadric, so
// the data is integrable and carries two tails.
CanonicalData pseudo_sphere() {
  const Poly q = term("1/2", {2, 0, 0}) + term("1/2", {0, 2, 0}) + term("-1/2", {0, 0, 2});
  return CanonicalData{ConstantBracket(diag({1, 1, -1})), {q, q * Rational(2), q * Rational(3)},
                       {q, q * Rational(2)}, {1, -1}};
}

CanonicalData burgers() { return CanonicalData{ConstantBracket(diag({1})), {term("1/2", {2})}, {}, {}}; }

Poly random_poly(std::mt19937_64& rng, std::size_t n, int degree, int terms) {
  std::uniform_int_distribution<int> c(-9, 9);
  std::uniform_int_distribution<unsigned> e(0, static_cast<unsigned>(degree));
  Poly p(n);
  for (int t = 0; t < terms; ++t) {
    Exponents ex(n);
    for (auto& x : ex) x = e(rng);
    p.add_term(ex, Rational(c(rng), 7));
  }
  return p;
}

void BM_PolyMul(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Poly a = random_poly(rng, 3, static_cast<int>(state.range(0)), 12);
  const Poly b = random_poly(rng, 3, static_cast<int>(state.range(0)), 12);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PolyMul)->Arg(2)->Arg(4);

void BM_CheckPoisson(benchmark::State& state) {
  const HydroBracket b = canonical_bracket(pseudo_sphere());
  for (auto _ : state) benchmark::DoNotOptimize(check_poisson(b));
}
BENCHMARK(BM_CheckPoisson)->Unit(benchmark::kMillisecond);

void BM_CheckIntegrability(benchmark::State& state) {
  const CanonicalData d = pseudo_sphere();
  for (auto _ : state) benchmark::DoNotOptimize(check_integrability(d));
}
BENCHMARK(BM_CheckIntegrability)->Unit(benchmark::kMillisecond);

void BM_SpectralFlow(benchmark::State& state) {
  const SpectralModel model(burgers(), static_cast<std::size_t>(state.range(0)));
  const FieldState u = model.sample({FourierSeries{0.0, {0.2}, {0.1}}});
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(model.flow(u, n));
}
BENCHMARK(BM_SpectralFlow)->Args({256, 1})->Args({256, 2})->Args({1024, 2});

void BM_Rk4Steps(benchmark::State& state) {
  const SpectralModel model(burgers(), 256);
  const FieldState u0 = model.sample({FourierSeries{0.0, {}, {0.1}}});
  for (auto _ : state) benchmark::DoNotOptimize(integrate(model, 1, u0, 1e-3, 100));
}
BENCHMARK(BM_Rk4Steps)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
