// Serial reference against the OpenMP kernels. Argument 0 runs serially,
// argument 1 in parallel; both must report the same counts.

#include <benchmark/benchmark.h>

#include <map>

#include "ats/config.hpp"

using namespace ats;

namespace {

const std::string kCorpus = ATS_CORPUS_DIR;

const BuiltAlgebra& algebra(const std::string& file) {
  static std::map<std::string, BuiltAlgebra> cache;
  auto it = cache.find(file);
  if (it == cache.end()) it = cache.emplace(file, build_M_inv(*load_config(kCorpus + "/" + file).matrix)).first;
  return it->second;
}

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "parallel" : "serial"); }

void BM_check_grading(benchmark::State& s) {
  const BuiltAlgebra& B = algebra("s11_klein_quaternion.cfg");
  for (auto _ : s) benchmark::DoNotOptimize(check_grading(B.alg, B.grading, mode(s)));
  label(s);
}

void BM_check_morphism(benchmark::State& s) {
  const BuiltAlgebra& B = algebra("s11_klein_quaternion.cfg");
  Matrix id = Matrix::identity(B.alg.dim());
  for (auto _ : s) benchmark::DoNotOptimize(check_morphism(B.alg, B.alg, id, &B.grading, &B.grading, mode(s)));
  label(s);
}

void BM_check_involution(benchmark::State& s) {
  const BuiltAlgebra& B = algebra("s11_klein_quaternion.cfg");
  for (auto _ : s) benchmark::DoNotOptimize(check_involution(B.alg, &B.grading, mode(s)));
  label(s);
}

void BM_check_at2(benchmark::State& s) {
  const BuiltAlgebra& B = algebra("s13_z2_four_rows.cfg");
  TripleSystem W = triple_from(B.alg, B.grading);
  At2Options o;
  o.exhaustive_max_dim = 16;
  for (auto _ : s) benchmark::DoNotOptimize(check_at2(W, o, mode(s)));
  s.counters["dim"] = W.dim();
  label(s);
}

// Every same-dimension pair of the Z/4 census labels up to dimension 8.
void BM_search(benchmark::State& s) {
  CensusOptions co;
  co.max_dim = 8;
  auto labels = enumerate_labels(AbelianGroup(0, {4}), co);
  std::vector<BuiltAlgebra> built;
  for (const auto& l : labels) built.push_back(build_M_inv(l.p));
  SearchOptions o;
  o.exec = mode(s);
  long candidates = 0;
  for (auto _ : s) {
    candidates = 0;
    for (size_t i = 0; i < labels.size(); ++i)
      for (size_t j = 0; j < labels.size(); ++j) {
        if (built[i].alg.dim() != built[j].alg.dim()) continue;
        SearchResult r = search_isomorphism(labels[i], built[i], labels[j], built[j], o);
        candidates += r.candidates;
        benchmark::DoNotOptimize(r);
      }
  }
  s.counters["candidates"] = static_cast<double>(candidates);
  label(s);
}

}  // namespace

BENCHMARK(BM_check_grading)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_morphism)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_involution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_at2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_search)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
