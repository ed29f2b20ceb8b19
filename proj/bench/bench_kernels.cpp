// Serial reference vs OpenMP kernels: grid scan and sample audits.

#include <benchmark/benchmark.h>

#include "reflexive/families.hpp"
#include "reflexive/hypothesis_audit.hpp"
#include "reflexive/reflexive_solver.hpp"

namespace {

using namespace reflexive;

Exec exec_arg(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_GridScanDumbbell(benchmark::State& state) {
  const FamilySetup s = dumbbell_family(0.5);
  const int res = static_cast<int>(state.range(1));
  for (auto _ : state) {
    const ScanTable t = grid_scan(s.field, s.box, {res, res}, exec_arg(state));
    benchmark::DoNotOptimize(t.h_min);
  }
  state.SetItemsProcessed(state.iterations() * res * res);
}
BENCHMARK(BM_GridScanDumbbell)->ArgsProduct({{0, 1}, {241, 1001}})->ArgNames({"parallel", "res"})->Unit(benchmark::kMillisecond);

void BM_GridScanStacked(benchmark::State& state) {
  const FamilySetup s = stacked_family();
  for (auto _ : state) {
    const ScanTable t = grid_scan(s.field, s.box, {40, 40, 20, 20}, exec_arg(state));
    benchmark::DoNotOptimize(t.h_min);
  }
}
BENCHMARK(BM_GridScanStacked)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_AuditRegularity(benchmark::State& state) {
  const FamilySetup s = dumbbell_family(0.5);
  const auto samples = quasi_random_samples(s.field, s.box, static_cast<std::size_t>(state.range(1)), 1);
  RegularityOptions o;
  o.exec = exec_arg(state);
  for (auto _ : state) benchmark::DoNotOptimize(audit_regularity(s.field, samples, o).verdict);
}
BENCHMARK(BM_AuditRegularity)->ArgsProduct({{0, 1}, {100, 10000}})->ArgNames({"parallel", "samples"})->Unit(benchmark::kMillisecond);

void BM_AuditPushability(benchmark::State& state) {
  const FamilySetup s = dumbbell_family(0.5);
  const auto samples = quasi_random_samples(s.field, s.box, static_cast<std::size_t>(state.range(1)), 1);
  PushabilityOptions o;
  o.exec = exec_arg(state);
  for (auto _ : state) benchmark::DoNotOptimize(audit_pushability(s.field, s.push, samples, o).verdict);
}
BENCHMARK(BM_AuditPushability)->ArgsProduct({{0, 1}, {100, 10000}})->ArgNames({"parallel", "samples"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
