// Serial reference kernels vs the OpenMP/half-angle versions.
#include <benchmark/benchmark.h>

#include <cmath>

#include "sheetlab/kernels.hpp"

using namespace sheetlab;
namespace k = sheetlab::kernels;

namespace {

struct Sheet {
  std::vector<Vec2> nodes;
  std::vector<double> gamma;
};

Sheet make(std::size_t n) {
  Sheet s;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = -pi + two_pi * static_cast<double>(j) / static_cast<double>(n);
    s.nodes.push_back({a, 0.05 * std::sin(a)});
    s.gamma.push_back(std::sin(a));
  }
  return s;
}

template <bool Ref>
void node_velocity(benchmark::State& st) {
  const auto s = make(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    auto u = Ref ? k::reference::node_velocity(s.nodes, s.gamma, 0.1, k::PairMode::all_but_self)
                 : k::node_velocity(s.nodes, s.gamma, 0.1, k::PairMode::all_but_self);
    benchmark::DoNotOptimize(u.data());
  }
  st.SetComplexityN(st.range(0));
}

template <bool Ref>
void cot_pv(benchmark::State& st) {
  const auto s = make(static_cast<std::size_t>(st.range(0)));
  std::vector<cplx> w(s.nodes.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = {s.gamma[j], 0.0};
  std::vector<cplx> out;
  for (auto _ : st) {
    if (Ref)
      k::reference::cot_pv(s.nodes, w, 1, out);
    else
      k::cot_pv(s.nodes, w, 1, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Ref>
void blob_pair_log(benchmark::State& st) {
  const auto s = make(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    double e = Ref ? k::reference::blob_pair_log(s.nodes, s.gamma, 0.1) : k::blob_pair_log(s.nodes, s.gamma, 0.1);
    benchmark::DoNotOptimize(e);
  }
}

template <bool Ref>
void stencil_convolve(benchmark::State& st) {
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  std::vector<double> in(n * n), out(n * n);
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = std::sin(0.01 * static_cast<double>(i));
  k::Stencil sten;
  for (int dy = -4; dy <= 4; ++dy)
    for (int dx = -4; dx <= 4; ++dx)
      if (dx * dx + dy * dy < 16) {
        sten.dx.push_back(dx);
        sten.dy.push_back(dy);
        sten.w.push_back(1.0);
      }
  for (auto _ : st) {
    if (Ref)
      k::reference::stencil_convolve(in.data(), n, n, sten, out.data());
    else
      k::stencil_convolve(in.data(), n, n, sten, out.data());
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(node_velocity<true>)->Name("node_velocity/serial")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(node_velocity<false>)->Name("node_velocity/omp")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(cot_pv<true>)->Name("cot_pv/serial")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(cot_pv<false>)->Name("cot_pv/omp")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(blob_pair_log<true>)->Name("blob_pair_log/serial")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(blob_pair_log<false>)->Name("blob_pair_log/omp")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(stencil_convolve<true>)->Name("stencil_convolve/serial")->Arg(256)->Arg(512);
BENCHMARK(stencil_convolve<false>)->Name("stencil_convolve/omp")->Arg(256)->Arg(512);

BENCHMARK_MAIN();
