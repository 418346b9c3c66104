#include <bhsim/evolution.hpp>
#include <bhsim/fock_basis.hpp>
#include <bhsim/hamiltonian.hpp>

#include <benchmark/benchmark.h>

#include <memory>

namespace {

// (M, N) pairs: 13/3 -> 455, 19/3 -> 1330, 29/3 -> 4495
void sizes(benchmark::internal::Benchmark* b) {
    b->Args({13, 3})->Args({19, 3})->Args({29, 3})->Args({15, 4});
}

std::shared_ptr<const bhsim::FockBasis> make_basis(const benchmark::State& st) {
    return std::make_shared<const bhsim::FockBasis>(static_cast<int>(st.range(0)),
                                                    static_cast<int>(st.range(1)));
}

bhsim::SparseHamiltonian make_chain(const std::shared_ptr<const bhsim::FockBasis>& basis) {
    return bhsim::build_chain_hamiltonian(basis,
                                          bhsim::ChainParams::uniform(basis->mode_count(), 1.0, -4.0));
}

void BM_BasisBuild(benchmark::State& st) {
    for (auto _ : st) {
        bhsim::FockBasis basis(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
        benchmark::DoNotOptimize(basis.dimension());
    }
}
BENCHMARK(BM_BasisBuild)->Apply(sizes);

void BM_HamiltonianBuild(benchmark::State& st) {
    const auto basis = make_basis(st);
    for (auto _ : st) {
        auto H = make_chain(basis);
        benchmark::DoNotOptimize(H.stored_entries());
    }
    st.counters["dim"] = static_cast<double>(basis->dimension());
}
BENCHMARK(BM_HamiltonianBuild)->Apply(sizes);

void BM_Matvec(benchmark::State& st) {
    const auto basis = make_basis(st);
    const auto H = make_chain(basis);
    const auto n = static_cast<Eigen::Index>(basis->dimension());
    Eigen::VectorXcd x = Eigen::VectorXcd::Random(n), y(n);
    for (auto _ : st) {
        H.apply(x, y);
        benchmark::DoNotOptimize(y.data());
    }
    st.counters["dim"] = static_cast<double>(n);
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(H.stored_entries()));
}
BENCHMARK(BM_Matvec)->Apply(sizes);

void BM_KrylovStep(benchmark::State& st) {
    const auto basis = make_basis(st);
    const auto H = make_chain(basis);
    bhsim::EvolveOptions opt;
    opt.method = bhsim::PropagationMethod::Krylov;
    bhsim::KrylovPropagator prop(H, opt);
    bhsim::FockState stack(static_cast<std::size_t>(basis->mode_count()), 0);
    stack[stack.size() / 2] = basis->total_excitations();
    Eigen::VectorXcd v = bhsim::QuantumState::fock(basis, stack).amplitudes();
    for (auto _ : st) {
        prop.advance(v, 0.02);
        benchmark::DoNotOptimize(v.data());
    }
    st.counters["dim"] = static_cast<double>(basis->dimension());
}
BENCHMARK(BM_KrylovStep)->Apply(sizes)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
