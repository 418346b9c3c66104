#include "bhsim/hamiltonian.hpp"

#include "bhsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>

namespace bhsim {

namespace {

struct Bond {
    int a;
    int b;
    double coupling;
};

// Per-mode description of a quadratic-plus-Hubbard Hamiltonian.
struct ModeModel {
    std::vector<double> onsite;
    std::vector<double> interaction;
    std::vector<Bond> bonds;
};

SparseHamiltonian assemble(std::shared_ptr<const FockBasis> basis, const ModeModel& model,
                           std::string digest) {
    const FockBasis& B = *basis;
    const std::size_t dim = B.dimension();
    const int modes = B.mode_count();

    std::vector<std::size_t> row_ptr(dim + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> values;
    cols.reserve(dim * (1 + model.bonds.size()));
    values.reserve(dim * (1 + model.bonds.size()));

    std::vector<int> work(static_cast<std::size_t>(modes));
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t i = 0; i < dim; ++i) {
        auto occ = B.occupations(i);
        double diag = 0.0;
        for (int k = 0; k < modes; ++k) {
            const double n = occ[static_cast<std::size_t>(k)];
            diag += 0.5 * model.interaction[static_cast<std::size_t>(k)] * n * (n - 1.0) +
                    model.onsite[static_cast<std::size_t>(k)] * n;
        }
        row.clear();
        row.emplace_back(i, diag);
        std::copy(occ.begin(), occ.end(), work.begin());
        for (const Bond& bond : model.bonds) {
            if (bond.coupling == 0.0)
                continue;
            for (auto [from, to] : {std::pair{bond.a, bond.b}, std::pair{bond.b, bond.a}}) {
                const int n_from = work[static_cast<std::size_t>(from)];
                if (n_from == 0)
                    continue;
                const int n_to = work[static_cast<std::size_t>(to)];
                work[static_cast<std::size_t>(from)] -= 1;
                work[static_cast<std::size_t>(to)] += 1;
                const std::size_t j = B.index_of(std::span<const int>(work));
                work[static_cast<std::size_t>(from)] += 1;
                work[static_cast<std::size_t>(to)] -= 1;
                if (j > i)
                    row.emplace_back(j, bond.coupling * std::sqrt(double(n_from) * (n_to + 1)));
            }
        }
        std::sort(row.begin() + 1, row.end());
        for (auto& [c, v] : row) {
            cols.push_back(c);
            values.push_back(v);
        }
        row_ptr[i + 1] = cols.size();
    }
    return SparseHamiltonian(std::move(basis), std::move(row_ptr), std::move(cols),
                             std::move(values), std::move(digest));
}

std::string describe(const ChainParams& p) {
    std::ostringstream os;
    os.precision(17);
    os << "chain M=" << p.site_count() << " J=" << p.J << " U=" << p.U << " mu=[";
    for (std::size_t i = 0; i < p.mu.size(); ++i)
        os << (i ? "," : "") << p.mu[i];
    os << "]";
    if (!p.bond_J.empty()) {
        os << " bond_J=[";
        for (std::size_t i = 0; i < p.bond_J.size(); ++i)
            os << (i ? "," : "") << p.bond_J[i];
        os << "]";
    }
    return os.str();
}

void add_chain_terms(ModeModel& model, const ChainParams& p, int offset) {
    const int M = p.site_count();
    for (int i = 0; i < M; ++i) {
        model.onsite[static_cast<std::size_t>(offset + i)] = p.mu[static_cast<std::size_t>(i)];
        model.interaction[static_cast<std::size_t>(offset + i)] = p.U;
    }
    for (int i = 0; i + 1 < M; ++i)
        model.bonds.push_back({offset + i, offset + i + 1, p.bond(i)});
}

} // namespace

ChainParams ChainParams::uniform(int M, double J, double U, double omega01) {
    if (M < 1)
        throw DomainError("ChainParams::uniform: M must be >= 1");
    return ChainParams{J, U, std::vector<double>(static_cast<std::size_t>(M), omega01), {}};
}

void ChainParams::validate() const {
    if (!(J > 0.0))
        throw DomainError("ChainParams: J must be positive");
    if (mu.empty())
        throw DomainError("ChainParams: mu must hold one entry per site");
    if (!bond_J.empty() && bond_J.size() + 1 != mu.size())
        throw DomainError("ChainParams: bond_J must have M-1 entries");
}

SparseHamiltonian::SparseHamiltonian(std::shared_ptr<const FockBasis> basis,
                                     std::vector<std::size_t> row_ptr,
                                     std::vector<std::size_t> cols, std::vector<double> values,
                                     std::string params_digest)
    : basis_(std::move(basis)), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)),
      values_(std::move(values)), digest_(std::move(params_digest)) {}

template <class Vec>
void SparseHamiltonian::apply_impl(const Vec& x, Vec& y) const {
    const std::size_t dim = dimension();
    if (static_cast<std::size_t>(x.size()) != dim)
        throw DomainError("SparseHamiltonian::apply: vector size mismatch");
    y.setZero(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const auto xi = x[static_cast<Eigen::Index>(i)];
        auto acc = values_[row_ptr_[i]] * xi;
        for (std::size_t e = row_ptr_[i] + 1; e < row_ptr_[i + 1]; ++e) {
            const auto j = static_cast<Eigen::Index>(cols_[e]);
            acc += values_[e] * x[j];
            y[j] += values_[e] * xi;
        }
        y[static_cast<Eigen::Index>(i)] += acc;
    }
}

void SparseHamiltonian::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    apply_impl(x, y);
}

void SparseHamiltonian::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    apply_impl(x, y);
}

Eigen::VectorXd SparseHamiltonian::diagonal() const {
    Eigen::VectorXd d(static_cast<Eigen::Index>(dimension()));
    for (std::size_t i = 0; i < dimension(); ++i)
        d[static_cast<Eigen::Index>(i)] = values_[row_ptr_[i]];
    return d;
}

Eigen::MatrixXd SparseHamiltonian::to_dense() const {
    const auto n = static_cast<Eigen::Index>(dimension());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < dimension(); ++i) {
        for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) {
            const auto r = static_cast<Eigen::Index>(i);
            const auto c = static_cast<Eigen::Index>(cols_[e]);
            H(r, c) = values_[e];
            H(c, r) = values_[e];
        }
    }
    return H;
}

double SparseHamiltonian::norm_bound() const {
    std::vector<double> rowsum(dimension(), 0.0);
    for (std::size_t i = 0; i < dimension(); ++i) {
        rowsum[i] += std::abs(values_[row_ptr_[i]]);
        for (std::size_t e = row_ptr_[i] + 1; e < row_ptr_[i + 1]; ++e) {
            rowsum[i] += std::abs(values_[e]);
            rowsum[cols_[e]] += std::abs(values_[e]);
        }
    }
    return rowsum.empty() ? 0.0 : *std::max_element(rowsum.begin(), rowsum.end());
}

SparseHamiltonian build_chain_hamiltonian(std::shared_ptr<const FockBasis> basis,
                                          const ChainParams& params) {
    if (!basis)
        throw DomainError("build_chain_hamiltonian: null basis");
    params.validate();
    if (basis->layout() != Layout::ChainOnly)
        throw DomainError("build_chain_hamiltonian: basis layout must be ChainOnly");
    if (basis->mode_count() != params.site_count())
        throw DomainError("build_chain_hamiltonian: basis has " +
                          std::to_string(basis->mode_count()) + " modes but params describe " +
                          std::to_string(params.site_count()) + " sites");
    const auto modes = static_cast<std::size_t>(basis->mode_count());
    ModeModel model{std::vector<double>(modes, 0.0), std::vector<double>(modes, 0.0), {}};
    add_chain_terms(model, params, 0);
    return assemble(std::move(basis), model, describe(params));
}

SparseHamiltonian build_source_drain_hamiltonian(std::shared_ptr<const FockBasis> basis,
                                                 const ChainParams& chain,
                                                 const SourceDrainParams& sd) {
    if (!basis)
        throw DomainError("build_source_drain_hamiltonian: null basis");
    chain.validate();
    if (basis->layout() != Layout::SourceChainDrain)
        throw DomainError("build_source_drain_hamiltonian: basis layout must be SourceChainDrain");
    const int M = chain.site_count();
    if (basis->mode_count() != M + 2)
        throw DomainError("build_source_drain_hamiltonian: basis must have M+2 modes");
    if (sd.Jprime < 0.0)
        throw DomainError("build_source_drain_hamiltonian: Jprime must be >= 0");
    if (basis->total_excitations() != sd.total_excitations)
        throw DomainError("build_source_drain_hamiltonian: basis sector does not match total_excitations");

    const auto modes = static_cast<std::size_t>(M + 2);
    ModeModel model{std::vector<double>(modes, 0.0), std::vector<double>(modes, 0.0), {}};
    add_chain_terms(model, chain, 1);
    model.onsite.front() = sd.omega_r;
    model.onsite.back() = sd.omega_r;
    model.bonds.push_back({0, 1, sd.Jprime});
    model.bonds.push_back({M, M + 1, sd.Jprime});

    std::ostringstream os;
    os.precision(17);
    os << describe(chain) << " omega_r=" << sd.omega_r << " Jprime=" << sd.Jprime
       << " total=" << sd.total_excitations;
    return assemble(std::move(basis), model, os.str());
}

std::vector<double> build_pinned_mu(int M, double omega01, int pin_site, double mu_pin) {
    if (M < 1 || pin_site < 1 || pin_site > M)
        throw DomainError("build_pinned_mu: pin_site must lie in [1, M]");
    if (mu_pin < 0.0)
        throw DomainError("build_pinned_mu: mu_pin must be >= 0");
    std::vector<double> mu(static_cast<std::size_t>(M), omega01);
    mu[static_cast<std::size_t>(pin_site) - 1] = omega01 - mu_pin;
    return mu;
}

std::vector<double> build_ramp_mu(int M, double omega01, int ramp_site, double mu_ramp) {
    if (M < 1 || ramp_site < 1 || ramp_site > M)
        throw DomainError("build_ramp_mu: ramp_site must lie in [1, M]");
    if (mu_ramp < 0.0)
        throw DomainError("build_ramp_mu: mu_ramp must be >= 0");
    std::vector<double> mu(static_cast<std::size_t>(M), omega01);
    for (int i = 1; i < ramp_site; ++i)
        mu[static_cast<std::size_t>(i) - 1] = omega01 + mu_ramp * (ramp_site - i);
    return mu;
}

void write_coordinate_text(std::ostream& out, const SparseHamiltonian& H) {
    char buf[96];
    const auto& rp = H.row_ptr();
    for (std::size_t i = 0; i < H.dimension(); ++i) {
        for (std::size_t e = rp[i]; e < rp[i + 1]; ++e) {
            std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i + 1, H.cols()[e] + 1, H.values()[e]);
            out << buf;
        }
    }
}

} // namespace bhsim
