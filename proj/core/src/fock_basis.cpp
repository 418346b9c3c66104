#include "bhsim/fock_basis.hpp"

#include "bhsim/errors.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace bhsim {

namespace {

std::size_t saturating_add(std::size_t a, std::size_t b) {
    return a > std::numeric_limits<std::size_t>::max() - b ? std::numeric_limits<std::size_t>::max()
                                                           : a + b;
}

} // namespace

FockBasis::FockBasis(int mode_count, int total_excitations, Layout layout,
                     std::size_t dimension_cap)
    : modes_(mode_count), total_(total_excitations), layout_(layout) {
    if (mode_count < 1)
        throw DomainError("FockBasis: mode_count must be >= 1");
    if (total_excitations < 0)
        throw DomainError("FockBasis: total_excitations must be >= 0");
    if (total_excitations > std::numeric_limits<std::uint8_t>::max())
        throw DomainError("FockBasis: more than 255 excitations are not representable");
    if (layout == Layout::SourceChainDrain && mode_count < 3)
        throw DomainError("FockBasis: source/drain layout needs at least one chain site");

    const int nmax = total_ + modes_;
    binom_.assign(static_cast<std::size_t>(nmax) + 1, {});
    for (int n = 0; n <= nmax; ++n) {
        auto& row = binom_[static_cast<std::size_t>(n)];
        row.assign(static_cast<std::size_t>(n) + 1, 1);
        for (int k = 1; k < n; ++k)
            row[static_cast<std::size_t>(k)] =
                saturating_add(binom_[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(k) - 1],
                               binom_[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(k)]);
    }

    dim_ = compositions(total_, modes_);
    if (dim_ > dimension_cap)
        throw SizingError("FockBasis: sector with " + std::to_string(modes_) + " modes and " +
                          std::to_string(total_) + " excitations exceeds the dimension cap of " +
                          std::to_string(dimension_cap) + " states");

    occ_.assign(dim_ * static_cast<std::size_t>(modes_), 0);
    std::vector<int> cur(static_cast<std::size_t>(modes_), 0);
    cur[0] = total_;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (int k = 0; k < modes_; ++k)
            occ_[i * static_cast<std::size_t>(modes_) + static_cast<std::size_t>(k)] =
                static_cast<std::uint8_t>(cur[static_cast<std::size_t>(k)]);
        if (i + 1 == dim_)
            break;
        // successor in decreasing lexicographic order: take one from the rightmost
        // non-last occupied mode and pile everything after it onto the next mode
        int k = modes_ - 2;
        while (cur[static_cast<std::size_t>(k)] == 0)
            --k;
        const int tail = cur[static_cast<std::size_t>(modes_) - 1];
        cur[static_cast<std::size_t>(k)] -= 1;
        for (int j = k + 1; j < modes_; ++j)
            cur[static_cast<std::size_t>(j)] = 0;
        cur[static_cast<std::size_t>(k) + 1] = tail + 1;
    }
}

std::size_t FockBasis::compositions(int n, int k) const {
    if (n < 0 || k < 0)
        return 0;
    if (k == 0)
        return n == 0 ? 1 : 0;
    const auto top = static_cast<std::size_t>(n + k - 1);
    if (top >= binom_.size()) {
        // outside the cached range; only reachable from external callers
        long double c = 1;
        for (int j = 1; j <= k - 1; ++j)
            c = c * static_cast<long double>(n + j) / j;
        return c > static_cast<long double>(std::numeric_limits<std::size_t>::max())
                   ? std::numeric_limits<std::size_t>::max()
                   : static_cast<std::size_t>(c + 0.5L);
    }
    return binom_[top][static_cast<std::size_t>(k) - 1];
}

FockState FockBasis::state_at(std::size_t index) const {
    if (index >= dim_)
        throw DomainError("FockBasis::state_at: index out of range");
    auto span = occupations(index);
    return FockState(span.begin(), span.end());
}

void FockBasis::check_state(std::span<const int> state) const {
    if (state.size() != static_cast<std::size_t>(modes_))
        throw DomainError("FockBasis::index_of: state has " + std::to_string(state.size()) +
                          " modes, basis has " + std::to_string(modes_));
    long total = 0;
    for (int n : state) {
        if (n < 0)
            throw DomainError("FockBasis::index_of: negative occupation");
        total += n;
    }
    if (total != total_)
        throw DomainError("FockBasis::index_of: state holds " + std::to_string(total) +
                          " excitations, sector has " + std::to_string(total_));
}

std::size_t FockBasis::index_of(std::span<const int> state) const {
    check_state(state);
    std::size_t rank = 0;
    int remaining = total_;
    for (int k = 0; k + 1 < modes_; ++k) {
        const int n = state[static_cast<std::size_t>(k)];
        const int rest_modes = modes_ - k - 1;
        // states with a larger occupation at mode k: hockey-stick sum of compositions
        if (remaining > n)
            rank += compositions(remaining - n - 1, rest_modes + 1);
        remaining -= n;
    }
    return rank;
}

std::size_t FockBasis::index_of(std::span<const std::uint8_t> state) const {
    std::vector<int> tmp(state.begin(), state.end());
    return index_of(std::span<const int>(tmp));
}

HashedIndex::HashedIndex(const FockBasis& basis) {
    map_.reserve(basis.dimension());
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        auto occ = basis.occupations(i);
        map_.emplace(std::string(occ.begin(), occ.end()), i);
    }
}

std::optional<std::size_t> HashedIndex::find(std::span<const int> state) const {
    std::string key;
    key.reserve(state.size());
    for (int n : state) {
        if (n < 0 || n > std::numeric_limits<std::uint8_t>::max())
            return std::nullopt;
        key.push_back(static_cast<char>(n));
    }
    auto it = map_.find(key);
    if (it == map_.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::pair<FockState, double>> apply_hop(const FockState& state, int from, int to) {
    const auto size = static_cast<int>(state.size());
    if (from == to || from < 0 || to < 0 || from >= size || to >= size)
        throw DomainError("apply_hop: invalid mode indices");
    const int n_from = state[static_cast<std::size_t>(from)];
    if (n_from == 0)
        return std::nullopt;
    const int n_to = state[static_cast<std::size_t>(to)];
    FockState out = state;
    out[static_cast<std::size_t>(from)] -= 1;
    out[static_cast<std::size_t>(to)] += 1;
    return std::make_pair(std::move(out), std::sqrt(static_cast<double>(n_from) * (n_to + 1)));
}

} // namespace bhsim
