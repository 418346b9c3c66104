#pragma once

/**
 * @file fock_basis.hpp
 * @brief Occupation-number basis of a fixed-excitation sector.
 *
 * States are ordered lexicographically decreasing, so (N,0,...,0) has index 0
 * and (0,...,0,N) is last. Ranking is a stars-and-bars computation over a
 * precomputed binomial table.
 *
 * For the SourceChainDrain layout the mode order is [source, site 1..M, drain].
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bhsim {

using FockState = std::vector<int>;

enum class Layout { ChainOnly, SourceChainDrain };

inline constexpr std::size_t kDefaultDimensionCap = 5'000'000;

class FockBasis {
public:
    /// Enumerates every state of the sector. Throws SizingError above @p dimension_cap.
    FockBasis(int mode_count, int total_excitations, Layout layout = Layout::ChainOnly,
              std::size_t dimension_cap = kDefaultDimensionCap);

    [[nodiscard]] int mode_count() const noexcept { return modes_; }
    [[nodiscard]] int total_excitations() const noexcept { return total_; }
    [[nodiscard]] Layout layout() const noexcept { return layout_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }

    /// Number of chain sites (mode_count minus the two resonators when extended).
    [[nodiscard]] int chain_sites() const noexcept {
        return layout_ == Layout::SourceChainDrain ? modes_ - 2 : modes_;
    }
    /// Mode index of chain site @p site (1-based).
    [[nodiscard]] int chain_mode(int site) const noexcept {
        return layout_ == Layout::SourceChainDrain ? site : site - 1;
    }

    [[nodiscard]] std::span<const std::uint8_t> occupations(std::size_t index) const {
        return {occ_.data() + index * static_cast<std::size_t>(modes_),
                static_cast<std::size_t>(modes_)};
    }
    [[nodiscard]] int occupation(std::size_t index, int mode) const {
        return occ_[index * static_cast<std::size_t>(modes_) + static_cast<std::size_t>(mode)];
    }
    [[nodiscard]] FockState state_at(std::size_t index) const;

    /// Combinatorial rank of @p state. Throws DomainError for wrong length or total.
    [[nodiscard]] std::size_t index_of(std::span<const int> state) const;
    [[nodiscard]] std::size_t index_of(std::span<const std::uint8_t> state) const;

    /// Number of compositions of @p n excitations into @p k modes.
    [[nodiscard]] std::size_t compositions(int n, int k) const;

    bool operator==(const FockBasis& other) const noexcept {
        return modes_ == other.modes_ && total_ == other.total_ && layout_ == other.layout_;
    }

private:
    void check_state(std::span<const int> state) const;

    int modes_;
    int total_;
    Layout layout_;
    std::size_t dim_ = 0;
    std::vector<std::uint8_t> occ_;
    // binom_[n][k] = C(n, k) for n <= total + modes
    std::vector<std::vector<std::size_t>> binom_;
};

/// Hash-map index over a basis; agrees with FockBasis::index_of on every state.
class HashedIndex {
public:
    explicit HashedIndex(const FockBasis& basis);
    [[nodiscard]] std::optional<std::size_t> find(std::span<const int> state) const;

private:
    std::unordered_map<std::string, std::size_t> map_;
};

/// Moves one excitation from mode @p from to mode @p to.
/// Returns the new state and the bosonic factor sqrt(n_from * (n_to + 1)),
/// or nullopt when mode @p from is empty.
std::optional<std::pair<FockState, double>> apply_hop(const FockState& state, int from, int to);

} // namespace bhsim
