// hierarchy.hpp: truncated multi-index set labelling the auxiliary states
//
// Indices k = (k_1..k_M) with sum k_j <= E_max, one slot per flattened bath term
// (monomer-major, term-minor). The default ordering is graded: by depth, and within a depth
// the first slot varies slowest with larger values first, e.g. for M = 2:
//   (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) ...
// The zero index has ordinal 0.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace hopspec {

inline constexpr std::size_t kDefaultUnknownCap = 5'000'000;

enum class Direction : int { Down = -1, Up = +1 };

// Exact binomial C(n, k); throws std::overflow_error past 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

class HierarchyBasis {
public:
    HierarchyBasis(int slots, int e_max);

    // Same truncated set in a caller-chosen order. Throws unless `indices` is
    // exactly the set {k : sum k <= e_max} without duplicates.
    static HierarchyBasis from_indices(int slots, int e_max, const std::vector<std::vector<int>>& indices);

    int slots() const noexcept { return slots_; }
    int e_max() const noexcept { return e_max_; }
    std::size_t size() const noexcept { return depth_.size(); }

    std::span<const int> index(std::size_t ordinal) const;
    int depth(std::size_t ordinal) const { return depth_.at(ordinal); }

    std::optional<std::size_t> ordinal_of(std::span<const int> k) const;

    // Ordinal of k +/- e_slot, or nothing when it falls outside the truncated set.
    std::optional<std::size_t> neighbor(std::size_t ordinal, int slot, Direction dir) const;

private:
    HierarchyBasis(int slots, int e_max, std::vector<int> flat);
    void link();

    struct KeyHash {
        std::size_t operator()(const std::vector<int>& k) const noexcept;
    };

    int slots_;
    int e_max_;
    std::vector<int> flat_;    // size() * slots_
    std::vector<int> depth_;
    std::unordered_map<std::vector<int>, std::size_t, KeyHash> lookup_;
    std::vector<std::int64_t> up_;    // size() * slots_, -1 when truncated
    std::vector<std::int64_t> down_;  // size() * slots_, -1 when k_slot == 0
};

// Builds the basis for M = `slots` bath terms. `block_size` (the monomer count N)
// only enters the resource guard: C(e_max + M, M) * N must not exceed `unknown_cap`.
HierarchyBasis enumerate_basis(int slots, int e_max, int block_size = 1,
                               std::size_t unknown_cap = kDefaultUnknownCap);

}  // namespace hopspec
