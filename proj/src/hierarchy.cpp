#include "hopspec/hierarchy.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace hopspec {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i stays integral at every step
        result = result * (n - k + i) / i;
        if (result > std::numeric_limits<std::uint64_t>::max()) {
            throw std::overflow_error("binomial coefficient overflows 64 bits");
        }
    }
    return static_cast<std::uint64_t>(result);
}

namespace {

// Appends all compositions of `remaining` into k[slot..] in descending-lex order.
void emit_compositions(std::vector<int>& k, std::size_t slot, int remaining, std::vector<int>& out) {
    if (slot + 1 == k.size()) {
        k[slot] = remaining;
        out.insert(out.end(), k.begin(), k.end());
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        k[slot] = v;
        emit_compositions(k, slot + 1, remaining - v, out);
    }
    k[slot] = 0;
}

}  // namespace

std::size_t HierarchyBasis::KeyHash::operator()(const std::vector<int>& k) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int v : k) {
        h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

HierarchyBasis::HierarchyBasis(int slots, int e_max) : slots_(slots), e_max_(e_max) {
    if (slots < 1) throw std::invalid_argument("hierarchy needs at least one bath term");
    if (e_max < 0) throw std::invalid_argument("truncation depth must be >= 0");

    const std::size_t count = binomial(static_cast<std::uint64_t>(e_max + slots), static_cast<std::uint64_t>(slots));
    const auto m = static_cast<std::size_t>(slots);
    flat_.reserve(count * m);

    std::vector<int> k(m, 0);
    for (int d = 0; d <= e_max; ++d) emit_compositions(k, 0, d, flat_);
    link();
}

HierarchyBasis::HierarchyBasis(int slots, int e_max, std::vector<int> flat)
    : slots_(slots), e_max_(e_max), flat_(std::move(flat)) {
    link();
}

HierarchyBasis HierarchyBasis::from_indices(int slots, int e_max, const std::vector<std::vector<int>>& indices) {
    if (slots < 1) throw std::invalid_argument("hierarchy needs at least one bath term");
    if (e_max < 0) throw std::invalid_argument("truncation depth must be >= 0");
    const std::size_t count = binomial(static_cast<std::uint64_t>(e_max + slots), static_cast<std::uint64_t>(slots));
    if (indices.size() != count) {
        throw std::invalid_argument("index list has " + std::to_string(indices.size()) + " entries, expected " +
                                    std::to_string(count));
    }
    std::vector<int> flat;
    flat.reserve(count * static_cast<std::size_t>(slots));
    for (const auto& k : indices) {
        if (k.size() != static_cast<std::size_t>(slots)) throw std::invalid_argument("index has wrong length");
        int depth = 0;
        for (int v : k) {
            if (v < 0) throw std::invalid_argument("index entries must be nonnegative");
            depth += v;
        }
        if (depth > e_max) throw std::invalid_argument("index exceeds the truncation depth");
        flat.insert(flat.end(), k.begin(), k.end());
    }
    // Correct size + no duplicates + all within depth implies the full set.
    return HierarchyBasis(slots, e_max, std::move(flat));
}

void HierarchyBasis::link() {
    const auto m = static_cast<std::size_t>(slots_);
    const std::size_t count = flat_.size() / m;

    depth_.resize(count);
    lookup_.clear();
    lookup_.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto first = flat_.begin() + static_cast<std::ptrdiff_t>(i * m);
        std::vector<int> key(first, first + static_cast<std::ptrdiff_t>(m));
        int d = 0;
        for (int v : key) d += v;
        depth_[i] = d;
        if (!lookup_.emplace(std::move(key), i).second) {
            throw std::invalid_argument("duplicate multi-index in hierarchy basis");
        }
    }

    up_.assign(count * m, -1);
    down_.assign(count * m, -1);
    std::vector<int> probe(m);
    for (std::size_t i = 0; i < count; ++i) {
        const auto k_i = index(i);
        for (std::size_t j = 0; j < m; ++j) {
            probe.assign(k_i.begin(), k_i.end());
            if (depth_[i] < e_max_) {
                ++probe[j];
                up_[i * m + j] = static_cast<std::int64_t>(lookup_.at(probe));
                --probe[j];
            }
            if (probe[j] > 0) {
                --probe[j];
                down_[i * m + j] = static_cast<std::int64_t>(lookup_.at(probe));
            }
        }
    }
}

std::span<const int> HierarchyBasis::index(std::size_t ordinal) const {
    if (ordinal >= size()) throw std::out_of_range("hierarchy ordinal out of range");
    const auto m = static_cast<std::size_t>(slots_);
    return {flat_.data() + ordinal * m, m};
}

std::optional<std::size_t> HierarchyBasis::ordinal_of(std::span<const int> k) const {
    if (k.size() != static_cast<std::size_t>(slots_)) return std::nullopt;
    const auto it = lookup_.find(std::vector<int>(k.begin(), k.end()));
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> HierarchyBasis::neighbor(std::size_t ordinal, int slot, Direction dir) const {
    if (ordinal >= size()) throw std::out_of_range("hierarchy ordinal out of range");
    if (slot < 0 || slot >= slots_) throw std::out_of_range("hierarchy slot out of range");
    const auto pos = ordinal * static_cast<std::size_t>(slots_) + static_cast<std::size_t>(slot);
    const std::int64_t target = dir == Direction::Up ? up_[pos] : down_[pos];
    if (target < 0) return std::nullopt;
    return static_cast<std::size_t>(target);
}

HierarchyBasis enumerate_basis(int slots, int e_max, int block_size, std::size_t unknown_cap) {
    if (slots < 1) throw std::invalid_argument("hierarchy needs at least one bath term");
    if (e_max < 0) throw std::invalid_argument("truncation depth must be >= 0");
    if (block_size < 1) throw std::invalid_argument("block size must be >= 1");
    const std::uint64_t count =
        binomial(static_cast<std::uint64_t>(e_max + slots), static_cast<std::uint64_t>(slots));
    const auto block = static_cast<std::uint64_t>(block_size);
    if (count > unknown_cap / block) {
        throw std::length_error("hierarchy with " + std::to_string(count) + " indices x " + std::to_string(block_size) +
                                " sites exceeds the unknown cap of " + std::to_string(unknown_cap));
    }
    return HierarchyBasis(slots, e_max);
}

}  // namespace hopspec
