// assembler.hpp: sparse Laplace-domain hierarchy operator A(s) = A0 + s I
//
// One block row of size N per multi-index k:
//   (k, k)       i H_sys + (sum_j k_j decay_j) I
//   (k, k - e_j) -k_j g_j L_n(j)
//   (k, k + e_j) +L_n(j)
// with L_n = |pi_n><pi_n|. Unknown (k, n) lives at global index ordinal(k) * N + n.
//
// The normalized form substitutes Psi^(k) = prod_j (i sqrt(g_j))^k_j sqrt(k_j!) Phi^(k),
// which turns both couplings into i sqrt(g_j) sqrt(k_j) (k_j taken at the deeper index)
// and makes A0 complex symmetric. The physical block is unchanged; auxiliary amplitudes
// stay O(1) instead of growing factorially, so residuals near 1e-15 are reachable.

#pragma once

#include "hopspec/hierarchy.hpp"
#include "hopspec/model.hpp"

#include <Eigen/Sparse>

#include <cstddef>
#include <vector>

namespace hopspec {

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;

// Complex Laplace variable s = epsilon - i omega; epsilon > 0 is the line broadening.
struct LaplacePoint {
    double epsilon{0.01};
    double omega{0.0};

    cplx value() const noexcept { return {epsilon, -omega}; }
    void validate() const;
};

class HierarchyOperator {
public:
    // `origin_block` is the ordinal of the zero multi-index (the physical block).
    HierarchyOperator(SparseMatrix static_part, int block_size, std::size_t origin_block = 0);

    Eigen::Index dimension() const noexcept { return static_part_.rows(); }
    int block_size() const noexcept { return block_size_; }
    std::size_t origin_block() const noexcept { return origin_block_; }
    const SparseMatrix& static_part() const noexcept { return static_part_; }

    // Positions of the diagonal entries inside static_part().valuePtr().
    const std::vector<Eigen::Index>& diagonal_positions() const noexcept { return diagonal_positions_; }

    // Copy of A0 with s added on the diagonal; the sparsity pattern is identical to A0.
    SparseMatrix shifted(cplx s) const;
    // Overwrites the values of `target` (which must share A0's pattern) with A0 + s I.
    void write_shifted(cplx s, SparseMatrix& target) const;

private:
    SparseMatrix static_part_;
    int block_size_;
    std::size_t origin_block_;
    std::vector<Eigen::Index> diagonal_positions_;
};

enum class HierarchyScaling { Literal, Normalized };

HierarchyOperator assemble_static(const Model& model, const HierarchyBasis& basis,
                                  HierarchyScaling scaling = HierarchyScaling::Literal);

// Unit vector at (k = 0, site); site is zero-based.
Eigen::VectorXcd rhs_for_initial_site(const HierarchyBasis& basis, int n_monomers, int site);
// All N initial-site columns side by side.
Eigen::MatrixXcd initial_site_rhs(const HierarchyBasis& basis, int n_monomers);

}  // namespace hopspec
