#include "hopspec/assembler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace hopspec {

void LaplacePoint::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("Laplace point needs epsilon > 0 (got " + std::to_string(epsilon) + ")");
    }
    if (!std::isfinite(omega)) throw std::invalid_argument("Laplace point frequency must be finite");
}

HierarchyOperator::HierarchyOperator(SparseMatrix static_part, int block_size, std::size_t origin_block)
    : static_part_(std::move(static_part)), block_size_(block_size), origin_block_(origin_block) {
    if (static_part_.rows() != static_part_.cols()) throw std::invalid_argument("hierarchy operator must be square");
    if (block_size_ < 1 || static_part_.rows() % block_size_ != 0) {
        throw std::invalid_argument("operator dimension is not a multiple of the block size");
    }
    if (static_cast<Eigen::Index>(origin_block_) >= static_part_.rows() / block_size_) {
        throw std::invalid_argument("origin block outside the operator");
    }
    static_part_.makeCompressed();

    const Eigen::Index d = static_part_.rows();
    diagonal_positions_.assign(static_cast<std::size_t>(d), -1);
    const int* outer = static_part_.outerIndexPtr();
    const int* inner = static_part_.innerIndexPtr();
    for (Eigen::Index col = 0; col < d; ++col) {
        for (int p = outer[col]; p < outer[col + 1]; ++p) {
            if (inner[p] == col) {
                diagonal_positions_[static_cast<std::size_t>(col)] = p;
                break;
            }
        }
        if (diagonal_positions_[static_cast<std::size_t>(col)] < 0) {
            throw std::invalid_argument("hierarchy operator must store every diagonal entry explicitly");
        }
    }
}

SparseMatrix HierarchyOperator::shifted(cplx s) const {
    SparseMatrix a = static_part_;
    for (auto p : diagonal_positions_) a.valuePtr()[p] += s;
    return a;
}

void HierarchyOperator::write_shifted(cplx s, SparseMatrix& target) const {
    if (target.nonZeros() != static_part_.nonZeros() || target.rows() != static_part_.rows()) {
        throw std::invalid_argument("shift target does not share the operator pattern");
    }
    std::copy_n(static_part_.valuePtr(), static_part_.nonZeros(), target.valuePtr());
    for (auto p : diagonal_positions_) target.valuePtr()[p] += s;
}

HierarchyOperator assemble_static(const Model& model, const HierarchyBasis& basis, HierarchyScaling scaling) {
    model.validate();
    const int n = model.aggregate.n_monomers;
    const int m = model.bath.term_count();
    if (basis.slots() != m) {
        throw std::invalid_argument("basis has " + std::to_string(basis.slots()) + " slots but the bath has " +
                                    std::to_string(m) + " terms");
    }

    const Eigen::MatrixXcd h_sys = build_system_hamiltonian(model.aggregate);
    const std::vector<BathTerm> terms = model.bath.flattened_terms();
    const std::vector<int> owner = model.bath.slot_monomers();
    const cplx i_unit{0.0, 1.0};
    std::vector<cplx> root_weight(terms.size());
    for (std::size_t j = 0; j < terms.size(); ++j) root_weight[j] = std::sqrt(terms[j].weight);
    const bool normalized = scaling == HierarchyScaling::Normalized;

    std::vector<Eigen::Triplet<cplx, int>> triplets;
    triplets.reserve(basis.size() * static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 2 * m));

    for (std::size_t row_k = 0; row_k < basis.size(); ++row_k) {
        const auto k = basis.index(row_k);
        const int base = static_cast<int>(row_k) * n;

        cplx damping{0.0, 0.0};
        for (int j = 0; j < m; ++j) damping += static_cast<double>(k[static_cast<std::size_t>(j)]) * terms[static_cast<std::size_t>(j)].decay;
        if (damping.real() < 0.0) throw std::logic_error("negative hierarchy damping on the diagonal");

        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                cplx value = i_unit * h_sys(a, b);
                if (a == b) value += damping;
                // diagonal stored even when zero
                if (a == b || value != cplx{0.0, 0.0}) triplets.emplace_back(base + a, base + b, value);
            }
        }

        for (int j = 0; j < m; ++j) {
            const auto slot = static_cast<std::size_t>(j);
            const int site = owner[slot];
            const int row = base + site;
            const double kj = static_cast<double>(k[slot]);
            if (auto lower = basis.neighbor(row_k, j, Direction::Down)) {
                const cplx coeff = normalized ? i_unit * root_weight[slot] * std::sqrt(kj) : -kj * terms[slot].weight;
                triplets.emplace_back(row, static_cast<int>(*lower) * n + site, coeff);
            }
            if (auto upper = basis.neighbor(row_k, j, Direction::Up)) {
                const cplx coeff = normalized ? i_unit * root_weight[slot] * std::sqrt(kj + 1.0) : cplx{1.0, 0.0};
                triplets.emplace_back(row, static_cast<int>(*upper) * n + site, coeff);
            }
        }
    }

    const std::vector<int> zero(static_cast<std::size_t>(m), 0);
    const auto origin = basis.ordinal_of(zero);
    if (!origin) throw std::logic_error("basis lacks the zero multi-index");

    const auto d = static_cast<Eigen::Index>(basis.size()) * n;
    SparseMatrix a0(d, d);
    a0.setFromTriplets(triplets.begin(), triplets.end());
    return HierarchyOperator(std::move(a0), n, *origin);
}

Eigen::VectorXcd rhs_for_initial_site(const HierarchyBasis& basis, int n_monomers, int site) {
    if (n_monomers < 1) throw std::invalid_argument("need at least one monomer");
    if (site < 0 || site >= n_monomers) {
        throw std::out_of_range("initial site " + std::to_string(site + 1) + " outside 1.." + std::to_string(n_monomers));
    }
    const std::vector<int> zero(static_cast<std::size_t>(basis.slots()), 0);
    const auto origin = basis.ordinal_of(zero);
    if (!origin) throw std::logic_error("basis lacks the zero multi-index");

    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()) * n_monomers);
    b(static_cast<Eigen::Index>(*origin) * n_monomers + site) = 1.0;
    return b;
}

Eigen::MatrixXcd initial_site_rhs(const HierarchyBasis& basis, int n_monomers) {
    Eigen::MatrixXcd b(static_cast<Eigen::Index>(basis.size()) * n_monomers, n_monomers);
    for (int site = 0; site < n_monomers; ++site) b.col(site) = rhs_for_initial_site(basis, n_monomers, site);
    return b;
}

}  // namespace hopspec
