#include "hopspec/solver.hpp"

#include "hopspec/errors.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#ifdef HOPSPEC_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

namespace hopspec {

std::string_view to_string(SolverStrategy s) noexcept {
    switch (s) {
        case SolverStrategy::Direct: return "direct";
        case SolverStrategy::Iterative: return "iterative";
        case SolverStrategy::Auto: break;
    }
    return "auto";
}

SolverStrategy parse_solver_strategy(std::string_view text) {
    if (text == "auto") return SolverStrategy::Auto;
    if (text == "direct") return SolverStrategy::Direct;
    if (text == "iterative") return SolverStrategy::Iterative;
    throw std::invalid_argument("unknown solver strategy '" + std::string(text) + "' (expected auto, direct or iterative)");
}

std::string_view to_string(AxisName a) noexcept {
    switch (a) {
        case AxisName::G: return "g";
        case AxisName::V: return "V";
        case AxisName::Gamma: break;
    }
    return "gamma";
}

AxisName parse_axis_name(std::string_view text) {
    if (text == "gamma") return AxisName::Gamma;
    if (text == "g") return AxisName::G;
    if (text == "V" || text == "v") return AxisName::V;
    throw std::invalid_argument("unknown sweep axis '" + std::string(text) + "' (expected gamma, g or V)");
}

double relative_residual(const SparseMatrix& a, const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& b) {
    const Eigen::MatrixXcd r = a * x - b;
    double worst = 0.0;
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
        const double denom = b.col(c).norm();
        const double num = r.col(c).norm();
        worst = std::max(worst, denom > 0.0 ? num / denom : num);
    }
    return worst;
}

namespace {

std::string at_point(const LaplacePoint& s) {
    std::ostringstream os;
    os.precision(17);
    os << " at s = " << s.epsilon << " - i*" << s.omega;
    return os.str();
}

}  // namespace

// Sparse LU with a pattern analysed once. UMFPACK (nested-dissection ordering) when
// available, Eigen's SparseLU otherwise.
struct PointSolver::DirectBackend {
#ifdef HOPSPEC_HAVE_UMFPACK
    Eigen::UmfPackLU<SparseMatrix> lu;

    explicit DirectBackend(const SparseMatrix& pattern) {
        static std::mutex analysis_mutex;  // METIS ordering is not reentrant
        std::lock_guard lock(analysis_mutex);
        lu.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
        lu.umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_METIS;
        lu.analyzePattern(pattern);
        if (lu.info() != Eigen::Success) {
            lu.umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_AMD;
            lu.analyzePattern(pattern);
        }
    }
    static constexpr std::string_view name = "umfpack";
    std::string error_message() const { return "UMFPACK numeric factorization failed"; }
#else
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;

    explicit DirectBackend(const SparseMatrix& pattern) { lu.analyzePattern(pattern); }
    static constexpr std::string_view name = "sparselu";
    std::string error_message() const { return "sparse LU factorization failed: " + lu.lastErrorMessage(); }
#endif
};

PointSolver::PointSolver(const HierarchyOperator& op, SolverOptions options)
    : op_(op), options_(options), work_(op.static_part()) {
    switch (options_.strategy) {
        case SolverStrategy::Direct: direct_ = true; break;
        case SolverStrategy::Iterative: direct_ = false; break;
        case SolverStrategy::Auto: direct_ = op_.dimension() <= options_.direct_threshold; break;
    }
    if (direct_) lu_ = std::make_unique<DirectBackend>(work_);
}

PointSolver::~PointSolver() = default;

std::string_view PointSolver::backend() const noexcept {
    return direct_ ? DirectBackend::name : std::string_view{"bicgstab"};
}

Eigen::MatrixXcd PointSolver::solve_direct(const LaplacePoint& s, const Eigen::MatrixXcd& rhs) {
    op_.write_shifted(s.value(), work_);
    lu_->lu.factorize(work_);
    if (lu_->lu.info() != Eigen::Success) throw SolverError(lu_->error_message() + at_point(s), s.omega);

    Eigen::MatrixXcd x = lu_->lu.solve(rhs);
    // Iterative refinement for the few points sitting on sharp resonances.
    for (int step = 0; step < 3 && relative_residual(work_, x, rhs) > options_.tolerance; ++step) {
        const Eigen::MatrixXcd r = rhs - work_ * x;
        x += lu_->lu.solve(r);
    }
    return x;
}

Eigen::MatrixXcd PointSolver::solve_iterative(const LaplacePoint& s, const Eigen::MatrixXcd& rhs) {
    op_.write_shifted(s.value(), work_);
    Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<cplx>> krylov;
    krylov.setTolerance(options_.tolerance);
    krylov.setMaxIterations(options_.max_iterations);
    krylov.compute(work_);
    if (krylov.info() != Eigen::Success) {
        throw SolverError("preconditioner setup failed" + at_point(s), s.omega);
    }
    Eigen::MatrixXcd x(rhs.rows(), rhs.cols());
    for (Eigen::Index c = 0; c < rhs.cols(); ++c) {
        x.col(c) = krylov.solve(rhs.col(c));
        if (krylov.info() != Eigen::Success) {
            throw SolverError("BiCGSTAB did not converge in " + std::to_string(options_.max_iterations) +
                                  " iterations" + at_point(s),
                              s.omega);
        }
    }
    return x;
}

Eigen::MatrixXcd PointSolver::solve_full(const LaplacePoint& s, const Eigen::MatrixXcd& rhs, double* residual) {
    s.validate();
    if (rhs.rows() != op_.dimension()) throw std::invalid_argument("right-hand side has the wrong dimension");

    Eigen::MatrixXcd x = direct_ ? solve_direct(s, rhs) : solve_iterative(s, rhs);
    const double res = relative_residual(work_, x, rhs);
    if (!(res <= options_.tolerance)) {
        std::ostringstream os;
        os << "relative residual " << res << " exceeds tolerance " << options_.tolerance << at_point(s);
        throw SolverError(os.str(), s.omega);
    }
    if (residual) *residual = res;
    return x;
}

CorrelationBlock PointSolver::solve(const LaplacePoint& s, const Eigen::MatrixXcd& rhs) {
    CorrelationBlock block;
    block.s = s;
    const Eigen::MatrixXcd x = solve_full(s, rhs, &block.residual);
    const int n = op_.block_size();
    block.c_tilde = x.middleRows(static_cast<Eigen::Index>(op_.origin_block()) * n, n);
    return block;
}

CorrelationBlock solve_point(const HierarchyOperator& op, const LaplacePoint& s, const Eigen::MatrixXcd& rhs,
                             const SolverOptions& options) {
    PointSolver solver(op, options);
    return solver.solve(s, rhs);
}

void SweepPlan::validate() const {
    if (omega_grid.empty()) throw std::invalid_argument("frequency grid is empty");
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        if (!std::isfinite(omega_grid[i])) throw std::invalid_argument("frequency grid has a non-finite value");
        if (i > 0 && !(omega_grid[i] > omega_grid[i - 1])) {
            throw std::invalid_argument("frequency grid must be strictly increasing");
        }
    }
    LaplacePoint{epsilon, 0.0}.validate();
    if (e_max < 0) throw std::invalid_argument("e_max must be >= 0");
    if (workers < 0) throw std::invalid_argument("worker count must be >= 0");
    if (!(solver.tolerance > 0.0)) throw std::invalid_argument("solver tolerance must be > 0");
    if (solver.max_iterations < 1) throw std::invalid_argument("solver max_iterations must be >= 1");
    if (parameter_axis) {
        if (parameter_axis->values.empty()) throw std::invalid_argument("sweep axis has no values");
        for (double v : parameter_axis->values) {
            if (!std::isfinite(v)) throw std::invalid_argument("sweep axis has a non-finite value");
        }
    }
}

std::vector<double> linear_grid(double lo, double hi, int points) {
    if (points < 1) throw std::invalid_argument("grid needs at least one point");
    if (points == 1) return {lo};
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = lo + step * i;
    grid.back() = hi;
    return grid;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > 0.0)) throw std::invalid_argument("log grid bounds must be positive");
    std::vector<double> grid = linear_grid(std::log10(lo), std::log10(hi), points);
    for (auto& v : grid) v = std::pow(10.0, v);
    grid.front() = lo;
    if (points > 1) grid.back() = hi;
    return grid;
}

Model apply_axis(const Model& model, AxisName axis, double value) {
    Model out = model;
    switch (axis) {
        case AxisName::V:
            out.aggregate.coupling = value;
            break;
        case AxisName::G:
            for (auto& terms : out.bath.per_monomer_terms)
                for (auto& t : terms) t.weight = cplx{value, 0.0};
            break;
        case AxisName::Gamma:
            for (auto& terms : out.bath.per_monomer_terms)
                for (auto& t : terms) t.decay = cplx{value, t.decay.imag()};
            break;
    }
    return out;
}

namespace {

int resolve_workers(int requested, std::size_t jobs) {
    int w = requested > 0 ? requested : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(w), std::max<std::size_t>(jobs, 1)));
}

}  // namespace

std::vector<CorrelationBlock> sweep_frequency(const Model& model, const SweepPlan& plan) {
    plan.validate();
    model.validate();
    const int n = model.aggregate.n_monomers;
    const HierarchyBasis basis = enumerate_basis(model.bath.term_count(), plan.e_max, n, plan.unknown_cap);
    const HierarchyOperator op = assemble_static(model, basis, plan.scaling);
    const Eigen::MatrixXcd rhs = initial_site_rhs(basis, n);

    const std::size_t jobs = plan.omega_grid.size();
    std::vector<CorrelationBlock> out(jobs);
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = jobs;
    std::exception_ptr error;

    auto worker = [&] {
        std::unique_ptr<PointSolver> solver;
        try {
            solver = std::make_unique<PointSolver>(op, plan.solver);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            return;
        }
        for (std::size_t i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) {
            try {
                out[i] = solver->solve(LaplacePoint{plan.epsilon, plan.omega_grid[i]}, rhs);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };

    const int workers = resolve_workers(plan.workers, jobs);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const SolverError& e) {
            throw SolverError(std::string(e.what()) + " (grid position " + std::to_string(error_index) + ")", e.omega());
        }
    }
    return out;
}

std::vector<std::vector<CorrelationBlock>> sweep_parameter(const Model& model, const SweepPlan& plan) {
    plan.validate();
    if (!plan.parameter_axis) throw std::invalid_argument("parameter sweep needs an axis");
    std::vector<std::vector<CorrelationBlock>> rows;
    rows.reserve(plan.parameter_axis->values.size());
    for (double value : plan.parameter_axis->values) {
        rows.push_back(sweep_frequency(apply_axis(model, plan.parameter_axis->name, value), plan));
    }
    return rows;
}

}  // namespace hopspec
