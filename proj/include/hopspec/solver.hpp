// solver.hpp: per-point solves of A(s) X = B and frequency / parameter sweeps

#pragma once

#include "hopspec/assembler.hpp"
#include "hopspec/model.hpp"

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace hopspec {

enum class SolverStrategy { Auto, Direct, Iterative };

std::string_view to_string(SolverStrategy s) noexcept;
SolverStrategy parse_solver_strategy(std::string_view text);

struct SolverOptions {
    SolverStrategy strategy{SolverStrategy::Auto};
    // Auto switches from sparse LU to preconditioned BiCGSTAB above this many unknowns.
    Eigen::Index direct_threshold{200'000};
    double tolerance{1e-10};     // relative residual per column
    int max_iterations{10'000};  // Krylov only
};

// c_tilde(n, m) = <pi_n | Psi_m^(0)(s)>, taken from the physical block of the solution.
struct CorrelationBlock {
    LaplacePoint s;
    Eigen::MatrixXcd c_tilde;
    double residual{0.0};  // max relative residual over the columns
};

// Owns the factorization workspace for one operator; not shareable between threads.
// The sparsity pattern is analysed once, each solve only refactorizes numerically.
class PointSolver {
public:
    explicit PointSolver(const HierarchyOperator& op, SolverOptions options = {});
    ~PointSolver();
    PointSolver(const PointSolver&) = delete;
    PointSolver& operator=(const PointSolver&) = delete;

    // Full solution X (dimension x columns); `residual` receives the max relative residual.
    Eigen::MatrixXcd solve_full(const LaplacePoint& s, const Eigen::MatrixXcd& rhs, double* residual = nullptr);
    CorrelationBlock solve(const LaplacePoint& s, const Eigen::MatrixXcd& rhs);

    bool uses_direct() const noexcept { return direct_; }
    // "umfpack", "sparselu" or "bicgstab".
    std::string_view backend() const noexcept;

private:
    struct DirectBackend;

    Eigen::MatrixXcd solve_direct(const LaplacePoint& s, const Eigen::MatrixXcd& rhs);
    Eigen::MatrixXcd solve_iterative(const LaplacePoint& s, const Eigen::MatrixXcd& rhs);

    const HierarchyOperator& op_;
    SolverOptions options_;
    bool direct_;
    SparseMatrix work_;
    std::unique_ptr<DirectBackend> lu_;
};

// Max over columns of ||A x - b|| / ||b||.
double relative_residual(const SparseMatrix& a, const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& b);

CorrelationBlock solve_point(const HierarchyOperator& op, const LaplacePoint& s, const Eigen::MatrixXcd& rhs,
                             const SolverOptions& options = {});

enum class AxisName { Gamma, G, V };

std::string_view to_string(AxisName a) noexcept;
AxisName parse_axis_name(std::string_view text);

struct ParameterAxis {
    AxisName name{AxisName::Gamma};
    std::vector<double> values;
};

struct SweepPlan {
    std::vector<double> omega_grid;
    double epsilon{0.01};
    std::optional<ParameterAxis> parameter_axis;
    int e_max{12};
    int workers{0};  // 0 = hardware concurrency
    SolverOptions solver;
    HierarchyScaling scaling{HierarchyScaling::Normalized};
    std::size_t unknown_cap{5'000'000};

    void validate() const;
};

// `points` equally spaced values on [lo, hi]; endpoints exact.
std::vector<double> linear_grid(double lo, double hi, int points);
std::vector<double> log_grid(double lo, double hi, int points);

// Model with every bath term (gamma, g) or the aggregate coupling (V) replaced by `value`.
Model apply_axis(const Model& model, AxisName axis, double value);

// One block per grid point in grid order; identical output for any worker count.
std::vector<CorrelationBlock> sweep_frequency(const Model& model, const SweepPlan& plan);

// Row-major [axis value][omega]. Requires plan.parameter_axis.
std::vector<std::vector<CorrelationBlock>> sweep_parameter(const Model& model, const SweepPlan& plan);

}  // namespace hopspec
