#include "hopspec/oracle.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace hopspec {

namespace {

namespace odeint = boost::numeric::odeint;

using State = std::vector<cplx>;

// Own index enumeration, independent of HierarchyBasis.
struct TimeHierarchy {
    int slots{0};
    std::vector<std::vector<int>> index;
    std::vector<std::vector<int>> up;    // -1 when k + e_j is truncated
    std::vector<std::vector<int>> down;  // -1 when k_j == 0

    TimeHierarchy(int m, int e_max) : slots(m) {
        std::map<std::vector<int>, int> lookup;
        std::vector<int> k(m, 0);
        auto visit = [&](auto&& self, int slot, int remaining) -> void {
            if (slot == m) {
                lookup.emplace(k, 0);
                return;
            }
            for (int q = 0; q <= remaining; ++q) {
                k[slot] = q;
                self(self, slot + 1, remaining - q);
            }
            k[slot] = 0;
        };
        visit(visit, 0, e_max);
        int next = 0;
        for (auto& [key, ord] : lookup) {
            ord = next++;
            index.push_back(key);
        }
        up.assign(index.size(), std::vector<int>(m, -1));
        down.assign(index.size(), std::vector<int>(m, -1));
        for (std::size_t a = 0; a < index.size(); ++a) {
            for (int j = 0; j < m; ++j) {
                auto probe = index[a];
                ++probe[j];
                if (auto it = lookup.find(probe); it != lookup.end()) up[a][j] = it->second;
                probe[j] -= 2;
                if (probe[j] >= 0) down[a][j] = lookup.at(probe);
            }
        }
    }

    int size() const { return static_cast<int>(index.size()); }
    int origin() const {
        for (int a = 0; a < size(); ++a)
            if (std::all_of(index[a].begin(), index[a].end(), [](int q) { return q == 0; })) return a;
        return -1;
    }
};

struct Rhs {
    const TimeHierarchy& h;
    Eigen::MatrixXcd hsys;
    std::vector<cplx> weight;
    std::vector<cplx> decay;
    std::vector<int> site;  // monomer of each slot
    std::vector<cplx> damping;  // sum_j k_j decay_j per index
    int n{0};
    int origin{0};
    double epsilon{0.0};
    std::vector<double> omega;
    bool uniform{false};
    std::size_t psi_size{0};

    void operator()(const State& x, State& dxdt, double t) const {
        const int d = h.size();
        const cplx minus_i{0.0, -1.0};
        for (int m = 0; m < n; ++m) {
            const cplx* psi = x.data() + static_cast<std::size_t>(m) * d * n;
            cplx* out = dxdt.data() + static_cast<std::size_t>(m) * d * n;
            for (int a = 0; a < d; ++a) {
                const cplx* pa = psi + static_cast<std::size_t>(a) * n;
                cplx* oa = out + static_cast<std::size_t>(a) * n;
                for (int r = 0; r < n; ++r) {
                    cplx acc = -damping[a] * pa[r];
                    for (int c = 0; c < n; ++c) acc += minus_i * hsys(r, c) * pa[c];
                    oa[r] = acc;
                }
                for (int j = 0; j < h.slots; ++j) {
                    const int s = site[j];
                    if (const int lo = h.down[a][j]; lo >= 0)
                        oa[s] += double(h.index[a][j]) * weight[j] * psi[static_cast<std::size_t>(lo) * n + s];
                    if (const int hi = h.up[a][j]; hi >= 0) oa[s] -= psi[static_cast<std::size_t>(hi) * n + s];
                }
            }
        }
        // d/dt I_w(n, m) = e^{-s_w t} c_nm(t)
        const std::size_t block = static_cast<std::size_t>(n) * n;
        cplx phase{}, ratio{};
        if (uniform) {
            phase = std::exp(cplx{-epsilon * t, omega.front() * t});
            ratio = omega.size() > 1 ? std::polar(1.0, (omega[1] - omega[0]) * t) : cplx{1.0, 0.0};
        }
        for (std::size_t w = 0; w < omega.size(); ++w) {
            const cplx f = uniform ? phase : std::exp(cplx{-epsilon * t, omega[w] * t});
            cplx* iw = dxdt.data() + psi_size + w * block;
            for (int m = 0; m < n; ++m) {
                const cplx* c0 = x.data() + (static_cast<std::size_t>(m) * d + origin) * n;
                for (int r = 0; r < n; ++r) iw[static_cast<std::size_t>(m) * n + r] = f * c0[r];
            }
            if (uniform) phase *= ratio;
        }
    }
};

bool is_uniform(const std::vector<double>& grid) {
    if (grid.size() < 3) return true;
    const double h = grid[1] - grid[0];
    for (std::size_t i = 2; i < grid.size(); ++i)
        if (std::abs((grid[i] - grid[i - 1]) - h) > 1e-9 * std::abs(h)) return false;
    return true;
}

}  // namespace

TimeDomainResult time_domain_reference(const Model& model, int e_max, const TimeDomainOptions& options) {
    model.validate();
    if (e_max < 0) throw std::invalid_argument("e_max must be >= 0");
    if (!(options.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (!(options.rel_tolerance > 0.0 && options.abs_tolerance > 0.0)) throw std::invalid_argument("tolerances must be > 0");
    const double t_max = options.t_max > 0.0 ? options.t_max : 25.0 / options.epsilon;

    const int n = model.aggregate.n_monomers;
    const auto terms = model.bath.flattened_terms();
    const TimeHierarchy h(static_cast<int>(terms.size()), e_max);

    Rhs rhs{h, build_system_hamiltonian(model.aggregate), {}, {}, model.bath.slot_monomers(), {}, n, h.origin(),
            options.epsilon, options.omega_grid, is_uniform(options.omega_grid), 0};
    for (const auto& term : terms) {
        rhs.weight.push_back(term.weight);
        rhs.decay.push_back(term.decay);
    }
    for (const auto& k : h.index) {
        cplx sum{};
        for (int j = 0; j < h.slots; ++j) sum += double(k[j]) * rhs.decay[j];
        rhs.damping.push_back(sum);
    }
    rhs.psi_size = static_cast<std::size_t>(n) * h.size() * n;

    const std::size_t block = static_cast<std::size_t>(n) * n;
    State x(rhs.psi_size + options.omega_grid.size() * block, cplx{});
    for (int m = 0; m < n; ++m) x[(static_cast<std::size_t>(m) * h.size() + rhs.origin) * n + m] = 1.0;

    TimeDomainResult result;
    result.omega = options.omega_grid;
    double sup_c = 0.0;
    double next_sample = 0.0;
    auto observe = [&](const State& s, double t) {
        ++result.steps;
        Eigen::MatrixXcd c(n, n);
        for (int m = 0; m < n; ++m)
            for (int r = 0; r < n; ++r) c(r, m) = s[(static_cast<std::size_t>(m) * h.size() + rhs.origin) * n + r];
        sup_c = std::max(sup_c, c.cwiseAbs().maxCoeff());
        if (t >= next_sample) {
            result.times.push_back(t);
            result.c_time.push_back(c);
            next_sample = t + options.sample_interval;
        }
    };

    using Stepper = odeint::runge_kutta_fehlberg78<State, double, State, double>;
    auto controlled = odeint::make_controlled<Stepper>(options.abs_tolerance, options.rel_tolerance);
    try {
        odeint::integrate_adaptive(controlled, rhs, x, 0.0, t_max, 1e-3, observe);
    } catch (const odeint::step_adjustment_error& e) {
        throw std::runtime_error(std::string("time-domain integration failed: ") + e.what());
    }
    if (result.steps > 0) --result.steps;  // the observer also fires at t = 0

    result.tail_bound = sup_c * std::exp(-options.epsilon * t_max) / options.epsilon;
    if (result.tail_bound > options.tail_tolerance) {
        throw std::runtime_error("insufficient decay at t_max: tail bound " + std::to_string(result.tail_bound));
    }
    for (std::size_t w = 0; w < options.omega_grid.size(); ++w) {
        Eigen::MatrixXcd c(n, n);
        for (int m = 0; m < n; ++m)
            for (int r = 0; r < n; ++r) c(r, m) = x[rhs.psi_size + w * block + static_cast<std::size_t>(m) * n + r];
        result.c_tilde.push_back(std::move(c));
    }
    return result;
}

}  // namespace hopspec
