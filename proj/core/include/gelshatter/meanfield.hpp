#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gelshatter::meanfield {

/// Kernel parameters. Coalescence K(i,j) = k_hat*i*j/mass_scale^2,
/// fragmentation F(i) = f_hat*i/mass_scale with shattering to monomers.
/// mass_scale only rescales time; the stationary distribution is invariant.
struct Params {
    double k_hat = 0.0;
    double f_hat = 0.0;
    double mass_scale = 1.0;
};

/// Truncated density vector n[k], k = 1..K_c (index 0 unused).
struct State {
    std::vector<double> n;
    double t = 0.0;

    explicit State(std::size_t k_cutoff) : n(k_cutoff + 1, 0.0) {}
    State() = default;

    std::size_t k_cutoff() const { return n.empty() ? 0 : n.size() - 1; }

    /// Monomer-only initial condition carrying the given total mass.
    static State monomers(std::size_t k_cutoff, double mass = 1.0) {
        State s(k_cutoff);
        s.n[1] = mass;
        return s;
    }

    double mass() const {
        double m = 0.0;
        for (std::size_t k = 1; k < n.size(); ++k) m += static_cast<double>(k) * n[k];
        return m;
    }
};

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Time derivative of the truncated coalescence-fragmentation system.
/// Coalescence pairs whose product would exceed the truncation contribute to
/// neither gain nor loss, so the truncated system conserves mass exactly.
/// Fragmentation removes clusters of size k >= 2 at rate F(k) and returns
/// their mass to monomers.
std::vector<double> rhs(const State& state, const Params& params);
void rhs_into(const std::vector<double>& n, const Params& params, std::vector<double>& dndt);

/// Max-norm of the derivative; stationarity diagnostic.
double rhs_inf_norm(const State& state, const Params& params);

/// Classical fixed-step 4th-order integration to time T (final partial step
/// lands exactly on T). Throws IntegrationError when a density drops below
/// -1e-12, which signals a step size beyond the stability bound.
State integrate(State state, const Params& params, double dt, double total_time);

/// Exact Catalan number via the convolution recurrence; n <= 35 fits u64.
std::uint64_t catalan(unsigned n);

/// log C_n for arbitrary n, through lgamma.
double log_catalan(unsigned n);

/// Closed-form stationary solution: mass densities
/// rho_k = C_{k-1} gamma^{k-1} rho1^k with gamma = (k_hat/2)/(f_hat + k_hat)
/// and rho1 = 1 - gamma under sum(rho) = 1.
struct SteadyStateSolution {
    std::vector<double> rho;  // rho[k], k = 1..k_max_out; index 0 unused
    double gamma = 0.0;
    double rho1 = 0.0;
    /// 4*gamma*rho1; the geometric factor of the large-k tail. Convergence of
    /// the mass sum requires this to stay below 1 (it equals 1 only for
    /// f_hat = 0).
    double branch_ratio = 0.0;
};

/// Requires f_hat > 0 (f_hat = 0 has gamma = 1/2 and a degenerate, gelling
/// closed form).
SteadyStateSolution catalan_steady_state(double k_hat, double f_hat, std::size_t k_max_out);

/// Least-squares slope of log(rho_k) against log(k) over [k_lo, k_hi].
double loglog_slope(const std::vector<double>& rho, std::size_t k_lo, std::size_t k_hi);

}  // namespace gelshatter::meanfield
