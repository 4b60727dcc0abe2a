#include "gelshatter/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gelshatter::meanfield {

void rhs_into(const std::vector<double>& n, const Params& params, std::vector<double>& dndt) {
    const std::size_t k_cut = n.size() - 1;
    dndt.assign(n.size(), 0.0);

    const double inv_m = 1.0 / params.mass_scale;
    const double coal = params.k_hat * inv_m * inv_m;
    const double frag = params.f_hat * inv_m;

    // Highest occupied size; zero tails cost nothing below.
    std::size_t k_act = 0;
    for (std::size_t k = k_cut; k >= 1; --k) {
        if (n[k] != 0.0) {
            k_act = k;
            break;
        }
    }
    if (k_act == 0) return;

    // Prefix sums S1[j] = sum_{i<=j} i*n_i make the coalescence loss linear.
    static thread_local std::vector<double> s1;
    s1.assign(k_cut + 1, 0.0);
    for (std::size_t i = 1; i <= k_cut; ++i)
        s1[i] = s1[i - 1] + static_cast<double>(i) * n[i];

    // Coalescence gain: 0.5 * sum_{i+j=k} K(i,j) n_i n_j.
    const std::size_t gain_max = std::min(k_cut, 2 * k_act);
    for (std::size_t k = 2; k <= gain_max; ++k) {
        double acc = 0.0;
        const std::size_t half = (k - 1) / 2;
        const std::size_t lo = k > k_act ? k - k_act : 1;  // partner must be occupied
        for (std::size_t i = lo; i <= half; ++i) {
            acc += static_cast<double>(i) * n[i] * static_cast<double>(k - i) * n[k - i];
        }
        acc *= 2.0;
        if (k % 2 == 0) {
            const double m = static_cast<double>(k / 2) * n[k / 2];
            acc += m * m;
        }
        dndt[k] += 0.5 * coal * acc;
    }

    // Coalescence loss, truncation-consistent: only partners i <= k_cut - k.
    for (std::size_t k = 1; k <= std::min(k_act, k_cut - 1); ++k) {
        if (n[k] == 0.0) continue;
        dndt[k] -= coal * static_cast<double>(k) * n[k] * s1[k_cut - k];
    }

    // Shattering: linear loss for k >= 2, mass returned as monomers.
    double monomer_gain = 0.0;
    for (std::size_t k = 2; k <= k_act; ++k) {
        if (n[k] == 0.0) continue;
        const double rate = frag * static_cast<double>(k);
        dndt[k] -= rate * n[k];
        monomer_gain += rate * static_cast<double>(k) * n[k];
    }
    dndt[1] += monomer_gain;
}

std::vector<double> rhs(const State& state, const Params& params) {
    std::vector<double> dndt;
    rhs_into(state.n, params, dndt);
    return dndt;
}

double rhs_inf_norm(const State& state, const Params& params) {
    const auto d = rhs(state, params);
    double norm = 0.0;
    for (double v : d) norm = std::max(norm, std::abs(v));
    return norm;
}

namespace {

void check_nonnegative(const std::vector<double>& n, double t) {
    for (std::size_t k = 1; k < n.size(); ++k) {
        if (n[k] < -1e-12)
            throw IntegrationError("integrate: n_" + std::to_string(k) + " = " +
                                   std::to_string(n[k]) + " at t = " + std::to_string(t) +
                                   "; reduce dt");
    }
}

void rk4_step(std::vector<double>& n, const Params& params, double dt,
              std::vector<double>& k1, std::vector<double>& k2, std::vector<double>& k3,
              std::vector<double>& k4, std::vector<double>& tmp) {
    const std::size_t len = n.size();
    rhs_into(n, params, k1);
    tmp.resize(len);
    for (std::size_t i = 0; i < len; ++i) tmp[i] = n[i] + 0.5 * dt * k1[i];
    rhs_into(tmp, params, k2);
    for (std::size_t i = 0; i < len; ++i) tmp[i] = n[i] + 0.5 * dt * k2[i];
    rhs_into(tmp, params, k3);
    for (std::size_t i = 0; i < len; ++i) tmp[i] = n[i] + dt * k3[i];
    rhs_into(tmp, params, k4);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < len; ++i)
        n[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

State integrate(State state, const Params& params, double dt, double total_time) {
    if (dt <= 0.0) throw std::invalid_argument("dt: must be > 0");
    if (total_time < 0.0) throw std::invalid_argument("total_time: must be >= 0");
    if (total_time == 0.0) return state;

    std::vector<double> k1, k2, k3, k4, tmp;
    const auto n_full = static_cast<std::uint64_t>(total_time / dt + 1e-9);
    for (std::uint64_t s = 0; s < n_full; ++s) {
        rk4_step(state.n, params, dt, k1, k2, k3, k4, tmp);
        state.t += dt;
        check_nonnegative(state.n, state.t);
    }
    const double remainder = total_time - static_cast<double>(n_full) * dt;
    if (remainder > 1e-12 * total_time) {
        rk4_step(state.n, params, remainder, k1, k2, k3, k4, tmp);
        state.t += remainder;
        check_nonnegative(state.n, state.t);
    }
    return state;
}

std::uint64_t catalan(unsigned n) {
    // The convolution recurrence never overflows intermediates because the
    // partial sums are bounded by the result; C_35 is the last to fit u64.
    constexpr unsigned k_max_exact = 35;
    if (n > k_max_exact)
        throw std::out_of_range("catalan: n > 35 exceeds 64 bits, use log_catalan");
    static const auto table = [] {
        std::vector<std::uint64_t> c(k_max_exact + 1, 0);
        c[0] = 1;
        for (unsigned m = 0; m < k_max_exact; ++m) {
            std::uint64_t acc = 0;
            for (unsigned i = 0; i <= m; ++i) acc += c[i] * c[m - i];
            c[m + 1] = acc;
        }
        return c;
    }();
    return table[n];
}

double log_catalan(unsigned n) {
    // C_n = binom(2n, n) / (n + 1)
    const double dn = static_cast<double>(n);
    return std::lgamma(2.0 * dn + 1.0) - 2.0 * std::lgamma(dn + 1.0) - std::log(dn + 1.0);
}

SteadyStateSolution catalan_steady_state(double k_hat, double f_hat, std::size_t k_max_out) {
    if (f_hat <= 0.0)
        throw std::invalid_argument("f_hat: must be > 0 (gamma = 1/2 is degenerate)");
    if (k_hat < 0.0) throw std::invalid_argument("k_hat: must be >= 0");
    if (k_max_out < 1) throw std::invalid_argument("k_max_out: must be >= 1");

    SteadyStateSolution sol;
    sol.gamma = 0.5 * k_hat / (f_hat + k_hat);
    sol.rho1 = 1.0 - sol.gamma;
    sol.branch_ratio = 4.0 * sol.gamma * sol.rho1;
    sol.rho.assign(k_max_out + 1, 0.0);
    sol.rho[1] = sol.rho1;

    const double log_gamma = sol.gamma > 0.0 ? std::log(sol.gamma) : 0.0;
    const double log_rho1 = std::log(sol.rho1);
    for (std::size_t k = 2; k <= k_max_out; ++k) {
        if (sol.gamma == 0.0) break;  // pure fragmentation: monomers only
        if (k - 1 <= 35) {
            sol.rho[k] = static_cast<double>(catalan(static_cast<unsigned>(k - 1))) *
                         std::pow(sol.gamma, static_cast<double>(k - 1)) *
                         std::pow(sol.rho1, static_cast<double>(k));
        } else {
            const double lg = log_catalan(static_cast<unsigned>(k - 1)) +
                              static_cast<double>(k - 1) * log_gamma +
                              static_cast<double>(k) * log_rho1;
            sol.rho[k] = std::exp(lg);
        }
    }
    return sol;
}

double loglog_slope(const std::vector<double>& rho, std::size_t k_lo, std::size_t k_hi) {
    if (k_lo < 1 || k_hi >= rho.size() || k_lo >= k_hi)
        throw std::invalid_argument("loglog_slope: window out of range");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double n = 0.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        if (rho[k] <= 0.0) throw std::invalid_argument("loglog_slope: non-positive density");
        const double x = std::log(static_cast<double>(k));
        const double y = std::log(rho[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        n += 1.0;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace gelshatter::meanfield
