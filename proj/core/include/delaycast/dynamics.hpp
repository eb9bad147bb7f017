#ifndef DELAYCAST_DYNAMICS_HPP
#define DELAYCAST_DYNAMICS_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "delaycast/matrix.hpp"
#include "delaycast/timeseries.hpp"

namespace delaycast {

/// Right-hand side of an autonomous ODE system. eval writes the derivative of
/// `state` into `out`; both have length `dimension`. Must be deterministic.
struct VectorField {
    int dimension = 0;
    std::function<void(std::span<const double> state, std::span<double> out)> eval;
};

/// Classical fourth-order Runge-Kutta. Returns a (steps+1) x dimension
/// trajectory whose first row is x0. Throws numerical_error (with the step
/// index) if the state leaves the finite range.
RowMatrix rk4_integrate(const VectorField& field, std::span<const double> x0, double dt, int steps);

/// Lorenz 63: dx = sigma(y-x), dy = x(rho-z) - y, dz = xy - beta z.
VectorField lorenz63_field(double sigma, double rho, double beta);

/// Lorenz 96 on K >= 4 cyclic sites: dxi_k = (xi_{k+1} - xi_{k-2}) xi_{k-1} - xi_k + F.
VectorField lorenz96_field(int k_sites, double forcing);

/// Henon map trajectory from (x0, y0): x' = 1 - a x^2 + y, y' = b x.
/// Returns (n+1) x 2 states including the initial one.
RowMatrix henon_iterate(double a, double b, double x0, double y0, int n);

/// Logistic map x' = r x (1 - x) for 0 < x0 < 1 and 0 < r <= 4.
/// Returns n+1 values including x0.
std::vector<double> logistic_iterate(double r, double x0, int n);

enum class BenchmarkSystem { lorenz63, lorenz96, henon, logistic };

struct SystemParams {
    // lorenz63
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
    // lorenz96
    int lorenz96_sites = 22;
    double forcing = 5.0;
    // henon
    double henon_a = 1.4;
    double henon_b = 0.3;
    // logistic
    double logistic_r = 3.65;
};

/// How a benchmark trace is produced: run total_steps, drop the first
/// `discard` states as transient, observe one state component.
struct GenerationProtocol {
    int total_steps = 60000;
    int discard = 10000;
    double dt = 1.0 / 64.0; // ignored by maps
    int observable_index = 0;
    std::vector<double> initial_state; // empty: use the documented default
};

/// Default initial states: Lorenz 63 (1, 1, 1); Lorenz 96 all-F with site 0
/// nudged by +0.01; Henon (0.1, 0.1); logistic 0.1.
std::vector<double> default_initial_state(BenchmarkSystem system, const SystemParams& params);

GenerationProtocol default_protocol(BenchmarkSystem system, const SystemParams& params);

/// Generate the scalar observable trace of length total_steps - discard.
TimeSeries generate_benchmark_trace(BenchmarkSystem system, const GenerationProtocol& protocol,
                                    const SystemParams& params);

std::string to_string(BenchmarkSystem system);
BenchmarkSystem benchmark_system_from_string(const std::string& name);

} // namespace delaycast

#endif
