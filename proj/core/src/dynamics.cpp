#include "delaycast/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "delaycast/error.hpp"

namespace delaycast {

namespace {

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

// One classical RK4 step in place. Scratch holds 5 derivative-sized buffers.
void rk4_step(const VectorField& field, std::vector<double>& state, double dt,
              std::vector<double>& scratch) {
    const int d = field.dimension;
    double* k1 = scratch.data();
    double* k2 = k1 + d;
    double* k3 = k2 + d;
    double* k4 = k3 + d;
    double* tmp = k4 + d;

    field.eval(state, {k1, static_cast<std::size_t>(d)});
    for (int i = 0; i < d; ++i) tmp[i] = state[i] + 0.5 * dt * k1[i];
    field.eval({tmp, static_cast<std::size_t>(d)}, {k2, static_cast<std::size_t>(d)});
    for (int i = 0; i < d; ++i) tmp[i] = state[i] + 0.5 * dt * k2[i];
    field.eval({tmp, static_cast<std::size_t>(d)}, {k3, static_cast<std::size_t>(d)});
    for (int i = 0; i < d; ++i) tmp[i] = state[i] + dt * k3[i];
    field.eval({tmp, static_cast<std::size_t>(d)}, {k4, static_cast<std::size_t>(d)});
    for (int i = 0; i < d; ++i) {
        state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

} // namespace

RowMatrix rk4_integrate(const VectorField& field, std::span<const double> x0, double dt, int steps) {
    if (static_cast<int>(x0.size()) != field.dimension) {
        throw std::invalid_argument("rk4_integrate: initial state dimension mismatch");
    }
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_integrate needs dt > 0");
    if (steps < 1) throw std::invalid_argument("rk4_integrate needs steps >= 1");

    const int d = field.dimension;
    RowMatrix trajectory(steps + 1, d);
    std::vector<double> state(x0.begin(), x0.end());
    std::vector<double> scratch(5 * static_cast<std::size_t>(d));

    auto out0 = trajectory.row(0);
    std::copy(state.begin(), state.end(), out0.begin());
    for (int s = 1; s <= steps; ++s) {
        rk4_step(field, state, dt, scratch);
        if (!all_finite(state)) {
            throw numerical_error("trajectory became non-finite at step " + std::to_string(s));
        }
        auto out = trajectory.row(s);
        std::copy(state.begin(), state.end(), out.begin());
    }
    return trajectory;
}

VectorField lorenz63_field(double sigma, double rho, double beta) {
    VectorField f;
    f.dimension = 3;
    f.eval = [sigma, rho, beta](std::span<const double> s, std::span<double> out) {
        out[0] = sigma * (s[1] - s[0]);
        out[1] = s[0] * (rho - s[2]) - s[1];
        out[2] = s[0] * s[1] - beta * s[2];
    };
    return f;
}

VectorField lorenz96_field(int k_sites, double forcing) {
    if (k_sites < 4) {
        throw std::invalid_argument("lorenz96_field needs K >= 4 sites, got " + std::to_string(k_sites));
    }
    VectorField f;
    f.dimension = k_sites;
    f.eval = [k_sites, forcing](std::span<const double> s, std::span<double> out) {
        const int K = k_sites;
        for (int k = 0; k < K; ++k) {
            const int kp1 = k + 1 == K ? 0 : k + 1;
            const int km1 = k == 0 ? K - 1 : k - 1;
            const int km2 = k <= 1 ? k + K - 2 : k - 2;
            out[k] = (s[kp1] - s[km2]) * s[km1] - s[k] + forcing;
        }
    };
    return f;
}

RowMatrix henon_iterate(double a, double b, double x0, double y0, int n) {
    if (n < 1) throw std::invalid_argument("henon_iterate needs n >= 1");
    RowMatrix trajectory(n + 1, 2);
    double x = x0, y = y0;
    trajectory(0, 0) = x;
    trajectory(0, 1) = y;
    for (int s = 1; s <= n; ++s) {
        const double xn = 1.0 - a * x * x + y;
        const double yn = b * x;
        x = xn;
        y = yn;
        if (!std::isfinite(x) || !std::isfinite(y)) {
            throw numerical_error("trajectory became non-finite at step " + std::to_string(s));
        }
        trajectory(s, 0) = x;
        trajectory(s, 1) = y;
    }
    return trajectory;
}

std::vector<double> logistic_iterate(double r, double x0, int n) {
    if (!(x0 > 0.0 && x0 < 1.0)) throw std::invalid_argument("logistic_iterate needs 0 < x0 < 1");
    if (!(r > 0.0 && r <= 4.0)) throw std::invalid_argument("logistic_iterate needs 0 < r <= 4");
    if (n < 1) throw std::invalid_argument("logistic_iterate needs n >= 1");
    std::vector<double> x(n + 1);
    x[0] = x0;
    for (int s = 1; s <= n; ++s) {
        x[s] = r * x[s - 1] * (1.0 - x[s - 1]);
    }
    return x;
}

std::vector<double> default_initial_state(BenchmarkSystem system, const SystemParams& params) {
    switch (system) {
        case BenchmarkSystem::lorenz63:
            return {1.0, 1.0, 1.0};
        case BenchmarkSystem::lorenz96: {
            std::vector<double> s(params.lorenz96_sites, params.forcing);
            if (!s.empty()) s[0] += 0.01; // break the all-F equilibrium
            return s;
        }
        case BenchmarkSystem::henon:
            return {0.1, 0.1};
        case BenchmarkSystem::logistic:
            return {0.1};
    }
    throw std::invalid_argument("unknown benchmark system");
}

GenerationProtocol default_protocol(BenchmarkSystem system, const SystemParams& params) {
    GenerationProtocol proto;
    proto.total_steps = 60000;
    proto.discard = 10000;
    proto.dt = (system == BenchmarkSystem::lorenz63 || system == BenchmarkSystem::lorenz96)
                   ? 1.0 / 64.0
                   : 1.0;
    proto.observable_index = 0;
    proto.initial_state = default_initial_state(system, params);
    return proto;
}

TimeSeries generate_benchmark_trace(BenchmarkSystem system, const GenerationProtocol& protocol,
                                    const SystemParams& params) {
    if (protocol.total_steps < 2) throw std::invalid_argument("protocol needs total_steps >= 2");
    if (protocol.discard < 0 || protocol.discard >= protocol.total_steps) {
        throw std::invalid_argument("protocol needs 0 <= discard < total_steps");
    }

    const bool is_flow =
        system == BenchmarkSystem::lorenz63 || system == BenchmarkSystem::lorenz96;
    std::vector<double> state =
        protocol.initial_state.empty() ? default_initial_state(system, params) : protocol.initial_state;

    int dimension = 0;
    VectorField field;
    if (system == BenchmarkSystem::lorenz63) {
        field = lorenz63_field(params.sigma, params.rho, params.beta);
        dimension = field.dimension;
    } else if (system == BenchmarkSystem::lorenz96) {
        field = lorenz96_field(params.lorenz96_sites, params.forcing);
        dimension = field.dimension;
    } else if (system == BenchmarkSystem::henon) {
        dimension = 2;
    } else {
        dimension = 1;
    }

    if (static_cast<int>(state.size()) != dimension) {
        throw std::invalid_argument("initial state has dimension " + std::to_string(state.size()) +
                                    ", system needs " + std::to_string(dimension));
    }
    if (protocol.observable_index < 0 || protocol.observable_index >= dimension) {
        throw std::invalid_argument("observable_index out of range");
    }
    if (is_flow && !(protocol.dt > 0.0)) throw std::invalid_argument("protocol needs dt > 0");

    // States visited are steps 0 .. total_steps-1; the first `discard` are
    // dropped, leaving exactly total_steps - discard samples.
    const int length = protocol.total_steps - protocol.discard;
    std::vector<double> samples;
    samples.reserve(length);

    if (system == BenchmarkSystem::logistic) {
        if (!(state[0] > 0.0 && state[0] < 1.0)) {
            throw std::invalid_argument("logistic initial state must be in (0, 1)");
        }
        double x = state[0];
        for (int s = 0; s < protocol.total_steps; ++s) {
            if (s >= protocol.discard) samples.push_back(x);
            x = params.logistic_r * x * (1.0 - x);
        }
    } else if (system == BenchmarkSystem::henon) {
        double x = state[0], y = state[1];
        for (int s = 0; s < protocol.total_steps; ++s) {
            if (s >= protocol.discard) samples.push_back(protocol.observable_index == 0 ? x : y);
            const double xn = 1.0 - params.henon_a * x * x + y;
            const double yn = params.henon_b * x;
            x = xn;
            y = yn;
            if (!std::isfinite(x) || !std::isfinite(y)) {
                throw numerical_error("trajectory became non-finite at step " + std::to_string(s + 1));
            }
        }
    } else {
        std::vector<double> scratch(5 * static_cast<std::size_t>(dimension));
        for (int s = 0; s < protocol.total_steps; ++s) {
            if (s >= protocol.discard) samples.push_back(state[protocol.observable_index]);
            rk4_step(field, state, protocol.dt, scratch);
            if (!all_finite(state)) {
                throw numerical_error("trajectory became non-finite at step " + std::to_string(s + 1));
            }
        }
    }

    std::string name = to_string(system);
    if (system == BenchmarkSystem::lorenz96) {
        name += "_k" + std::to_string(params.lorenz96_sites);
    }
    return TimeSeries(std::move(samples), is_flow ? protocol.dt : 1.0, name, TimeSeries::Source::synthetic);
}

std::string to_string(BenchmarkSystem system) {
    switch (system) {
        case BenchmarkSystem::lorenz63: return "lorenz63";
        case BenchmarkSystem::lorenz96: return "lorenz96";
        case BenchmarkSystem::henon: return "henon";
        case BenchmarkSystem::logistic: return "logistic";
    }
    return "unknown";
}

BenchmarkSystem benchmark_system_from_string(const std::string& name) {
    if (name == "lorenz63") return BenchmarkSystem::lorenz63;
    if (name == "lorenz96") return BenchmarkSystem::lorenz96;
    if (name == "henon") return BenchmarkSystem::henon;
    if (name == "logistic") return BenchmarkSystem::logistic;
    throw std::invalid_argument("unknown system '" + name + "'");
}

} // namespace delaycast
