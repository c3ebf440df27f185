#include "scramble_sense/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace scrsense {

double predict_variance(const PredictionInput &input) {
    if (input.m <= 0) throw std::invalid_argument("predict_variance: m must be positive");
    if (input.a <= 0) throw std::invalid_argument("predict_variance: a must be positive");
    switch (input.protocol) {
        case PredictionProtocol::quadratic:
            return 1.0 / (4.0 * input.a * input.m);
        case PredictionProtocol::tilted: {
            double s = std::sin(input.s_a * input.phi);
            if (std::abs(s) < 1e-12)
                throw std::invalid_argument("predict_variance: tilted signal is insensitive at this angle");
            return 1.0 / (4.0 * s * s * input.m);
        }
        case PredictionProtocol::clifford_incoherent:
            if (input.gamma < 0) throw std::invalid_argument("predict_variance: gamma must be nonnegative");
            return input.gamma / (input.a * input.m);
        case PredictionProtocol::clifford_coherent:
            return 1.0 / (2.0 * input.m * input.a * input.a);
        case PredictionProtocol::ruc:
            return input.beta / (input.a * input.a * input.m);
    }
    throw std::logic_error("predict_variance: unknown protocol");
}

int required_circuits(CircuitKind kind, int k, int n, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("required_circuits: delta must be in (0, 1)");
    if (kind == CircuitKind::incoherent) {
        if (k < 2) throw std::invalid_argument("required_circuits: incoherent needs k >= 2");
        if (n < 1) throw std::invalid_argument("required_circuits: n must be positive");
        double bits = std::log2(double(k) * (k - 1) / (2.0 * delta));
        return int(std::ceil(bits / n));
    }
    if (k < 1) throw std::invalid_argument("required_circuits: coherent needs k >= 1");
    int n_c = 1;
    while (1.0 - std::pow(1.0 - std::ldexp(1.0, -n_c), k) > delta) ++n_c;
    return n_c;
}

double collision_bound(int k, int n, int n_c) {
    if (k < 1 || n < 1 || n_c < 1) throw std::invalid_argument("collision_bound: k, n, n_c must be positive");
    double pairs = double(k) * (k - 1) / 2.0;
    return std::min(1.0, pairs * std::pow(2.0, -double(n) * n_c));
}

double readout_transition_m_star(double gamma_r, int n, double theta) {
    if (gamma_r < 0 || gamma_r >= 0.5)
        throw std::invalid_argument("readout_transition_m_star: gamma_r must be in [0, 0.5)");
    if (theta == 0) throw std::invalid_argument("readout_transition_m_star: theta must be nonzero");
    return gamma_r * std::exp(gamma_r * n) / std::pow(theta, 4);
}

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

double weingarten_d(int l_u, int l_v, int q) {
    if (l_u < 0 || l_v < 0) throw std::invalid_argument("weingarten_d: lightcone coordinates must be nonnegative");
    if (q < 2) throw std::invalid_argument("weingarten_d: q must be at least 2");
    if (l_u == 0 || l_v == 0) return 0.0;
    int tau = l_u + l_v - 1;
    double qd = q;
    double pre = qd * qd / (qd * qd * qd * qd - 1.0) * std::pow(qd / (qd * qd + 1.0), 2 * tau - 2);
    double sum = 0.0;
    for (int u = 0; u < l_u; ++u)
        for (int v = 0; v < l_v; ++v) {
            double bracket = binom(tau - 1, v) * binom(tau - 1, u);
            if (u >= 1 && v >= 1) bracket -= binom(tau - 1, v - 1) * binom(tau - 1, u - 1);
            sum += std::pow(1.0 / qd, 2 * tau - 2 * u - 2 * v) * bracket;
        }
    return pre * sum;
}

}  // namespace scrsense
