#pragma once

// Closed-form analytic predictions used as overlay curves and acceptance
// oracles: estimator variances, circuit-count requirements, collision
// bounds, the readout transition M*, and the lightcone-coordinate
// Weingarten formula for local random circuits.

namespace scrsense {

enum class PredictionProtocol { quadratic, tilted, clifford_incoherent, clifford_coherent, ruc };

struct PredictionInput {
    PredictionProtocol protocol = PredictionProtocol::quadratic;
    double m = 1;        // total shots
    double a = 1;        // signal fidelity A
    int s_a = 1;         // Z-string weight (tilted)
    double phi = 0;      // tilt angle (tilted)
    double gamma = 0;    // incoherent amplitude (clifford_incoherent)
    double beta = 1;     // calibration constant (ruc)
};

// Large-M per-signal variance prediction.
double predict_variance(const PredictionInput &input);

enum class CircuitKind { incoherent, coherent };

// Minimum circuit count for failure probability <= delta:
// incoherent: ceil(log2(K(K-1)/(2 delta)) / N); coherent: smallest n_c with
// 1 - (1 - 2^{-n_c})^K <= delta.
int required_circuits(CircuitKind kind, int k, int n, double delta);

// Pairwise codeword-collision union bound K(K-1)/2 * 2^{-N n_c}, capped at 1.
double collision_bound(int k, int n, int n_c);

// Order-of-magnitude readout transition: M* ~ gamma_r e^{gamma_r N} / theta^4.
double readout_transition_m_star(double gamma_r, int n, double theta);

// Lightcone Weingarten factor D(l_u, l_v) with tau = l_u + l_v - 1.
double weingarten_d(int l_u, int l_v, int q = 2);

}  // namespace scrsense
