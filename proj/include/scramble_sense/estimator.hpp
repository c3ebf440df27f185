#pragma once

#include <vector>

#include "scramble_sense/counts.hpp"
#include "scramble_sense/patterns.hpp"
#include "scramble_sense/signal.hpp"

// Estimators: closed-form Ramsey estimators (quadratic and tilted), the
// sparse least-squares Clifford estimators with multi-circuit
// concatenation, the dense regression for RUC / Hamiltonian protocols,
// hard thresholding, second-order corrections, and the
// overlapping-generator correction.

namespace scrsense {

struct SignalEstimate {
    int id = 0;
    SignalKind kind = SignalKind::coherent;
    double estimate = 0.0;       // theta-hat or gamma-hat
    double raw_v = 0.0;          // raw regression coefficient (pre-ratio)
    double predicted_std = 0.0;  // large-M standard deviation prediction
    bool thresholded = false;
    bool corrected = false;
    bool estimable = true;  // false: insensitive in every circuit
};

struct EstimateReport {
    double a_hat = 1.0;  // signal-fidelity estimate
    std::vector<SignalEstimate> estimates;

    const SignalEstimate *find(int id) const;
    SignalEstimate *find(int id);
};

// Even shot split: floor(M / n_c) each, remainder to the first circuits.
std::vector<long long> split_shots(long long m, int n_c);

// Quadratic Ramsey protocol (single circuit, Z-string signals).
// A-hat = f(0), theta^2_a = f(a) / A-hat with frequencies f either raw or
// confusion-inverse corrected when gamma_r > 0; negative theta^2 clipped.
EstimateReport estimate_quadratic(const BitstringCounts &counts, const SignalSet &signals, double gamma_r);

// Tilted Ramsey protocol: theta_a = sum_m (-1)^{n_{z_m,a}} / (2 sin(s_a phi) M),
// the diagonal normal-equation solution; when gamma_r > 0 each shot's parity
// term is scaled by (1-2 gamma_r)^{-s_a} (the parity character is an
// eigenvector of the bit-flip channel with eigenvalue (1-2 gamma_r)^{s_a}).
EstimateReport estimate_tilted(const BitstringCounts &counts, const SignalSet &signals, double phi,
                               double gamma_r = 0.0);

// Clifford z-basis incoherent estimator over n_c circuits.  patterns[c]
// holds one point-mass pattern per incoherent candidate (candidate order =
// order of incoherent specs in `signals`).  Solves the sparse normal
// system; returns gamma-hat = v/(v + v_0) and A-hat = v_0.
EstimateReport estimate_clifford_incoherent(const std::vector<BitstringCounts> &counts,
                                            const std::vector<std::vector<PerturbationPattern>> &patterns,
                                            const SignalSet &signals);

// Clifford x-basis coherent estimator; patterns[c] holds one signed-uniform
// pattern per coherent candidate.  a_hat comes from a companion z-basis
// run.  Candidates with sigma = 0 in every circuit are marked
// not-estimable and excluded from the solve.
EstimateReport estimate_clifford_coherent(const std::vector<BitstringCounts> &counts,
                                          const std::vector<std::vector<PerturbationPattern>> &patterns,
                                          const SignalSet &signals, double a_hat);

// Dense regression against explicit p0 / delta-p / k patterns (one
// DensePatternSet per circuit): v = (V^T V)^{-1} V^T f, theta = v_alpha/v_0,
// gamma = v_beta/(v_0 + v_beta); ridge fallback on ill conditioning.
EstimateReport estimate_dense(const std::vector<BitstringCounts> &counts,
                              const std::vector<DensePatternSet> &patterns, const SignalSet &signals);

// Zero any |estimate| below max(0, floor - 2 sqrt(mean predicted variance))
// (floor = 0 means pure noise threshold 2 sqrt(mean predicted variance)),
// separately for coherent (theta_min) and incoherent (gamma_min) signals.
EstimateReport hard_threshold(const EstimateReport &report, double theta_min, double gamma_min);

enum class RamseyProtocol { quadratic, tilted };

// Subtract the leading pairwise second-order contamination
// (a XOR b = c combinations of Z-masks).  The subtracted products are
// computed from `reference` when given (e.g. a previous correction pass,
// so that spurious zero-signal estimates do not feed the products) and
// from `report` itself otherwise.
EstimateReport second_order_correct(const EstimateReport &report, const SignalSet &signals,
                                    RamseyProtocol protocol, double phi,
                                    const EstimateReport *reference = nullptr);

// Overlapping-generator correction: gamma = (v - A theta^2)/(v - A theta^2 + v_0)
// for incoherent candidates sharing (generator, t) with a coherent estimate.
EstimateReport overlap_correct(const EstimateReport &incoherent, const EstimateReport &coherent,
                               const SignalSet &signals);

}  // namespace scrsense
