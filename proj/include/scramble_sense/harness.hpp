#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scramble_sense/estimator.hpp"
#include "scramble_sense/patterns.hpp"
#include "scramble_sense/rng.hpp"
#include "scramble_sense/signal.hpp"

// End-to-end experiment orchestration: build circuits, sample shots across
// n_c circuits, estimate, score, and sweep.  Also the infinite-sample bias
// probe (estimators applied to exact distributions) and Monte Carlo
// collision frequencies.

namespace scrsense {

// Golden-ratio tilt angle pi (sqrt(5) - 1) / 2: sin(s phi) stays bounded
// away from 0 for every string weight s.
inline constexpr double kPhiGolden = 1.9416110387254665;

enum class ProtocolFamily { quadratic, tilted, clifford_global, clifford_local, ruc, hamiltonian };

struct CorrectionToggles {
    bool confusion_inverse = false;  // product-form inverse readout de-bias
    bool decode = false;             // nearest-codeword decoding (Clifford z)
    bool threshold = false;          // hard threshold on the final report
    bool second_order = false;       // pairwise contamination subtraction (Ramsey)
    bool overlap = false;            // overlapping-generator gamma correction
    double theta_min = 0.0;          // threshold floors (0 = pure noise floor)
    double gamma_min = 0.0;
    int second_order_passes = 4;     // 1 direct pass + fixed-point reference passes
};

struct ExperimentConfig {
    ProtocolFamily protocol = ProtocolFamily::quadratic;
    int n = 4;
    int t_steps = 1;
    SignalSet signals;  // candidate set carrying the true amplitudes
    int n_circuits = 1;
    double phi = kPhiGolden;  // tilted-Ramsey angle
    double gamma_r = 0.0;
    CorrectionToggles corrections;
    std::uint64_t seed = 1;
    int repetitions = 1;
    double hamiltonian_tau = 5.0;
    double ruc_beta_coherent = 1.0;  // calibration constants for theory overlays
    double ruc_beta_incoherent = 1.0;
};

// Configuration advisories (currently: n_circuits below the
// required_circuits failure bounds at delta = 0.01).
std::vector<std::string> check_config(const ExperimentConfig &config);

struct TrialMetrics {
    double rms_coherent = 0.0;    // over every coherent candidate, zeros included
    double rms_incoherent = 0.0;  // over every incoherent candidate
    double max_abs_error = 0.0;
    long long shots_coherent = 0;    // shots consumed by the coherent estimator
    long long shots_incoherent = 0;  // shots consumed by the incoherent / z-basis estimator
};

struct TrialResult {
    EstimateReport report;
    TrialMetrics metrics;
};

// One full protocol execution at M total shots.  `rep` selects an
// independent substream of the master seed; results depend only on
// (config, m, rep).
TrialResult run_trial(const ExperimentConfig &config, long long m, int rep = 0);

struct ScalingRecord {
    long long m = 0;
    double rms_coherent = 0.0;  // median-of-means over repetitions
    double rms_incoherent = 0.0;
    double theory_coherent = 0.0;  // sqrt of the mean predicted variance
    double theory_incoherent = 0.0;
    double slope_coherent = 0.0;  // running log-log least-squares slope
    double slope_incoherent = 0.0;
};

std::vector<ScalingRecord> scaling_sweep(const ExperimentConfig &config, const std::vector<long long> &m_list);

// Least-squares slope of log(y) vs log(x); requires >= 2 points.
double log_log_slope(const std::vector<double> &x, const std::vector<double> &y);

// Median of `group_count` sequential group means (heavy-tail-robust
// location estimate; group_count is clamped to the sample size).
double median_of_means(const std::vector<double> &values, int group_count = 5);

struct SampleComplexity {
    double beta_coherent = 0.0;    // M A^2 E[(theta-hat - theta)^2], all coherent candidates
    double beta_incoherent = 0.0;  // M A E[(gamma-hat - gamma)^2], nonzero candidates only
};

SampleComplexity sample_complexity_beta(const ExperimentConfig &config, const std::vector<long long> &m_list);

struct SignalBias {
    int id = 0;
    SignalKind kind = SignalKind::coherent;
    double bias = 0.0;  // estimate at M = infinity minus truth
};

struct BiasReport {
    EstimateReport report;
    std::vector<SignalBias> biases;
    double mean_squared = 0.0;
    double worst_case_squared = 0.0;
};

// Estimators applied to the exact output distributions (readout noise
// convolved exactly); requires n within the dense cap.
BiasReport bias_infinite_m(const ExperimentConfig &config);

// Fraction of `draws` in which any two of k fixed random Paulis map to the
// same codeword in all n_c independent uniform Cliffords.
double collision_empirical(int n, int k, int n_c, int draws, Rng &rng);

// Stabilizer fast path for incoherent-only Clifford-z sampling at any N:
// each shot XORs the codewords of the channels that jumped, then applies
// per-bit readout flips.  `codewords[i]` is the point mass of channel i;
// channels are applied in the given order.
BitstringCounts sample_codeword_shots(int n, const std::vector<Bitstring> &codewords,
                                      const std::vector<double> &gammas, long long m, double gamma_r,
                                      const Rng &rng);

// Repeated second-order correction: every pass re-corrects the raw report
// using the previous pass's output as the reference for the subtracted
// products.  passes = 1 reproduces the direct self-referenced correction.
EstimateReport iterate_second_order(const EstimateReport &raw, const SignalSet &signals, RamseyProtocol protocol,
                                    double phi, int passes);

}  // namespace scrsense
