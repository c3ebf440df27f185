#pragma once

#include <vector>

#include "scramble_sense/pauli.hpp"
#include "scramble_sense/rng.hpp"

// Signal model: the estimation targets.  A coherent signal is a rotation
// exp(-i theta P) applied at time step t; an incoherent signal is a Pauli
// jump channel rho -> (1-gamma) rho + gamma P rho P.  Zero-amplitude
// candidates are first-class: the estimator must report them as ~0.

namespace scrsense {

enum class SignalKind { coherent, incoherent };

struct SignalSpec {
    int id = 0;
    SignalKind kind = SignalKind::coherent;
    PauliString generator;  // Hermitian, phase 0, non-identity
    int t = 1;              // time step, 1-based
    double amplitude = 0.0;
};

struct SignalSet {
    int n = 0;
    int t_steps = 1;
    std::vector<SignalSpec> signals;  // within a layer, applied in ascending id

    // Sum theta^2 + sum gamma; small values mark the perturbative regime.
    double total_strength() const;
    bool unique_triples() const;  // (kind, generator, t) uniqueness
};

// A = prod cos^2(theta) * prod (1 - gamma): probability of no signal event.
double signal_fidelity_A(const SignalSet &s);

struct AmplitudeRanges {
    double theta_min = 0.1, theta_max = 0.15;  // |theta|, random sign
    double gamma_min = 0.07, gamma_max = 0.1;
};

struct Sparsity {
    int coherent_nonzero = 0;
    int incoherent_nonzero = 0;
};

// Zero-amplitude candidate set: one spec per (kind, generator, t).
SignalSet make_candidate_set(int n, int t_steps, const std::vector<PauliString> &coherent_pool,
                             const std::vector<PauliString> &incoherent_pool);

// Pick `sparsity` candidates per kind (uniformly, without replacement) and
// draw their amplitudes from `ranges`; everything else stays 0.
void randomize_amplitudes(SignalSet &s, const Sparsity &sparsity, const AmplitudeRanges &ranges, Rng &rng);

// Both kinds over the same generator pool (the overlapping setup).
SignalSet random_sparse_instance(const std::vector<PauliString> &pool, int t_steps, const Sparsity &sparsity,
                                 const AmplitudeRanges &ranges, Rng &rng);

// Generator pools.
std::vector<PauliString> z_string_pool(int n, int max_body);           // Z-strings of weight 1..max_body
std::vector<PauliString> random_pauli_pool(int n, int count, int max_weight, Rng &rng);  // distinct, non-identity

}  // namespace scrsense
