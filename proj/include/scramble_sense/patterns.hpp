#pragma once

#include <map>
#include <vector>

#include "scramble_sense/dense_sim.hpp"
#include "scramble_sense/pauli.hpp"
#include "scramble_sense/signal.hpp"
#include "scramble_sense/tableau.hpp"

// First-order response of the output distribution to each signal: the
// point-mass / signed-uniform closed forms for Ramsey and Clifford
// protocols, and dense finite-difference / Pauli-insertion patterns for
// the RUC and Hamiltonian protocols.

namespace scrsense {

struct PerturbationPattern {
    enum class Kind { point_mass, signed_uniform, dense };

    Kind kind = Kind::point_mass;
    int n = 0;
    Bitstring z_prime;            // point_mass: value(z) = [z == z']
    Bitstring mask;               // signed_uniform: value(z) = sigma * (-1)^overlap(z,mask) * magnitude
    int sigma = 0;                // in {-1, 0, +1}
    double magnitude = 0.0;
    std::vector<double> values;   // dense

    double value(const Bitstring &z) const;
    double sum() const;  // over all 2^n bitstrings (closed form for the lazy kinds)
};

// Quadratic Ramsey: p(z = a) ~ A theta_a^2, a point mass at the Z-mask.
PerturbationPattern quad_pattern(const PauliString &z_string);

// Tilted Ramsey: delta p_a(z) = (-1)^{n_{z,a}} sin(s_a phi) / 2^{n-1};
// sigma = 0 when s_a phi is a multiple of pi (insensitive direction).
PerturbationPattern tilted_pattern(const PauliString &z_string, double phi);

// Clifford protocols: prefix = C_t ... C_1 (the product up to the signal
// layer); the pattern lives on the back-conjugated Pauli prefix^dag P prefix.
PerturbationPattern clifford_incoherent_pattern(const CliffordTableau &prefix, const PauliString &p);
PerturbationPattern clifford_coherent_pattern(const CliffordTableau &prefix, const PauliString &p);

// Dense patterns for any protocol within the dimension cap: p0 from the
// zero-signal circuit, k by deterministic Pauli insertion (exact), delta-p
// by central finite difference (step h with a Richardson consistency
// check at h/2).
struct DensePatternSet {
    std::vector<double> p0;
    std::map<int, std::vector<double>> dp;  // coherent candidates, by signal id
    std::map<int, std::vector<double>> k;   // incoherent candidates, by signal id
};

DensePatternSet dense_patterns(Protocol protocol, const SignalSet &signals, const ProtocolRandomness &randomness,
                               double h = 1e-4);

}  // namespace scrsense
