#pragma once

#include <array>
#include <complex>
#include <memory>
#include <variant>
#include <vector>

#include "scramble_sense/clifford_gates.hpp"
#include "scramble_sense/counts.hpp"
#include "scramble_sense/pauli.hpp"
#include "scramble_sense/rng.hpp"
#include "scramble_sense/signal.hpp"
#include "scramble_sense/tableau.hpp"

// Exact small-N reference simulator: state-vector evolution through all
// protocol circuits, exact output distributions (jump-pattern
// enumeration; no density matrices), and trajectory sampling with
// readout noise.  Default dimension cap n <= 14.

namespace scrsense {

inline constexpr int kDenseCapDefault = 14;

struct StateVector {
    int n = 0;
    std::vector<std::complex<double>> amp;

    static StateVector zero_state(int n);
    static StateVector plus_state(int n);
    static StateVector plus_y_state(int n);  // (|0>+i|1>)/sqrt(2) per qubit
    double norm() const;
};

using PauliSum = std::vector<std::pair<PauliString, double>>;

struct CliffordLayer {
    CliffordTableau tableau;
    std::shared_ptr<const std::vector<ElemGate>> gates;  // synthesized once
};
CliffordLayer make_clifford_layer(const CliffordTableau &t);

struct HadamardAll {};
struct XRotationAll {
    double phi;  // exp(-i (phi/2) X) on every qubit
};
struct PauliRotation {
    PauliString p;  // Hermitian
    double theta;   // exp(-i theta P)
};
struct PauliChannel {
    PauliString p;  // Hermitian
    double gamma;   // jump probability
};
struct HaarTwoQubit {
    std::array<std::complex<double>, 16> u;  // row major 4x4, index = site_j bit * 2 + site_i bit
    int i, j;
};
struct HamiltonianSegment {
    std::shared_ptr<const PauliSum> h;
    double tau;
};

using CircuitElement =
    std::variant<CliffordLayer, HadamardAll, XRotationAll, PauliRotation, PauliChannel, HaarTwoQubit, HamiltonianSegment>;

enum class MeasBasis { z, x };
enum class InitState { zero, plus, plus_y };

struct Circuit {
    int n = 0;
    InitState init = InitState::zero;
    MeasBasis basis = MeasBasis::z;  // metadata; basis changes appear as elements
    std::vector<CircuitElement> elements;

    int channel_count() const;
    std::vector<double> channel_gammas() const;
};

enum class Protocol { quad_ramsey, tilted_ramsey, clifford_z, clifford_x, ruc, hamiltonian };

// Randomness carried by the dense protocols.
struct RucGates {
    int n = 0;
    // layer u[0..T]: brickwork rows of Haar 4x4 gates (two rows per layer)
    std::vector<std::vector<HaarTwoQubit>> layers;
};
RucGates sample_ruc_gates(int n, int t_steps, Rng &rng);

struct ProtocolRandomness {
    const CircuitFamily *family = nullptr;  // clifford_z / clifford_x
    const RucGates *ruc = nullptr;          // ruc
    std::shared_ptr<const PauliSum> hamiltonian;  // hamiltonian
    double tau = 5.0;
    double phi = 0.0;  // tilted_ramsey tilt angle
};

// Zero-amplitude signals are skipped (they are exact identities); the
// per-channel jump order follows ascending signal id within each layer.
Circuit build_protocol_circuit(Protocol protocol, const SignalSet &signals, const ProtocolRandomness &randomness);

StateVector run_pure(const Circuit &c, const std::vector<std::uint8_t> &jump_pattern);

std::vector<double> exact_distribution(const Circuit &c);

BitstringCounts sample_shots(const Circuit &c, long long m, double gamma_r, Rng &rng);

PauliSum kim_huse_hamiltonian(int n);

StateVector propagate_hamiltonian(const PauliSum &h, double tau, const StateVector &psi, double tol = 1e-10);

std::array<std::complex<double>, 16> haar_two_qubit(Rng &rng);

// Low-level helpers shared with tests and the pattern module.
void apply_pauli(StateVector &s, const PauliString &p);
void apply_pauli_sum(const PauliSum &h, const StateVector &in, StateVector &out);

}  // namespace scrsense
