#pragma once

#include <complex>
#include <vector>

#include "scramble_sense/tableau.hpp"

// Synthesis of a Clifford tableau into elementary gates (H, S, CNOT, X,
// Z) so the dense simulator can apply it to a state vector.  This is an
// internal detail of the dense path; the tableau module itself never
// synthesizes circuits.

namespace scrsense {

enum class GateKind { H, S, SDG, CNOT, X, Z };

struct ElemGate {
    GateKind kind;
    int a = 0;  // site (control for CNOT)
    int b = 0;  // target for CNOT
};

// Gate list whose product (first element applied first) equals the
// tableau's unitary up to global phase.
std::vector<ElemGate> synthesize_clifford(const CliffordTableau &c);

// Apply one elementary gate to 2^n amplitudes in place.
void apply_elem_gate(std::vector<std::complex<double>> &amp, int n, const ElemGate &g);

}  // namespace scrsense
