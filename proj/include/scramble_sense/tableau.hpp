#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scramble_sense/pauli.hpp"
#include "scramble_sense/rng.hpp"

// Clifford unitaries as stabilizer tableaux: the signed Pauli images of
// every X_k and Z_k under conjugation U g U^dag.  Sampling is exactly
// uniform (symplectic-complement construction, no rejection over the
// group), two-qubit gates are drawn by index from the full 11520-element
// group table.

namespace scrsense {

struct CliffordTableau {
    int n = 0;
    std::vector<PauliString> x_images;  // U X_k U^dag, phase in {0,2}
    std::vector<PauliString> z_images;  // U Z_k U^dag

    static CliffordTableau identity(int n);
    bool is_valid() const;  // commutation structure + Hermitian images
};

// U P U^dag for Hermitian P; the result is Hermitian with sign +/-1.
PauliString conjugate(const CliffordTableau &c, const PauliString &p);

// compose(a, b) acts as "apply b, then a" (i.e. the unitary A*B).
CliffordTableau compose(const CliffordTableau &a, const CliffordTableau &b);
CliffordTableau inverse(const CliffordTableau &a);

CliffordTableau sample_uniform_clifford(int n, Rng &rng);

// Full two-qubit Clifford group in a fixed enumeration order.
const std::vector<CliffordTableau> &two_qubit_clifford_table();  // size 11520

// Embed a two-qubit tableau at sites (i, j) of an n-qubit identity.
CliffordTableau embed_two_qubit(const CliffordTableau &g, int n, int i, int j);

// `depth` alternating-offset rows of independent uniform two-qubit
// Cliffords; the odd-offset row pairs qubit n with qubit 1 (periodic).
// n must be even.
CliffordTableau sample_brickwork_layer(int n, int depth, Rng &rng);

// Which pairs make up brickwork row `row` (0-based sites, alternating
// offset, periodic wrap on odd rows).  Shared with the dense RUC builder.
std::vector<std::pair<int, int>> brickwork_pairs(int n, int row);

std::string tableau_to_text(const CliffordTableau &c);
CliffordTableau tableau_from_text(const std::string &text);

enum class FamilyKind { global_uniform, brickwork_local };

// The Clifford randomness of one sensing circuit: layers C_1..C_T, cached
// prefix products C_t...C_1 and the terminal inverse (C_T...C_1)^dag.
struct CircuitFamily {
    FamilyKind kind = FamilyKind::global_uniform;
    int n = 0;
    int t_steps = 0;
    std::vector<CliffordTableau> layers;
    std::vector<CliffordTableau> prefixes;
    CliffordTableau terminal_inverse;
    std::uint64_t seed = 0;
};

CircuitFamily sample_circuit_family(FamilyKind kind, int n, int t_steps, Rng &rng);

}  // namespace scrsense
