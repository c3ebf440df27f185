#pragma once

#include <vector>

#include "scramble_sense/counts.hpp"
#include "scramble_sense/pauli.hpp"
#include "scramble_sense/rng.hpp"

// Readout-noise channel (independent per-qubit bit flips), the
// confusion-matrix inverse in product form, and the strong-robustness
// machinery: codeword sets, minimum pairwise Hamming distance,
// nearest-codeword decoding, and correctability reports.

namespace scrsense {

// Flip each recorded shot's bits independently with probability gamma_r.
// Counts must be (close to) integers: the channel acts shot by shot.
BitstringCounts apply_bitflip_noise(const BitstringCounts &counts, double gamma_r, Rng &rng);

// Entry (a, j) of the inverse confusion matrix in product form:
// (1-2g)^{-n} (1-g)^{n-d} (-g)^d with d = Hamming(a, j).
double confusion_inverse_weight(const Bitstring &a, const Bitstring &j, double gamma_r, int n);

struct CodewordSet {
    int n = 0;
    std::vector<Bitstring> codewords;  // distinct; includes the all-zero string
    int d_min = 0;
};

// Builds {0} union the given signal bitstrings; throws on duplicates
// (a collision should have been caught upstream).
CodewordSet make_codeword_set(int n, const std::vector<Bitstring> &signal_bitstrings);

int min_pairwise_distance(const std::vector<Bitstring> &codewords);

struct DecodeResult {
    Bitstring codeword;
    int distance = 0;
    bool tie = false;  // nearest codeword not unique; lexicographically smallest returned
};
DecodeResult decode_nearest(const Bitstring &z, const CodewordSet &set);

// Hamming ball volume sum_{i<=r} C(n, i), as a double.
double hamming_ball_volume(int n, int radius);

// Lower bound on Pr(d_min >= d) for k uniformly random codewords:
// prod_{m<k} (2^n - m * V(n, d-1)) / 2^{nk}, clipped at 0.
double d_min_probability_bound(int n, int k, int d);

// Exponential approximation exp(-2^{-n(1-H((d-1)/n))} k(k-1)/2) with H the
// binary entropy.
double d_min_probability_bound_exp(int n, int k, int d);

struct CorrectabilityReport {
    int d_min = 0;
    double threshold = 0;  // d_min / (2n)
    bool pass = false;     // gamma_r < threshold
    double bound = 0;      // d_min_probability_bound at (n, #codewords-1, d_min)
    double bound_exp = 0;
};
CorrectabilityReport correctability_check(const CodewordSet &set, double gamma_r);

// Decode every shot to its nearest codeword (used before the incoherent
// estimator in the strong-robustness regime); reports tie counts.
struct DecodedCounts {
    BitstringCounts counts;
    double ties = 0;
};
DecodedCounts decode_counts(const BitstringCounts &counts, const CodewordSet &set);

}  // namespace scrsense
