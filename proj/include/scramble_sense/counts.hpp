#pragma once

#include <unordered_map>

#include "scramble_sense/pauli.hpp"

namespace scrsense {

// Per-circuit measurement tally.  Counts are doubles so that exact
// probability distributions can be fed through the estimators as
// "M = infinity" weighted counts.
struct BitstringCounts {
    int n = 0;
    int circuit_index = 0;
    double shots = 0;  // declared shot number (sum of counts)
    std::unordered_map<Bitstring, double, BitstringHash> counts;

    void add(const Bitstring &z, double w = 1.0) {
        counts[z] += w;
        shots += w;
    }
};

}  // namespace scrsense
