#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

// Bit-packed N-qubit Pauli algebra.
//
// Conventions (shared by every module):
//   * qubit 1 is bit 0 (LSB); in the text form "IXYZ..." qubit 1 is the
//     leftmost character.
//   * a PauliString is i^phase * (product of single-site letters I/X/Y/Z),
//     with phase a quarter-turn counter in {0,1,2,3}.  Strings built from
//     letter labels are Hermitian with phase 0.

namespace scrsense {

inline constexpr int kMaxQubits = 256;
inline constexpr int kMaskWords = kMaxQubits / 64;

// Fixed-width bit mask holding up to kMaxQubits bits.
struct BitMask {
    std::array<std::uint64_t, kMaskWords> w{};

    static BitMask from_u64(std::uint64_t bits) {
        BitMask m;
        m.w[0] = bits;
        return m;
    }

    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
    void set(int i, bool v = true) {
        std::uint64_t bit = std::uint64_t(1) << (i & 63);
        if (v)
            w[i >> 6] |= bit;
        else
            w[i >> 6] &= ~bit;
    }
    std::uint64_t lo() const { return w[0]; }
    bool none() const {
        for (auto x : w)
            if (x) return false;
        return true;
    }
    int popcount() const;

    friend BitMask operator^(BitMask a, const BitMask &b) {
        for (int i = 0; i < kMaskWords; ++i) a.w[i] ^= b.w[i];
        return a;
    }
    friend BitMask operator&(BitMask a, const BitMask &b) {
        for (int i = 0; i < kMaskWords; ++i) a.w[i] &= b.w[i];
        return a;
    }
    friend BitMask operator|(BitMask a, const BitMask &b) {
        for (int i = 0; i < kMaskWords; ++i) a.w[i] |= b.w[i];
        return a;
    }
    friend bool operator==(const BitMask &a, const BitMask &b) { return a.w == b.w; }
    friend bool operator!=(const BitMask &a, const BitMask &b) { return !(a == b); }
    // Integer-value order (qubit 1 = LSB); used for decoder tie breaks.
    friend bool operator<(const BitMask &a, const BitMask &b) {
        for (int i = kMaskWords - 1; i >= 0; --i)
            if (a.w[i] != b.w[i]) return a.w[i] < b.w[i];
        return false;
    }
};

std::uint64_t mask_hash(const BitMask &m);

// Measurement outcome / codeword: an n-bit string.
struct Bitstring {
    int n = 0;
    BitMask bits;

    Bitstring() = default;
    Bitstring(int n_, BitMask b) : n(n_), bits(b) {}
    static Bitstring from_u64(int n, std::uint64_t bits) { return Bitstring(n, BitMask::from_u64(bits)); }

    std::uint64_t lo() const { return bits.lo(); }
    bool is_zero() const { return bits.none(); }
    friend bool operator==(const Bitstring &a, const Bitstring &b) { return a.n == b.n && a.bits == b.bits; }
    friend bool operator!=(const Bitstring &a, const Bitstring &b) { return !(a == b); }
    friend bool operator<(const Bitstring &a, const Bitstring &b) { return a.bits < b.bits; }
};

struct BitstringHash {
    std::size_t operator()(const Bitstring &z) const { return mask_hash(z.bits); }
};

int hamming(const Bitstring &a, const Bitstring &b);

struct PauliString {
    int n = 0;
    BitMask x;  // bit k set iff site k carries X or Y
    BitMask z;  // bit k set iff site k carries Z or Y
    std::uint8_t phase = 0;  // i^phase

    bool is_identity() const { return x.none() && z.none(); }
    bool hermitian() const { return phase == 0 || phase == 2; }
    // +1 / -1 for a Hermitian string.
    int sign() const { return phase == 0 ? +1 : -1; }
};

// Parse "IXYZ..." (qubit 1 leftmost).  Throws std::invalid_argument on
// unknown letters.
PauliString make_pauli(std::string_view labels);
std::string to_string(const PauliString &p);

// Convenience: identity with a single letter at site k (0-based).
PauliString single_site_pauli(int n, int site, char letter);

int weight(const PauliString &p);
bool commutes(const PauliString &p, const PauliString &q);
PauliString multiply(const PauliString &p, const PauliString &q);

// P|z> = i^phase_out |z_out>.
struct BasisAction {
    std::uint8_t phase;
    Bitstring z_out;
};
BasisAction apply_to_basis(const PauliString &p, const Bitstring &z);

inline Bitstring x_support(const PauliString &p) { return Bitstring(p.n, p.x); }
inline int count_y(const PauliString &p) { return (p.x & p.z).popcount(); }
inline int overlap_parity(const Bitstring &z, const Bitstring &a) { return (z.bits & a.bits).popcount() & 1; }

}  // namespace scrsense
