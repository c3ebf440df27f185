#include "scramble_sense/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace scrsense {

int BitMask::popcount() const {
    int c = 0;
    for (auto x : w) c += std::popcount(x);
    return c;
}

std::uint64_t mask_hash(const BitMask &m) {
    // splitmix64-style mix of the four words.
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (auto x : m.w) {
        h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 0xbf58476d1ce4e5b9ull;
        h ^= h >> 31;
    }
    return h;
}

int hamming(const Bitstring &a, const Bitstring &b) { return (a.bits ^ b.bits).popcount(); }

PauliString make_pauli(std::string_view labels) {
    if (labels.size() > kMaxQubits) throw std::invalid_argument("pauli string too long");
    PauliString p;
    p.n = static_cast<int>(labels.size());
    for (int k = 0; k < p.n; ++k) {
        switch (labels[k]) {
            case 'I':
                break;
            case 'X':
                p.x.set(k);
                break;
            case 'Y':
                p.x.set(k);
                p.z.set(k);
                break;
            case 'Z':
                p.z.set(k);
                break;
            default:
                throw std::invalid_argument(std::string("unknown Pauli letter: ") + labels[k]);
        }
    }
    return p;
}

std::string to_string(const PauliString &p) {
    static const char *signs[4] = {"+", "+i", "-", "-i"};
    std::string s = signs[p.phase & 3];
    for (int k = 0; k < p.n; ++k) {
        bool xb = p.x.test(k), zb = p.z.test(k);
        s += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }
    return s;
}

PauliString single_site_pauli(int n, int site, char letter) {
    if (site < 0 || site >= n) throw std::invalid_argument("site out of range");
    PauliString p;
    p.n = n;
    switch (letter) {
        case 'I':
            break;
        case 'X':
            p.x.set(site);
            break;
        case 'Y':
            p.x.set(site);
            p.z.set(site);
            break;
        case 'Z':
            p.z.set(site);
            break;
        default:
            throw std::invalid_argument("unknown Pauli letter");
    }
    return p;
}

int weight(const PauliString &p) { return (p.x | p.z).popcount(); }

bool commutes(const PauliString &p, const PauliString &q) {
    if (p.n != q.n) throw std::invalid_argument("qubit-count mismatch");
    return (((p.x & q.z).popcount() + (p.z & q.x).popcount()) & 1) == 0;
}

namespace {
// quarter-turn exponent of sigma_a * sigma_b = i^e sigma_{a xor b},
// indexed by a = (z<<1)|x.
constexpr std::uint8_t kMulPhase[4][4] = {
    // I  X  Z  Y   (b index: 0,1,2,3 = I,X,Z,Y)
    {0, 0, 0, 0},  // I
    {0, 0, 3, 1},  // X: X*Z=-iY, X*Y=iZ
    {0, 1, 0, 3},  // Z: Z*X=iY,  Z*Y=-iX
    {0, 3, 1, 0},  // Y: Y*X=-iZ, Y*Z=iX
};
}  // namespace

PauliString multiply(const PauliString &p, const PauliString &q) {
    if (p.n != q.n) throw std::invalid_argument("qubit-count mismatch");
    PauliString r;
    r.n = p.n;
    r.x = p.x ^ q.x;
    r.z = p.z ^ q.z;
    int ph = p.phase + q.phase;
    for (int wi = 0; wi < kMaskWords; ++wi) {
        std::uint64_t common = (p.x.w[wi] | p.z.w[wi]) & (q.x.w[wi] | q.z.w[wi]);
        while (common) {
            int b = std::countr_zero(common);
            common &= common - 1;
            int a = ((p.z.w[wi] >> b) & 1) << 1 | ((p.x.w[wi] >> b) & 1);
            int c = ((q.z.w[wi] >> b) & 1) << 1 | ((q.x.w[wi] >> b) & 1);
            ph += kMulPhase[a][c];
        }
    }
    r.phase = static_cast<std::uint8_t>(ph & 3);
    return r;
}

BasisAction apply_to_basis(const PauliString &p, const Bitstring &z) {
    if (p.n != z.n) throw std::invalid_argument("qubit-count mismatch");
    // product of letters: X flips, Z contributes (-1)^{z_k}, Y = iXZ.
    int ph = p.phase + count_y(p) + 2 * (p.z & z.bits).popcount();
    return BasisAction{static_cast<std::uint8_t>(ph & 3), Bitstring(p.n, z.bits ^ p.x)};
}

}  // namespace scrsense
