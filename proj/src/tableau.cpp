#include "scramble_sense/tableau.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace scrsense {

CliffordTableau CliffordTableau::identity(int n) {
    CliffordTableau t;
    t.n = n;
    t.x_images.reserve(n);
    t.z_images.reserve(n);
    for (int k = 0; k < n; ++k) {
        t.x_images.push_back(single_site_pauli(n, k, 'X'));
        t.z_images.push_back(single_site_pauli(n, k, 'Z'));
    }
    return t;
}

bool CliffordTableau::is_valid() const {
    if (static_cast<int>(x_images.size()) != n || static_cast<int>(z_images.size()) != n) return false;
    for (int k = 0; k < n; ++k) {
        if (!x_images[k].hermitian() || !z_images[k].hermitian()) return false;
        if (x_images[k].is_identity() || z_images[k].is_identity()) return false;
        if (commutes(x_images[k], z_images[k])) return false;
        for (int j = k + 1; j < n; ++j) {
            if (!commutes(x_images[k], x_images[j])) return false;
            if (!commutes(z_images[k], z_images[j])) return false;
            if (!commutes(x_images[k], z_images[j])) return false;
            if (!commutes(z_images[k], x_images[j])) return false;
        }
    }
    return true;
}

PauliString conjugate(const CliffordTableau &c, const PauliString &p) {
    if (c.n != p.n) throw std::invalid_argument("qubit-count mismatch");
    if (!p.hermitian()) throw std::invalid_argument("conjugate requires a Hermitian Pauli");
    // P = i^{phase + n_y} * prod_k X_k^{x_k} Z_k^{z_k}; substitute images.
    PauliString r;
    r.n = p.n;
    r.phase = static_cast<std::uint8_t>((p.phase + count_y(p)) & 3);
    for (int k = 0; k < p.n; ++k) {
        if (p.x.test(k)) r = multiply(r, c.x_images[k]);
        if (p.z.test(k)) r = multiply(r, c.z_images[k]);
    }
    assert(r.hermitian());
    return r;
}

CliffordTableau compose(const CliffordTableau &a, const CliffordTableau &b) {
    if (a.n != b.n) throw std::invalid_argument("qubit-count mismatch");
    CliffordTableau t;
    t.n = a.n;
    t.x_images.reserve(a.n);
    t.z_images.reserve(a.n);
    for (int k = 0; k < a.n; ++k) {
        t.x_images.push_back(conjugate(a, b.x_images[k]));
        t.z_images.push_back(conjugate(a, b.z_images[k]));
    }
    return t;
}

CliffordTableau inverse(const CliffordTableau &a) {
    // Symplectic inverse: the x/z expansion coefficients of U^dag g U are
    // anticommutation parities against the forward images; signs are fixed
    // afterwards by round-tripping each generator.
    CliffordTableau v;
    v.n = a.n;
    v.x_images.assign(a.n, PauliString{});
    v.z_images.assign(a.n, PauliString{});
    for (int k = 0; k < a.n; ++k) {
        PauliString &xi = v.x_images[k];
        PauliString &zi = v.z_images[k];
        xi.n = zi.n = a.n;
        for (int j = 0; j < a.n; ++j) {
            if (a.z_images[j].z.test(k)) xi.x.set(j);
            if (a.x_images[j].z.test(k)) xi.z.set(j);
            if (a.z_images[j].x.test(k)) zi.x.set(j);
            if (a.x_images[j].x.test(k)) zi.z.set(j);
        }
        if (conjugate(a, xi).phase != 0) xi.phase = 2;
        if (conjugate(a, zi).phase != 0) zi.phase = 2;
    }
    return v;
}

namespace {

bool anticommutes(const PauliString &p, const PauliString &q) { return !commutes(p, q); }

// Uniformly random XOR-combination of `basis` (masks only; phases play no
// role in the symplectic vector space).
PauliString random_combination(const std::vector<PauliString> &basis, int n, Rng &rng) {
    PauliString v;
    v.n = n;
    std::uint64_t sel = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (i % 64 == 0) sel = rng.next_u64();
        if ((sel >> (i % 64)) & 1) {
            v.x = v.x ^ basis[i].x;
            v.z = v.z ^ basis[i].z;
        }
    }
    return v;
}

// Gaussian elimination keeping the first maximal independent subset.
std::vector<PauliString> independent_subset(const std::vector<PauliString> &vecs, int n) {
    std::vector<PauliString> pivots;
    for (const auto &vec : vecs) {
        PauliString v = vec;
        for (const auto &p : pivots) {
            // reduce on the lowest set bit of p (x block first, then z)
            int piv = -1;
            bool in_x = true;
            for (int k = 0; k < n; ++k)
                if (p.x.test(k)) {
                    piv = k;
                    break;
                }
            if (piv < 0) {
                in_x = false;
                for (int k = 0; k < n; ++k)
                    if (p.z.test(k)) {
                        piv = k;
                        break;
                    }
            }
            bool has = in_x ? v.x.test(piv) : v.z.test(piv);
            if (has) {
                v.x = v.x ^ p.x;
                v.z = v.z ^ p.z;
            }
        }
        if (!(v.x.none() && v.z.none())) {
            // re-eliminate pivots' leading bits from later candidates by
            // keeping v in fully reduced form
            pivots.push_back(v);
        }
    }
    return pivots;
}

}  // namespace

CliffordTableau sample_uniform_clifford(int n, Rng &rng) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    CliffordTableau t;
    t.n = n;
    t.x_images.assign(n, PauliString{});
    t.z_images.assign(n, PauliString{});

    // Symplectic basis of the not-yet-fixed subspace.
    std::vector<PauliString> basis;
    for (int k = 0; k < n; ++k) {
        basis.push_back(single_site_pauli(n, k, 'X'));
        basis.push_back(single_site_pauli(n, k, 'Z'));
    }

    for (int k = 0; k < n; ++k) {
        int m2 = static_cast<int>(basis.size());
        // v1: uniform non-zero element of span(basis)
        PauliString v1;
        do {
            v1 = random_combination(basis, n, rng);
        } while (v1.is_identity());
        // v2: uniform element with <v1, v2> = 1
        PauliString v2;
        do {
            v2 = random_combination(basis, n, rng);
        } while (commutes(v1, v2));

        v1.phase = rng.bernoulli(0.5) ? 2 : 0;
        v2.phase = rng.bernoulli(0.5) ? 2 : 0;
        t.x_images[k] = v1;
        t.z_images[k] = v2;

        // Project the basis onto the symplectic complement of {v1, v2} and
        // re-extract an independent set (dimension drops by 2).
        std::vector<PauliString> next;
        next.reserve(m2);
        for (const auto &b : basis) {
            PauliString c = b;
            if (anticommutes(b, v2)) {
                c.x = c.x ^ v1.x;
                c.z = c.z ^ v1.z;
            }
            if (anticommutes(b, v1)) {
                c.x = c.x ^ v2.x;
                c.z = c.z ^ v2.z;
            }
            if (!c.is_identity()) next.push_back(c);
        }
        basis = independent_subset(next, n);
        assert(static_cast<int>(basis.size()) == m2 - 2);
    }
    return t;
}

namespace {

// masks for the sixteen 2-qubit Paulis, index = x | z<<2 over 2 bits each
PauliString two_qubit_from_bits(unsigned xm, unsigned zm) {
    PauliString p;
    p.n = 2;
    p.x = BitMask::from_u64(xm);
    p.z = BitMask::from_u64(zm);
    return p;
}

std::vector<CliffordTableau> build_two_qubit_table() {
    std::vector<PauliString> paulis;  // the 15 non-identity masks
    for (unsigned code = 1; code < 16; ++code) paulis.push_back(two_qubit_from_bits(code & 3, code >> 2));

    std::vector<CliffordTableau> table;
    table.reserve(11520);
    for (const auto &a : paulis) {
        for (const auto &b : paulis) {
            if (commutes(a, b)) continue;
            for (const auto &c : paulis) {
                if (!commutes(c, a) || !commutes(c, b)) continue;
                for (const auto &d : paulis) {
                    if (!commutes(d, a) || !commutes(d, b) || commutes(d, c)) continue;
                    for (unsigned signs = 0; signs < 16; ++signs) {
                        CliffordTableau t;
                        t.n = 2;
                        t.x_images = {a, c};
                        t.z_images = {b, d};
                        t.x_images[0].phase = (signs & 1) ? 2 : 0;
                        t.z_images[0].phase = (signs & 2) ? 2 : 0;
                        t.x_images[1].phase = (signs & 4) ? 2 : 0;
                        t.z_images[1].phase = (signs & 8) ? 2 : 0;
                        table.push_back(std::move(t));
                    }
                }
            }
        }
    }
    assert(table.size() == 11520);
    return table;
}

}  // namespace

const std::vector<CliffordTableau> &two_qubit_clifford_table() {
    static const std::vector<CliffordTableau> table = build_two_qubit_table();
    return table;
}

CliffordTableau embed_two_qubit(const CliffordTableau &g, int n, int i, int j) {
    if (g.n != 2 || i == j || i < 0 || j < 0 || i >= n || j >= n) throw std::invalid_argument("bad embedding");
    CliffordTableau t = CliffordTableau::identity(n);
    auto lift = [&](const PauliString &p) {
        PauliString q;
        q.n = n;
        q.phase = p.phase;
        if (p.x.test(0)) q.x.set(i);
        if (p.z.test(0)) q.z.set(i);
        if (p.x.test(1)) q.x.set(j);
        if (p.z.test(1)) q.z.set(j);
        return q;
    };
    t.x_images[i] = lift(g.x_images[0]);
    t.z_images[i] = lift(g.z_images[0]);
    t.x_images[j] = lift(g.x_images[1]);
    t.z_images[j] = lift(g.z_images[1]);
    return t;
}

std::vector<std::pair<int, int>> brickwork_pairs(int n, int row) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("brickwork needs even n >= 2");
    std::vector<std::pair<int, int>> pairs;
    if (row % 2 == 0) {
        for (int i = 0; i + 1 < n; i += 2) pairs.emplace_back(i, i + 1);
    } else {
        for (int i = 1; i + 1 < n; i += 2) pairs.emplace_back(i, i + 1);
        if (n > 2) pairs.emplace_back(n - 1, 0);  // periodic wrap
    }
    return pairs;
}

CliffordTableau sample_brickwork_layer(int n, int depth, Rng &rng) {
    const auto &table = two_qubit_clifford_table();
    CliffordTableau layer = CliffordTableau::identity(n);
    for (int row = 0; row < depth; ++row) {
        CliffordTableau rowtab = CliffordTableau::identity(n);
        for (auto [i, j] : brickwork_pairs(n, row)) {
            const auto &g = table[rng.uniform_int(table.size())];
            CliffordTableau e = embed_two_qubit(g, n, i, j);
            rowtab.x_images[i] = e.x_images[i];
            rowtab.z_images[i] = e.z_images[i];
            rowtab.x_images[j] = e.x_images[j];
            rowtab.z_images[j] = e.z_images[j];
        }
        layer = compose(rowtab, layer);
    }
    return layer;
}

std::string tableau_to_text(const CliffordTableau &c) {
    std::ostringstream out;
    out << c.n << "\n";
    for (const auto &p : c.x_images) out << to_string(p) << "\n";
    for (const auto &p : c.z_images) out << to_string(p) << "\n";
    return out.str();
}

CliffordTableau tableau_from_text(const std::string &text) {
    std::istringstream in(text);
    int n = 0;
    in >> n;
    if (n < 1) throw std::invalid_argument("bad tableau text");
    auto parse_signed = [&]() {
        std::string tok;
        in >> tok;
        std::uint8_t phase = 0;
        std::size_t off = 0;
        if (tok.rfind("+", 0) == 0)
            off = 1;
        else if (tok.rfind("-", 0) == 0) {
            phase = 2;
            off = 1;
        }
        PauliString p = make_pauli(std::string_view(tok).substr(off));
        p.phase = phase;
        return p;
    };
    CliffordTableau t;
    t.n = n;
    for (int k = 0; k < n; ++k) t.x_images.push_back(parse_signed());
    for (int k = 0; k < n; ++k) t.z_images.push_back(parse_signed());
    if (!t.is_valid()) throw std::invalid_argument("tableau text violates commutation structure");
    return t;
}

CircuitFamily sample_circuit_family(FamilyKind kind, int n, int t_steps, Rng &rng) {
    CircuitFamily f;
    f.kind = kind;
    f.n = n;
    f.t_steps = t_steps;
    for (int t = 0; t < t_steps; ++t) {
        CliffordTableau layer = (kind == FamilyKind::global_uniform) ? sample_uniform_clifford(n, rng)
                                                                     : sample_brickwork_layer(n, 2, rng);
        f.layers.push_back(layer);
        f.prefixes.push_back(t == 0 ? f.layers[0] : compose(f.layers[t], f.prefixes[t - 1]));
    }
    f.terminal_inverse = t_steps > 0 ? inverse(f.prefixes.back()) : CliffordTableau::identity(n);
    return f;
}

}  // namespace scrsense
