#include "scramble_sense/clifford_gates.hpp"

#include <cassert>
#include <stdexcept>

namespace scrsense {

namespace {

// Small fixed tableaux of the elementary gates (conjugation action).
const CliffordTableau &gate_tableau(GateKind kind) {
    static const CliffordTableau h = [] {
        CliffordTableau t;
        t.n = 1;
        t.x_images = {make_pauli("Z")};
        t.z_images = {make_pauli("X")};
        return t;
    }();
    static const CliffordTableau s = [] {
        CliffordTableau t;
        t.n = 1;
        t.x_images = {make_pauli("Y")};
        t.z_images = {make_pauli("Z")};
        return t;
    }();
    static const CliffordTableau sdg = [] {
        CliffordTableau t;
        t.n = 1;
        PauliString my = make_pauli("Y");
        my.phase = 2;
        t.x_images = {my};
        t.z_images = {make_pauli("Z")};
        return t;
    }();
    static const CliffordTableau xg = [] {
        CliffordTableau t;
        t.n = 1;
        PauliString mz = make_pauli("Z");
        mz.phase = 2;
        t.x_images = {make_pauli("X")};
        t.z_images = {mz};
        return t;
    }();
    static const CliffordTableau zg = [] {
        CliffordTableau t;
        t.n = 1;
        PauliString mx = make_pauli("X");
        mx.phase = 2;
        t.x_images = {mx};
        t.z_images = {make_pauli("Z")};
        return t;
    }();
    static const CliffordTableau cnot = [] {
        CliffordTableau t;
        t.n = 2;
        t.x_images = {make_pauli("XX"), make_pauli("IX")};
        t.z_images = {make_pauli("ZI"), make_pauli("ZZ")};
        return t;
    }();
    switch (kind) {
        case GateKind::H:
            return h;
        case GateKind::S:
            return s;
        case GateKind::SDG:
            return sdg;
        case GateKind::X:
            return xg;
        case GateKind::Z:
            return zg;
        case GateKind::CNOT:
            return cnot;
    }
    throw std::logic_error("unreachable");
}

// Conjugate P by an elementary gate: the gate acts on one or two sites,
// so extract the site factor, push it through the small tableau and
// splice the result back (tensor factorization keeps this exact).
void conj_by_gate(PauliString &p, const ElemGate &g) {
    const CliffordTableau &t = gate_tableau(g.kind);
    PauliString sub;
    sub.n = t.n;
    const int sites[2] = {g.a, g.b};
    for (int i = 0; i < t.n; ++i) {
        if (p.x.test(sites[i])) sub.x.set(i);
        if (p.z.test(sites[i])) sub.z.set(i);
    }
    PauliString img = conjugate(t, sub);
    for (int i = 0; i < t.n; ++i) {
        p.x.set(sites[i], img.x.test(i));
        p.z.set(sites[i], img.z.test(i));
    }
    p.phase = static_cast<std::uint8_t>((p.phase + img.phase) & 3);
}

struct Builder {
    CliffordTableau w;
    std::vector<ElemGate> applied;

    void apply(GateKind kind, int a, int b = 0) {
        ElemGate g{kind, a, b};
        for (auto &img : w.x_images) conj_by_gate(img, g);
        for (auto &img : w.z_images) conj_by_gate(img, g);
        applied.push_back(g);
    }

    // Reduce image `p` (a reference into w) to +/- X_k using gates that do
    // not touch sites < k; when `protect_k` is set the gates must also fix
    // Z_k (used for the z-image pass after an H_k swap).
    void reduce_to_xk(int k, bool z_pass) {
        const PauliString &p = z_pass ? w.z_images[k] : w.x_images[k];
        if (p.x.none()) {
            // pure Z-type: create an x-bit
            for (int j = k; j < w.n; ++j)
                if (p.z.test(j)) {
                    apply(GateKind::H, j);
                    break;
                }
        }
        // letter cleanup: make every supported site carry X
        for (int m = k; m < w.n; ++m) {
            bool xb = p.x.test(m), zb = p.z.test(m);
            if (xb && zb)
                apply(GateKind::S, m);  // Y -> -X
            else if (!xb && zb)
                apply(GateKind::H, m);  // Z -> X
        }
        // bring support onto site k if needed
        if (!p.x.test(k)) {
            int j = -1;
            for (int m = k + 1; m < w.n; ++m)
                if (p.x.test(m)) {
                    j = m;
                    break;
                }
            assert(j >= 0);
            if (z_pass) {
                // site k already carries X here (anticommutation with Z_k),
                // so this branch cannot be reached in the z pass
                assert(false);
            }
            apply(GateKind::CNOT, j, k);
            apply(GateKind::CNOT, k, j);
            apply(GateKind::CNOT, j, k);
        }
        // fan in remaining X letters
        for (int m = k + 1; m < w.n; ++m)
            if (p.x.test(m)) apply(GateKind::CNOT, k, m);
    }
};

GateKind inverse_kind(GateKind k) {
    switch (k) {
        case GateKind::S:
            return GateKind::SDG;
        case GateKind::SDG:
            return GateKind::S;
        default:
            return k;
    }
}

}  // namespace

std::vector<ElemGate> synthesize_clifford(const CliffordTableau &c) {
    Builder b;
    b.w = c;
    int n = c.n;
    for (int k = 0; k < n; ++k) {
        b.reduce_to_xk(k, false);  // x image -> +/- X_k
        // z image -> +/- Z_k
        const PauliString &q = b.w.z_images[k];
        bool plain = q.x.none() && q.z.test(k) && (q.z ^ single_site_pauli(n, k, 'Z').z).none();
        if (!plain) {
            b.apply(GateKind::H, k);  // X_k image becomes Z_k, protected below
            b.reduce_to_xk(k, true);
            b.apply(GateKind::H, k);
        }
    }
    for (int k = 0; k < n; ++k) {
        if (b.w.x_images[k].phase != 0) b.apply(GateKind::Z, k);
        if (b.w.z_images[k].phase != 0) b.apply(GateKind::X, k);
    }
    assert(tableau_to_text(b.w) == tableau_to_text(CliffordTableau::identity(n)));

    // applied gates g1..gL satisfy gL ... g1 U = I, so U = g1^-1 ... gL^-1;
    // as an application-ordered list that is gL^-1 first.
    std::vector<ElemGate> out;
    out.reserve(b.applied.size());
    for (auto it = b.applied.rbegin(); it != b.applied.rend(); ++it) {
        ElemGate g = *it;
        g.kind = inverse_kind(g.kind);
        out.push_back(g);
    }
    return out;
}

void apply_elem_gate(std::vector<std::complex<double>> &amp, int n, const ElemGate &g) {
    using cd = std::complex<double>;
    const std::size_t d = amp.size();
    const std::size_t bit = std::size_t(1) << g.a;
    switch (g.kind) {
        case GateKind::H: {
            const double s = 0.70710678118654752440;
            for (std::size_t i = 0; i < d; ++i)
                if (!(i & bit)) {
                    cd a = amp[i], b2 = amp[i | bit];
                    amp[i] = s * (a + b2);
                    amp[i | bit] = s * (a - b2);
                }
            break;
        }
        case GateKind::S:
            for (std::size_t i = 0; i < d; ++i)
                if (i & bit) amp[i] *= cd(0, 1);
            break;
        case GateKind::SDG:
            for (std::size_t i = 0; i < d; ++i)
                if (i & bit) amp[i] *= cd(0, -1);
            break;
        case GateKind::X:
            for (std::size_t i = 0; i < d; ++i)
                if (!(i & bit)) std::swap(amp[i], amp[i | bit]);
            break;
        case GateKind::Z:
            for (std::size_t i = 0; i < d; ++i)
                if (i & bit) amp[i] = -amp[i];
            break;
        case GateKind::CNOT: {
            const std::size_t tbit = std::size_t(1) << g.b;
            for (std::size_t i = 0; i < d; ++i)
                if ((i & bit) && !(i & tbit)) std::swap(amp[i], amp[i | tbit]);
            break;
        }
    }
    (void)n;
}

}  // namespace scrsense
