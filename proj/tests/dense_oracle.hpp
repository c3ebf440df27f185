#pragma once

// Brute-force dense-matrix oracles used by the unit tests.  Everything
// here is deliberately naive (kron products, explicit projectors) and
// independent of the library's own evolution code.

#include <complex>
#include <stdexcept>
#include <vector>

#include "scramble_sense/pauli.hpp"
#include "scramble_sense/tableau.hpp"

namespace oracle {

using cd = std::complex<double>;
using Vec = std::vector<cd>;
using Mat = std::vector<std::vector<cd>>;  // row major

inline Mat eye(std::size_t d) {
    Mat m(d, std::vector<cd>(d));
    for (std::size_t i = 0; i < d; ++i) m[i][i] = 1.0;
    return m;
}

inline Mat kron(const Mat &a, const Mat &b) {
    std::size_t da = a.size(), db = b.size();
    Mat m(da * db, std::vector<cd>(da * db));
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j)
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l) m[i * db + k][j * db + l] = a[i][j] * b[k][l];
    return m;
}

inline Mat matmul(const Mat &a, const Mat &b) {
    std::size_t d = a.size();
    Mat m(d, std::vector<cd>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            cd aik = a[i][k];
            if (aik == cd(0)) continue;
            for (std::size_t j = 0; j < d; ++j) m[i][j] += aik * b[k][j];
        }
    return m;
}

inline Mat dagger(const Mat &a) {
    std::size_t d = a.size();
    Mat m(d, std::vector<cd>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m[i][j] = std::conj(a[j][i]);
    return m;
}

inline Vec matvec(const Mat &a, const Vec &v) {
    std::size_t d = a.size();
    Vec r(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) r[i] += a[i][j] * v[j];
    return r;
}

// Dense matrix of a PauliString (qubit 1 = LSB of the basis index).
inline Mat pauli_matrix(const scrsense::PauliString &p) {
    static const Mat I = {{1, 0}, {0, 1}};
    static const Mat X = {{0, 1}, {1, 0}};
    static const Mat Y = {{0, cd(0, -1)}, {cd(0, 1), 0}};
    static const Mat Z = {{1, 0}, {0, -1}};
    Mat m = {{1}};
    // qubit k = LSB means site k is the *right* factor of the kron chain
    for (int k = p.n - 1; k >= 0; --k) {
        bool xb = p.x.test(k), zb = p.z.test(k);
        const Mat &site = xb ? (zb ? Y : X) : (zb ? Z : I);
        m = kron(m, site);
    }
    cd ph = std::pow(cd(0, 1), p.phase & 3);
    for (auto &row : m)
        for (auto &e : row) e *= ph;
    return m;
}

// Dense unitary of a Clifford tableau (up to global phase), built column
// by column: column 0 is the stabilizer state fixed by the signed Z
// images, column z is prod_k (x_image_k)^{z_k} applied to it.
inline Mat tableau_unitary(const scrsense::CliffordTableau &c) {
    std::size_t d = std::size_t(1) << c.n;
    std::vector<Mat> zimg, ximg;
    for (int k = 0; k < c.n; ++k) {
        zimg.push_back(pauli_matrix(c.z_images[k]));
        ximg.push_back(pauli_matrix(c.x_images[k]));
    }
    Vec phi;
    for (std::size_t r = 0; r < d; ++r) {
        Vec v(d);
        v[r] = 1.0;
        for (int k = 0; k < c.n; ++k) {
            Vec sv = matvec(zimg[k], v);
            for (std::size_t i = 0; i < d; ++i) v[i] = 0.5 * (v[i] + sv[i]);
        }
        double norm2 = 0;
        for (auto &e : v) norm2 += std::norm(e);
        if (norm2 > 1e-9) {
            double inv = 1.0 / std::sqrt(norm2);
            for (auto &e : v) e *= inv;
            phi = v;
            break;
        }
    }
    if (phi.empty()) throw std::runtime_error("projector construction failed");
    Mat u(d, std::vector<cd>(d));
    for (std::size_t z = 0; z < d; ++z) {
        Vec col = phi;
        for (int k = 0; k < c.n; ++k)
            if ((z >> k) & 1) col = matvec(ximg[k], col);
        for (std::size_t i = 0; i < d; ++i) u[i][z] = col[i];
    }
    return u;
}

}  // namespace oracle
