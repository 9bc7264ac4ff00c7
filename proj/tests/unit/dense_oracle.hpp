#pragma once

// Brute-force dense state-vector simulation used as an independent check of
// the sparse Fock engine. Beamsplitters come from the matrix exponential of
// the truncated generator theta (a b^dag - a^dag b), which is exact on
// sectors whose total photon number fits in the local dimension.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using cplx = std::complex<double>;

inline Eigen::MatrixXcd annihilation(int d) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

// Two-mode unitary on C^d (x) C^d, first factor = first mode.
inline Eigen::MatrixXcd beamsplitter(int d, double tau) {
    const Eigen::MatrixXcd a = annihilation(d);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    const Eigen::MatrixXcd A = Eigen::kroneckerProduct(a, id);
    const Eigen::MatrixXcd B = Eigen::kroneckerProduct(id, a);
    const double theta = std::acos(std::sqrt(tau));
    const Eigen::MatrixXcd G = theta * (A * B.adjoint() - A.adjoint() * B);
    return G.exp();
}

struct State {
    int modes;
    int d;
    Eigen::VectorXcd v;

    State(int m, int dim) : modes(m), d(dim), v(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(std::pow(dim, m)))) {}

    std::vector<int> occupation(Eigen::Index i) const {
        std::vector<int> occ(modes);
        for (int m = modes - 1; m >= 0; --m) {
            occ[m] = static_cast<int>(i % d);
            i /= d;
        }
        return occ;
    }
    Eigen::Index index(const std::vector<int>& occ) const {
        Eigen::Index i = 0;
        for (int m = 0; m < modes; ++m) i = i * d + occ[m];
        return i;
    }
};

// Product of per-block states: blocks[k] is a list of (occupation, amplitude).
using Block = std::vector<std::pair<std::vector<int>, cplx>>;

inline State product(const std::vector<Block>& blocks, int d) {
    int modes = 0;
    for (const auto& b : blocks) modes += static_cast<int>(b.front().first.size());
    State s(modes, d);
    std::vector<std::size_t> pick(blocks.size(), 0);
    for (;;) {
        std::vector<int> occ;
        cplx amp = 1.0;
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            const auto& [o, a] = blocks[k][pick[k]];
            occ.insert(occ.end(), o.begin(), o.end());
            amp *= a;
        }
        s.v(s.index(occ)) += amp;
        std::size_t k = 0;
        while (k < blocks.size() && ++pick[k] == blocks[k].size()) pick[k++] = 0;
        if (k == blocks.size()) break;
    }
    return s;
}

inline void apply(State& s, int x, int y, const Eigen::MatrixXcd& u) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(s.v.size());
    for (Eigen::Index i = 0; i < s.v.size(); ++i) {
        if (s.v(i) == cplx{}) continue;
        auto occ = s.occupation(i);
        const int col = occ[x] * s.d + occ[y];
        for (int row = 0; row < s.d * s.d; ++row) {
            const cplx c = u(row, col);
            if (c == cplx{}) continue;
            occ[x] = row / s.d;
            occ[y] = row % s.d;
            out(s.index(occ)) += c * s.v(i);
        }
    }
    s.v = out;
}

struct Branch {
    std::vector<int> pattern;
    std::vector<int> parity_modes;
};

// Unnormalized sum over branches of the projected state reduced to `keep`.
inline Eigen::MatrixXcd herald(const State& s, const std::vector<int>& measured, const std::vector<Branch>& branches,
                               const std::vector<int>& keep) {
    Eigen::Index kdim = 1;
    for (std::size_t k = 0; k < keep.size(); ++k) kdim *= s.d;
    const Eigen::Index rest = s.v.size() / kdim;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(kdim, kdim);
    for (const auto& b : branches) {
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(kdim, rest);
        for (Eigen::Index i = 0; i < s.v.size(); ++i) {
            const auto occ = s.occupation(i);
            bool match = true;
            for (std::size_t m = 0; m < measured.size(); ++m) match = match && occ[measured[m]] == b.pattern[m];
            if (!match) continue;
            double sign = 1.0;
            for (int p : b.parity_modes)
                if (occ[p] % 2) sign = -sign;
            Eigen::Index ki = 0;
            for (int k : keep) ki = ki * s.d + occ[k];
            Eigen::Index ri = 0;
            for (int m = 0; m < s.modes; ++m) {
                bool kept = false;
                for (int k : keep) kept = kept || k == m;
                if (!kept) ri = ri * s.d + occ[m];
            }
            M(ki, ri) += sign * s.v(i);
        }
        rho += M * M.adjoint();
    }
    return rho;
}

// Reduced state of one factor of a bipartite d x d density matrix.
inline Eigen::MatrixXcd reduce_two(const Eigen::MatrixXcd& rho, int d, int which) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int e = 0; e < d; ++e) {
                if (which == 0) out(a, b) += rho(a * d + e, b * d + e);
                else out(a, b) += rho(e * d + a, e * d + b);
            }
    return out;
}

inline double entropy(const Eigen::MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double l = es.eigenvalues()(i);
        if (l > 1e-15) s -= l * std::log(l);
    }
    return s;
}

struct Info {
    double p;
    double i_fwd;
    double i_rev;
};

inline Info coherent_info(const Eigen::MatrixXcd& unnormalized, int d) {
    const double p = unnormalized.trace().real();
    const Eigen::MatrixXcd rho = unnormalized / p;
    const double sab = entropy(rho);
    return {p, entropy(reduce_two(rho, d, 1)) - sab, entropy(reduce_two(rho, d, 0)) - sab};
}

} // namespace oracle
