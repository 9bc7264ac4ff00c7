#include "satent/gaussian_cv.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "satent/error.hpp"

namespace satent {

namespace {

void check_mode(const CovMatrix& cov, std::size_t mode) {
    if (cov.rows() != cov.cols() || cov.rows() % 2 != 0) throw DomainError("covariance must be square with even size");
    if (static_cast<Eigen::Index>(2 * mode + 1) >= cov.rows()) throw DomainError("mode index outside the covariance");
}

} // namespace

Eigen::MatrixXd symplectic_form(std::size_t modes) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * modes), static_cast<Eigen::Index>(2 * modes));
    for (std::size_t m = 0; m < modes; ++m) {
        const auto i = static_cast<Eigen::Index>(2 * m);
        w(i, i + 1) = 1.0;
        w(i + 1, i) = -1.0;
    }
    return w;
}

CovMatrix tmsv_cov(double nu) {
    if (!(nu >= 1.0)) throw DomainError("quadrature variance must be at least 1");
    const double c = std::sqrt(nu * nu - 1.0);
    CovMatrix v = CovMatrix::Identity(4, 4) * nu;
    v(0, 2) = v(2, 0) = c;
    v(1, 3) = v(3, 1) = -c;
    return v;
}

double nu_from_chi(double chi) {
    if (!(chi >= 0.0 && chi < 1.0)) throw DomainError("chi must lie in [0, 1)");
    return (1.0 + chi * chi) / (1.0 - chi * chi);
}

double nu_from_squeezing_db(double db) {
    if (!(db >= 0.0)) throw DomainError("squeezing must be nonnegative");
    // 10 log10 e^{2r} = db
    const double r = db * std::log(10.0) / 20.0;
    return std::cosh(2.0 * r);
}

Eigen::MatrixXd beamsplitter_symplectic(std::size_t modes, std::size_t x, std::size_t y, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("beamsplitter transmissivity must lie in [0, 1]");
    if (x >= modes || y >= modes || x == y) throw DomainError("beamsplitter needs two distinct modes");
    const double s = std::sqrt(tau), t = std::sqrt(1.0 - tau);
    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(2 * modes), static_cast<Eigen::Index>(2 * modes));
    for (int q = 0; q < 2; ++q) {
        const auto ix = static_cast<Eigen::Index>(2 * x + q), iy = static_cast<Eigen::Index>(2 * y + q);
        S(ix, ix) = s;
        S(ix, iy) = -t;
        S(iy, ix) = t;
        S(iy, iy) = s;
    }
    return S;
}

CovMatrix apply_loss(const CovMatrix& cov, std::size_t mode, double eta) {
    check_mode(cov, mode);
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("loss transmissivity must lie in [0, 1]");
    CovMatrix out = cov;
    const double r = std::sqrt(eta);
    const auto i = static_cast<Eigen::Index>(2 * mode);
    out.row(i) *= r;
    out.row(i + 1) *= r;
    out.col(i) *= r;
    out.col(i + 1) *= r;
    out(i, i) += 1.0 - eta;
    out(i + 1, i + 1) += 1.0 - eta;
    return out;
}

CovMatrix apply_loss_dilated(const CovMatrix& cov, std::size_t mode, double eta) {
    check_mode(cov, mode);
    const auto n = cov.rows();
    const std::size_t modes = static_cast<std::size_t>(n / 2);
    CovMatrix big = CovMatrix::Identity(n + 2, n + 2);
    big.topLeftCorner(n, n) = cov;
    const Eigen::MatrixXd S = beamsplitter_symplectic(modes + 1, mode, modes, eta);
    const CovMatrix full = S * big * S.transpose();
    return full.topLeftCorner(n, n);
}

CovMatrix reduce(const CovMatrix& cov, const std::vector<std::size_t>& modes) {
    const auto k = static_cast<Eigen::Index>(2 * modes.size());
    CovMatrix out(k, k);
    for (std::size_t a = 0; a < modes.size(); ++a) {
        check_mode(cov, modes[a]);
        for (std::size_t b = 0; b < modes.size(); ++b)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    out(static_cast<Eigen::Index>(2 * a + i), static_cast<Eigen::Index>(2 * b + j)) =
                        cov(static_cast<Eigen::Index>(2 * modes[a] + i), static_cast<Eigen::Index>(2 * modes[b] + j));
    }
    return out;
}

std::vector<double> symplectic_eigenvalues(const CovMatrix& cov) {
    if (cov.rows() != cov.cols() || cov.rows() % 2 != 0 || cov.rows() == 0)
        throw DomainError("covariance must be square with even size");
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, cov.cwiseAbs().maxCoeff()))
        throw InvalidStateError("covariance matrix is not symmetric");
    const std::size_t m = static_cast<std::size_t>(cov.rows() / 2);
    Eigen::EigenSolver<Eigen::MatrixXd> es(symplectic_form(m) * cov, false);
    if (es.info() != Eigen::Success) throw NumericalError("symplectic spectrum failed");
    std::vector<double> mags;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) mags.push_back(std::abs(es.eigenvalues()(i)));
    std::sort(mags.begin(), mags.end());
    std::vector<double> out;
    for (std::size_t i = 0; i < m; ++i) out.push_back(0.5 * (mags[2 * i] + mags[2 * i + 1]));
    for (double v : out)
        if (v < 1.0 - 1e-10) throw InvalidStateError("uncertainty principle violated: symplectic eigenvalue " + std::to_string(v));
    return out;
}

double g_entropy(double x) {
    if (!(x >= 1.0 - 1e-10)) throw DomainError("g(x) requires x >= 1");
    if (x <= 1.0) return 0.0;
    const double a = 0.5 * (x + 1.0), b = 0.5 * (x - 1.0);
    return a * std::log(a) - b * std::log(b);
}

double gaussian_entropy(const std::vector<double>& symplectic_eigs) {
    double s = 0.0;
    for (double v : symplectic_eigs) s += g_entropy(std::max(1.0, v));
    return s;
}

double gaussian_entropy(const CovMatrix& cov) { return gaussian_entropy(symplectic_eigenvalues(cov)); }

GaussianCoherentInfo gaussian_coherent_info(const CovMatrix& cov_ab) {
    if (cov_ab.rows() != 4) throw DomainError("coherent information needs a two-mode covariance");
    const double s_ab = gaussian_entropy(cov_ab);
    const double s_a = gaussian_entropy(reduce(cov_ab, {0}));
    const double s_b = gaussian_entropy(reduce(cov_ab, {1}));
    return {s_b - s_ab, s_a - s_ab};
}

double cv_relay_rate(double nu, double eta) {
    if (!(nu >= 1.0)) throw DomainError("quadrature variance must be at least 1");
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("transmissivity must lie in [0, 1]");
    const double nb = nu + eta * eta * (1.0 - nu);
    return std::max(0.0, g_entropy(nu) - g_entropy(nb));
}

} // namespace satent
