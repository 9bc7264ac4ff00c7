#pragma once

// Zero-mean Gaussian states in the covariance-matrix picture. Quadratures
// are ordered (q1, p1, q2, p2, ...) and the vacuum covariance is the identity.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace satent {

using CovMatrix = Eigen::MatrixXd;

// Standard symplectic form for `modes` modes.
Eigen::MatrixXd symplectic_form(std::size_t modes);

// Two-mode squeezed vacuum with quadrature variance nu.
CovMatrix tmsv_cov(double nu);

double nu_from_chi(double chi);
double nu_from_squeezing_db(double db);

// Symplectic matrix of the beamsplitter acting on modes (x, y) with the
// quadrature transform x -> sqrt(tau) x - sqrt(1-tau) y,
// y -> sqrt(1-tau) x + sqrt(tau) y.
Eigen::MatrixXd beamsplitter_symplectic(std::size_t modes, std::size_t x, std::size_t y, double tau);

// Pure-loss channel on one mode: V -> X V X^T + Y.
CovMatrix apply_loss(const CovMatrix& cov, std::size_t mode, double eta);

// Same channel built explicitly from a vacuum environment and a beamsplitter.
CovMatrix apply_loss_dilated(const CovMatrix& cov, std::size_t mode, double eta);

// Covariance of the listed modes.
CovMatrix reduce(const CovMatrix& cov, const std::vector<std::size_t>& modes);

// Ascending symplectic spectrum, one value per mode. Raises
// InvalidStateError when the uncertainty principle is violated.
std::vector<double> symplectic_eigenvalues(const CovMatrix& cov);

// g(x) = ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2), g(1) = 0.
double g_entropy(double x);

double gaussian_entropy(const std::vector<double>& symplectic_eigs);
double gaussian_entropy(const CovMatrix& cov);

struct GaussianCoherentInfo {
    double forward; // S(B) - S(AB)
    double reverse; // S(A) - S(AB)
};

// Coherent information of a two-mode covariance (mode 0 = A, mode 1 = B).
GaussianCoherentInfo gaussian_coherent_info(const CovMatrix& cov_ab);

// Reverse coherent information of a TMSV whose second arm crossed loss eta^2,
// g(nu) - g(nu + eta^2 (1 - nu)), clamped at 0.
double cv_relay_rate(double nu, double eta);

} // namespace satent
