#include <doctest.h>

#include <cmath>

#include "satent/error.hpp"
#include "satent/fock.hpp"
#include "satent/gaussian_cv.hpp"
#include "satent/protocols.hpp"

using namespace satent;

TEST_CASE("g entropy values") {
    CHECK(g_entropy(1.0) == 0.0);
    CHECK(g_entropy(3.234) == doctest::Approx(1.4642).epsilon(1e-4));
    CHECK_THROWS_AS((void)g_entropy(0.5), DomainError);
}

TEST_CASE("squeezing conversions") {
    const double r = 8.0 * std::log(10.0) / 20.0;
    CHECK(nu_from_squeezing_db(8.0) == doctest::Approx(std::cosh(2.0 * r)));
    CHECK(nu_from_squeezing_db(8.0) == doctest::Approx(3.234).epsilon(1e-3));
    const double chi = std::tanh(r);
    CHECK(nu_from_chi(chi) == doctest::Approx(std::cosh(2.0 * r)));
}

TEST_CASE("TMSV covariance is pure and physical") {
    const auto v = tmsv_cov(3.0);
    const auto eig = symplectic_eigenvalues(v);
    REQUIRE(eig.size() == 2);
    CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(eig[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(gaussian_entropy(v) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(gaussian_entropy(reduce(v, {0})) == doctest::Approx(g_entropy(3.0)));
}

TEST_CASE("unphysical covariance is rejected") {
    const CovMatrix bad = 0.5 * CovMatrix::Identity(2, 2);
    CHECK_THROWS_AS((void)symplectic_eigenvalues(bad), InvalidStateError);
}

TEST_CASE("loss channel agrees with its dilation and is symplectic-consistent") {
    const auto v = tmsv_cov(4.0);
    for (double eta : {0.0, 0.3, 0.9, 1.0}) {
        const auto a = apply_loss(v, 1, eta);
        const auto b = apply_loss_dilated(v, 1, eta);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
        (void)symplectic_eigenvalues(a);
    }
    const auto s = beamsplitter_symplectic(2, 0, 1, 0.3);
    const auto omega = symplectic_form(2);
    CHECK((s * omega * s.transpose() - omega).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("thermal marginal entropy matches the Fock picture") {
    const double chi = 0.4;
    const auto psi = tmsv_truncated(chi, 40);
    const auto marginal = partial_trace(DensityOp::from_pure(psi), {0});
    CHECK(entropy(marginal) == doctest::Approx(g_entropy(nu_from_chi(chi))).epsilon(1e-9));
}

TEST_CASE("CV relay coefficient at 8 dB") {
    const double nu = nu_from_squeezing_db(8.0);
    const double eta = 0.01;
    const double coeff = cv_relay_rate(nu, eta) / (eta * eta);
    const double series = 0.5 * (nu - 1.0) * std::log((nu + 1.0) / (nu - 1.0));
    CHECK(coeff == doctest::Approx(series).epsilon(1e-3));
    CHECK(coeff == doctest::Approx(0.714).epsilon(0.01));
    CHECK(relay_unamp_cv(nu, eta, eta).rate == doctest::Approx(cv_relay_rate(nu, eta)).epsilon(1e-9));
}

TEST_CASE("Fock and Gaussian unamplified protocols agree") {
    for (double chi : {0.1, 0.25, 0.35}) {
        const double nu = nu_from_chi(chi);
        for (double eta : {0.3, 0.7, 0.95}) {
            const auto fock = relay_unamp_fock(Resource{ResourceKind::CV, chi, 5}, eta, eta);
            const auto gauss = relay_unamp_cv(nu, eta, eta);
            CHECK(std::abs(fock.i_rev - gauss.i_rev) < 1e-3);
            CHECK(std::abs(fock.i_fwd - gauss.i_fwd) < 1e-3);
            const auto fd = dist_unamp_fock(Resource{ResourceKind::CV, chi, 5}, eta, eta);
            const auto gd = dist_unamp_cv(nu, eta, eta);
            CHECK(std::abs(fd.i_rev - gd.i_rev) < 1e-3);
        }
    }
}

TEST_CASE("symmetric distribution below half transmissivity has no rate") {
    for (double eta : {0.1, 0.3, 0.5}) {
        for (double nu : {1.5, 3.234, 10.0}) CHECK(dist_unamp_cv(nu, eta, eta).rate == 0.0);
        for (double xi : {0.05, 0.217, 0.5, 0.9}) CHECK(dist_unamp_dv(xi, eta, eta).rate == 0.0);
    }
    CHECK(dist_unamp_dv(0.5, 0.9, 0.9).rate > 0.0);
}
