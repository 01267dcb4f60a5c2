#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wigcheck/elliptical.hpp"
#include "wigcheck/fock_matrix.hpp"

using namespace wigcheck;
using Catch::Approx;

namespace {
const double pi = std::numbers::pi;

QuasiDensityMatrix matrix_of(const DistributionSpec& spec, int truncation) {
    return build_matrix(coefficients_lambda_route(characteristic(spec), truncation), truncation);
}

std::vector<double> sorted_eigs(const QuasiDensityMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m.mat + m.mat.adjoint()));
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_CASE("vacuum matrix is the |0><0| projector", "[fock]") {
    const auto m = matrix_of(make_family_spec(Family::vacuum), 5);
    for (int k = 0; k <= 5; ++k)
        for (int kp = 0; kp <= 5; ++kp) {
            const double expected = (k == 0 && kp == 0) ? 1.0 : 0.0;
            CHECK(std::abs(m.mat(k, kp) - cx(expected)) < 1e-9);
        }
}

TEST_CASE("coherent matrix matches the Poisson amplitudes", "[fock]") {
    const cx g(1.0, 0.5);
    const auto m = matrix_of(make_family_spec(Family::coherent, {g.real(), g.imag()}), 6);
    for (int k = 0; k <= 6; ++k)
        for (int kp = 0; kp <= 6; ++kp) {
            const cx expected = std::exp(-std::norm(g)) * std::pow(g, k) * std::pow(std::conj(g), kp) /
                                std::sqrt(factorial(k) * factorial(kp));
            CHECK(std::abs(m.mat(k, kp) - expected) < 1e-8);
        }
}

TEST_CASE("rescaled |1> diagonal reproduces the closed-form eigenvalues", "[fock]") {
    for (double lam : {0.5, 0.8, 1.0, 1.25, 2.0}) {
        const auto m = matrix_of(make_family_spec(Family::manko_fock1, {lam}), 12);
        for (int k = 0; k <= 12; ++k) {
            INFO("lambda " << lam << " k " << k);
            CHECK(m.mat(k, k).real() == Approx(manko_closed_form(lam, k)).margin(1e-6));
        }
    }
}

TEST_CASE("laguerre route: fixed values", "[fock]") {
    SECTION("vacuum is the projector") {
        const auto m = build_matrix_laguerre(characteristic(make_family_spec(Family::vacuum)), 4);
        for (int k = 0; k <= 4; ++k)
            for (int kp = 0; kp <= 4; ++kp)
                CHECK(std::abs(m.mat(k, kp) - cx(k == 0 && kp == 0 ? 1.0 : 0.0)) < 1e-9);
    }
    SECTION("rescaled |1> at lambda 0.5: alpha_00 = -0.24") {
        const auto m = build_matrix_laguerre(characteristic(make_family_spec(Family::manko_fock1, {0.5})), 2);
        CHECK(m.mat(0, 0).real() == Approx(-0.24).margin(1e-6));
    }
    SECTION("thermal populations nbar^k/(1+nbar)^{k+1}") {
        const auto m = build_matrix_laguerre(characteristic(make_family_spec(Family::thermal, {1.0})), 8);
        for (int k = 0; k <= 8; ++k) {
            CHECK(m.mat(k, k).real() == Approx(std::pow(0.5, k + 1)).margin(1e-7));
            for (int kp = 0; kp < k; ++kp) CHECK(std::abs(m.mat(k, kp)) < 1e-9);
        }
    }
    SECTION("two-mode evaluators are rejected") {
        const auto psi = make_family_spec(Family::two_mode_superposition, {0.6, 0.0, 0.8, 0.0});
        CHECK_THROWS_AS(build_matrix_laguerre(characteristic(psi), 2), usage_error);
    }
}

TEST_CASE("coefficient and laguerre routes agree on every analytic family", "[fock]") {
    for (const auto& spec : {make_family_spec(Family::vacuum), make_family_spec(Family::coherent, {1.0, 0.5}),
                             make_family_spec(Family::fock, {1}), make_family_spec(Family::thermal, {1.0}),
                             make_family_spec(Family::gaussian, {0.35, 0.6, 0.4, 0.3, -0.2}),
                             make_family_spec(Family::manko_fock1, {0.5}),
                             make_family_spec(Family::manko_fock1, {2.0})}) {
        const auto cf = characteristic(spec);
        const auto a = build_matrix(coefficients_lambda_route(cf, 12), 12);
        const auto b = build_matrix_laguerre(cf, 12);
        INFO("family " << family_name(spec.family));
        CHECK((a.mat - b.mat).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("insufficient table cutoff is a usage error naming the limit", "[fock]") {
    const auto table = coefficients_lambda_route(characteristic(make_family_spec(Family::vacuum)), 4);
    CHECK_THROWS_WITH(build_matrix(table, 8), Catch::Matchers::ContainsSubstring("cutoff 4"));
}

TEST_CASE("psd_verdict on the vacuum projector", "[fock]") {
    const auto rep = psd_verdict(matrix_of(make_family_spec(Family::vacuum), 10));
    CHECK(rep.verdict == Verdict::legitimate_up_to_N);
    CHECK(rep.min_eigenvalue >= -1e-10);
    CHECK(rep.certificate.empty());
}

TEST_CASE("psd_verdict certifies the rescaled |1> at lambda 0.5", "[fock]") {
    const auto rep = psd_verdict(matrix_of(make_family_spec(Family::manko_fock1, {0.5}), 10));
    REQUIRE(rep.verdict == Verdict::illegitimate_certified);
    CHECK(rep.min_eigenvalue == Approx(-0.24).margin(1e-6));
    // certificate overlaps |0> with essentially unit fidelity
    REQUIRE_FALSE(rep.certificate.empty());
    CHECK(std::norm(rep.certificate[0]) > 0.999);
    CHECK_FALSE(rep.violated_minor.empty());
}

TEST_CASE("sub-vacuum Gaussian: alpha_11 = -0.96 against the thermal-form oracle", "[fock]") {
    // circular Gaussian with sigma = 0.25 maps to thermal form with
    // nbar = 2 sigma^2 - 1/2 = -3/8; populations nbar^k/(1+nbar)^{k+1}
    const double nbar = 2.0 * 0.25 * 0.25 - 0.5;
    const auto m = matrix_of(make_family_spec(Family::gaussian, {0.25, 0.25, 0.0, 0.0, 0.0}), 6);
    CHECK(m.mat(1, 1).real() == Approx(nbar / std::pow(1.0 + nbar, 2)).margin(1e-6));
    CHECK(m.mat(1, 1).real() == Approx(-0.96).margin(1e-4));
    const auto rep = psd_verdict(m);
    CHECK(rep.verdict == Verdict::illegitimate_certified);
    for (int k = 0; k <= 4; ++k)
        CHECK(m.mat(k, k).real() == Approx(std::pow(nbar, k) / std::pow(1.0 + nbar, k + 1)).margin(1e-5));
}

TEST_CASE("certificate reproduces the minimal eigenvalue", "[fock]") {
    for (double lam : {0.5, 2.0}) {
        const auto m = matrix_of(make_family_spec(Family::manko_fock1, {lam}), 10);
        const auto rep = psd_verdict(m);
        REQUIRE(rep.verdict == Verdict::illegitimate_certified);
        cx quad(0);
        for (int i = 0; i <= 10; ++i)
            for (int j = 0; j <= 10; ++j) quad += std::conj(rep.certificate[i]) * m.mat(i, j) * rep.certificate[j];
        CHECK(quad.real() == Approx(rep.min_eigenvalue).margin(rep.tolerance * 10));
        CHECK(std::abs(quad.imag()) < 1e-12);
    }
}

TEST_CASE("non-Hermitian input is rejected", "[fock]") {
    QuasiDensityMatrix m;
    m.truncation = 1;
    m.mat = Eigen::MatrixXcd::Zero(2, 2);
    m.mat(0, 1) = cx(1.0, 0.0);
    m.mat(1, 0) = cx(0.5, 0.0);
    CHECK_THROWS_AS(psd_verdict(m, 1e-9), internal_error);
}

TEST_CASE("escalate: certificates and trajectories", "[fock]") {
    SECTION("rescaled |1> at lambda 2 is caught once N covers k = 2") {
        const auto rep = escalate(make_family_spec(Family::manko_fock1, {2.0}), 2, 12);
        CHECK(rep.verdict == Verdict::illegitimate_certified);
        CHECK(rep.min_eigenvalue == Approx(-0.8832).margin(1e-6));
        CHECK(rep.truncation == 2);
    }
    SECTION("vacuum stays legitimate with a flat trajectory") {
        const auto rep = escalate(make_family_spec(Family::vacuum), 4, 16);
        CHECK(rep.verdict == Verdict::legitimate_up_to_N);
        REQUIRE(rep.trajectory.size() == 4); // N = 4, 8, 12, 16
        for (const auto& [n, eig] : rep.trajectory) CHECK(eig >= -1e-9);
        CHECK(rep.normalization == Approx(1.0).margin(1e-10));
    }
    SECTION("fock(1) = trivially rescaled |1> stays legitimate") {
        const auto rep = escalate(make_family_spec(Family::manko_fock1, {1.0}), 8, 16);
        CHECK(rep.verdict == Verdict::legitimate_up_to_N);
    }
    SECTION("cutoff exhaustion yields inconclusive") {
        const auto table = coefficients_lambda_route(characteristic(make_family_spec(Family::vacuum)), 6);
        const auto rep = escalate(table, 4, 12);
        CHECK(rep.verdict == Verdict::inconclusive);
        CHECK(rep.cutoff_exhausted);
    }
}

TEST_CASE("illegitimacy found at N persists at larger N", "[fock]") {
    const auto table = coefficients_lambda_route(characteristic(make_family_spec(Family::manko_fock1, {0.5})), 14);
    double prev = 0.0;
    for (int n : {2, 6, 10, 14}) {
        const auto rep = psd_verdict(build_matrix(table, n));
        CHECK(rep.verdict == Verdict::illegitimate_certified);
        CHECK(rep.min_eigenvalue <= prev + 1e-12); // negative direction survives in the larger span
        prev = rep.min_eigenvalue;
    }
}

TEST_CASE("displacement and rotation leave the spectrum unchanged", "[fock]") {
    const auto base = make_family_spec(Family::gaussian, {0.45, 0.65, 0.0, 0.0, 0.0});
    const auto moved = apply_map(base, PhaseMap::displacement(cx(0.4, -0.2)));
    const auto turned = apply_map(base, PhaseMap::rotation(0.8));
    const auto e0 = sorted_eigs(matrix_of(base, 16));
    const auto e1 = sorted_eigs(matrix_of(moved, 16));
    const auto e2 = sorted_eigs(matrix_of(turned, 16));
    for (std::size_t i = 0; i < e0.size(); ++i) {
        CHECK(e1[i] == Approx(e0[i]).margin(1e-6));
        CHECK(e2[i] == Approx(e0[i]).margin(1e-6));
    }
}

TEST_CASE("two-mode matrix ordering follows the collective index rule", "[fock]") {
    const auto basis = collective_basis(3);
    REQUIRE(basis.size() == 10);
    CHECK(basis[0] == std::make_pair(0, 0));
    CHECK(basis[1] == std::make_pair(0, 1));
    CHECK(basis[2] == std::make_pair(1, 0));
    CHECK(basis[3] == std::make_pair(0, 2));
    CHECK(basis[4] == std::make_pair(1, 1));
    CHECK(basis[5] == std::make_pair(2, 0));

    // product vacuum x vacuum: <00|rho|00> = 1, everything else 0
    const auto prod = make_family_spec(Family::product, {}, 0.0,
                                       {make_family_spec(Family::vacuum), make_family_spec(Family::vacuum)});
    const auto m = build_matrix(coefficients_lambda_route(characteristic(prod), 2), 2);
    CHECK(std::abs(m.mat(0, 0) - cx(1.0)) < 1e-9);
    for (int i = 0; i < m.mat.rows(); ++i)
        for (int j = 0; j < m.mat.cols(); ++j)
            if (i || j) CHECK(std::abs(m.mat(i, j)) < 1e-9);
}

TEST_CASE("pure two-mode state has a rank-one collective matrix", "[fock]") {
    const auto psi = make_family_spec(Family::two_mode_superposition, {0.6, 0.0, 0.8, 0.0});
    const auto m = build_matrix(coefficients_lambda_route(characteristic(psi), 4), 4);
    const auto rep = psd_verdict(m);
    CHECK(rep.verdict == Verdict::legitimate_up_to_N);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.mat);
    CHECK(es.eigenvalues().maxCoeff() == Approx(1.0).margin(1e-8));
    CHECK(es.eigenvalues()(es.eigenvalues().size() - 2) < 1e-8); // second largest ~ 0
}
