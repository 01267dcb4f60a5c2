#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "wigcheck/elliptical.hpp"
#include "wigcheck/fock_matrix.hpp"

using namespace wigcheck;
using Catch::Approx;

TEST_CASE("closed form for the rescaled |1> spectrum", "[elliptical]") {
    SECTION("lambda = 1 collapses to delta_k1") {
        CHECK(manko_closed_form(1.0, 0) == 0.0);
        CHECK(manko_closed_form(1.0, 1) == 1.0);
        CHECK(manko_closed_form(1.0, 2) == 0.0);
        CHECK(manko_closed_form(1.0, 7) == 0.0);
    }
    SECTION("fixed points") {
        CHECK(manko_closed_form(0.5, 0) == Approx(-0.24).margin(1e-15));
        CHECK(manko_closed_form(2.0, 2) == Approx(-0.8832).margin(1e-12));
    }
    SECTION("validation") {
        CHECK_THROWS_AS(manko_closed_form(0.0, 1), usage_error);
        CHECK_THROWS_AS(manko_closed_form(1.0, -1), usage_error);
    }
}

TEST_CASE("circularity residual separates circular from elliptical", "[elliptical]") {
    CHECK(circularity_residual(make_family_spec(Family::vacuum)) < 1e-12);
    CHECK(circularity_residual(make_family_spec(Family::manko_fock1, {0.7})) < 1e-12);
    CHECK(circularity_residual(make_family_spec(Family::gaussian, {0.3, 0.6, 0.5, 0.0, 0.0})) > 1e-2);
}

TEST_CASE("normalize_elliptical: identity declaration leaves a circular spec unchanged", "[elliptical]") {
    const auto vac = make_family_spec(Family::vacuum);
    const auto out = normalize_elliptical(vac, EllipticalForm{});
    CHECK_FALSE(out.has_maps());
    for (cx p : {cx(0.0), cx(0.7, -0.4)}) CHECK(evaluate(out, p) == evaluate(vac, p));
}

TEST_CASE("normalize_elliptical circularizes a rotated, displaced Gaussian", "[elliptical]") {
    const double sx = 0.3, sy = 0.6, phi = std::numbers::pi / 6;
    const cx beta(1.0, 2.0);
    const auto spec = make_family_spec(Family::gaussian, {sx, sy, phi, beta.real(), beta.imag()});
    const auto out =
        normalize_elliptical(spec, EllipticalForm{beta, phi, sx, sy});
    CHECK(circularity_residual(out) < 1e-8);
    // the output is the circular Gaussian with sigma = sqrt(sx sy)
    const double s_out = std::sqrt(sx * sy);
    const auto circ = make_family_spec(Family::gaussian, {s_out, s_out, 0.0, 0.0, 0.0});
    for (cx p : {cx(0.0), cx(0.5, 0.1), cx(-0.3, 0.8)})
        CHECK(evaluate(out, p) == Approx(evaluate(circ, p)).margin(1e-12));
    CHECK(check_normalization(out).value == Approx(1.0).margin(1e-8));
}

TEST_CASE("normalize_elliptical rejects an inconsistent declaration", "[elliptical]") {
    const auto spec = make_family_spec(Family::gaussian, {0.3, 0.6, 0.5, 0.0, 0.0});
    CHECK_THROWS_AS(normalize_elliptical(spec, EllipticalForm{cx(0), 0.0, 1.0, 1.0}), usage_error);
}

TEST_CASE("diagonal_spectrum fixed families", "[elliptical]") {
    SECTION("vacuum") {
        const auto eigs = diagonal_spectrum(make_family_spec(Family::vacuum), 8);
        CHECK(eigs[0] == Approx(1.0).margin(1e-9));
        for (int k = 1; k <= 8; ++k) CHECK(std::abs(eigs[k]) < 1e-9);
    }
    SECTION("rescaled |1> against the closed form") {
        for (double lam : {0.5, 1.25}) {
            const auto eigs = diagonal_spectrum(make_family_spec(Family::manko_fock1, {lam}), 10);
            for (int k = 0; k <= 10; ++k) {
                INFO("lambda " << lam << " k " << k);
                CHECK(eigs[k] == Approx(manko_closed_form(lam, k)).margin(1e-8));
            }
        }
    }
    SECTION("thermal populations") {
        const double nbar = 1.0;
        const auto eigs = diagonal_spectrum(make_family_spec(Family::thermal, {nbar}), 10);
        for (int k = 0; k <= 10; ++k)
            CHECK(eigs[k] == Approx(std::pow(nbar, k) / std::pow(1 + nbar, k + 1)).margin(1e-7));
    }
    SECTION("non-circular input is rejected") {
        const auto spec = make_family_spec(Family::gaussian, {0.3, 0.6, 0.0, 0.0, 0.0});
        CHECK_THROWS_AS(diagonal_spectrum(spec, 4), usage_error);
    }
}

TEST_CASE("diagonal_spectrum matches the full matrix on circular specs", "[elliptical]") {
    for (const auto& spec : {make_family_spec(Family::thermal, {0.6}), make_family_spec(Family::fock, {2}),
                             make_family_spec(Family::manko_fock1, {0.8})}) {
        const auto eigs = diagonal_spectrum(spec, 10);
        const auto m = build_matrix(coefficients_lambda_route(characteristic(spec), 10), 10);
        for (int k = 0; k <= 10; ++k) {
            INFO("family " << family_name(spec.family) << " k " << k);
            CHECK(eigs[k] == Approx(m.mat(k, k).real()).margin(1e-8));
        }
        for (int k = 0; k <= 10; ++k)
            for (int kp = 0; kp <= 10; ++kp)
                if (k != kp) CHECK(std::abs(m.mat(k, kp)) < 1e-9);
    }
}

TEST_CASE("diagonal_spectrum sums to one for legitimate circular states", "[elliptical]") {
    const auto eigs = diagonal_spectrum(make_family_spec(Family::thermal, {1.0}), 20);
    double sum = 0.0;
    for (double e : eigs) sum += e;
    CHECK(sum == Approx(1.0).margin(1e-6));
}

TEST_CASE("diagonal_spectrum on a sampled grid uses the radial profile", "[elliptical]") {
    const auto spec = make_family_spec(Family::manko_fock1, {0.5});
    const auto grid = sample_to_grid(spec, 8.0, 256);
    const auto eigs = diagonal_spectrum(grid, 8);
    for (int k = 0; k <= 8; ++k) {
        INFO("k " << k);
        CHECK(eigs[k] == Approx(manko_closed_form(0.5, k)).margin(1e-6));
    }
}

TEST_CASE("normalization chain preserves the spectrum", "[elliptical]") {
    // elliptical Gaussian: spectrum of the full matrix before and after
    // circularization agrees up to truncation tolerance
    const double sx = 0.4, sy = 0.55, phi = 0.5;
    const cx beta(0.3, -0.2);
    const auto spec = make_family_spec(Family::gaussian, {sx, sy, phi, beta.real(), beta.imag()});
    const auto circ = normalize_elliptical(spec, EllipticalForm{beta, phi, sx, sy});

    const auto m0 = build_matrix(coefficients_lambda_route(characteristic(spec), 16), 16);
    const auto m1 = build_matrix(coefficients_lambda_route(characteristic(circ), 16), 16);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e0(m0.mat), e1(m1.mat);
    for (int i = 0; i < e0.eigenvalues().size(); ++i)
        CHECK(e1.eigenvalues()(i) == Approx(e0.eigenvalues()(i)).margin(1e-6));
}
