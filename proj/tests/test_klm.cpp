#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wigcheck/klm.hpp"

using namespace wigcheck;
using Catch::Approx;

namespace {

std::vector<DistributionSpec> legitimate_families() {
    return {make_family_spec(Family::vacuum), make_family_spec(Family::coherent, {1.0, 0.5}),
            make_family_spec(Family::fock, {1}), make_family_spec(Family::thermal, {1.0})};
}

} // namespace

TEST_CASE("1x1 matrix of a normalized state is [1]", "[klm]") {
    const auto cf = characteristic(make_family_spec(Family::thermal, {0.4}));
    const auto m = klm_matrix(cf, {cx(0)});
    REQUIRE(m.mat.rows() == 1);
    CHECK(std::abs(m.mat(0, 0) - cx(1.0)) < 1e-12);
    CHECK(min_eigenvalue(m) >= 1.0 - 1e-12);
}

TEST_CASE("vacuum 2x2 determinant is 1 - e^{-|xi|^2}", "[klm]") {
    const auto cf = characteristic(make_family_spec(Family::vacuum));
    for (cx xi : {cx(0.5, 0.0), cx(1.0, -1.0), cx(0.1, 2.2)}) {
        const auto m = klm_matrix(cf, {cx(0), xi});
        const double det = (m.mat(0, 0) * m.mat(1, 1) - m.mat(0, 1) * m.mat(1, 0)).real();
        CHECK(det == Approx(1.0 - std::exp(-std::norm(xi))).epsilon(1e-12));
        CHECK(det >= 0.0);
        CHECK(min_eigenvalue(m) >= -1e-12);
    }
}

TEST_CASE("quantum and classical variants differ exactly by a unit phase", "[klm]") {
    const auto cf = characteristic(make_family_spec(Family::coherent, {0.8, -0.6}));
    const std::vector<cx> pts = {cx(0), cx(0.7, 0.4), cx(-0.5, 1.1), cx(1.3, -0.2)};
    const auto q = klm_matrix(cf, pts, KlmVariant::quantum);
    const auto c = klm_matrix(cf, pts, KlmVariant::classical_bochner);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(q.mat(i, i) - c.mat(i, i)) < 1e-15);
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(std::abs(q.mat(i, j)) - std::abs(c.mat(i, j))) < 1e-12);
    }
}

TEST_CASE("duplicate points are rejected", "[klm]") {
    const auto cf = characteristic(make_family_spec(Family::vacuum));
    CHECK_THROWS_AS(klm_matrix(cf, {cx(0), cx(0.5, 0.5), cx(0.5, 0.5)}), usage_error);
}

TEST_CASE("legitimate families: sampled matrices stay positive", "[klm]") {
    std::mt19937_64 eng(17);
    const auto unit = [&] { return (eng() >> 11) * 0x1.0p-53; };
    for (const auto& spec : legitimate_families()) {
        const auto cf = characteristic(spec);
        for (int n = 2; n <= 5; ++n) {
            for (int trial = 0; trial < 250; ++trial) {
                std::vector<cx> pts{cx(0)};
                for (int k = 1; k < n; ++k) pts.emplace_back(3.0 * unit() - 1.5, 3.0 * unit() - 1.5);
                INFO("family " << family_name(spec.family) << " n " << n);
                CHECK(min_eigenvalue(klm_matrix(cf, pts)) >= -1e-9);
            }
        }
    }
}

TEST_CASE("search: the rescaled |1> at lambda 0.5 is caught at n = 5", "[klm]") {
    const auto cf = characteristic(make_family_spec(Family::manko_fock1, {0.5}));
    int witnessing_n = 0;
    double found = 0.0;
    for (int n = 3; n <= 6; ++n) {
        const auto res = klm_search(cf, n, KlmStrategy::grid, 20000);
        if (res.min_eigenvalue < -1e-6) {
            witnessing_n = n;
            found = res.min_eigenvalue;
            break;
        }
    }
    REQUIRE(witnessing_n > 0);
    CHECK(witnessing_n <= 5);
    CHECK(found < -0.2); // the center+ring configuration reaches ~ -0.27
}

TEST_CASE("search: legitimate states yield no negative eigenvalue", "[klm]") {
    SECTION("vacuum, any strategy at n = 3") {
        const auto cf = characteristic(make_family_spec(Family::vacuum));
        for (auto strat : {KlmStrategy::grid, KlmStrategy::random, KlmStrategy::coordinate_descent}) {
            const auto res = klm_search(cf, 3, strat, 3000, 5);
            CHECK(res.min_eigenvalue >= -1e-9);
        }
    }
    SECTION("fock(1) = trivially rescaled |1>, random strategy") {
        const auto cf = characteristic(make_family_spec(Family::manko_fock1, {1.0}));
        const auto res = klm_search(cf, 4, KlmStrategy::random, 10000, 99);
        CHECK(res.min_eigenvalue >= -1e-8);
    }
}

TEST_CASE("search is deterministic for a fixed seed", "[klm]") {
    const auto cf = characteristic(make_family_spec(Family::manko_fock1, {0.5}));
    const auto a = klm_search(cf, 4, KlmStrategy::random, 2000, 42);
    const auto b = klm_search(cf, 4, KlmStrategy::random, 2000, 42);
    CHECK(a.min_eigenvalue == b.min_eigenvalue);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i] == b.points[i]);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("coordinate descent refines the grid seed", "[klm]") {
    const auto cf = characteristic(make_family_spec(Family::manko_fock1, {0.5}));
    const auto coarse = klm_search(cf, 5, KlmStrategy::grid, 3000);
    const auto refined = klm_search(cf, 5, KlmStrategy::coordinate_descent, 9000);
    CHECK(refined.min_eigenvalue <= coarse.min_eigenvalue + 1e-12);
}

TEST_CASE("classical variant exists as a behavioral contrast", "[klm]") {
    // the distribution has negative regions, so the Bochner matrix is not
    // expected to be positive; this only checks the variant runs and is
    // Hermitian
    const auto cf = characteristic(make_family_spec(Family::manko_fock1, {0.5}));
    const auto m = klm_matrix(cf, {cx(0), cx(0.6, 0.0), cx(0.0, 0.6)}, KlmVariant::classical_bochner);
    CHECK((m.mat - m.mat.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("two-mode matrices use per-mode phases", "[klm]") {
    const auto prod = make_family_spec(Family::product, {}, 0.0,
                                       {make_family_spec(Family::vacuum), make_family_spec(Family::vacuum)});
    const auto cf = characteristic(prod);
    const std::vector<std::pair<cx, cx>> pts = {{cx(0), cx(0)}, {cx(0.5, 0.2), cx(-0.3, 0.4)}, {cx(1.0, 0.0), cx(0.0, 1.0)}};
    const auto m = klm_matrix(cf, pts);
    CHECK((m.mat - m.mat.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(min_eigenvalue(m) >= -1e-12);
    // diagonal entries equal C(0,0) = 1
    for (int i = 0; i < 3; ++i) CHECK(std::abs(m.mat(i, i) - cx(1.0)) < 1e-12);
}

TEST_CASE("search argument validation", "[klm]") {
    const auto cf = characteristic(make_family_spec(Family::vacuum));
    CHECK_THROWS_AS(klm_search(cf, 1, KlmStrategy::grid, 100), usage_error);
    CHECK_THROWS_AS(klm_search(cf, 3, KlmStrategy::grid, 0), usage_error);
}
