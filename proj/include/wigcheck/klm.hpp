#pragma once

// KLM matrices: M_ij = e^{(xi_i xi_j* - xi_i* xi_j)/2} C_t(xi_i - xi_j).
// Positive semidefiniteness of every such matrix over every finite point set
// is a complete legitimacy criterion; the classical (Bochner) variant drops
// the commutator phase, which is the entire quantum/classical difference.
// Testing at fixed n is an optimization problem in 2(n-1) real variables
// (the matrix depends on the points only through differences and a phase
// pattern invariant under common translation up to a diagonal unitary, so
// xi_1 is pinned at 0).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "wigcheck/charfn.hpp"

namespace wigcheck {

enum class KlmVariant { quantum, classical_bochner };
enum class KlmStrategy { grid, random, coordinate_descent };

struct KlmMatrix {
    std::vector<cx> points;
    Eigen::MatrixXcd mat;
    KlmVariant variant = KlmVariant::quantum;
};

inline KlmMatrix klm_matrix(const CharacteristicFunction& cf, const std::vector<cx>& points,
                            KlmVariant variant = KlmVariant::quantum) {
    if (cf.modes != 1) throw usage_error("klm_matrix: single-mode points for a single-mode evaluator");
    const int n = static_cast<int>(points.size());
    if (n == 0) throw usage_error("klm_matrix: empty point set");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(points[i] - points[j]) < 1e-12)
                throw usage_error("klm_matrix: duplicate points make the matrix singular by construction");

    KlmMatrix out;
    out.points = points;
    out.variant = variant;
    out.mat.resize(n, n);
    for (int i = 0; i < n; ++i) {
        out.mat(i, i) = evaluate_charfn(cf, cx(0));
        for (int j = i + 1; j < n; ++j) {
            cx phase(1.0);
            if (variant == KlmVariant::quantum)
                phase = std::exp(0.5 * (points[i] * std::conj(points[j]) - std::conj(points[i]) * points[j]));
            const cx v = phase * evaluate_charfn(cf, points[i] - points[j]);
            out.mat(i, j) = v;
            out.mat(j, i) = std::conj(v);
        }
    }
    return out;
}

// Two-mode variant: per-mode phases multiplied, C_t of the difference pair.
inline KlmMatrix klm_matrix(const CharacteristicFunction& cf, const std::vector<std::pair<cx, cx>>& points,
                            KlmVariant variant = KlmVariant::quantum, std::vector<cx>* flat_points = nullptr) {
    if (cf.modes != 2) throw usage_error("klm_matrix: pair points require a two-mode evaluator");
    const int n = static_cast<int>(points.size());
    if (n == 0) throw usage_error("klm_matrix: empty point set");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(points[i].first - points[j].first) + std::abs(points[i].second - points[j].second) < 1e-12)
                throw usage_error("klm_matrix: duplicate points make the matrix singular by construction");
    KlmMatrix out;
    out.variant = variant;
    out.mat.resize(n, n);
    for (int i = 0; i < n; ++i) {
        out.mat(i, i) = evaluate_charfn(cf, cx(0), cx(0));
        for (int j = i + 1; j < n; ++j) {
            cx phase(1.0);
            if (variant == KlmVariant::quantum) {
                phase = std::exp(0.5 * (points[i].first * std::conj(points[j].first) -
                                        std::conj(points[i].first) * points[j].first)) *
                        std::exp(0.5 * (points[i].second * std::conj(points[j].second) -
                                        std::conj(points[i].second) * points[j].second));
            }
            const cx v = phase * evaluate_charfn(cf, points[i].first - points[j].first,
                                                 points[i].second - points[j].second);
            out.mat(i, j) = v;
            out.mat(j, i) = std::conj(v);
        }
    }
    if (flat_points) {
        flat_points->clear();
        for (const auto& p : points) {
            flat_points->push_back(p.first);
            flat_points->push_back(p.second);
        }
    }
    return out;
}

inline double min_eigenvalue(const KlmMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (m.mat + m.mat.adjoint()));
    return solver.eigenvalues()(0);
}

// ---------------------------------------------------------------------------

struct KlmSearchResult {
    double min_eigenvalue = std::numeric_limits<double>::infinity();
    std::vector<cx> points;
    long evaluations = 0;
    int n = 0;
    KlmStrategy strategy = KlmStrategy::grid;
    std::uint64_t seed = 0;
};

namespace detail {

// Deterministic standard normal from the standardized mt19937_64 stream
// (library distributions are implementation-defined).
class BoxMuller {
public:
    explicit BoxMuller(std::uint64_t seed) : eng_(seed) {}
    double operator()() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = next_unit();
        while (u1 <= 1e-300) u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

private:
    double next_unit() { return (eng_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 eng_;
    bool have_ = false;
    double spare_ = 0.0;
};

struct KlmEvaluator {
    const CharacteristicFunction& cf;
    KlmVariant variant;
    long evaluations = 0;

    // points exclude the pinned xi_1 = 0
    double eval(const std::vector<cx>& free_points) {
        std::vector<cx> pts;
        pts.reserve(free_points.size() + 1);
        pts.push_back(cx(0));
        for (cx p : pts0_scratch(free_points)) pts.push_back(p);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                if (std::abs(pts[i] - pts[j]) < 1e-9) return std::numeric_limits<double>::infinity();
        ++evaluations;
        return min_eigenvalue(klm_matrix(cf, pts, variant));
    }

private:
    static const std::vector<cx>& pts0_scratch(const std::vector<cx>& v) { return v; }
};

inline std::vector<cx> ring_config(int n_free, double radius, double offset) {
    std::vector<cx> pts(n_free);
    for (int k = 0; k < n_free; ++k)
        pts[k] = std::polar(radius, offset + 2.0 * std::numbers::pi * k / n_free);
    return pts;
}

} // namespace detail

// Searches point sets with xi_1 pinned at 0, optimizing the remaining
// 2(n-1) real variables; returns the most negative minimal eigenvalue found
// and its witnessing set. Deterministic for a fixed (strategy, seed, budget).
inline KlmSearchResult klm_search(const CharacteristicFunction& cf, int n, KlmStrategy strategy, long budget,
                                  std::uint64_t seed = 1, KlmVariant variant = KlmVariant::quantum) {
    if (n < 2) throw usage_error("klm_search: n >= 2 required");
    if (budget <= 0) throw usage_error("klm_search: positive budget required");
    if (cf.modes != 1) throw usage_error("klm_search: single-mode evaluator required");

    detail::KlmEvaluator ev{cf, variant};
    KlmSearchResult best;
    best.n = n;
    best.strategy = strategy;
    best.seed = seed;
    const int n_free = n - 1;

    const auto consider = [&](const std::vector<cx>& free_pts) {
        const double e = ev.eval(free_pts);
        if (e < best.min_eigenvalue) {
            best.min_eigenvalue = e;
            best.points.assign(1, cx(0));
            best.points.insert(best.points.end(), free_pts.begin(), free_pts.end());
        }
    };

    const auto ring_sweep = [&] {
        for (double r = 0.1; r <= 3.001 && ev.evaluations < budget; r += 0.05)
            for (int rot = 0; rot < 4 && ev.evaluations < budget; ++rot)
                consider(detail::ring_config(n_free, r, rot * std::numbers::pi / (4.0 * std::max(1, n_free))));
        // two-radius rings once several free points are available
        if (n_free >= 3) {
            for (double r1 = 0.4; r1 <= 2.41 && ev.evaluations < budget; r1 += 0.4)
                for (double r2 = 0.4; r2 <= 2.41 && ev.evaluations < budget; r2 += 0.4) {
                    const int a = n_free / 2;
                    auto inner = detail::ring_config(a, r1, 0.0);
                    const auto outer =
                        detail::ring_config(n_free - a, r2, std::numbers::pi / std::max(1, n_free - a));
                    inner.insert(inner.end(), outer.begin(), outer.end());
                    consider(inner);
                }
        }
    };

    const auto random_sweep = [&](long quota) {
        detail::BoxMuller rng(seed);
        std::vector<cx> pts(n_free);
        for (long t = 0; t < quota && ev.evaluations < budget; ++t) {
            for (auto& p : pts) p = cx(1.5 * rng(), 1.5 * rng());
            consider(pts);
        }
    };

    switch (strategy) {
        case KlmStrategy::grid: {
            ring_sweep();
            // lattice over the free coordinates with whatever budget remains
            const long remaining = budget - ev.evaluations;
            const int dims = 2 * n_free;
            int per_axis = static_cast<int>(std::floor(std::pow(static_cast<double>(remaining), 1.0 / dims)));
            per_axis = std::min(per_axis, 21);
            if (per_axis >= 3) {
                std::vector<int> digit(dims, 0);
                std::vector<cx> pts(n_free);
                const double lim = 3.0;
                bool done = false;
                while (!done && ev.evaluations < budget) {
                    for (int k = 0; k < n_free; ++k)
                        pts[k] = cx(-lim + 2.0 * lim * digit[2 * k] / (per_axis - 1),
                                    -lim + 2.0 * lim * digit[2 * k + 1] / (per_axis - 1));
                    consider(pts);
                    int c = 0;
                    while (c < dims && ++digit[c] == per_axis) digit[c++] = 0;
                    done = c == dims;
                }
            }
            break;
        }
        case KlmStrategy::random:
            random_sweep(budget);
            break;
        case KlmStrategy::coordinate_descent: {
            ring_sweep();
            random_sweep(std::min<long>(budget / 4, 2000));
            if (best.points.empty()) break;
            // cyclic golden-section refinement on each free coordinate
            std::vector<cx> cur(best.points.begin() + 1, best.points.end());
            const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
            bool improved = true;
            while (improved && ev.evaluations < budget) {
                improved = false;
                for (int coord = 0; coord < 2 * n_free && ev.evaluations < budget; ++coord) {
                    const int k = coord / 2;
                    const bool re = coord % 2 == 0;
                    const double x0 = re ? cur[k].real() : cur[k].imag();
                    double a = x0 - 1.2, b = x0 + 1.2;
                    const auto val_at = [&](double x) {
                        std::vector<cx> p = cur;
                        p[k] = re ? cx(x, cur[k].imag()) : cx(cur[k].real(), x);
                        const double e = ev.eval(p);
                        if (e < best.min_eigenvalue) {
                            best.min_eigenvalue = e;
                            best.points.assign(1, cx(0));
                            best.points.insert(best.points.end(), p.begin(), p.end());
                        }
                        return e;
                    };
                    double c = b - gr * (b - a), d = a + gr * (b - a);
                    double fc = val_at(c), fd = val_at(d);
                    for (int it = 0; it < 18 && ev.evaluations < budget; ++it) {
                        if (fc < fd) {
                            b = d;
                            d = c;
                            fd = fc;
                            c = b - gr * (b - a);
                            fc = val_at(c);
                        } else {
                            a = c;
                            c = d;
                            fc = fd;
                            d = a + gr * (b - a);
                            fd = val_at(d);
                        }
                    }
                    const double xbest = fc < fd ? c : d;
                    const double fbest = std::min(fc, fd);
                    const double fprev = ev.eval(cur);
                    if (fbest < fprev - 1e-12) {
                        cur[k] = re ? cx(xbest, cur[k].imag()) : cx(cur[k].real(), xbest);
                        improved = true;
                    }
                }
            }
            break;
        }
    }
    best.evaluations = ev.evaluations;
    return best;
}

} // namespace wigcheck
