#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "wigcheck/grid.hpp"

namespace wigcheck {

// Trapezoid nodes/weights on [-R, R]. The integrands in this library are
// smooth and Gaussian-damped, for which the trapezoid rule converges
// super-algebraically; accuracy is set by the extent R, not the order.
struct QuadAxis {
    std::vector<double> node;
    std::vector<double> weight;
};

inline QuadAxis trapezoid_axis(double radius, double target_step) {
    const int half = std::max(4, static_cast<int>(std::ceil(radius / target_step)));
    const int n = 2 * half + 1;
    const double h = radius / half;
    QuadAxis q;
    q.node.resize(n);
    q.weight.resize(n);
    for (int i = 0; i < n; ++i) {
        q.node[i] = -radius + i * h;
        q.weight[i] = (i == 0 || i == n - 1) ? h / 2 : h;
    }
    return q;
}

inline QuadAxis quad_from_axis(const Axis& ax) {
    QuadAxis q;
    q.node.resize(ax.samples);
    q.weight.resize(ax.samples);
    const double h = ax.step();
    for (int i = 0; i < ax.samples; ++i) {
        q.node[i] = ax.coord(i);
        q.weight[i] = (i == 0 || i == ax.samples - 1) ? h / 2 : h;
    }
    return q;
}

// Radius R making the tail of r^{s} e^{-c r^2} negligible against its peak:
// c R^2 - s ln R >= peak_log + margin, margin 46 ~ a factor 1e-20.
inline double integration_radius(double decay, int power, double min_radius = 8.0) {
    const double c = std::max(decay, 1e-3);
    const double s = std::max(power, 0);
    const double peak_log = s > 0 ? 0.5 * s * std::log(s / (2 * c)) - 0.5 * s : 0.0;
    double r = std::max(min_radius, s > 0 ? std::sqrt(s / (2 * c)) + 1.0 : min_radius);
    while (r < 64.0 && c * r * r - s * std::log(r) < peak_log + 46.0) r += 0.5;
    return r;
}

} // namespace wigcheck
