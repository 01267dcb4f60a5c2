#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>
#include <array>

namespace wigcheck {

using cx = std::complex<double>;

// Uniform symmetric axis: `samples` nodes spanning [-extent, extent] inclusive.
struct Axis {
    double extent = 6.0;
    int samples = 256;

    double step() const { return samples > 1 ? 2.0 * extent / (samples - 1) : 0.0; }
    double coord(int i) const { return -extent + i * step(); }
    bool contains(double x) const { return x >= -extent && x <= extent; }
};

namespace detail {

// Catmull-Rom weights for fractional position t in [0,1] within a cell.
inline std::array<double, 4> cubic_weights(double t) {
    const double t2 = t * t, t3 = t2 * t;
    return {-0.5 * t3 + t2 - 0.5 * t,
            1.5 * t3 - 2.5 * t2 + 1.0,
            -1.5 * t3 + 2.0 * t2 + 0.5 * t,
            0.5 * t3 - 0.5 * t2};
}

struct AxisStencil {
    std::array<int, 4> idx;
    std::array<double, 4> w;
};

inline AxisStencil axis_stencil(const Axis& ax, double x) {
    const double h = ax.step();
    double u = (x + ax.extent) / h;
    int cell = static_cast<int>(std::floor(u));
    if (cell < 0) cell = 0;
    if (cell > ax.samples - 2) cell = ax.samples - 2;
    const double t = u - cell;
    AxisStencil s;
    const auto w = cubic_weights(t);
    for (int k = 0; k < 4; ++k) {
        int j = cell - 1 + k;
        if (j < 0) j = 0;
        if (j > ax.samples - 1) j = ax.samples - 1;
        s.idx[k] = j;
        s.w[k] = w[k];
    }
    return s;
}

inline std::array<double, 2> linear_weights(const Axis& ax, double x, int& cell) {
    const double h = ax.step();
    double u = (x + ax.extent) / h;
    cell = static_cast<int>(std::floor(u));
    if (cell < 0) cell = 0;
    if (cell > ax.samples - 2) cell = ax.samples - 2;
    const double t = u - cell;
    return {1.0 - t, t};
}

} // namespace detail

template <typename T>
class Grid2D {
public:
    Grid2D() = default;
    Grid2D(Axis ax, Axis ay) : ax_(ax), ay_(ay), v_(static_cast<std::size_t>(ax.samples) * ay.samples) {}
    Grid2D(Axis ax, Axis ay, std::vector<T> values) : ax_(ax), ay_(ay), v_(std::move(values)) {
        if (v_.size() != static_cast<std::size_t>(ax_.samples) * ay_.samples)
            throw std::invalid_argument("Grid2D: value count does not match sample counts");
    }

    const Axis& xaxis() const { return ax_; }
    const Axis& yaxis() const { return ay_; }

    T& at(int i, int j) { return v_[static_cast<std::size_t>(i) * ay_.samples + j]; }
    const T& at(int i, int j) const { return v_[static_cast<std::size_t>(i) * ay_.samples + j]; }
    const std::vector<T>& values() const { return v_; }
    std::vector<T>& values() { return v_; }

    bool contains(double x, double y) const { return ax_.contains(x) && ay_.contains(y); }

    // Cubic (Catmull-Rom) interpolation; stencils clamp at the boundary.
    T interp_cubic(double x, double y) const {
        const auto sx = detail::axis_stencil(ax_, x);
        const auto sy = detail::axis_stencil(ay_, y);
        T acc{};
        for (int a = 0; a < 4; ++a) {
            T row{};
            for (int b = 0; b < 4; ++b) row += static_cast<T>(sy.w[b]) * at(sx.idx[a], sy.idx[b]);
            acc += static_cast<T>(sx.w[a]) * row;
        }
        return acc;
    }

    T interp_linear(double x, double y) const {
        int cx_, cy_;
        const auto wx = detail::linear_weights(ax_, x, cx_);
        const auto wy = detail::linear_weights(ay_, y, cy_);
        T acc{};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                acc += static_cast<T>(wx[a] * wy[b]) * at(cx_ + a, cy_ + b);
        return acc;
    }

private:
    Axis ax_, ay_;
    std::vector<T> v_;
};

// Dense rank-4 grid for two-mode data, axes ordered (x1, y1, x2, y2),
// values row-major with y2 fastest.
template <typename T>
class Grid4D {
public:
    Grid4D() = default;
    explicit Grid4D(std::array<Axis, 4> axes)
        : axes_(axes),
          v_(static_cast<std::size_t>(axes[0].samples) * axes[1].samples * axes[2].samples * axes[3].samples) {}
    Grid4D(std::array<Axis, 4> axes, std::vector<T> values) : axes_(axes), v_(std::move(values)) {
        std::size_t n = 1;
        for (const auto& a : axes_) n *= a.samples;
        if (v_.size() != n) throw std::invalid_argument("Grid4D: value count does not match sample counts");
    }

    const Axis& axis(int k) const { return axes_[k]; }

    std::size_t index(int i0, int i1, int i2, int i3) const {
        return ((static_cast<std::size_t>(i0) * axes_[1].samples + i1) * axes_[2].samples + i2) * axes_[3].samples + i3;
    }
    T& at(int i0, int i1, int i2, int i3) { return v_[index(i0, i1, i2, i3)]; }
    const T& at(int i0, int i1, int i2, int i3) const { return v_[index(i0, i1, i2, i3)]; }
    const std::vector<T>& values() const { return v_; }
    std::vector<T>& values() { return v_; }

    bool contains(double x0, double x1, double x2, double x3) const {
        return axes_[0].contains(x0) && axes_[1].contains(x1) && axes_[2].contains(x2) && axes_[3].contains(x3);
    }

    T interp_cubic(double x0, double x1, double x2, double x3) const {
        const std::array<detail::AxisStencil, 4> s = {
            detail::axis_stencil(axes_[0], x0), detail::axis_stencil(axes_[1], x1),
            detail::axis_stencil(axes_[2], x2), detail::axis_stencil(axes_[3], x3)};
        T acc{};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d)
                        acc += static_cast<T>(s[0].w[a] * s[1].w[b] * s[2].w[c] * s[3].w[d]) *
                               at(s[0].idx[a], s[1].idx[b], s[2].idx[c], s[3].idx[d]);
        return acc;
    }

    T interp_linear(double x0, double x1, double x2, double x3) const {
        std::array<int, 4> c;
        std::array<std::array<double, 2>, 4> w;
        const double xs[4] = {x0, x1, x2, x3};
        for (int k = 0; k < 4; ++k) w[k] = detail::linear_weights(axes_[k], xs[k], c[k]);
        T acc{};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int d = 0; d < 2; ++d)
                    for (int e = 0; e < 2; ++e)
                        acc += static_cast<T>(w[0][a] * w[1][b] * w[2][d] * w[3][e]) *
                               at(c[0] + a, c[1] + b, c[2] + d, c[3] + e);
        return acc;
    }

private:
    std::array<Axis, 4> axes_;
    std::vector<T> v_;
};

} // namespace wigcheck
