#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace sfif {

// Node set {(x_i, y_i)}, i = 0..N. Valid data has N >= 2 and strictly
// increasing abscissae.
struct InterpolationData {
    std::vector<double> x;
    std::vector<double> y;

    InterpolationData() = default;
    InterpolationData(std::vector<double> xs, std::vector<double> ys)
        : x(std::move(xs)), y(std::move(ys)) {}
    InterpolationData(std::initializer_list<std::pair<double, double>> nodes) {
        for (auto& [xi, yi] : nodes) {
            x.push_back(xi);
            y.push_back(yi);
        }
    }

    int N() const { return static_cast<int>(x.size()) - 1; }
    double x0() const { return x.front(); }
    double xN() const { return x.back(); }
    double width() const { return x.back() - x.front(); }

    void validate() const {
        if (x.size() != y.size() || x.size() < 3)
            fail(errc::non_increasing_abscissae,
                 "need at least three nodes with matching ordinates");
        for (std::size_t i = 1; i < x.size(); ++i)
            if (!(x[i - 1] < x[i]))
                fail(errc::non_increasing_abscissae,
                     "abscissae must be strictly increasing at index " +
                         std::to_string(i));
    }

    // Piecewise-linear interpolant through the nodes. Subintervals are
    // half-open [x_{n-1}, x_n), the last closed; exact at every node.
    double polyline(double v) const {
        int n = locate(v);
        if (v == x[static_cast<std::size_t>(n) + 1])
            return y[static_cast<std::size_t>(n) + 1];
        double t = (v - x[n]) / (x[static_cast<std::size_t>(n) + 1] - x[n]);
        return y[n] + t * (y[static_cast<std::size_t>(n) + 1] - y[n]);
    }

    // Index n in [0, N-1] of the subinterval containing v.
    int locate(double v) const {
        int lo = 0, hi = N() - 1;
        while (lo < hi) {
            int mid = (lo + hi + 1) / 2;
            if (x[mid] <= v)
                lo = mid;
            else
                hi = mid - 1;
        }
        return lo;
    }

    bool collinear(double tol = 1e-12) const {
        double w = width();
        double scale = 0.0;
        for (double v : y) scale = std::max(scale, std::abs(v));
        scale = std::max(scale, 1.0);
        for (std::size_t i = 1; i + 1 < x.size(); ++i) {
            double chord = y.front() + (y.back() - y.front()) * (x[i] - x.front()) / w;
            if (std::abs(y[i] - chord) > tol * scale) return false;
        }
        return true;
    }
};

} // namespace sfif
