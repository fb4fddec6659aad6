#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "code_string.hpp"
#include "errors.hpp"
#include "sifs.hpp"

namespace sfif {

// Samples of one attractor curve, tagged with enough provenance to
// re-evaluate it (resampling, reports). x is ascending.
struct SampledGraph {
    std::uint64_t source_hash = 0;
    std::string sigma;
    int depth = 0;
    std::vector<double> x;
    std::vector<double> y;
};

namespace detail {

inline void require_digits(const Sifs& s, const CodeString& sigma) {
    if (sigma.max_digit() > s.M())
        fail(errc::digit_out_of_range,
             "code string uses family " + std::to_string(sigma.max_digit()) +
                 " but only " + std::to_string(s.M()) + " exist");
}

// Polyline through the join-up targets; the depth-0 curve.
inline InterpolationData base_curve(const Sifs& s) {
    InterpolationData base;
    base.x = s.data.x;
    base.y.resize(s.data.y.size());
    for (std::size_t i = 0; i < base.y.size(); ++i)
        base.y[i] = s.ytilde(static_cast<int>(i));
    return base;
}

} // namespace detail

// Depth-truncated fixed-point value at one abscissa. The level-j map is
// chosen by the j-th code digit, outermost first, so depth d realizes
// T_{s_1}(T_{s_2}(... T_{s_d}(base))). Node ordinates are exact at every
// depth because each inverse step sends nodes to nodes.
inline std::vector<double> evaluate(const Sifs& s, const CodeString& sigma,
                                    int depth, const std::vector<double>& xs) {
    detail::require_digits(s, sigma);
    const double x0 = s.data.x0(), xN = s.data.xN(), w = s.data.width();
    const double slack = 1e-12 * w;
    InterpolationData base = detail::base_curve(s);

    std::vector<int> fam(std::max(depth, 0));
    for (int j = 1; j <= depth; ++j) fam[j - 1] = sigma.digit(j) - 1;

    std::vector<double> out(xs.size());
    for (std::size_t p = 0; p < xs.size(); ++p) {
        double xi = xs[p];
        if (xi < x0 - slack || xi > xN + slack)
            fail(errc::point_out_of_domain,
                 std::to_string(xi) + " outside [" + std::to_string(x0) +
                     ", " + std::to_string(xN) + "]");
        xi = std::min(std::max(xi, x0), xN);

        double acc = 0.0, scale = 1.0;
        for (int j = 0; j < depth; ++j) {
            int n = s.data.locate(xi);
            double left = s.data.x[n], right = s.data.x[n + 1];
            double pre;
            if (xi == left)
                pre = x0;
            else if (xi == right)
                pre = xN;
            else
                pre = std::min(std::max(x0 + (xi - left) * w / (right - left),
                                        x0), xN);
            const VerticalMap& vm = s.families[fam[j]][n];
            acc += scale * vm.q(pre);
            scale *= vm.gamma;
            xi = pre;
        }
        out[p] = acc + scale * base.polyline(xi);
    }
    return out;
}

inline double evaluate(const Sifs& s, const CodeString& sigma, int depth,
                       double x) {
    return evaluate(s, sigma, depth, std::vector<double>{x})[0];
}

inline SampledGraph evaluate_graph(const Sifs& s, const CodeString& sigma,
                                   int depth, std::vector<double> xs) {
    SampledGraph g;
    g.source_hash = sifs_hash(s);
    g.sigma = sigma.to_string();
    g.depth = depth;
    g.y = evaluate(s, sigma, depth, xs);
    g.x = std::move(xs);
    return g;
}

inline SampledGraph sample_graph(const Sifs& s, const CodeString& sigma,
                                 int depth, int points) {
    if (points < 2)
        fail(errc::insufficient_samples, "need at least two sample points");
    std::vector<double> xs(points);
    double x0 = s.data.x0(), w = s.data.width();
    for (int i = 0; i < points; ++i)
        xs[i] = x0 + w * static_cast<double>(i) / (points - 1);
    xs.back() = s.data.xN();
    SampledGraph g;
    g.source_hash = sifs_hash(s);
    g.sigma = sigma.to_string();
    g.depth = depth;
    g.y = evaluate(s, sigma, depth, xs);
    g.x = std::move(xs);
    return g;
}

// Images of the node set under the depth-fold set map. Family s_j acts
// at level j with s_1 outermost, so it is applied last.
inline SampledGraph forward_attractor(const Sifs& s, const CodeString& sigma,
                                      int depth) {
    detail::require_digits(s, sigma);
    int N = s.N();
    double budget = static_cast<double>(N + 1);
    for (int j = 0; j < depth; ++j) {
        budget *= N;
        if (budget > 1e7)
            fail(errc::point_budget_exceeded,
                 "forward expansion exceeds 1e7 points at depth " +
                     std::to_string(depth));
    }

    std::vector<std::pair<double, double>> pts;
    pts.reserve(static_cast<std::size_t>(budget));
    for (int i = 0; i <= N; ++i) pts.emplace_back(s.data.x[i], s.ytilde(i));

    for (int j = depth; j >= 1; --j) {
        int k = sigma.digit(j) - 1;
        std::vector<std::pair<double, double>> next;
        next.reserve(pts.size() * N);
        for (int n = 0; n < N; ++n)
            for (const auto& [px, py] : pts)
                next.emplace_back(s.L(n, px), s.G(n, k, px, py));
        pts = std::move(next);
    }

    std::sort(pts.begin(), pts.end(),
              [](const auto& u, const auto& v) { return u.first < v.first; });
    double tol = 1e-12 * s.data.width();
    SampledGraph g;
    g.source_hash = sifs_hash(s);
    g.sigma = sigma.to_string();
    g.depth = depth;
    for (const auto& [px, py] : pts) {
        if (!g.x.empty() && px - g.x.back() <= tol) continue;
        g.x.push_back(px);
        g.y.push_back(py);
    }
    return g;
}

struct AddressPoint {
    double x = 0.0;
    double y = 0.0;
};

// Exact image of a base node under the finite composition selected by a
// cell address. Address digit d_j pairs with code digit s_j; d_1 names
// the outermost (coarsest) cell, matching the evaluator's descent, so
// the maps are applied in reverse address order.
inline AddressPoint address_value(const Sifs& s,
                                  const std::vector<int>& address,
                                  const CodeString& sigma,
                                  int base_node = 0) {
    detail::require_digits(s, sigma);
    int N = s.N();
    if (base_node < 0 || base_node > N)
        throw std::invalid_argument("address_value: base node outside 0..N");
    for (int d : address)
        if (d < 1 || d > N)
            fail(errc::address_digit_out_of_range,
                 "cell digit " + std::to_string(d) + " outside 1.." +
                     std::to_string(N));
    AddressPoint p{s.data.x[base_node], s.ytilde(base_node)};
    for (int m = static_cast<int>(address.size()); m >= 1; --m) {
        int n = address[m - 1] - 1;
        int k = sigma.digit(m) - 1;
        double nx = s.L(n, p.x);
        p.y = s.G(n, k, p.x, p.y);
        p.x = nx;
    }
    return p;
}

struct ConvergenceProfile {
    std::vector<double> sup_diff; // sup|g_j - g_{j-1}|, j = 1..j_max
    std::vector<double> ratio;    // sup_diff[j]/sup_diff[j-1], j = 2..j_max
};

inline ConvergenceProfile convergence_profile(const Sifs& s,
                                              const CodeString& sigma,
                                              int j_max, int grid_points) {
    std::vector<double> xs(grid_points);
    double x0 = s.data.x0(), w = s.data.width();
    for (int i = 0; i < grid_points; ++i)
        xs[i] = x0 + w * static_cast<double>(i) / (grid_points - 1);
    xs.back() = s.data.xN();

    ConvergenceProfile prof;
    std::vector<double> prev = evaluate(s, sigma, 0, xs);
    for (int j = 1; j <= j_max; ++j) {
        std::vector<double> cur = evaluate(s, sigma, j, xs);
        double d = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            d = std::max(d, std::abs(cur[i] - prev[i]));
        prof.sup_diff.push_back(d);
        prev = std::move(cur);
    }
    for (std::size_t j = 1; j < prof.sup_diff.size(); ++j)
        prof.ratio.push_back(prof.sup_diff[j - 1] > 0.0
                                 ? prof.sup_diff[j] / prof.sup_diff[j - 1]
                                 : 0.0);
    return prof;
}

} // namespace sfif
