#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "attractor.hpp"
#include "errors.hpp"
#include "sifs.hpp"

namespace sfif {

namespace detail {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
};

inline LineFit fit_line(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
    std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (syy > 0.0) {
        double ssres = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = ys[i] - (f.intercept + f.slope * xs[i]);
            ssres += r * r;
        }
        f.r2 = 1.0 - ssres / syy;
    }
    return f;
}

} // namespace detail

struct DimensionReport {
    double estimate = 0.0;
    std::vector<int> scales;            // dyadic levels m, box size 2^-m
    std::vector<std::uint64_t> counts;  // occupied boxes per scale
    double r2 = 0.0;
    std::vector<std::string> flags;
};

// Box counting on the graph normalized to the unit square, grid anchored
// at the origin, dyadic box sizes 2^-m for m = m1..m2. Occupancy is
// decided per polyline segment: a continuous graph fills the whole row
// span a segment crosses in each column, which point counting misses
// once boxes outgrow the sample spacing.
inline DimensionReport box_dimension(const std::vector<double>& xs,
                                     const std::vector<double>& ys, int m1,
                                     int m2) {
    if (m1 < 1 || m2 <= m1)
        throw std::invalid_argument("box_dimension: need m2 > m1 >= 1");
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("box_dimension: malformed samples");
    double need = std::ldexp(1.0, m2 + 2);
    if (static_cast<double>(xs.size()) < need)
        fail(errc::insufficient_samples,
             "finest scale needs at least 2^" + std::to_string(m2 + 2) +
                 " samples");

    DimensionReport rep;
    for (int m = m1; m <= m2; ++m) rep.scales.push_back(m);

    auto minmax_x = std::minmax_element(xs.begin(), xs.end());
    auto minmax_y = std::minmax_element(ys.begin(), ys.end());
    double xr = *minmax_x.second - *minmax_x.first;
    double yr = *minmax_y.second - *minmax_y.first;
    if (!(xr > 0.0) || !(yr > 0.0)) {
        // Flat graph: every scale occupies one row of 2^m boxes, slope 1.
        rep.flags.push_back("DegenerateRange");
        rep.estimate = 1.0;
        rep.r2 = 1.0;
        for (int m : rep.scales)
            rep.counts.push_back(static_cast<std::uint64_t>(1) << m);
        return rep;
    }
    double xmin = *minmax_x.first, ymin = *minmax_y.first;

    for (int m : rep.scales) {
        const std::uint64_t g = static_cast<std::uint64_t>(1) << m;
        const double gd = static_cast<double>(g);
        auto col = [&](double u) {
            auto c = static_cast<long long>(u * gd);
            return static_cast<std::uint64_t>(
                std::min<long long>(std::max<long long>(c, 0),
                                    static_cast<long long>(g) - 1));
        };
        std::unordered_set<std::uint64_t> cells;
        cells.reserve(1u << std::min(m + 4, 24));
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            double x1 = (xs[i] - xmin) / xr, y1 = (ys[i] - ymin) / yr;
            double x2 = (xs[i + 1] - xmin) / xr, y2 = (ys[i + 1] - ymin) / yr;
            if (x2 < x1) {
                std::swap(x1, x2);
                std::swap(y1, y2);
            }
            double dx = x2 - x1;
            std::uint64_t c1 = col(x1), c2 = col(x2);
            for (std::uint64_t c = c1; c <= c2; ++c) {
                double xa = std::max(x1, static_cast<double>(c) / gd);
                double xb = std::min(x2, static_cast<double>(c + 1) / gd);
                double ya, yb;
                if (dx > 0.0) {
                    ya = y1 + (y2 - y1) * ((xa - x1) / dx);
                    yb = y1 + (y2 - y1) * ((xb - x1) / dx);
                } else {
                    ya = y1;
                    yb = y2;
                }
                std::uint64_t r1 = col(std::min(ya, yb));
                std::uint64_t r2 = col(std::max(ya, yb));
                for (std::uint64_t r = r1; r <= r2; ++r)
                    cells.insert((c << 32) | r);
            }
        }
        rep.counts.push_back(cells.size());
    }

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < rep.scales.size(); ++i) {
        lx.push_back(rep.scales[i] * std::log(2.0)); // log(1/eps)
        ly.push_back(std::log(static_cast<double>(rep.counts[i])));
    }
    detail::LineFit fit = detail::fit_line(lx, ly);
    rep.estimate = fit.slope;
    rep.r2 = fit.r2;
    if (rep.estimate < 0.9 || rep.estimate > 2.0)
        rep.flags.push_back("EstimateOutOfBand");
    if (rep.r2 < 0.98) rep.flags.push_back("LowConfidence");
    return rep;
}

inline DimensionReport box_dimension(const SampledGraph& g, int m1, int m2) {
    return box_dimension(g.x, g.y, m1, m2);
}

// Root of sum_n |gamma_{n,k}| a_n^(D-1) = 1 on [1,2]; the dimension of a
// single-family affine attractor with non-collinear data.
inline double moran_dimension(const Sifs& s, int family) {
    if (family < 1 || family > s.M())
        fail(errc::digit_out_of_range,
             "family " + std::to_string(family) + " outside 1.." +
                 std::to_string(s.M()));
    const auto& fam = s.families[family - 1];
    double gsum = 0.0;
    for (const auto& vm : fam) gsum += std::abs(vm.gamma);
    if (gsum <= 1.0)
        fail(errc::not_applicable,
             "sum of |gamma| is " + std::to_string(gsum) +
                 ", curve is rectifiable");
    if (s.data.collinear())
        fail(errc::not_applicable, "collinear interpolation data");

    auto f = [&](double D) {
        double v = -1.0;
        for (int n = 0; n < s.N(); ++n)
            v += std::abs(fam[n].gamma) * std::pow(s.a[n], D - 1.0);
        return v;
    };
    double lo = 1.0, hi = 2.0; // f(1) > 0 and f(2) = sum|g|a - 1 < 0
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace detail {

inline double trapezoid(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        s += 0.5 * (ys[i] + ys[i + 1]) * (xs[i + 1] - xs[i]);
    return s;
}

// Resolves two sampled curves onto one grid. Same grids pass through;
// different grids are re-evaluated from their source systems on a common
// uniform grid (truncation is exact there, unlike interpolating samples).
inline void common_grid(const SampledGraph& f, const SampledGraph& g,
                        const Sifs* fs, const Sifs* gs,
                        std::vector<double>& xs, std::vector<double>& fy,
                        std::vector<double>& gy) {
    if (f.x.size() < 2 || g.x.size() < 2)
        fail(errc::domain_mismatch, "curves need at least two samples");
    double a = f.x.front(), b = f.x.back();
    double span = b - a;
    if (!(span > 0.0)) fail(errc::domain_mismatch, "empty domain");
    if (std::abs(g.x.front() - a) > 1e-9 * span ||
        std::abs(g.x.back() - b) > 1e-9 * span)
        fail(errc::domain_mismatch, "curves cover different intervals");

    if (f.x.size() == g.x.size()) {
        double dev = 0.0;
        for (std::size_t i = 0; i < f.x.size(); ++i)
            dev = std::max(dev, std::abs(f.x[i] - g.x[i]));
        if (dev <= 1e-12 * span) {
            xs = f.x;
            fy = f.y;
            gy = g.y;
            return;
        }
    }
    if (!fs || !gs)
        fail(errc::domain_mismatch,
             "grids differ and no source systems given for re-evaluation");
    std::size_t points = std::max(f.x.size(), g.x.size());
    xs.resize(points);
    for (std::size_t i = 0; i < points; ++i)
        xs[i] = a + span * static_cast<double>(i) / (points - 1);
    xs.back() = b;
    fy = evaluate(*fs, CodeString::parse(f.sigma), f.depth, xs);
    gy = evaluate(*gs, CodeString::parse(g.sigma), g.depth, xs);
}

} // namespace detail

// d_F(f,g) = (1/(b-a)) sqrt(integral of (f-g)^2), composite trapezoid.
inline double avg_fractal_distance(const SampledGraph& f,
                                   const SampledGraph& g,
                                   const Sifs* f_source = nullptr,
                                   const Sifs* g_source = nullptr) {
    std::vector<double> xs, fy, gy;
    detail::common_grid(f, g, f_source, g_source, xs, fy, gy);
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        sq[i] = (fy[i] - gy[i]) * (fy[i] - gy[i]);
    double span = xs.back() - xs.front();
    return std::sqrt(detail::trapezoid(xs, sq)) / span;
}

// Same distance after mapping both curves into the unit square by their
// joint bounding box, making values comparable across data scales.
inline double avg_fractal_distance_normalized(const SampledGraph& f,
                                              const SampledGraph& g,
                                              const Sifs* f_source = nullptr,
                                              const Sifs* g_source = nullptr) {
    std::vector<double> xs, fy, gy;
    detail::common_grid(f, g, f_source, g_source, xs, fy, gy);
    double ymin = fy[0], ymax = fy[0];
    for (double v : fy) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    }
    for (double v : gy) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    }
    double yr = ymax - ymin;
    if (!(yr > 0.0)) return 0.0; // both curves constant and equal
    double span = xs.back() - xs.front();
    std::vector<double> u(xs.size()), sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        u[i] = (xs[i] - xs.front()) / span;
        double d = (fy[i] - gy[i]) / yr;
        sq[i] = d * d;
    }
    return std::sqrt(detail::trapezoid(u, sq));
}

// Largest oscillation over any window of width t, via monotone deques.
// Expects a uniform grid; windows are snapped to whole steps.
inline std::vector<double> modulus_of_continuity(
    const std::vector<double>& xs, const std::vector<double>& ys,
    const std::vector<double>& ts) {
    std::size_t n = xs.size();
    if (n < 2 || ys.size() != n)
        throw std::invalid_argument("modulus_of_continuity: malformed samples");
    double span = xs.back() - xs.front();
    double h = span / static_cast<double>(n - 1);
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) {
        if (!(t > 0.0) || t > span + 1e-12 * span)
            throw std::invalid_argument(
                "modulus_of_continuity: t outside (0, domain length]");
        if (t < 4.0 * h)
            fail(errc::grid_too_coarse,
                 "window " + std::to_string(t) + " below four grid steps");
        auto w = static_cast<std::size_t>(t / h + 1e-9);
        std::deque<std::size_t> hi, lo;
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            while (!hi.empty() && ys[hi.back()] <= ys[i]) hi.pop_back();
            hi.push_back(i);
            while (!lo.empty() && ys[lo.back()] >= ys[i]) lo.pop_back();
            lo.push_back(i);
            // Keep indices within w grid steps of i; the pair (i-w, i) is
            // exactly t apart and counts.
            while (hi.front() + w < i) hi.pop_front();
            while (lo.front() + w < i) lo.pop_front();
            best = std::max(best, ys[hi.front()] - ys[lo.front()]);
        }
        out.push_back(best);
    }
    return out;
}

inline std::vector<double> modulus_of_continuity(const SampledGraph& g,
                                                 const std::vector<double>& ts) {
    return modulus_of_continuity(g.x, g.y, ts);
}

struct HolderFit {
    double exponent = 0.0;
    double r2 = 0.0;
    std::vector<double> t;
    std::vector<double> omega;
};

// Log-log slope of the modulus over dyadic windows t = 2^-m * span.
inline HolderFit fit_holder_exponent(const std::vector<double>& xs,
                                     const std::vector<double>& ys,
                                     int m_lo = 4, int m_hi = 12) {
    if (m_lo < 1 || m_hi <= m_lo)
        throw std::invalid_argument("fit_holder_exponent: need m_hi > m_lo >= 1");
    double span = xs.back() - xs.front();
    HolderFit fit;
    for (int m = m_lo; m <= m_hi; ++m)
        fit.t.push_back(std::ldexp(span, -m));
    fit.omega = modulus_of_continuity(xs, ys, fit.t);
    std::vector<double> lt, lw;
    for (std::size_t i = 0; i < fit.t.size(); ++i) {
        if (!(fit.omega[i] > 0.0))
            fail(errc::degenerate_range,
                 "zero oscillation at window " + std::to_string(fit.t[i]));
        lt.push_back(std::log(fit.t[i]));
        lw.push_back(std::log(fit.omega[i]));
    }
    detail::LineFit line = detail::fit_line(lt, lw);
    fit.exponent = line.slope;
    fit.r2 = line.r2;
    return fit;
}

inline HolderFit fit_holder_exponent(const SampledGraph& g, int m_lo = 4,
                                     int m_hi = 12) {
    return fit_holder_exponent(g.x, g.y, m_lo, m_hi);
}

enum class SmoothnessClass { lip_lambda, lambda_log, lip_lambda_bar };

inline const char* smoothness_class_name(SmoothnessClass c) {
    switch (c) {
        case SmoothnessClass::lip_lambda: return "LipLambda";
        case SmoothnessClass::lambda_log: return "LambdaLog";
        default: return "LipLambdaBar";
    }
}

struct SmoothnessReport {
    double lambda = 1.0;
    std::vector<std::vector<double>> lambda_nk; // [k][n]
    double C1 = 0.0;
    SmoothnessClass klass = SmoothnessClass::lip_lambda;
    double lambda_bar_bound = 0.0;
    bool lambda_bar_populated = false;
    double empirical_exponent = 0.0;
    double empirical_r2 = 0.0;
    bool empirical_populated = false;
    std::vector<std::string> flags;
};

// Ledger of the vertical-contraction smoothness test. lambda_{n,k} is the
// Holder exponent of q_{n,k}, 1 for polynomials, overridable; cell widths
// enter normalized (a_n, domain scaled to unit length) so C1 is
// dimensionless. C1 < 1 gives Lip lambda, C1 = 1 the |t|^lambda log|t|
// modulus, C1 > 1 Lip lambda-bar with the bound max log gamma / log a,
// which needs every gamma positive.
inline SmoothnessReport smoothness_classify(
    const Sifs& s, const SampledGraph* curve = nullptr,
    const std::vector<std::vector<double>>* lambda_overrides = nullptr) {
    ensure_valid(s);
    int N = s.N(), M = s.M();
    SmoothnessReport rep;
    rep.lambda_nk.assign(M, std::vector<double>(N, 1.0));
    if (lambda_overrides) {
        if (static_cast<int>(lambda_overrides->size()) != M)
            throw std::invalid_argument("lambda overrides: family count");
        for (int k = 0; k < M; ++k) {
            if (static_cast<int>((*lambda_overrides)[k].size()) != N)
                throw std::invalid_argument("lambda overrides: cell count");
            for (int n = 0; n < N; ++n) {
                double l = (*lambda_overrides)[k][n];
                if (!(l > 0.0) || l > 1.0)
                    throw std::invalid_argument(
                        "lambda overrides must lie in (0, 1]");
                rep.lambda_nk[k][n] = l;
            }
        }
    }

    rep.lambda = 1.0;
    for (const auto& row : rep.lambda_nk)
        for (double l : row) rep.lambda = std::min(rep.lambda, l);

    rep.C1 = 0.0;
    bool all_gamma_positive = true;
    for (int k = 0; k < M; ++k)
        for (int n = 0; n < N; ++n) {
            double g = s.families[k][n].gamma;
            rep.C1 = std::max(rep.C1,
                              std::abs(g) / std::pow(s.a[n], rep.lambda));
            all_gamma_positive = all_gamma_positive && g > 0.0;
        }

    if (rep.C1 < 1.0 - 1e-12)
        rep.klass = SmoothnessClass::lip_lambda;
    else if (rep.C1 <= 1.0 + 1e-12)
        rep.klass = SmoothnessClass::lambda_log;
    else
        rep.klass = SmoothnessClass::lip_lambda_bar;

    if (rep.klass == SmoothnessClass::lip_lambda_bar) {
        if (all_gamma_positive) {
            double bound = 0.0;
            for (int k = 0; k < M; ++k)
                for (int n = 0; n < N; ++n)
                    bound = std::max(bound, std::log(s.families[k][n].gamma) /
                                                std::log(s.a[n]));
            rep.lambda_bar_bound = bound;
            rep.lambda_bar_populated = true;
        } else {
            rep.flags.push_back("NonPositiveGamma");
        }
    }

    if (curve) {
        try {
            HolderFit fit = fit_holder_exponent(*curve);
            rep.empirical_exponent = fit.exponent;
            rep.empirical_r2 = fit.r2;
            rep.empirical_populated = true;
        } catch (const Error& e) {
            rep.flags.push_back(std::string("EmpiricalUnavailable:") +
                                e.name());
        }
    }
    return rep;
}

} // namespace sfif
