#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"
#include "sifs.hpp"

namespace sfif {

struct IntegralConditionReport {
    std::vector<double> R;           // per-family integral of the attractor
    std::vector<double> denominator; // 1 - sum_n a_n gamma_{n,k}
    double pair_residual = 0.0;      // max_{k,l} |R_k - R_l|
    double distance_from_one = 0.0;  // min_k |R_k - 1|
    bool pass = false;
};

// R_k = (sum_n a_n int q_{n,k}) / (1 - sum_n a_n gamma_{n,k}) is the total
// integral of any attractor built from family k alone; the mixed-family
// integral construction needs all R_k equal and different from 1.
inline IntegralConditionReport check_integral_condition(const Sifs& s) {
    ensure_valid(s);
    IntegralConditionReport rep;
    double x0 = s.data.x0(), xN = s.data.xN();
    for (int k = 0; k < s.M(); ++k) {
        double num = 0.0, den = 1.0;
        for (int n = 0; n < s.N(); ++n) {
            const VerticalMap& vm = s.families[k][n];
            num += s.a[n] * vm.q.integral(x0, xN);
            den -= s.a[n] * vm.gamma;
        }
        if (std::abs(den) <= 1e-12)
            fail(errc::singular_denominator,
                 "family " + std::to_string(k + 1) +
                     ": sum a_n gamma_n equals 1");
        rep.R.push_back(num / den);
        rep.denominator.push_back(den);
    }
    double rmax = rep.R[0], rmin = rep.R[0];
    rep.distance_from_one = std::abs(rep.R[0] - 1.0);
    for (double r : rep.R) {
        rmax = std::max(rmax, r);
        rmin = std::min(rmin, r);
        rep.distance_from_one = std::min(rep.distance_from_one,
                                         std::abs(r - 1.0));
    }
    rep.pair_residual = rmax - rmin;
    double scale = std::max(1.0, std::abs(rep.R[0]));
    rep.pass = rep.pair_residual <= 1e-9 * scale &&
               rep.distance_from_one > 1e-9 * scale;
    return rep;
}

// Antiderivative system: same horizontal maps over the antiderivative's
// node values, gamma_hat = a_n gamma, q_hat of degree deg q + 1.
struct IntegralSifs {
    Sifs hat;
    double y0hat = 0.0;
    std::vector<double> yhat;
    double R = 0.0; // common integral ratio of the base system
    std::uint64_t base_hash = 0;
};

inline IntegralSifs integrate_sifs(const Sifs& s, double y0hat = 0.0) {
    if (s.kappa != 0.0)
        fail(errc::kappa_unsupported,
             "integral construction defined for kappa = 0 only");
    ensure_valid(s);
    for (const auto& fam : s.families)
        for (const auto& vm : fam)
            if (vm.q.degree() > 16)
                throw std::invalid_argument(
                    "integrate_sifs: q degree above 16 would overflow the "
                    "degree cap of the result");

    IntegralConditionReport cond = check_integral_condition(s);
    double scale = std::max(1.0, std::abs(cond.R[0]));
    if (cond.pair_residual > 1e-9 * scale)
        fail(errc::condition_violated,
             "family integrals differ by " +
                 std::to_string(cond.pair_residual));
    if (cond.distance_from_one <= 1e-9 * scale)
        fail(errc::condition_violated, "integral ratio equals 1");
    double R = cond.R[0];

    int N = s.N(), M = s.M();
    double x0 = s.data.x0(), xN = s.data.xN();

    // Node values: yhat_n - yhat_{n-1} is the integral of the attractor
    // over cell n, which every family must price identically.
    IntegralSifs out;
    out.y0hat = y0hat;
    out.R = R;
    out.base_hash = sifs_hash(s);
    out.yhat.assign(N + 1, y0hat);
    for (int n = 0; n < N; ++n) {
        double inc0 = 0.0;
        for (int k = 0; k < M; ++k) {
            const VerticalMap& vm = s.families[k][n];
            double inc = s.a[n] * (vm.gamma * R + vm.q.integral(x0, xN));
            if (k == 0)
                inc0 = inc;
            else if (std::abs(inc - inc0) > 1e-9 * scale)
                fail(errc::condition_violated,
                     "interior node value differs across families at cell " +
                         std::to_string(n + 1));
        }
        out.yhat[n + 1] = out.yhat[n] + inc0;
    }

    out.hat.data.x = s.data.x;
    out.hat.data.y = out.yhat;
    out.hat.a = s.a;
    out.hat.b = s.b;
    out.hat.kappa = 0.0;
    out.hat.families.assign(M, std::vector<VerticalMap>(N));
    for (int k = 0; k < M; ++k)
        for (int n = 0; n < N; ++n) {
            const VerticalMap& vm = s.families[k][n];
            Polynomial P = vm.q.antiderivative();
            Polynomial qhat = P.scaled(s.a[n]);
            qhat += out.yhat[n] - s.a[n] * vm.gamma * y0hat -
                    s.a[n] * P(x0);
            out.hat.families[k][n] = {s.a[n] * vm.gamma, std::move(qhat)};
        }
    return out;
}

struct DerivativeFeasibility {
    int order = 0;
    std::vector<std::vector<double>> margin; // [k][i]: a_i^order - |gamma|
    bool feasible = false;
    // Cross-family spread of the endpoint derivative values, j = 1..order.
    std::vector<double> left_residual;
    std::vector<double> right_residual;
};

inline DerivativeFeasibility check_derivative_condition(const Sifs& s,
                                                        int order) {
    if (order < 0)
        throw std::invalid_argument("check_derivative_condition: order >= 0");
    ensure_valid(s);
    int N = s.N(), M = s.M();
    DerivativeFeasibility rep;
    rep.order = order;
    rep.feasible = true;
    rep.margin.assign(M, std::vector<double>(N));
    for (int k = 0; k < M; ++k)
        for (int n = 0; n < N; ++n) {
            double m = std::pow(s.a[n], order) -
                       std::abs(s.families[k][n].gamma);
            rep.margin[k][n] = m;
            rep.feasible = rep.feasible && m > 0.0;
        }
    for (int j = 1; j <= order; ++j) {
        double lmin = 0.0, lmax = 0.0, rmin = 0.0, rmax = 0.0;
        for (int k = 0; k < M; ++k) {
            Polynomial dq0 = s.families[k][0].q;
            Polynomial dqN = s.families[k][N - 1].q;
            for (int d = 0; d < j; ++d) {
                dq0 = dq0.derivative();
                dqN = dqN.derivative();
            }
            double lv = dq0(s.data.x0()) /
                        (std::pow(s.a[0], j) - s.families[k][0].gamma);
            double rv = dqN(s.data.xN()) /
                        (std::pow(s.a[N - 1], j) - s.families[k][N - 1].gamma);
            if (k == 0) {
                lmin = lmax = lv;
                rmin = rmax = rv;
            } else {
                lmin = std::min(lmin, lv);
                lmax = std::max(lmax, lv);
                rmin = std::min(rmin, rv);
                rmax = std::max(rmax, rv);
            }
        }
        rep.left_residual.push_back(lmax - lmin);
        rep.right_residual.push_back(rmax - rmin);
    }
    return rep;
}

struct DerivativeSifs {
    Sifs deriv;
    int order = 0;
    std::uint64_t base_hash = 0;
};

// Levelwise: gamma <- gamma/a_i, q <- q'/a_i. Endpoint node values come
// from the fixed points of the first and last cell maps; interior node
// values are one application of the derived maps to the left endpoint,
// which is what evaluating the derived attractor at a node performs.
inline DerivativeSifs differentiate_sifs(const Sifs& s, int order) {
    if (order < 1)
        throw std::invalid_argument("differentiate_sifs: order >= 1");
    if (s.kappa != 0.0)
        fail(errc::kappa_unsupported,
             "derivative construction defined for kappa = 0 only");
    DerivativeFeasibility feas = check_derivative_condition(s, order);
    if (!feas.feasible) {
        double worst = 0.0;
        for (const auto& row : feas.margin)
            for (double m : row) worst = std::min(worst, m);
        fail(errc::infeasible_order,
             "order " + std::to_string(order) + " margin " +
                 std::to_string(worst));
    }

    int N = s.N(), M = s.M();
    DerivativeSifs out;
    out.order = order;
    out.base_hash = sifs_hash(s);
    out.deriv.a = s.a;
    out.deriv.b = s.b;
    out.deriv.kappa = 0.0;
    out.deriv.families.assign(M, std::vector<VerticalMap>(N));
    for (int k = 0; k < M; ++k)
        for (int n = 0; n < N; ++n) {
            double g = s.families[k][n].gamma;
            Polynomial q = s.families[k][n].q;
            for (int j = 0; j < order; ++j) {
                g /= s.a[n];
                q = q.derivative().scaled(1.0 / s.a[n]);
            }
            out.deriv.families[k][n] = {g, std::move(q)};
        }

    double x0 = s.data.x0(), xN = s.data.xN();
    auto endpoint = [&](int k, int n, double at) {
        const VerticalMap& vm = out.deriv.families[k][n];
        return vm.q(at) / (1.0 - vm.gamma);
    };
    double y0 = endpoint(0, 0, x0), yN = endpoint(0, N - 1, xN);
    double vscale = std::max({1.0, std::abs(y0), std::abs(yN)});
    for (int k = 1; k < M; ++k) {
        if (std::abs(endpoint(k, 0, x0) - y0) > 1e-9 * vscale ||
            std::abs(endpoint(k, N - 1, xN) - yN) > 1e-9 * vscale)
            fail(errc::condition_violated,
                 "derivative endpoint values differ across families");
    }

    out.deriv.data.x = s.data.x;
    out.deriv.data.y.assign(N + 1, 0.0);
    out.deriv.data.y[0] = y0;
    out.deriv.data.y[N] = yN;
    for (int i = 1; i < N; ++i) {
        double v0 = 0.0;
        for (int k = 0; k < M; ++k) {
            const VerticalMap& vm = out.deriv.families[k][i];
            double v = vm.gamma * y0 + vm.q(x0); // cell i+1 sends x0 to x_i
            if (k == 0)
                v0 = v;
            else if (std::abs(v - v0) > 1e-9 * std::max(1.0, std::abs(v0)))
                fail(errc::condition_violated,
                     "derivative node value differs across families at node " +
                         std::to_string(i));
        }
        out.deriv.data.y[i] = v0;
    }
    return out;
}

} // namespace sfif
