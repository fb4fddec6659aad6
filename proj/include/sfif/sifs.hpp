#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "errors.hpp"
#include "interpolation_data.hpp"
#include "polynomial.hpp"

namespace sfif {

// Vertical map G_{n,k}(x,y) = gamma*y + q(x) of one family member.
struct VerticalMap {
    double gamma = 0.0;
    Polynomial q;
};

// Pool of M iterated function systems over shared interpolation data.
// Horizontal maps L_n(x) = a_n x + b_n are family-independent; vertical
// maps are per (n, k). kappa in [0,1) selects the parameterized variant
// whose join-up targets are kappa*x_i + (1-kappa)*y_i.
struct Sifs {
    InterpolationData data;
    std::vector<double> a;
    std::vector<double> b;
    std::vector<std::vector<VerticalMap>> families; // [k][n]
    double kappa = 0.0;

    int N() const { return data.N(); }
    int M() const { return static_cast<int>(families.size()); }

    double L(int n, double x) const { return a[n] * x + b[n]; }

    double G(int n, int k, double x, double y) const {
        const VerticalMap& vm = families[k][n];
        return vm.gamma * y + vm.q(x);
    }

    // Join-up target ordinate at node i.
    double ytilde(int i) const {
        return kappa * data.x[i] + (1.0 - kappa) * data.y[i];
    }

    double max_abs_gamma() const {
        double m = 0.0;
        for (const auto& fam : families)
            for (const auto& vm : fam) m = std::max(m, std::abs(vm.gamma));
        return m;
    }
};

struct SolveOptions {
    // Downgrades the per-n gamma distinctness requirement to a warning.
    bool allow_gamma_collision = false;
};

// Unique affine q solving the two join-up equations per (n,k):
//   G(x_0, ytilde_0) = ytilde_{n-1},  G(x_N, ytilde_N) = ytilde_n.
inline Sifs solve_maps(const InterpolationData& data,
                       const std::vector<std::vector<double>>& gammas,
                       double kappa = 0.0, const SolveOptions& opts = {}) {
    data.validate();
    if (kappa < 0.0 || kappa >= 1.0)
        fail(errc::kappa_out_of_range, "kappa must lie in [0,1)");
    int N = data.N();
    int M = static_cast<int>(gammas.size());
    if (M < 1) fail(errc::gamma_out_of_range, "need at least one family");
    for (const auto& row : gammas) {
        if (static_cast<int>(row.size()) != N)
            fail(errc::gamma_out_of_range,
                 "gamma matrix must have one entry per subinterval");
        for (double g : row)
            if (!(std::abs(g) < 1.0))
                fail(errc::gamma_out_of_range, "|gamma| must be < 1");
    }
    if (!opts.allow_gamma_collision) {
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < M; ++k)
                for (int l = k + 1; l < M; ++l)
                    if (std::abs(gammas[k][n] - gammas[l][n]) <= 1e-12)
                        fail(errc::gamma_collision,
                             "families " + std::to_string(k + 1) + " and " +
                                 std::to_string(l + 1) +
                                 " share gamma on subinterval " +
                                 std::to_string(n + 1));
    }

    Sifs s;
    s.data = data;
    s.kappa = kappa;
    double x0 = data.x0(), xN = data.xN(), w = data.width();
    s.a.resize(N);
    s.b.resize(N);
    for (int n = 0; n < N; ++n) {
        s.a[n] = (data.x[n + 1] - data.x[n]) / w;
        s.b[n] = (xN * data.x[n] - x0 * data.x[n + 1]) / w;
    }
    s.families.assign(M, std::vector<VerticalMap>(N));
    for (int k = 0; k < M; ++k)
        for (int n = 0; n < N; ++n) {
            double g = gammas[k][n];
            double e = (s.ytilde(n + 1) - s.ytilde(n) -
                        g * (s.ytilde(N) - s.ytilde(0))) / w;
            double f = s.ytilde(n) - g * s.ytilde(0) - e * x0;
            s.families[k][n] = {g, Polynomial::affine(f, e)};
        }
    return s;
}

struct ValidationCheck {
    std::string name;
    bool pass;
    double residual;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const ValidationCheck* first_failure() const {
        for (const auto& c : checks)
            if (!c.pass) return &c;
        return nullptr;
    }
};

// Re-checks every type invariant; loaded instances must pass before use.
inline ValidationReport validate_sifs(const Sifs& s) {
    ValidationReport rep;
    auto add = [&rep](std::string name, bool pass, double residual,
                      std::string detail = "") {
        rep.checks.push_back({std::move(name), pass, residual, std::move(detail)});
    };

    bool data_ok = true;
    std::string data_detail;
    try {
        s.data.validate();
    } catch (const Error& e) {
        data_ok = false;
        data_detail = e.what();
    }
    add("data", data_ok, 0.0, data_detail);
    add("kappa_range", s.kappa >= 0.0 && s.kappa < 1.0, s.kappa);

    int N = s.N(), M = s.M();
    bool shape = static_cast<int>(s.a.size()) == N &&
                 static_cast<int>(s.b.size()) == N && M >= 1;
    for (const auto& fam : s.families)
        shape = shape && static_cast<int>(fam.size()) == N;
    add("shape", shape, 0.0);
    if (!data_ok || !shape) return rep;

    double w = s.data.width(), x0 = s.data.x0(), xN = s.data.xN();
    double rh = 0.0;
    bool a_range = true;
    for (int n = 0; n < N; ++n) {
        double an = (s.data.x[n + 1] - s.data.x[n]) / w;
        double bn = (xN * s.data.x[n] - x0 * s.data.x[n + 1]) / w;
        rh = std::max({rh, std::abs(s.a[n] - an), std::abs(s.b[n] - bn)});
        a_range = a_range && s.a[n] > 0.0 && s.a[n] < 1.0;
    }
    add("horizontal_coefficients", rh <= 1e-12, rh);
    add("horizontal_contraction", a_range, 0.0);

    double rl = 0.0;
    for (int n = 0; n < N; ++n)
        rl = std::max({rl, std::abs(s.L(n, x0) - s.data.x[n]),
                       std::abs(s.L(n, xN) - s.data.x[n + 1])});
    add("horizontal_endpoints", rl <= 1e-9, rl);

    bool g_range = true;
    int deg_max = 0;
    for (const auto& fam : s.families)
        for (const auto& vm : fam) {
            g_range = g_range && std::abs(vm.gamma) < 1.0;
            deg_max = std::max(deg_max, vm.q.degree());
        }
    add("gamma_range", g_range, 0.0);
    add("q_degree", deg_max <= 17, static_cast<double>(deg_max));

    double sep_min = M > 1 ? 2.0 : 1.0;
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < M; ++k)
            for (int l = k + 1; l < M; ++l)
                sep_min = std::min(sep_min, std::abs(s.families[k][n].gamma -
                                                     s.families[l][n].gamma));
    add("gamma_distinct", sep_min > 1e-12, sep_min,
        M > 1 ? "" : "single family, vacuous");

    double rj = 0.0;
    for (int k = 0; k < M; ++k)
        for (int n = 0; n < N; ++n)
            rj = std::max({rj,
                           std::abs(s.G(n, k, x0, s.ytilde(0)) - s.ytilde(n)),
                           std::abs(s.G(n, k, xN, s.ytilde(N)) - s.ytilde(n + 1))});
    add("join_up", rj <= 1e-9, rj);
    return rep;
}

// Throws the most specific error for the first failing invariant.
inline void ensure_valid(const Sifs& s) {
    ValidationReport rep = validate_sifs(s);
    const ValidationCheck* f = rep.first_failure();
    if (!f) return;
    if (f->name == "data") fail(errc::non_increasing_abscissae, f->detail);
    if (f->name == "kappa_range") fail(errc::kappa_out_of_range, "");
    if (f->name == "gamma_range") fail(errc::gamma_out_of_range, "");
    if (f->name == "gamma_distinct") fail(errc::gamma_collision, "");
    fail(errc::join_up_violation, f->name + " residual " +
                                      std::to_string(f->residual));
}

inline std::uint64_t sifs_hash(const Sifs& s) {
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    auto mix = [&h](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<double>(s.N()));
    mix(static_cast<double>(s.M()));
    mix(s.kappa);
    for (double v : s.data.x) mix(v);
    for (double v : s.data.y) mix(v);
    for (const auto& fam : s.families)
        for (const auto& vm : fam) {
            mix(vm.gamma);
            mix(static_cast<double>(vm.q.degree()));
            for (double c : vm.q.coeffs()) mix(c);
        }
    return h;
}

} // namespace sfif
