#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sfif/sfif.hpp"

using namespace sfif;

namespace {

Sifs table1() {
    return solve_maps(InterpolationData{{0.0, 0.0},
                                        {30.0, 90.0},
                                        {60.0, 70.0},
                                        {100.0, 10.0}},
                      {{0.4, 0.4, 0.4}, {0.6, 0.6, 0.6}});
}

// Two-family system on {0, 1/2, 1} built for integration: both families
// share every vertical increment, so the integral condition holds with
// R = 2/3.
Sifs integrable_hat() {
    Sifs s = solve_maps(InterpolationData{{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}},
                        {{0.3, 0.3}, {0.5, 0.5}});
    s.families[0][0].q = Polynomial{0.0, 1.8, -0.8};
    s.families[0][1].q = Polynomial{1.0, -2.2, 1.2};
    s.families[1][0].q = Polynomial{0.0, 1.0};
    s.families[1][1].q = Polynomial{1.0, -3.0, 2.0};
    ensure_valid(s);
    return s;
}

// Cubic-offset system whose maps stay one-derivative feasible
// (a = 1/2 against gammas 0.2 and 0.15).
Sifs smooth_base() {
    Sifs s = solve_maps(
        InterpolationData{{0.0, 0.0}, {0.5, 1.0 / 3.0}, {1.0, 5.0 / 6.0}},
        {{0.2, 0.2}, {0.15, 0.15}});
    s.families[0][0].q = Polynomial{0.0, 0.0, 0.0, 1.0 / 6.0};
    s.families[0][1].q = Polynomial{1.0 / 3.0, 0.5, 0.0, -1.0 / 6.0};
    s.families[1][0].q = Polynomial{0.0, 0.0, 1.0 / 8.0, 1.0 / 12.0};
    s.families[1][1].q = Polynomial{1.0 / 3.0, 0.5, 1.0 / 8.0, -0.25};
    ensure_valid(s);
    return s;
}

void check_same_maps(const Sifs& got, const Sifs& want, double tol) {
    REQUIRE(got.N() == want.N());
    REQUIRE(got.M() == want.M());
    for (std::size_t i = 0; i < want.data.x.size(); ++i) {
        CHECK(got.data.x[i] == want.data.x[i]);
        CHECK(got.data.y[i] == Catch::Approx(want.data.y[i]).margin(tol));
    }
    for (int k = 0; k < want.M(); ++k)
        for (int n = 0; n < want.N(); ++n) {
            CHECK(got.families[k][n].gamma ==
                  Catch::Approx(want.families[k][n].gamma).margin(tol));
            CHECK(coeffs_close(got.families[k][n].q, want.families[k][n].q,
                               tol));
        }
}

} // namespace

TEST_CASE("integral condition report") {
    SECTION("shared increments pass with R away from one") {
        IntegralConditionReport rep = check_integral_condition(integrable_hat());
        REQUIRE(rep.pass);
        CHECK(rep.R[0] == Catch::Approx(2.0 / 3.0).margin(1e-12));
        CHECK(rep.R[1] == Catch::Approx(2.0 / 3.0).margin(1e-12));
        CHECK(rep.pair_residual <= 1e-12);
    }
    SECTION("reference sample system fails honestly") {
        IntegralConditionReport rep = check_integral_condition(table1());
        REQUIRE_FALSE(rep.pass);
        CHECK(rep.R[0] == Catch::Approx(25750.0 / 3.0).margin(1e-6));
        CHECK(rep.R[1] == Catch::Approx(12625.0).margin(1e-6));
        CHECK(rep.pair_residual ==
              Catch::Approx(12625.0 - 25750.0 / 3.0).margin(1e-6));
    }
    SECTION("a single family is vacuously consistent") {
        Sifs s = solve_maps(
            InterpolationData{{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}},
            {{0.3, 0.3}});
        IntegralConditionReport rep = check_integral_condition(s);
        CHECK(rep.pass);
        CHECK(rep.pair_residual == 0.0);
    }
}

TEST_CASE("integrating the shared-increment system") {
    Sifs s = integrable_hat();
    IntegralSifs I = integrate_sifs(s, 0.0);
    CHECK(I.R == Catch::Approx(2.0 / 3.0).margin(1e-12));
    REQUIRE(I.yhat.size() == 3);
    CHECK(I.yhat[0] == 0.0);
    CHECK(I.yhat[1] == Catch::Approx(5.0 / 12.0).margin(1e-12));
    CHECK(I.yhat[2] == Catch::Approx(2.0 / 3.0).margin(1e-12));
    CHECK(I.base_hash == sifs_hash(s));

    SECTION("hat system is itself valid with contracted gammas") {
        ensure_valid(I.hat);
        for (int k = 0; k < 2; ++k)
            for (int n = 0; n < 2; ++n) {
                CHECK(I.hat.families[k][n].gamma ==
                      Catch::Approx(s.a[n] * s.families[k][n].gamma)
                          .margin(1e-15));
                CHECK(I.hat.families[k][n].q.degree() ==
                      s.families[k][n].q.degree() + 1);
            }
    }

    SECTION("graph matches running quadrature of the base graph") {
        for (const char* code : {"(1)", "(2)", "(12)"}) {
            CodeString sigma = CodeString::parse(code);
            SampledGraph base = sample_graph(s, sigma, 20, 32769);
            SampledGraph anti = sample_graph(I.hat, sigma, 20, 1025);
            double yr = 2.0 / 3.0;
            double worst = 0.0;
            std::size_t j = 0;
            double acc = 0.0;
            for (std::size_t i = 0; i < anti.x.size(); ++i) {
                while (j + 1 < base.x.size() &&
                       base.x[j + 1] <= anti.x[i] + 1e-15) {
                    acc += 0.5 * (base.y[j] + base.y[j + 1]) *
                           (base.x[j + 1] - base.x[j]);
                    ++j;
                }
                worst = std::max(worst, std::abs(anti.y[i] - acc));
            }
            CHECK(worst <= 1e-4 * yr);
        }
    }

    SECTION("endpoint value equals the total integral") {
        double end = evaluate(I.hat, CodeString::parse("(12)"), 40, 1.0);
        CHECK(end == Catch::Approx(I.R).margin(1e-12));
    }

    SECTION("base point offset shifts the whole graph") {
        IntegralSifs J = integrate_sifs(s, 2.5);
        CHECK(J.y0hat == 2.5);
        double a = evaluate(I.hat, CodeString::parse("(21)"), 25, 0.375);
        double b = evaluate(J.hat, CodeString::parse("(21)"), 25, 0.375);
        CHECK(b - a == Catch::Approx(2.5).margin(1e-12));
    }
}

TEST_CASE("integral of a zero-gamma system is the polyline antiderivative") {
    Sifs s = solve_maps(InterpolationData{{0.0, 0.0}, {1.0, 2.0}, {2.0, 0.0}},
                        {{0.0, 0.0}});
    IntegralSifs I = integrate_sifs(s);
    // Tent of height 2 on [0, 2]: area up to the apex is 1, total is 2.
    CHECK(I.yhat[1] == Catch::Approx(1.0).margin(1e-12));
    CHECK(I.R == Catch::Approx(2.0).margin(1e-12));
    double mid = evaluate(I.hat, CodeString::parse("(1)"), 30, 0.5);
    CHECK(mid == Catch::Approx(0.25).margin(1e-10));
}

TEST_CASE("tent with antisymmetric offsets integrates to zero") {
    Sifs s = solve_maps(InterpolationData{{0.0, 0.0},
                                          {0.25, 1.0},
                                          {0.75, -1.0},
                                          {1.0, 0.0}},
                        {{0.3, 0.3, 0.3}, {0.5, 0.5, 0.5}});
    IntegralConditionReport rep = check_integral_condition(s);
    REQUIRE(rep.pass);
    CHECK(rep.R[0] == Catch::Approx(0.0).margin(1e-12));
    IntegralSifs I = integrate_sifs(s);
    CHECK(I.yhat[1] == Catch::Approx(0.125).margin(1e-12));
    CHECK(I.yhat[2] == Catch::Approx(0.125).margin(1e-12));
    CHECK(I.yhat[3] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("integration failure modes") {
    SECTION("equal totals are not enough when interior increments differ") {
        Sifs s = solve_maps(
            InterpolationData{{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}},
            {{0.3, 0.5}, {0.5, 0.3}});
        IntegralConditionReport rep = check_integral_condition(s);
        CHECK(rep.pair_residual <= 1e-12); // totals agree by symmetry
        CHECK_THROWS_MATCHES(
            integrate_sifs(s), Error,
            Catch::Matchers::Predicate<Error>([](const Error& e) {
                return e.code() == errc::condition_violated;
            }));
    }
    SECTION("mismatched totals") {
        CHECK_THROWS_MATCHES(
            integrate_sifs(table1()), Error,
            Catch::Matchers::Predicate<Error>([](const Error& e) {
                return e.code() == errc::condition_violated;
            }));
    }
    SECTION("join-up targets with a vertical pull are out of scope") {
        Sifs s = solve_maps(
            InterpolationData{{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}},
            {{0.3, 0.3}}, 0.3);
        CHECK_THROWS_MATCHES(
            integrate_sifs(s), Error,
            Catch::Matchers::Predicate<Error>([](const Error& e) {
                return e.code() == errc::kappa_unsupported;
            }));
    }
    SECTION("degree cap leaves room for the raised degree") {
        Sifs s = solve_maps(
            InterpolationData{{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}},
            {{0.3, 0.3}});
        std::vector<double> coeffs(18, 0.0);
        coeffs[17] = 1.0; // x^17 still joins 0 to 1 across the first cell
        s.families[0][0].q = Polynomial(coeffs);
        ensure_valid(s);
        CHECK_THROWS_AS(integrate_sifs(s), std::invalid_argument);
    }
}

TEST_CASE("integration is linear in the vertical scale") {
    Sifs s = integrable_hat();
    double c = -2.25;
    Sifs scaled = solve_maps(
        InterpolationData{{0.0, 0.0}, {0.5, c}, {1.0, 0.0}},
        {{0.3, 0.3}, {0.5, 0.5}});
    for (int k = 0; k < 2; ++k)
        for (int n = 0; n < 2; ++n)
            scaled.families[k][n].q = s.families[k][n].q.scaled(c);
    ensure_valid(scaled);
    IntegralSifs I = integrate_sifs(s, 0.0);
    IntegralSifs J = integrate_sifs(scaled, 0.0);
    CHECK(J.R == Catch::Approx(c * I.R).margin(1e-12));
    for (std::size_t i = 0; i < I.yhat.size(); ++i)
        CHECK(J.yhat[i] == Catch::Approx(c * I.yhat[i]).margin(1e-12));
    double a = evaluate(I.hat, CodeString::parse("(12)"), 25, 0.7);
    double b = evaluate(J.hat, CodeString::parse("(12)"), 25, 0.7);
    CHECK(b == Catch::Approx(c * a).margin(1e-10));
}

TEST_CASE("derivative feasibility margins") {
    SECTION("reference sample system has no derivative at any positive order") {
        DerivativeFeasibility f = check_derivative_condition(table1(), 1);
        REQUIRE_FALSE(f.feasible);
        double worst = 1.0;
        for (const auto& fam : f.margin)
            for (double m : fam) worst = std::min(worst, m);
        CHECK(worst == Catch::Approx(0.3 - 0.6).margin(1e-12));
        CHECK(check_derivative_condition(table1(), 0).feasible);
    }
    SECTION("contracted verticals admit one derivative") {
        DerivativeFeasibility f = check_derivative_condition(smooth_base(), 1);
        REQUIRE(f.feasible);
        double worst = 1.0;
        for (const auto& fam : f.margin)
            for (double m : fam) worst = std::min(worst, m);
        CHECK(worst == Catch::Approx(0.5 - 0.2).margin(1e-12));
    }
}

TEST_CASE("differentiating the cubic-offset system") {
    Sifs s = smooth_base();
    DerivativeSifs D = differentiate_sifs(s, 1);
    CHECK(D.order == 1);
    CHECK(D.base_hash == sifs_hash(s));
    ensure_valid(D.deriv);

    SECTION("derived coefficients follow the levelwise rescale") {
        // gamma' = gamma / a = 2 gamma, q' = dq/dx / a, and the node set
        // of the derivative collapses to (0,0), (1/2,1), (1,0).
        CHECK(D.deriv.data.y[0] == Catch::Approx(0.0).margin(1e-12));
        CHECK(D.deriv.data.y[1] == Catch::Approx(1.0).margin(1e-12));
        CHECK(D.deriv.data.y[2] == Catch::Approx(0.0).margin(1e-12));
        for (int k = 0; k < 2; ++k)
            for (int n = 0; n < 2; ++n) {
                const VerticalMap& base = s.families[k][n];
                const VerticalMap& dm = D.deriv.families[k][n];
                CHECK(dm.gamma ==
                      Catch::Approx(base.gamma * 2.0).margin(1e-15));
                CHECK(coeffs_close(dm.q, base.q.derivative().scaled(2.0),
                                   1e-12));
            }
        CHECK(coeffs_close(D.deriv.families[0][0].q,
                           Polynomial{0.0, 0.0, 1.0}, 1e-12));
        CHECK(coeffs_close(D.deriv.families[0][1].q,
                           Polynomial{1.0, 0.0, -1.0}, 1e-12));
        CHECK(coeffs_close(D.deriv.families[1][0].q,
                           Polynomial{0.0, 0.5, 0.5}, 1e-12));
        CHECK(coeffs_close(D.deriv.families[1][1].q,
                           Polynomial{1.0, 0.5, -1.5}, 1e-12));
    }

    SECTION("graph matches central differences of the base graph") {
        double h = std::ldexp(1.0, -14);
        for (const char* code : {"(1)", "(2)", "(12)", "(112)"}) {
            CodeString sigma = CodeString::parse(code);
            std::vector<double> rel;
            for (int i = 1; i < 40; ++i) {
                double x = i / 40.0;
                double d = evaluate(D.deriv, sigma, 30, x);
                double num = (evaluate(s, sigma, 30, x + h) -
                              evaluate(s, sigma, 30, x - h)) /
                             (2.0 * h);
                rel.push_back(std::abs(d - num) /
                              std::max(1.0, std::abs(num)));
            }
            std::sort(rel.begin(), rel.end());
            CHECK(rel[rel.size() / 2] <= 1e-3);
        }
    }
}

TEST_CASE("integrate then differentiate returns the original") {
    Sifs s = integrable_hat();
    IntegralSifs I = integrate_sifs(s, 0.0);
    // The hat system contracts verticals to 0.15 and 0.25 against a = 1/2,
    // so one derivative is feasible on it.
    REQUIRE(check_derivative_condition(I.hat, 1).feasible);
    DerivativeSifs D = differentiate_sifs(I.hat, 1);
    check_same_maps(D.deriv, s, 1e-9);
}

TEST_CASE("differentiate then integrate returns the original") {
    Sifs s = smooth_base();
    DerivativeSifs D = differentiate_sifs(s, 1);
    IntegralSifs I = integrate_sifs(D.deriv, s.data.y[0]);
    check_same_maps(I.hat, s, 1e-9);
    double x = 0.6180339887;
    CodeString sigma = CodeString::parse("(21)");
    CHECK(evaluate(I.hat, sigma, 30, x) ==
          Catch::Approx(evaluate(s, sigma, 30, x)).margin(1e-9));
}

TEST_CASE("zero-gamma cubic differentiates exactly") {
    // gamma = 0 and both offsets lifted from x^3, so the attractor is
    // exactly the cubic on [0, 1] and derivatives are classical.
    Sifs s = solve_maps(
        InterpolationData{{0.0, 0.0}, {0.5, 0.125}, {1.0, 1.0}},
        {{0.0, 0.0}});
    s.families[0][0].q = Polynomial{0.0, 0.0, 0.0, 0.125};
    s.families[0][1].q = Polynomial{0.125, 0.375, 0.375, 0.125};
    ensure_valid(s);
    DerivativeSifs D = differentiate_sifs(s, 1);
    for (double x : {0.1, 0.37, 0.5, 0.82, 1.0})
        CHECK(evaluate(D.deriv, CodeString::parse("(1)"), 40, x) ==
              Catch::Approx(3.0 * x * x).margin(1e-9));
    DerivativeSifs D2 = differentiate_sifs(s, 2);
    for (double x : {0.2, 0.66})
        CHECK(evaluate(D2.deriv, CodeString::parse("(1)"), 40, x) ==
              Catch::Approx(6.0 * x).margin(1e-9));
}

TEST_CASE("differentiation failure modes") {
    SECTION("infeasible order") {
        CHECK_THROWS_MATCHES(
            differentiate_sifs(table1(), 1), Error,
            Catch::Matchers::Predicate<Error>([](const Error& e) {
                return e.code() == errc::infeasible_order;
            }));
    }
    SECTION("order must be positive") {
        CHECK_THROWS_AS(differentiate_sifs(smooth_base(), 0),
                        std::invalid_argument);
        CHECK_THROWS_AS(check_derivative_condition(smooth_base(), -1),
                        std::invalid_argument);
    }
    SECTION("vertical pull is out of scope") {
        Sifs s = solve_maps(
            InterpolationData{{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}},
            {{0.1, 0.1}}, 0.3);
        CHECK_THROWS_MATCHES(
            differentiate_sifs(s, 1), Error,
            Catch::Matchers::Predicate<Error>([](const Error& e) {
                return e.code() == errc::kappa_unsupported;
            }));
    }
    SECTION("families disagreeing at the endpoints cannot differentiate") {
        // Affine offsets with different gammas imply different endpoint
        // slopes per family: q'(x0) / (a - gamma) gives 10/3 against 5.
        Sifs s = solve_maps(
            InterpolationData{{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}},
            {{0.2, 0.2}, {0.3, 0.3}});
        CHECK_THROWS_MATCHES(
            differentiate_sifs(s, 1), Error,
            Catch::Matchers::Predicate<Error>([](const Error& e) {
                return e.code() == errc::condition_violated;
            }));
    }
}
