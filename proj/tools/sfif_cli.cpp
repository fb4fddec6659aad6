// Command-line front end: build systems from config files, sample curves,
// estimate dimensions and distances, classify smoothness, and construct
// integral/derivative systems. Exit codes: 0 success, 2 rejected input,
// 3 computation abandoned; stderr carries the error name.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sfif/sfif.hpp"

using namespace sfif;
using nlohmann::json;

namespace {

struct ScaleRange {
    int lo = 3;
    int hi = 10;
};

ScaleRange parse_scales(const std::string& text) {
    ScaleRange r;
    auto sep = text.find("..");
    if (sep == std::string::npos)
        throw CLI::ValidationError("--scales", "expected m1..m2, got " + text);
    try {
        r.lo = std::stoi(text.substr(0, sep));
        r.hi = std::stoi(text.substr(sep + 2));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--scales", "expected m1..m2, got " + text);
    }
    return r;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(errc::parse_error, e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) fail(errc::io_error, "short write to " + path);
}

// Build config: {"nodes": [[x,y],...], "gammas": [[...] per family],
// "kappa": 0.0}. Vertical offsets are solved, not configured.
Sifs build_from_config(const json& cfg, bool allow_gamma_collision) {
    if (!cfg.contains("nodes") || !cfg.contains("gammas"))
        fail(errc::parse_error, "config needs \"nodes\" and \"gammas\"");
    InterpolationData data;
    for (const auto& row : cfg.at("nodes")) {
        if (!row.is_array() || row.size() != 2)
            fail(errc::parse_error, "node rows must be [x, y]");
        data.x.push_back(row[0].get<double>());
        data.y.push_back(row[1].get<double>());
    }
    std::vector<std::vector<double>> gammas;
    for (const auto& row : cfg.at("gammas"))
        gammas.push_back(row.get<std::vector<double>>());
    double kappa = cfg.value("kappa", 0.0);
    SolveOptions opts;
    opts.allow_gamma_collision = allow_gamma_collision;
    return solve_maps(data, gammas, kappa, opts);
}

void print_coefficients(const Sifs& s) {
    std::printf("n:");
    for (int n = 0; n < s.N(); ++n) std::printf(" %12d", n + 1);
    std::printf("\na:");
    for (int n = 0; n < s.N(); ++n) std::printf(" %12.6g", s.a[n]);
    std::printf("\nb:");
    for (int n = 0; n < s.N(); ++n) std::printf(" %12.6g", s.b[n]);
    std::printf("\n");
    for (int k = 0; k < s.M(); ++k) {
        std::printf("family %d gamma:", k + 1);
        for (int n = 0; n < s.N(); ++n)
            std::printf(" %12.6g", s.families[k][n].gamma);
        std::printf("\nfamily %d q:", k + 1);
        for (int n = 0; n < s.N(); ++n) {
            std::printf(" [");
            const auto& c = s.families[k][n].q.coeffs();
            for (std::size_t i = 0; i < c.size(); ++i)
                std::printf("%s%.6g", i ? ", " : "", c[i]);
            std::printf("]");
        }
        std::printf("\n");
    }
}

json dimension_report_json(const DimensionReport& rep) {
    json j;
    j["estimate"] = rep.estimate;
    j["r2"] = rep.r2;
    j["scales"] = rep.scales;
    j["counts"] = rep.counts;
    j["flags"] = rep.flags;
    return j;
}

json moran_roots_json(const Sifs& s) {
    json roots = json::array();
    for (int k = 1; k <= s.M(); ++k) {
        try {
            roots.push_back(moran_dimension(s, k));
        } catch (const Error& e) {
            if (e.code() != errc::not_applicable) throw;
            roots.push_back(nullptr);
        }
    }
    return roots;
}

int run_build(const std::string& config_path, const std::string& out,
              bool allow_gamma_collision) {
    Sifs s = build_from_config(load_json_file(config_path),
                               allow_gamma_collision);
    save_sifs(out, s);
    print_coefficients(s);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

int run_sample(const std::string& sifs_path, const std::string& sigma_text,
               int depth, int points, const std::string& out,
               const std::string& svg) {
    Sifs s = load_sifs(sifs_path);
    CodeString sigma = CodeString::parse(sigma_text);
    SampledGraph g = sample_graph(s, sigma, depth, points);
    save_csv(out, g);
    std::printf("wrote %zu samples to %s\n", g.x.size(), out.c_str());
    if (!svg.empty()) {
        save_svg(svg, g);
        std::printf("wrote plot to %s\n", svg.c_str());
    }
    return 0;
}

int run_dimension(const std::string& sifs_path, const std::string& sigma_text,
                  int depth, int points, const ScaleRange& scales,
                  const std::string& out) {
    Sifs s = load_sifs(sifs_path);
    SampledGraph g =
        sample_graph(s, CodeString::parse(sigma_text), depth, points);
    DimensionReport rep = box_dimension(g, scales.lo, scales.hi);
    std::printf("%6s %12s\n", "m", "boxes");
    for (std::size_t i = 0; i < rep.scales.size(); ++i)
        std::printf("%6d %12llu\n", rep.scales[i],
                    static_cast<unsigned long long>(rep.counts[i]));
    std::printf("box-count estimate %.4f (r2 %.5f)\n", rep.estimate, rep.r2);
    for (const auto& f : rep.flags) std::printf("flag: %s\n", f.c_str());
    json roots = moran_roots_json(s);
    for (int k = 0; k < s.M(); ++k) {
        if (roots[k].is_null())
            std::printf("family %d similarity root: not applicable\n", k + 1);
        else
            std::printf("family %d similarity root: %.4f\n", k + 1,
                        roots[k].get<double>());
    }
    if (!out.empty()) {
        json j = dimension_report_json(rep);
        j["sigma"] = sigma_text;
        j["depth"] = depth;
        j["points"] = points;
        j["similarity_roots"] = roots;
        write_json_file(out, j);
    }
    return 0;
}

int run_distance(const std::string& sifs_path,
                 const std::vector<std::string>& sigmas, int depth, int points,
                 const std::string& out) {
    if (sigmas.size() != 2)
        throw CLI::ValidationError("--sigma",
                                   "distance needs exactly two code strings");
    Sifs s = load_sifs(sifs_path);
    SampledGraph a = sample_graph(s, CodeString::parse(sigmas[0]), depth, points);
    SampledGraph b = sample_graph(s, CodeString::parse(sigmas[1]), depth, points);
    double raw = avg_fractal_distance(a, b);
    double norm = avg_fractal_distance_normalized(a, b);
    std::printf("distance %s vs %s: raw %.6f, unit-square %.6f\n",
                sigmas[0].c_str(), sigmas[1].c_str(), raw, norm);
    if (!out.empty())
        write_json_file(out, json{{"sigma_a", sigmas[0]},
                                  {"sigma_b", sigmas[1]},
                                  {"depth", depth},
                                  {"points", points},
                                  {"raw", raw},
                                  {"normalized", norm}});
    return 0;
}

json smoothness_report_json(const SmoothnessReport& rep) {
    json j;
    j["lambda"] = rep.lambda;
    j["lambda_nk"] = rep.lambda_nk;
    j["C1"] = rep.C1;
    j["class"] = smoothness_class_name(rep.klass);
    if (rep.lambda_bar_populated) j["lambda_bar_bound"] = rep.lambda_bar_bound;
    if (rep.empirical_populated) {
        j["empirical_exponent"] = rep.empirical_exponent;
        j["empirical_r2"] = rep.empirical_r2;
    }
    j["flags"] = rep.flags;
    return j;
}

int run_smoothness(const std::string& sifs_path, const std::string& sigma_text,
                   int depth, int points, const std::string& out) {
    Sifs s = load_sifs(sifs_path);
    SmoothnessReport rep;
    if (sigma_text.empty()) {
        rep = smoothness_classify(s);
    } else {
        SampledGraph g =
            sample_graph(s, CodeString::parse(sigma_text), depth, points);
        rep = smoothness_classify(s, &g);
    }
    std::printf("lambda %.6g, C1 %.6g, class %s\n", rep.lambda, rep.C1,
                smoothness_class_name(rep.klass));
    if (rep.lambda_bar_populated)
        std::printf("exponent bound %.6g\n", rep.lambda_bar_bound);
    if (rep.empirical_populated)
        std::printf("empirical exponent %.4f (r2 %.5f)\n",
                    rep.empirical_exponent, rep.empirical_r2);
    for (const auto& f : rep.flags) std::printf("flag: %s\n", f.c_str());
    if (!out.empty()) write_json_file(out, smoothness_report_json(rep));
    return 0;
}

int run_integrate(const std::string& sifs_path, double y0hat,
                  const std::string& out) {
    Sifs s = load_sifs(sifs_path);
    IntegralSifs I = integrate_sifs(s, y0hat);
    std::printf("total integral %.12g\n", I.R);
    std::printf("antiderivative nodes:");
    for (double v : I.yhat) std::printf(" %.12g", v);
    std::printf("\n");
    save_sifs(out, I);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

int run_differentiate(const std::string& sifs_path, int order,
                      const std::string& out) {
    Sifs s = load_sifs(sifs_path);
    DerivativeSifs D = differentiate_sifs(s, order);
    std::printf("derivative of order %d, nodes:", order);
    for (double v : D.deriv.data.y) std::printf(" %.12g", v);
    std::printf("\n");
    save_sifs(out, D);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

// Recomputes the bundled reference analyses end to end on the built-in
// sample data and prints computed values next to the reference ones.
int run_reproduce(int depth, int points, const ScaleRange& scales,
                  const std::string& out) {
    Sifs s = solve_maps(InterpolationData{{0.0, 0.0},
                                          {30.0, 90.0},
                                          {60.0, 70.0},
                                          {100.0, 10.0}},
                        {{0.4, 0.4, 0.4}, {0.6, 0.6, 0.6}});
    json summary;
    std::printf("== map coefficients ==\n");
    print_coefficients(s);
    summary["sifs"] = sifs_to_json(s);

    const char* codes[] = {"(1)", "(112)", "(12)", "(221)", "(2)"};
    // Reference dimension values exist for (1) and (2) only.
    const double dim_ref[] = {1.3069, 0.0, 0.0, 0.0, 1.5199};

    int dim_points = points > 0 ? points : (1 << 17) + 1;
    std::printf("\n== box-count dimensions (depth %d, %d samples, scales "
                "%d..%d) ==\n",
                depth, dim_points, scales.lo, scales.hi);
    std::printf("%-8s %-10s %-9s %s\n", "code", "estimate", "r2", "reference");
    json dims = json::array();
    std::vector<double> est;
    for (int i = 0; i < 5; ++i) {
        SampledGraph g =
            sample_graph(s, CodeString::parse(codes[i]), depth, dim_points);
        DimensionReport rep = box_dimension(g, scales.lo, scales.hi);
        est.push_back(rep.estimate);
        json row = dimension_report_json(rep);
        row["sigma"] = codes[i];
        if (dim_ref[i] > 0.0) {
            row["reference"] = dim_ref[i];
            std::printf("%-8s %-10.4f %-9.5f %.4f\n", codes[i], rep.estimate,
                        rep.r2, dim_ref[i]);
        } else {
            std::printf("%-8s %-10.4f %-9.5f -\n", codes[i], rep.estimate,
                        rep.r2);
        }
        dims.push_back(row);
    }
    bool ordered = true;
    for (int i = 1; i < 5; ++i) ordered = ordered && est[i] > est[i - 1];
    std::printf("ordering (1) < (112) < (12) < (221) < (2): %s\n",
                ordered ? "holds" : "VIOLATED");
    summary["dimensions"] = dims;
    summary["dimension_ordering_holds"] = ordered;
    json roots = moran_roots_json(s);
    summary["similarity_roots"] = roots;
    for (int k = 0; k < 2; ++k)
        std::printf("family %d similarity root: %.4f\n", k + 1,
                    roots[k].get<double>());

    int dist_points = points > 0 ? points : (1 << 15) + 1;
    std::printf("\n== average distances (depth %d, %d samples) ==\n", depth,
                dist_points);
    struct Pair {
        const char *a, *b;
        double ref;
    };
    Pair pairs[] = {{"(1)", "(2)", 0.297},   {"(1)", "(112)", 0.022},
                    {"(2)", "(112)", 0.276}, {"(1)", "(221)", 0.228},
                    {"(2)", "(221)", 0.071}, {"(1)", "(12)", 0.138},
                    {"(2)", "(12)", 0.162}};
    json dist = json::array();
    std::printf("%-14s %-10s %-12s %s\n", "pair", "raw", "unit-square",
                "reference");
    std::map<std::string, SampledGraph> cache;
    auto graph_of = [&](const char* c) -> const SampledGraph& {
        auto it = cache.find(c);
        if (it == cache.end())
            it = cache
                     .emplace(c, sample_graph(s, CodeString::parse(c), depth,
                                              dist_points))
                     .first;
        return it->second;
    };
    std::map<std::string, double> norm_of;
    for (const Pair& p : pairs) {
        double raw = avg_fractal_distance(graph_of(p.a), graph_of(p.b));
        double norm =
            avg_fractal_distance_normalized(graph_of(p.a), graph_of(p.b));
        norm_of[std::string(p.a) + p.b] = norm;
        std::printf("%-4s vs %-6s %-10.4f %-12.4f %.3f\n", p.a, p.b, raw,
                    norm, p.ref);
        dist.push_back(json{{"sigma_a", p.a},
                            {"sigma_b", p.b},
                            {"raw", raw},
                            {"normalized", norm},
                            {"reference", p.ref}});
    }
    bool o1 = norm_of["(1)(112)"] < norm_of["(2)(112)"];
    bool o2 = norm_of["(2)(221)"] < norm_of["(1)(221)"];
    bool o3 = norm_of["(1)(12)"] < norm_of["(2)(12)"];
    std::printf("closer-to-(1) and closer-to-(2) orderings: %s\n",
                o1 && o2 && o3 ? "hold" : "VIOLATED");
    summary["distances"] = dist;
    summary["distance_orderings_hold"] = o1 && o2 && o3;

    std::printf("\n== smoothness ==\n");
    SampledGraph rough = graph_of("(2)");
    SmoothnessReport rep = smoothness_classify(s, &rough);
    std::printf("lambda %.6g, C1 %.6g, class %s, exponent bound %.6g\n",
                rep.lambda, rep.C1, smoothness_class_name(rep.klass),
                rep.lambda_bar_bound);
    if (rep.empirical_populated)
        std::printf("empirical exponent of the (2) curve: %.4f (r2 %.5f)\n",
                    rep.empirical_exponent, rep.empirical_r2);
    summary["smoothness"] = smoothness_report_json(rep);

    std::printf("\n== calculus conditions ==\n");
    IntegralConditionReport cond = check_integral_condition(s);
    std::printf("integral totals per family: %.6g vs %.6g -> %s\n", cond.R[0],
                cond.R[1],
                cond.pass ? "consistent" : "inconsistent, no integral system");
    DerivativeFeasibility feas = check_derivative_condition(s, 1);
    std::printf("derivative order 1: %s\n",
                feas.feasible ? "feasible" : "infeasible");
    summary["integral_condition_pass"] = cond.pass;
    summary["derivative_order1_feasible"] = feas.feasible;

    if (!out.empty()) {
        write_json_file(out, summary);
        std::printf("\nwrote %s\n", out.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Super fractal interpolation toolkit"};
    app.require_subcommand(1);

    std::string config_path, sifs_path, out, svg, scales_text = "3..10";
    std::vector<std::string> sigmas;
    std::string sigma = "(1)";
    int depth = 30;
    int points = (1 << 13) + 1;
    int order = 1;
    double y0hat = 0.0;
    bool allow_gamma_collision = false;

    CLI::App* build = app.add_subcommand(
        "build", "solve vertical maps from a node/gamma config");
    build->add_option("--config", config_path, "config JSON")->required();
    build->add_option("--out", out, "output system JSON")->required();
    build->add_flag("--allow-gamma-collision", allow_gamma_collision,
                    "accept families sharing all factors on some interval");

    CLI::App* sample = app.add_subcommand(
        "sample", "sample a curve for a code string to CSV");
    sample->add_option("--sifs", sifs_path, "system JSON")->required();
    sample->add_option("--sigma", sigma, "code string, e.g. \"12(21)\"");
    sample->add_option("--depth", depth, "iteration depth");
    sample->add_option("--points", points, "sample count");
    sample->add_option("--out", out, "output CSV")->required();
    sample->add_option("--svg", svg, "optional plot output");

    CLI::App* dimension = app.add_subcommand(
        "dimension", "box-count dimension of a sampled curve");
    dimension->add_option("--sifs", sifs_path, "system JSON")->required();
    dimension->add_option("--sigma", sigma, "code string");
    dimension->add_option("--depth", depth, "iteration depth");
    dimension->add_option("--points", points, "sample count");
    dimension->add_option("--scales", scales_text, "dyadic scales m1..m2");
    dimension->add_option("--out", out, "optional JSON report path");

    CLI::App* distance = app.add_subcommand(
        "distance", "average distance between two curves of one system");
    distance->add_option("--sifs", sifs_path, "system JSON")->required();
    distance->add_option("--sigma", sigmas, "two code strings")
        ->expected(1, 2);
    distance->add_option("--depth", depth, "iteration depth");
    distance->add_option("--points", points, "sample count");
    distance->add_option("--out", out, "optional JSON report path");

    CLI::App* smoothness = app.add_subcommand(
        "smoothness", "classify attainable smoothness of a system");
    smoothness->add_option("--sifs", sifs_path, "system JSON")->required();
    std::string smoothness_sigma;
    smoothness->add_option("--sigma", smoothness_sigma,
                           "also fit an empirical exponent for this code");
    smoothness->add_option("--depth", depth, "iteration depth");
    smoothness->add_option("--points", points, "sample count");
    smoothness->add_option("--out", out, "optional JSON report path");

    CLI::App* integrate = app.add_subcommand(
        "integrate", "construct the antiderivative system");
    integrate->add_option("--sifs", sifs_path, "system JSON")->required();
    integrate->add_option("--y0hat", y0hat, "antiderivative value at x0");
    integrate->add_option("--out", out, "output system JSON")->required();

    CLI::App* differentiate = app.add_subcommand(
        "differentiate", "construct the derivative system");
    differentiate->add_option("--sifs", sifs_path, "system JSON")->required();
    differentiate->add_option("--order", order, "derivative order");
    differentiate->add_option("--out", out, "output system JSON")->required();

    CLI::App* reproduce = app.add_subcommand(
        "reproduce-paper",
        "recompute the bundled reference analyses on the sample data");
    reproduce->add_option("--depth", depth, "iteration depth");
    int rpoints = 0;
    reproduce->add_option("--points", rpoints,
                          "sample count override (0 = per-stage default)");
    reproduce->add_option("--scales", scales_text, "dyadic scales m1..m2");
    reproduce->add_option("--out", out, "optional JSON summary path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (build->parsed())
            return run_build(config_path, out, allow_gamma_collision);
        if (sample->parsed())
            return run_sample(sifs_path, sigma, depth, points, out, svg);
        if (dimension->parsed())
            return run_dimension(sifs_path, sigma, depth, points,
                                 parse_scales(scales_text), out);
        if (distance->parsed())
            return run_distance(sifs_path, sigmas, depth, points, out);
        if (smoothness->parsed())
            return run_smoothness(sifs_path, smoothness_sigma, depth, points,
                                  out);
        if (integrate->parsed()) return run_integrate(sifs_path, y0hat, out);
        if (differentiate->parsed())
            return run_differentiate(sifs_path, order, out);
        if (reproduce->parsed())
            return run_reproduce(depth, rpoints, parse_scales(scales_text),
                                 out);
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return e.kind() == error_kind::validation ? 2 : 3;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 3;
    }
    return 0;
}
