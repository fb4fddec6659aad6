#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "attractor.hpp"
#include "calculus.hpp"
#include "errors.hpp"
#include "sifs.hpp"

namespace sfif {

// Provenance of a system produced by the calculus constructions.
struct Derivation {
    std::uint64_t base_hash = 0;
    std::string operation; // "integrate" or "differentiate"
    int order = 0;
    double y0hat = 0.0;
};

namespace detail {

inline std::string hash_string(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

inline std::uint64_t parse_hash(const std::string& s) {
    if (s.size() < 3 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X'))
        fail(errc::parse_error, "hash must be a 0x hex string");
    std::uint64_t v = 0;
    for (std::size_t i = 2; i < s.size(); ++i) {
        char c = s[i];
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else fail(errc::parse_error, "bad hex digit in hash");
        v = (v << 4) | static_cast<std::uint64_t>(d);
    }
    return v;
}

} // namespace detail

inline nlohmann::json sifs_to_json(const Sifs& s,
                                   const Derivation* derivation = nullptr) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (int i = 0; i <= s.N(); ++i)
        j["nodes"].push_back({s.data.x[i], s.data.y[i]});
    j["kappa"] = s.kappa;
    j["families"] = nlohmann::json::array();
    for (const auto& fam : s.families) {
        nlohmann::json f;
        f["gamma"] = nlohmann::json::array();
        f["q"] = nlohmann::json::array();
        for (const auto& vm : fam) {
            f["gamma"].push_back(vm.gamma);
            f["q"].push_back(vm.q.coeffs());
        }
        j["families"].push_back(std::move(f));
    }
    if (derivation) {
        j["derivation"] = {
            {"base_hash", detail::hash_string(derivation->base_hash)},
            {"operation", derivation->operation},
            {"order", derivation->order},
            {"y0hat", derivation->y0hat},
        };
    }
    return j;
}

// Rebuilds the full system from the schema (horizontal coefficients are
// derived from the nodes) and re-validates every invariant.
inline Sifs sifs_from_json(const nlohmann::json& j,
                           Derivation* derivation = nullptr) {
    if (!j.is_object() || !j.contains("nodes") || !j.contains("kappa") ||
        !j.contains("families"))
        fail(errc::parse_error, "expected keys nodes, kappa, families");
    Sifs s;
    try {
        for (const auto& node : j.at("nodes")) {
            if (!node.is_array() || node.size() != 2)
                fail(errc::parse_error, "node entries must be [x, y] pairs");
            s.data.x.push_back(node.at(0).get<double>());
            s.data.y.push_back(node.at(1).get<double>());
        }
        s.kappa = j.at("kappa").get<double>();
        for (const auto& f : j.at("families")) {
            std::vector<VerticalMap> fam;
            const auto& gs = f.at("gamma");
            const auto& qs = f.at("q");
            if (gs.size() != qs.size())
                fail(errc::parse_error, "gamma and q lengths differ");
            for (std::size_t n = 0; n < gs.size(); ++n) {
                std::vector<double> coeffs =
                    qs.at(n).get<std::vector<double>>();
                if (coeffs.empty() || coeffs.size() > 18)
                    fail(errc::parse_error,
                         "q needs 1..18 coefficients (degree cap 17)");
                fam.push_back({gs.at(n).get<double>(), Polynomial(coeffs)});
            }
            s.families.push_back(std::move(fam));
        }
        if (derivation && j.contains("derivation")) {
            const auto& d = j.at("derivation");
            derivation->base_hash =
                detail::parse_hash(d.at("base_hash").get<std::string>());
            derivation->operation = d.at("operation").get<std::string>();
            derivation->order = d.at("order").get<int>();
            derivation->y0hat = d.at("y0hat").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse_error, e.what());
    }

    s.data.validate();
    if (s.families.empty()) fail(errc::parse_error, "no families");
    for (const auto& fam : s.families)
        if (static_cast<int>(fam.size()) != s.N())
            fail(errc::parse_error, "family size does not match node count");
    double w = s.data.width(), x0 = s.data.x0(), xN = s.data.xN();
    s.a.resize(s.N());
    s.b.resize(s.N());
    for (int n = 0; n < s.N(); ++n) {
        s.a[n] = (s.data.x[n + 1] - s.data.x[n]) / w;
        s.b[n] = (xN * s.data.x[n] - x0 * s.data.x[n + 1]) / w;
    }
    ensure_valid(s);
    return s;
}

inline void save_sifs(const std::string& path, const Sifs& s,
                      const Derivation* derivation = nullptr) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
    out << sifs_to_json(s, derivation).dump(2) << '\n';
    if (!out) fail(errc::io_error, "short write to " + path);
}

inline Sifs load_sifs(const std::string& path,
                      Derivation* derivation = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse_error, e.what());
    }
    return sifs_from_json(j, derivation);
}

inline void save_sifs(const std::string& path, const IntegralSifs& s) {
    Derivation d{s.base_hash, "integrate", 1, s.y0hat};
    save_sifs(path, s.hat, &d);
}

inline void save_sifs(const std::string& path, const DerivativeSifs& s) {
    Derivation d{s.base_hash, "differentiate", s.order, 0.0};
    save_sifs(path, s.deriv, &d);
}

// CSV: "x,y" header, one row per sample, widest shortest-round-trip
// formatting, LF endings. Re-emitting a loaded file is byte-identical.
inline std::string csv_to_string(const SampledGraph& g) {
    std::string out = "x,y\n";
    char buf[64];
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.x[i], g.y[i]);
        out += buf;
    }
    return out;
}

inline void save_csv(const std::string& path, const SampledGraph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
    out << csv_to_string(g);
    if (!out) fail(errc::io_error, "short write to " + path);
}

inline SampledGraph load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || (line != "x,y" && line != "x,y\r"))
        fail(errc::parse_error, "expected x,y header");
    SampledGraph g;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            fail(errc::parse_error, "row without comma: " + line);
        try {
            std::size_t used = 0;
            double x = std::stod(line.substr(0, comma), &used);
            double y = std::stod(line.substr(comma + 1), &used);
            g.x.push_back(x);
            g.y.push_back(y);
        } catch (const std::exception&) {
            fail(errc::parse_error, "bad number in row: " + line);
        }
    }
    return g;
}

} // namespace sfif
