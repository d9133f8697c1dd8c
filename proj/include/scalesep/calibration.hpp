#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace scalesep {

/// One named constant with its provenance: "calibrated" values derive from
/// recorded-seed sweeps, "configured" values were set by hand.
struct CalConstant {
    double value = 0.0;
    std::string provenance = "configured";
};

/// The paper's implicit constants made explicit. Persisted as a versioned
/// JSON ledger committed next to the corpora seeds; every output file embeds
/// the ledger version it was produced under.
struct CalibrationConstants {
    std::string version = "uncalibrated";
    std::uint64_t seed = 0;

    CalConstant C_B{1.0, "configured"};        // bilinear/kernel estimate constant
    CalConstant C0{4.0, "configured"};         // physical-sparseness decay schedule
    CalConstant c5{0.4, "configured"};         // predictability criterion
    CalConstant C_pred{1.0, "configured"};     // tracked constant in the decay rate
    CalConstant kappa_freq{1.0, "configured"}; // 2^J ~ kappa/(gamma sqrt t)
    CalConstant kappa_disc{4.0, "configured"}; // h = kappa gamma sqrt t
    CalConstant K_I{50.0, "configured"};       // ||I_{h,t} f||_p <= K_I ||J_h f||_p
    CalConstant K_bern{2.0, "configured"};     // Bernstein ratio envelope
    CalConstant C_poinc{0.5, "configured"};    // ||f - J_h f||_2 <= C h ||grad f||_2
    CalConstant C_tsai{30.0, "configured"};    // convolution-bound ratio envelope
    std::map<std::string, CalConstant> c_tilde_p = {{"4", {1.0, "configured"}},
                                                    {"6", {1.0, "configured"}},
                                                    {"inf", {1.0, "configured"}}};

    static std::string p_key(double p) {
        if (std::isinf(p)) return "inf";
        double r = std::round(p);
        if (std::abs(p - r) < 1e-12) return std::to_string(static_cast<long long>(r));
        return std::to_string(p);
    }

    double c_tilde(double p) const {
        auto it = c_tilde_p.find(p_key(p));
        if (it == c_tilde_p.end())
            throw std::invalid_argument("CalibrationConstants: no c_tilde entry for p = " + p_key(p));
        return it->second.value;
    }

    nlohmann::ordered_json to_json() const {
        using json = nlohmann::ordered_json;
        auto put = [](const CalConstant& c) {
            return json{{"value", c.value}, {"provenance", c.provenance}};
        };
        json j;
        j["version"] = version;
        j["seed"] = seed;
        json k;
        k["C_B"] = put(C_B);
        k["C0"] = put(C0);
        k["c5"] = put(c5);
        k["C_pred"] = put(C_pred);
        k["kappa_freq"] = put(kappa_freq);
        k["kappa_disc"] = put(kappa_disc);
        k["K_I"] = put(K_I);
        k["K_bern"] = put(K_bern);
        k["C_poinc"] = put(C_poinc);
        k["C_tsai"] = put(C_tsai);
        json ct;
        for (const auto& [key, c] : c_tilde_p) ct[key] = put(c);
        k["c_tilde_p"] = ct;
        j["constants"] = k;
        return j;
    }

    static CalibrationConstants from_json(const nlohmann::json& j) {
        CalibrationConstants c;
        auto get = [](const nlohmann::json& e) {
            return CalConstant{e.at("value").get<double>(), e.at("provenance").get<std::string>()};
        };
        c.version = j.at("version").get<std::string>();
        c.seed = j.at("seed").get<std::uint64_t>();
        const auto& k = j.at("constants");
        c.C_B = get(k.at("C_B"));
        c.C0 = get(k.at("C0"));
        c.c5 = get(k.at("c5"));
        c.C_pred = get(k.at("C_pred"));
        c.kappa_freq = get(k.at("kappa_freq"));
        c.kappa_disc = get(k.at("kappa_disc"));
        c.K_I = get(k.at("K_I"));
        c.K_bern = get(k.at("K_bern"));
        c.C_poinc = get(k.at("C_poinc"));
        c.C_tsai = get(k.at("C_tsai"));
        c.c_tilde_p.clear();
        for (const auto& [key, e] : k.at("c_tilde_p").items()) c.c_tilde_p[key] = get(e);
        return c;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("CalibrationConstants: cannot write " + path);
        out << to_json().dump(2) << "\n";
    }

    static CalibrationConstants load(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error(
                "CalibrationConstants: cannot open ledger '" + path +
                "'. Run the calibrate command first, or point --ledger / SCALESEP_LEDGER at one.");
        nlohmann::json j;
        in >> j;
        return from_json(j);
    }
};

}  // namespace scalesep
