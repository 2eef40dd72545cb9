#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "scatlen/core.hpp"
#include "scatlen/potential.hpp"

namespace scatlen {

// A potential spec file: dimension plus the validated potential.
struct PotentialSpec {
    Dim dimension = Dim::three;
    RadialPotential potential;
};

class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double read_radius(const nlohmann::json& j, const char* what) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "infinity") return inf;
        throw SpecError(std::string("unrecognized ") + what + " value '" + s + "'");
    }
    return j.get<double>();
}

} // namespace detail

// Parse and validate a potential spec. Throws SpecError on malformed input or
// invariant violations.
inline PotentialSpec parse_spec(const nlohmann::json& j) {
    try {
        PotentialSpec spec;
        spec.dimension = dim_from_int(j.at("dimension").get<int>());

        const double core = j.value("hard_core_radius", 0.0);

        std::vector<Shell> shells;
        if (j.contains("shells"))
            for (const auto& js : j.at("shells"))
                shells.push_back({js.at("radius").get<double>(), js.at("strength").get<double>()});

        std::vector<Segment> segments;
        if (j.contains("segments")) {
            for (const auto& js : j.at("segments")) {
                Segment seg;
                seg.r_lo = js.at("r_lo").get<double>();
                seg.r_hi = detail::read_radius(js.at("r_hi"), "r_hi");
                const auto form = js.at("form").get<std::string>();
                const auto& p = js.at("params");
                if (form == "constant")
                    seg.form = ConstantForm{p.at("c").get<double>()};
                else if (form == "power_tail")
                    seg.form = PowerForm{p.at("C").get<double>(), p.at("p").get<double>()};
                else if (form == "exponential")
                    seg.form = ExponentialForm{p.at("C").get<double>(), p.at("mu").get<double>()};
                else
                    throw SpecError("unknown segment form '" + form + "'");
                segments.push_back(seg);
            }
        }

        spec.potential = RadialPotential::validated(core, std::move(shells), std::move(segments));
        return spec;
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& e) {
        throw SpecError(std::string("invalid potential spec: ") + e.what());
    }
}

inline nlohmann::json serialize_spec(const PotentialSpec& spec) {
    nlohmann::json j;
    j["dimension"] = dim_value(spec.dimension);
    j["hard_core_radius"] = spec.potential.hard_core_radius();
    j["shells"] = nlohmann::json::array();
    for (const auto& sh : spec.potential.shells())
        j["shells"].push_back({{"radius", sh.radius}, {"strength", sh.strength}});
    j["segments"] = nlohmann::json::array();
    for (const auto& seg : spec.potential.segments()) {
        nlohmann::json js;
        js["r_lo"] = seg.r_lo;
        if (std::isinf(seg.r_hi))
            js["r_hi"] = "inf";
        else
            js["r_hi"] = seg.r_hi;
        if (const auto* c = std::get_if<ConstantForm>(&seg.form)) {
            js["form"] = "constant";
            js["params"] = {{"c", c->c}};
        } else if (const auto* pw = std::get_if<PowerForm>(&seg.form)) {
            js["form"] = "power_tail";
            js["params"] = {{"C", pw->coefficient}, {"p", pw->exponent}};
        } else {
            const auto& e = std::get<ExponentialForm>(seg.form);
            js["form"] = "exponential";
            js["params"] = {{"C", e.coefficient}, {"mu", e.rate}};
        }
        j["segments"].push_back(js);
    }
    return j;
}

inline PotentialSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw SpecError(std::string("spec file is not valid JSON: ") + e.what());
    }
    return parse_spec(j);
}

inline void save_spec_file(const PotentialSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SpecError("cannot write spec file '" + path + "'");
    out << serialize_spec(spec).dump(2) << "\n";
}

} // namespace scatlen
