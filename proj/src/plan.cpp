#include "hmorrey/plan.hpp"

#include <cmath>

#include "hmorrey/errors.hpp"
#include "hmorrey/util.hpp"

namespace hmorrey {

void QuadraturePlan::validate() const {
    if (!(inner_cutoff > 0.0)) throw ConfigError("plan: inner cutoff must be positive");
    if (!(outer_radius > inner_cutoff)) throw ConfigError("plan: outer radius must exceed the inner cutoff");
    if (shells_per_octave < 1 || shells_per_octave > 64) throw ConfigError("plan: shells per octave must be in 1..64");
    if (nodes_per_shell < 1 || nodes_per_shell > 64) throw ConfigError("plan: nodes per shell must be in 1..64");
    if (sphere_order < 1 || sphere_order > 128) throw ConfigError("plan: sphere order must be in 1..128");
    if (!(tol > 0.0) || !(tol < 1.0)) throw ConfigError("plan: tolerance must be in (0, 1)");
}

QuadraturePlan QuadraturePlan::refined() const {
    QuadraturePlan p = *this;
    p.shells_per_octave *= 2;
    p.sphere_order *= 2;
    return p;
}

QuadraturePlan QuadraturePlan::parse(const std::string& text, QuadraturePlan base) {
    std::string t = text;
    for (char& c : t)
        if (c == ':' || c == ';') c = ',';
    for (const auto& item : split(t, ',')) {
        std::string kv = trim(item);
        if (kv.empty()) continue;
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("plan entry '" + kv + "' is not key=value");
        std::string key = kv.substr(0, eq);
        std::string val = kv.substr(eq + 1);
        if (key == "tol") base.tol = parse_double(val, "plan tol");
        else if (key == "spo") base.shells_per_octave = static_cast<int>(parse_long(val, "plan spo"));
        else if (key == "nodes") base.nodes_per_shell = static_cast<int>(parse_long(val, "plan nodes"));
        else if (key == "sphere") base.sphere_order = static_cast<int>(parse_long(val, "plan sphere"));
        else if (key == "delta") base.inner_cutoff = parse_double(val, "plan delta");
        else if (key == "rmax") base.outer_radius = parse_double(val, "plan rmax");
        else if (key == "seed") base.mc_seed = static_cast<std::uint64_t>(parse_long(val, "plan seed"));
        else throw InputError("unknown plan key '" + key + "'");
    }
    base.validate();
    return base;
}

QuadraturePlan QuadraturePlan::parse(const std::string& text) { return parse(text, QuadraturePlan{}); }

std::string QuadraturePlan::describe() const {
    return "tol=" + format_number(tol) + ",spo=" + std::to_string(shells_per_octave) +
           ",nodes=" + std::to_string(nodes_per_shell) + ",sphere=" + std::to_string(sphere_order) +
           ",delta=" + format_number(inner_cutoff) + ",rmax=" + format_number(outer_radius) +
           ",seed=" + std::to_string(mc_seed);
}

std::vector<double> RadiusGrid::points() const {
    if (!(r_min > 0.0) || !(r_max >= r_min) || per_octave < 1) throw InputError("invalid radius grid");
    long count = std::lround(std::log2(r_max / r_min) * per_octave) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k)
        out.push_back(r_min * std::exp2(static_cast<double>(k) / per_octave));
    return out;
}

RadiusGrid RadiusGrid::refined(int factor) const {
    RadiusGrid g = *this;
    g.per_octave *= factor;
    return g;
}

}  // namespace hmorrey
