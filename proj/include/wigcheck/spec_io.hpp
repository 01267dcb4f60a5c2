#pragma once

// Distribution spec files: a JSON document with fields
//   modes, kind ("family" | "grid"), family/params (or a compact string
//   like "coherent(1,0.5)"), factors (product), s, amplitude,
//   grid { extent, samples, values | values_file + format }.
// Grid values are row-major reals, x outer / y inner per mode, axes
// spanning [-extent, extent] inclusive. The CLI also accepts a compact
// family string or an inline JSON object in place of a path.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wigcheck/phase_space.hpp"

namespace wigcheck {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// split "a,b,(c,d)" at top-level commas
inline std::vector<std::string> split_args(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

inline Family family_from_name(const std::string& name) {
    if (name == "vacuum") return Family::vacuum;
    if (name == "coherent") return Family::coherent;
    if (name == "fock") return Family::fock;
    if (name == "thermal") return Family::thermal;
    if (name == "gaussian") return Family::gaussian;
    if (name == "manko_fock1") return Family::manko_fock1;
    if (name == "two_mode_superposition") return Family::two_mode_superposition;
    if (name == "product") return Family::product;
    throw format_error("unknown family '" + name + "'");
}

} // namespace detail

// "coherent(1,0.5)", "vacuum", "product(thermal(0.5),coherent(1,0))", ...
inline DistributionSpec parse_family_string(const std::string& text, double s = 0.0) {
    const std::string t = detail::trim(text);
    const auto open = t.find('(');
    std::string name = t, args;
    if (open != std::string::npos) {
        if (t.back() != ')') throw format_error("family string '" + t + "': unbalanced parentheses");
        name = detail::trim(t.substr(0, open));
        args = t.substr(open + 1, t.size() - open - 2);
    }
    const Family fam = detail::family_from_name(name);
    if (fam == Family::product) {
        const auto parts = detail::split_args(args);
        if (parts.size() != 2) throw format_error("product takes exactly two factor specs");
        return make_family_spec(fam, {}, s, {parse_family_string(parts[0]), parse_family_string(parts[1])});
    }
    std::vector<double> params;
    for (const auto& a : detail::split_args(args)) {
        try {
            std::size_t pos = 0;
            params.push_back(std::stod(a, &pos));
            if (pos != a.size()) throw std::invalid_argument(a);
        } catch (const std::exception&) {
            throw format_error("family string '" + t + "': bad numeric parameter '" + a + "'");
        }
    }
    try {
        return make_family_spec(fam, std::move(params), s);
    } catch (const usage_error& e) {
        throw format_error(e.what());
    }
}

namespace detail {

inline std::vector<double> load_values_file(const std::filesystem::path& path, const std::string& format,
                                            std::size_t expected) {
    std::vector<double> v;
    v.reserve(expected);
    if (format == "text") {
        std::ifstream in(path);
        if (!in) throw format_error("cannot open values file " + path.string());
        double x;
        while (in >> x) v.push_back(x);
    } else if (format == "f64") {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw format_error("cannot open values file " + path.string());
        double x;
        while (in.read(reinterpret_cast<char*>(&x), sizeof x)) v.push_back(x);
    } else {
        throw format_error("unknown values format '" + format + "' (use text or f64)");
    }
    if (v.size() != expected)
        throw format_error("values file " + path.string() + " holds " + std::to_string(v.size()) +
                           " samples, expected " + std::to_string(expected));
    return v;
}

inline DistributionSpec spec_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

inline DistributionSpec family_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    const double s = j.value("s", 0.0);
    const double amplitude = j.value("amplitude", 1.0);
    DistributionSpec spec;
    const std::string fam_text = j.at("family").get<std::string>();
    if (fam_text.find('(') != std::string::npos) {
        spec = parse_family_string(fam_text, s);
    } else {
        const Family fam = family_from_name(fam_text);
        std::vector<DistributionSpec> factors;
        if (j.contains("factors"))
            for (const auto& f : j.at("factors")) factors.push_back(spec_from_json(f, base_dir));
        std::vector<double> params;
        if (j.contains("params")) params = j.at("params").get<std::vector<double>>();
        try {
            spec = make_family_spec(fam, std::move(params), s, std::move(factors));
        } catch (const usage_error& e) {
            throw format_error(e.what());
        }
    }
    spec.amplitude = amplitude;
    return spec;
}

inline DistributionSpec grid_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    const double s = j.value("s", 0.0);
    const auto& g = j.at("grid");
    const auto extent = g.at("extent").get<std::vector<double>>();
    const auto samples = g.at("samples").get<std::vector<int>>();
    const int modes = j.value("modes", extent.size() == 4 ? 2 : 1);
    const std::size_t n_axes = modes == 1 ? 2 : 4;
    if (extent.size() != n_axes || samples.size() != n_axes)
        throw format_error("grid: expected " + std::to_string(n_axes) + " extent and sample entries");

    std::size_t expected = 1;
    for (std::size_t k = 0; k < n_axes; ++k) expected *= static_cast<std::size_t>(samples[k]);

    std::vector<double> values;
    if (g.contains("values")) {
        values = g.at("values").get<std::vector<double>>();
        if (values.size() != expected)
            throw format_error("grid: got " + std::to_string(values.size()) + " values, expected " +
                               std::to_string(expected));
    } else if (g.contains("values_file")) {
        values = load_values_file(base_dir / g.at("values_file").get<std::string>(), g.value("format", "text"),
                                  expected);
    } else {
        throw format_error("grid: values or values_file required");
    }

    try {
        if (modes == 1) {
            Grid2D<double> grid({extent[0], samples[0]}, {extent[1], samples[1]}, std::move(values));
            DistributionSpec spec = make_grid_spec(std::move(grid), s);
            spec.amplitude = j.value("amplitude", 1.0);
            return spec;
        }
        Grid4D<double> grid({Axis{extent[0], samples[0]}, Axis{extent[1], samples[1]}, Axis{extent[2], samples[2]},
                             Axis{extent[3], samples[3]}},
                            std::move(values));
        DistributionSpec spec = make_grid_spec(std::move(grid), s);
        spec.amplitude = j.value("amplitude", 1.0);
        return spec;
    } catch (const usage_error& e) {
        throw format_error(e.what());
    } catch (const std::invalid_argument& e) {
        throw format_error(e.what());
    }
}

inline DistributionSpec spec_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    const std::string kind = j.value("kind", j.contains("grid") ? "grid" : "family");
    if (kind == "family" || kind == "analytic-family" || kind == "analytic") return family_from_json(j, base_dir);
    if (kind == "grid") return grid_from_json(j, base_dir);
    throw format_error("unknown spec kind '" + kind + "'");
}

} // namespace detail

inline DistributionSpec load_spec_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot open spec file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw format_error("spec file " + path.string() + ": " + e.what());
    }
    try {
        return detail::spec_from_json(j, path.parent_path());
    } catch (const nlohmann::json::exception& e) {
        throw format_error("spec file " + path.string() + ": " + e.what());
    }
}

// Resolve a CLI input: inline JSON object, existing file path, or compact
// family string.
inline DistributionSpec resolve_spec(const std::string& input) {
    const std::string t = detail::trim(input);
    if (!t.empty() && t.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(t);
        } catch (const nlohmann::json::exception& e) {
            throw format_error(std::string("inline spec: ") + e.what());
        }
        try {
            return detail::spec_from_json(j, std::filesystem::current_path());
        } catch (const nlohmann::json::exception& e) {
            throw format_error(std::string("inline spec: ") + e.what());
        }
    }
    std::error_code ec;
    if (std::filesystem::exists(t, ec)) return load_spec_file(t);
    return parse_family_string(t);
}

} // namespace wigcheck
