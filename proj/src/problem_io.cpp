#include "pscomb/problem_io.hpp"

#include <fstream>

namespace pscomb {

namespace {

using nlohmann::json;

Eigen::Vector3d vec3(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 3) throw ParameterError(std::string("expected 3 entries for '") + key + "'");
    return Eigen::Vector3d(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

Point vec2(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2) throw ParameterError(std::string("expected 2 entries for '") + key + "'");
    return Point(v[0].get<double>(), v[1].get<double>());
}

AnisotropyField anisotropy_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        const Eigen::Vector3d e = vec3(j, "entries");
        Eigen::Matrix2d a;
        a << e(0), e(1), e(1), e(2);
        return AnisotropyField::constant(a);
    }
    if (kind == "affine") return AnisotropyField::affine(vec3(j, "base"), vec3(j, "dx"), vec3(j, "dy"));
    if (kind == "radial_bump")
        return AnisotropyField::radial_bump(vec3(j, "base"), vec3(j, "amplitude"), vec2(j, "center"),
                                            j.at("radius").get<double>());
    if (kind == "grid_samples") {
        std::vector<Eigen::Vector3d> values;
        for (const auto& row : j.at("values")) {
            if (row.size() != 3) throw ParameterError("grid_samples anisotropy rows need 3 entries");
            values.emplace_back(row[0].get<double>(), row[1].get<double>(), row[2].get<double>());
        }
        return AnisotropyField::grid_samples(vec2(j, "origin"), j.at("spacing").get<double>(), j.at("nx").get<int>(),
                                             j.at("ny").get<int>(), std::move(values));
    }
    throw ParameterError("unknown anisotropy kind '" + kind + "'");
}

ForcingField forcing_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "constant") return ForcingField::constant(j.at("value").get<double>());
    if (kind == "affine") return ForcingField::affine(j.at("value").get<double>(), vec2(j, "gradient"));
    if (kind == "radial_bump")
        return ForcingField::radial_bump(j.at("base").get<double>(), j.at("amplitude").get<double>(),
                                         vec2(j, "center"), j.at("radius").get<double>());
    if (kind == "grid_samples")
        return ForcingField::grid_samples(vec2(j, "origin"), j.at("spacing").get<double>(), j.at("nx").get<int>(),
                                          j.at("ny").get<int>(), j.at("values").get<std::vector<double>>());
    throw ParameterError("unknown forcing kind '" + kind + "'");
}

}  // namespace

ProblemSpec problem_from_json(const json& j) {
    ProblemSpec spec;
    try {
        spec.exponents = ExponentPair::make(j.at("p").get<double>(), j.at("q").get<double>());
        std::vector<Rect> rects;
        for (const auto& r : j.at("domain")) {
            if (r.size() != 4) throw ParameterError("domain rectangles are [x0, y0, x1, y1]");
            rects.push_back(Rect{Point(r[0].get<double>(), r[1].get<double>()),
                                 Point(r[2].get<double>(), r[3].get<double>())});
        }
        spec.domain = Domain(std::move(rects));
        if (j.contains("h")) spec.h = j.at("h").get<double>();
        if (j.contains("anisotropy")) spec.anisotropy = anisotropy_from_json(j.at("anisotropy"));
        if (j.contains("forcing")) spec.forcing = forcing_from_json(j.at("forcing"));
    } catch (const json::exception& e) {
        throw ParameterError(std::string("malformed problem file: ") + e.what());
    }
    check_ellipticity(spec.anisotropy, spec.domain, 256);
    check_forcing(spec.forcing, spec.domain, 256);
    return spec;
}

ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open problem file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParameterError("cannot parse problem file '" + path + "': " + e.what());
    }
    return problem_from_json(j);
}

}  // namespace pscomb
