#pragma once

#include <string>
#include <string_view>

#include "gammalim/errors.hpp"
#include "gammalim/mesh.hpp"
#include "json.hpp"

namespace gammalim::detail {

inline nlohmann::json parse_json(std::string_view text, const char* what) {
    try {
        return nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

inline Domain1D domain_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "torus") return Domain1D::torus();
    if (kind == "interval") return Domain1D::interval(j.at("a").get<double>(), j.at("b").get<double>());
    throw ConfigError("unknown domain kind `" + kind + "`");
}

inline nlohmann::json domain_to_json(const Domain1D& d) {
    if (d.is_torus()) return {{"kind", "torus"}};
    return {{"kind", "interval"}, {"a", d.left()}, {"b", d.right()}};
}

}  // namespace gammalim::detail
