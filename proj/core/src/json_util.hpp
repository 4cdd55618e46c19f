#pragma once

#include <string>

#include "decoupler/error.hpp"
#include "json.hpp"

namespace decoupler::detail {

using nlohmann::json;

inline json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::ParseError, e.what());
    }
}

inline const json& field(const json& j, const char* name, const std::string& where) {
    if (!j.is_object()) throw Error(Errc::ParseError, where + " must be an object");
    auto it = j.find(name);
    if (it == j.end()) throw Error(Errc::ParseError, "missing field '" + std::string(name) + "' in " + where);
    return *it;
}

template <class T>
T get_as(const json& j, const std::string& what) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, "bad value for '" + what + "': " + e.what());
    }
}

template <class T>
T field_as(const json& j, const char* name, const std::string& where) {
    return get_as<T>(field(j, name, where), name);
}

}  // namespace decoupler::detail
