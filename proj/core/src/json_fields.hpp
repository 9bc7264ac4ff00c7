#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>

#include <nlohmann/json.hpp>

#include "satent/error.hpp"

namespace satent::detail {

inline std::string join_path(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

inline void require_object(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
}

inline void reject_unknown(const nlohmann::json& j, const std::string& path,
                           std::initializer_list<const char*> allowed) {
    require_object(j, path);
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(join_path(path, key), "unknown key");
    }
}

template <class T>
void read_field(const nlohmann::json& j, const std::string& path, const char* key, T& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    const std::string p = join_path(path, key);
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(p, "expected a boolean");
        out = v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(p, "expected a string");
        out = v.get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError(p, "expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
            if (v.is_number_integer() && v.get<std::int64_t>() < 0) throw ConfigError(p, "expected a nonnegative integer");
        }
        out = v.get<T>();
    } else {
        if (!v.is_number()) throw ConfigError(p, "expected a number");
        out = v.get<T>();
    }
}

} // namespace satent::detail
