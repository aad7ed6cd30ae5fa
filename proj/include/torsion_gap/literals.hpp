#ifndef TORSION_GAP_LITERALS_HPP
#define TORSION_GAP_LITERALS_HPP

// Text forms of domains and holes used by the CLI and config files:
//   disk:R=1            ellipse:a=2,b=1          star:c0=1,c2=0.1,s3=0.02
//   hole:x=0,y=0,eps=1e-4   (the "hole:" prefix is optional)
// Every domain literal also accepts an optional center x=..,y=..

#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "torsion_gap/errors.hpp"
#include "torsion_gap/geometry.hpp"

namespace torsion_gap {

/// Shortest decimal that parses back to exactly `v`.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    std::string out(buf, res.ptr);
    // to_chars pads the exponent to two digits; "1e-04" -> "1e-4"
    if (const auto e = out.find('e'); e != std::string::npos) {
        std::size_t d = e + 1;
        if (d < out.size() && (out[d] == '-' || out[d] == '+')) ++d;
        while (d + 1 < out.size() && out[d] == '0') out.erase(d, 1);
        if (out[e + 1] == '+') out.erase(e + 1, 1);
    }
    return out;
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    // from_chars rejects a leading '+'
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("not a number: '" + std::string(s) + "'");
    return v;
}

struct HoleSpec {
    Point center{0.0, 0.0};
    double eps = 0.0;
};

namespace detail {

inline std::map<std::string, double> parse_key_values(std::string_view body, std::string_view what) {
    std::map<std::string, double> kv;
    while (!body.empty()) {
        const auto comma = body.find(',');
        const std::string_view item = body.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0)
            throw ConfigError("malformed " + std::string(what) + " item '" + std::string(item) + "'");
        const std::string key(item.substr(0, eq));
        if (kv.count(key)) throw ConfigError("duplicate key '" + key + "'");
        kv[key] = parse_double(item.substr(eq + 1));
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
    }
    return kv;
}

inline double take(std::map<std::string, double>& kv, const std::string& key, double fallback, bool required) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
        if (required) throw ConfigError("missing key '" + key + "'");
        return fallback;
    }
    const double v = it->second;
    kv.erase(it);
    return v;
}

inline void reject_leftovers(const std::map<std::string, double>& kv) {
    if (!kv.empty()) throw ConfigError("unknown key '" + kv.begin()->first + "'");
}

inline std::string center_suffix(const Point& c) {
    if (c.x() == 0.0 && c.y() == 0.0) return {};
    return ",x=" + format_double(c.x()) + ",y=" + format_double(c.y());
}

}  // namespace detail

inline Domain parse_domain(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ConfigError("domain literal needs 'kind:params'");
    const std::string_view kind = text.substr(0, colon);
    auto kv = detail::parse_key_values(text.substr(colon + 1), "domain");
    const Point center(detail::take(kv, "x", 0.0, false), detail::take(kv, "y", 0.0, false));

    if (kind == "disk") {
        const double r = detail::take(kv, "R", 0.0, true);
        detail::reject_leftovers(kv);
        return Domain::disk(r, center);
    }
    if (kind == "ellipse") {
        const double a = detail::take(kv, "a", 0.0, true);
        const double b = detail::take(kv, "b", 0.0, true);
        detail::reject_leftovers(kv);
        return Domain::ellipse(a, b, center);
    }
    if (kind == "star") {
        std::vector<double> cs{detail::take(kv, "c0", 0.0, true)};
        std::vector<double> ss{0.0};
        for (const auto& [key, value] : kv) {
            if (key.size() < 2 || (key[0] != 'c' && key[0] != 's'))
                throw ConfigError("unknown star key '" + key + "'");
            std::size_t k = 0;
            const auto res = std::from_chars(key.data() + 1, key.data() + key.size(), k);
            if (res.ec != std::errc{} || res.ptr != key.data() + key.size() || k == 0)
                throw ConfigError("unknown star key '" + key + "'");
            auto& coeffs = key[0] == 'c' ? cs : ss;
            if (coeffs.size() <= k) coeffs.resize(k + 1, 0.0);
            coeffs[k] = value;
        }
        return Domain::star(std::move(cs), std::move(ss), center);
    }
    throw ConfigError("unknown domain kind '" + std::string(kind) + "'");
}

inline std::string format_domain(const Domain& d) {
    return std::visit(
        [](const auto& s) -> std::string {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Disk>) {
                return "disk:R=" + format_double(s.radius) + detail::center_suffix(s.center);
            } else if constexpr (std::is_same_v<S, Ellipse>) {
                return "ellipse:a=" + format_double(s.a) + ",b=" + format_double(s.b) +
                       detail::center_suffix(s.center);
            } else {
                std::string out = "star:c0=" + format_double(s.cos_coeffs[0]);
                const std::size_t n = std::max(s.cos_coeffs.size(), s.sin_coeffs.size());
                for (std::size_t k = 1; k < n; ++k) {
                    if (k < s.cos_coeffs.size() && s.cos_coeffs[k] != 0.0)
                        out += ",c" + std::to_string(k) + "=" + format_double(s.cos_coeffs[k]);
                    if (k < s.sin_coeffs.size() && s.sin_coeffs[k] != 0.0)
                        out += ",s" + std::to_string(k) + "=" + format_double(s.sin_coeffs[k]);
                }
                return out + detail::center_suffix(s.center);
            }
        },
        d.shape());
}

inline HoleSpec parse_hole(std::string_view text) {
    if (text.substr(0, 5) == "hole:") text.remove_prefix(5);
    auto kv = detail::parse_key_values(text, "hole");
    HoleSpec h;
    h.center = Point(detail::take(kv, "x", 0.0, false), detail::take(kv, "y", 0.0, false));
    h.eps = detail::take(kv, "eps", 0.0, true);
    detail::reject_leftovers(kv);
    if (!(h.eps > 0.0)) throw ConfigError("hole eps must be positive");
    return h;
}

inline std::string format_hole(const HoleSpec& h) {
    return "hole:x=" + format_double(h.center.x()) + ",y=" + format_double(h.center.y()) +
           ",eps=" + format_double(h.eps);
}

}  // namespace torsion_gap

#endif  // TORSION_GAP_LITERALS_HPP
