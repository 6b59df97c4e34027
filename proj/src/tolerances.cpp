#include "witnesskit/tolerances.hpp"

#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>

namespace wk {

namespace {

Tolerances g_tol;
bool g_loaded = false;

std::map<std::string, double Tolerances::*> field_map() {
    return {
        {"hermiticity", &Tolerances::hermiticity},
        {"density_hermiticity", &Tolerances::density_hermiticity},
        {"entry_hermiticity", &Tolerances::entry_hermiticity},
        {"trace_one", &Tolerances::trace_one},
        {"psd_floor", &Tolerances::psd_floor},
        {"basis_pair", &Tolerances::basis_pair},
        {"reconstruct", &Tolerances::reconstruct},
        {"orthonormal", &Tolerances::orthonormal},
        {"zero_weight", &Tolerances::zero_weight},
        {"seesaw_improve", &Tolerances::seesaw_improve},
        {"detection_margin", &Tolerances::detection_margin},
        {"local_average", &Tolerances::local_average},
    };
}

double parse_number(const std::string& s) {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) {
        throw std::invalid_argument("WITNESSKIT_TOL: bad number '" + s + "'");
    }
    return v;
}

}  // namespace

void apply_tolerance_overrides(Tolerances& t, const char* text) {
    if (text == nullptr || *text == '\0') {
        return;
    }
    std::string s(text);
    if (s.find('=') == std::string::npos) {
        t.detection_margin = parse_number(s);
        return;
    }
    auto fields = field_map();
    size_t start = 0;
    while (start <= s.size()) {
        size_t comma = s.find(',', start);
        std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty()) {
            size_t eq = item.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("WITNESSKIT_TOL: expected name=value in '" + item + "'");
            }
            std::string name = item.substr(0, eq);
            auto it = fields.find(name);
            if (it == fields.end()) {
                throw std::invalid_argument("WITNESSKIT_TOL: unknown tolerance '" + name + "'");
            }
            t.*(it->second) = parse_number(item.substr(eq + 1));
        }
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
}

const Tolerances& tol() {
    if (!g_loaded) {
        reload_tolerances();
    }
    return g_tol;
}

void reload_tolerances() {
    Tolerances fresh;
    apply_tolerance_overrides(fresh, std::getenv("WITNESSKIT_TOL"));
    g_tol = fresh;
    g_loaded = true;
}

}  // namespace wk
