#include "hbell/state_io.hpp"

#include "hbell/error.hpp"
#include "hbell/format.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hbell {

namespace {

constexpr std::string_view kModule = "state-io";

}  // namespace

std::string state_to_json(const CoefficientVector& v, const std::string& provenance) {
    std::ostringstream os;
    os << "{\n  \"cutoff\": " << v.cutoff() << ",\n  \"coefficients\": [";
    for (std::size_t n = 0; n < v.size(); ++n) {
        os << (n == 0 ? "" : ", ") << format_number(v[n], 17);
    }
    os << "],\n  \"normalized\": " << (v.normalized() ? "true" : "false") << ",\n  \"provenance\": "
       << nlohmann::json(provenance).dump() << "\n}\n";
    return os.str();
}

StateFile state_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(kModule, std::string("malformed state file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("coefficients") || !j["coefficients"].is_array()) {
        throw Error(kModule, "state file needs a \"coefficients\" array");
    }
    std::vector<double> c;
    for (const auto& x : j["coefficients"]) {
        if (!x.is_number()) throw Error(kModule, "coefficients must be numbers");
        c.push_back(x.get<double>());
    }
    if (c.empty()) throw Error(kModule, "state file has no coefficients");
    if (j.contains("cutoff") && j["cutoff"].get<long long>() != static_cast<long long>(c.size()) - 1) {
        throw Error(kModule, "cutoff does not match the number of coefficients");
    }
    CoefficientVector v(std::move(c));
    if (j.value("normalized", false) && !v.normalized()) {
        throw Error(kModule, "state file marked normalized but the squared norm is off by more than 1e-10");
    }
    return {std::move(v), j.value("provenance", std::string{})};
}

void write_state_file(const std::string& path, const CoefficientVector& v, const std::string& provenance) {
    write_text(path, state_to_json(v, provenance));
}

StateFile read_state_file(const std::string& path) { return state_from_json(read_text(path)); }

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(kModule, "cannot open '" + path + "' for writing");
    f << text;
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(kModule, "cannot open '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace hbell
