#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "belldisc/optics.hpp"
#include "belldisc/optimizer.hpp"
#include "belldisc/states.hpp"

namespace belldisc::io {

using Json = nlohmann::ordered_json;

/// 15 significant digits, '.' decimal separator (C locale semantics).
inline std::string fmt_g15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument(std::string(what) +
                                    ": complex values must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Json state_to_json(const TwoPhotonState& s) {
    Json j;
    j["alpha13"] = complex_to_json(s.amp(1, 3));
    j["alpha14"] = complex_to_json(s.amp(1, 4));
    j["alpha23"] = complex_to_json(s.amp(2, 3));
    j["alpha24"] = complex_to_json(s.amp(2, 4));
    return j;
}

inline TwoPhotonState state_from_json(const Json& j) {
    for (const char* key : {"alpha13", "alpha14", "alpha23", "alpha24"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("state JSON: missing \"") + key + "\"");
    TwoPhotonState s(complex_from_json(j["alpha13"], "alpha13"),
                     complex_from_json(j["alpha14"], "alpha14"),
                     complex_from_json(j["alpha23"], "alpha23"),
                     complex_from_json(j["alpha24"], "alpha24"));
    s.require_normalized("state JSON");
    return s;
}

inline Json family_to_json(const BellLikeFamily& f) {
    Json j;
    j["alpha1"] = complex_to_json(f.alpha1());
    j["beta1"] = complex_to_json(f.beta1());
    j["alpha2"] = complex_to_json(f.alpha2());
    j["beta2"] = complex_to_json(f.beta2());
    return j;
}

/// Accepts either the complex form {"alpha1":[re,im],...} or the real
/// form {"theta1": x, "theta2": y} (radians).
inline BellLikeFamily family_from_json(const Json& j) {
    if (j.contains("theta1") || j.contains("theta2")) {
        if (!j.contains("theta1") || !j.contains("theta2"))
            throw std::invalid_argument("family JSON: need both theta1 and theta2");
        return BellLikeFamily::from_angles(j["theta1"].get<double>(),
                                           j["theta2"].get<double>());
    }
    for (const char* key : {"alpha1", "beta1", "alpha2", "beta2"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("family JSON: missing \"") + key + "\"");
    return BellLikeFamily(complex_from_json(j["alpha1"], "alpha1"),
                          complex_from_json(j["beta1"], "beta1"),
                          complex_from_json(j["alpha2"], "alpha2"),
                          complex_from_json(j["beta2"], "beta2"));
}

/// Row-major entries as [re, im] pairs plus the dimension.
inline Json unitary_to_json(const ModeUnitary& u) {
    Json j;
    j["dim"] = u.dim();
    Json entries = Json::array();
    for (int r = 0; r < u.dim(); ++r)
        for (int c = 0; c < u.dim(); ++c)
            entries.push_back(complex_to_json(u.matrix()(r, c)));
    j["entries"] = entries;
    return j;
}

inline ModeUnitary unitary_from_json(const Json& j) {
    if (!j.contains("dim") || !j.contains("entries"))
        throw std::invalid_argument("unitary JSON: need \"dim\" and \"entries\"");
    const int dim = j["dim"].get<int>();
    if (dim < 4 || dim > 8)
        throw std::invalid_argument("unitary JSON: dim must lie in 4..8");
    const auto& entries = j["entries"];
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(dim * dim))
        throw std::invalid_argument("unitary JSON: entries must hold dim*dim pairs");
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            m(r, c) = complex_from_json(entries[static_cast<std::size_t>(r * dim + c)],
                                        "unitary entry");
    return ModeUnitary::checked(std::move(m));
}

inline Json params_to_json(const NetworkParams& p) {
    Json j;
    j["angles"] = p.angles;
    j["phases"] = p.phases;
    return j;
}

inline NetworkParams params_from_json(const Json& j) {
    if (!j.contains("angles") || !j.contains("phases"))
        throw std::invalid_argument("params JSON: need \"angles\" and \"phases\"");
    NetworkParams p;
    const auto& a = j["angles"];
    const auto& ph = j["phases"];
    if (!a.is_array() || a.size() != 6 || !ph.is_array() || ph.size() != 6)
        throw std::invalid_argument("params JSON: angles and phases must hold 6 values");
    for (std::size_t i = 0; i < 6; ++i) {
        p.angles[i] = a[i].get<double>();
        p.phases[i] = ph[i].get<double>();
    }
    return p;
}

inline Json optimization_result_to_json(const OptimizationResult& r) {
    Json j;
    j["best_success"] = r.best_success;
    j["best_params"] = params_to_json(r.best_params);
    j["seed"] = r.seed;
    j["evaluations"] = r.evaluations;
    j["converged"] = r.converged;
    return j;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    Json j;
    in >> j;
    return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);  // keep LF endings everywhere
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << text;
}

}  // namespace belldisc::io
