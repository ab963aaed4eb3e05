#include "levyscale/model_io.hpp"
#include "levyscale/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace levyscale {

namespace {

using nlohmann::ordered_json;

double require_number(const ordered_json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ValidationError(std::string("missing or non-numeric field '") + key + "'");
    return j.at(key).get<double>();
}

std::vector<double> require_vector(const ordered_json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw ValidationError(std::string("missing or non-array field '") + key + "'");
    std::vector<double> v;
    for (const auto& e : j.at(key)) {
        if (!e.is_number())
            throw ValidationError(std::string("non-numeric entry in '") + key + "'");
        v.push_back(e.get<double>());
    }
    return v;
}

Hyperexponential parse_hyperexponential(const ordered_json& j) {
    Hyperexponential h;
    h.lambda = require_number(j, "lambda");
    if (j.contains("pairs")) {
        if (!j.at("pairs").is_array())
            throw ValidationError("'pairs' must be an array of {weight, rate} objects");
        std::vector<std::pair<double, double>> pairs; // (rate, weight)
        for (const auto& p : j.at("pairs"))
            pairs.emplace_back(require_number(p, "rate"), require_number(p, "weight"));
        std::sort(pairs.begin(), pairs.end());
        for (const auto& [r, w] : pairs) {
            h.rates.push_back(r);
            h.weights.push_back(w);
        }
    } else {
        h.weights = require_vector(j, "weights");
        h.rates = require_vector(j, "rates");
        if (h.weights.size() != h.rates.size())
            throw ValidationError("weights and rates must have equal length");
        std::vector<std::size_t> idx(h.rates.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return h.rates[a] < h.rates[b]; });
        Hyperexponential sorted;
        sorted.lambda = h.lambda;
        for (std::size_t i : idx) {
            sorted.rates.push_back(h.rates[i]);
            sorted.weights.push_back(h.weights[i]);
        }
        h = std::move(sorted);
    }
    return h;
}

PhaseType parse_phase_type(const ordered_json& j) {
    PhaseType p;
    p.lambda = require_number(j, "lambda");
    p.alpha = require_vector(j, "alpha");
    if (!j.contains("T") || !j.at("T").is_array())
        throw ValidationError("missing or non-array field 'T'");
    for (const auto& row : j.at("T")) {
        std::vector<double> r;
        for (const auto& e : row) {
            if (!e.is_number()) throw ValidationError("non-numeric entry in 'T'");
            r.push_back(e.get<double>());
        }
        p.T.push_back(std::move(r));
    }
    return p;
}

} // namespace

SpectralModel model_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("model document must be a JSON object");

    SpectralModel m;
    m.sigma = require_number(j, "sigma");
    m.drift = require_number(j, "drift");
    if (!j.contains("jumps") || !j.at("jumps").is_object())
        throw ValidationError("missing 'jumps' object");
    const auto& jj = j.at("jumps");
    if (!jj.contains("type") || !jj.at("type").is_string())
        throw ValidationError("jump block needs a string 'type'");
    const std::string type = jj.at("type").get<std::string>();

    if (type == "hyperexponential") {
        m.jumps = parse_hyperexponential(jj);
    } else if (type == "phase_type") {
        m.jumps = parse_phase_type(jj);
    } else if (type == "beta_family") {
        BetaFamily b;
        b.c = require_number(jj, "c");
        b.alpha = require_number(jj, "alpha");
        b.beta = require_number(jj, "beta");
        b.shape = require_number(jj, "shape");
        m.jumps = b;
    } else if (type == "cgmy") {
        CgmyTarget c;
        c.c = require_number(jj, "c");
        c.alpha = require_number(jj, "alpha");
        c.shape = require_number(jj, "shape");
        m.jumps = c;
    } else {
        throw ValidationError("unknown jump type '" + type + "'");
    }
    validate(m);
    return m;
}

SpectralModel model_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

std::string model_to_json(const SpectralModel& m) {
    ordered_json j;
    j["sigma"] = m.sigma;
    j["drift"] = m.drift;
    ordered_json jj;
    std::visit(
        [&](const auto& x) {
            using J = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<J, Hyperexponential>) {
                jj["type"] = "hyperexponential";
                jj["lambda"] = x.lambda;
                jj["weights"] = x.weights;
                jj["rates"] = x.rates;
            } else if constexpr (std::is_same_v<J, PhaseType>) {
                jj["type"] = "phase_type";
                jj["lambda"] = x.lambda;
                jj["alpha"] = x.alpha;
                jj["T"] = x.T;
            } else if constexpr (std::is_same_v<J, BetaFamily>) {
                jj["type"] = "beta_family";
                jj["c"] = x.c;
                jj["alpha"] = x.alpha;
                jj["beta"] = x.beta;
                jj["shape"] = x.shape;
            } else {
                jj["type"] = "cgmy";
                jj["c"] = x.c;
                jj["alpha"] = x.alpha;
                jj["shape"] = x.shape;
            }
        },
        m.jumps);
    j["jumps"] = jj;
    return j.dump(2);
}

} // namespace levyscale
