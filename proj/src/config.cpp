#include "snrml/config.h"

#include <json.hpp>

#include "snrml/errors.h"

namespace snrml {

namespace {

using json = nlohmann::ordered_json;

template <typename T>
void read_field(const json& j, const char* key, T& into) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        into = it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config field '") + key + "' has the wrong type");
    }
}

json complex_array(const std::vector<std::complex<double>>& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(json::array({z.real(), z.imag()}));
    return out;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    static const char* known[] = {
        "modulation", "n", "n_p", "n_r", "fdts", "channel", "oscillator_count",
        "poly_window", "poly_order", "nbar_da", "nbar_nda", "order_da", "order_nda",
        "gamma_db", "trials", "estimators", "seed", "report_antenna",
        "em_max_iterations", "em_tolerance", "em_unweighted_gram", "em_fresh_noise",
        "keep_samples",
    };
    for (const auto& item : j.items()) {
        bool found = false;
        for (const char* k : known)
            if (item.key() == k) { found = true; break; }
        if (!found) throw ConfigError("unknown config key '" + item.key() + "'");
    }

    ExperimentConfig cfg;
    read_field(j, "modulation", cfg.modulation);
    read_field(j, "n", cfg.n);
    read_field(j, "n_p", cfg.n_p);
    read_field(j, "n_r", cfg.n_r);
    read_field(j, "fdts", cfg.fdts);
    read_field(j, "channel", cfg.channel);
    read_field(j, "oscillator_count", cfg.oscillator_count);
    read_field(j, "poly_window", cfg.poly_window);
    read_field(j, "poly_order", cfg.poly_order);
    read_field(j, "nbar_da", cfg.nbar_da);
    read_field(j, "nbar_nda", cfg.nbar_nda);
    read_field(j, "order_da", cfg.order_da);
    read_field(j, "order_nda", cfg.order_nda);
    read_field(j, "gamma_db", cfg.gamma_db);
    read_field(j, "trials", cfg.trials);
    read_field(j, "estimators", cfg.estimators);
    read_field(j, "seed", cfg.seed);
    read_field(j, "report_antenna", cfg.report_antenna);
    read_field(j, "em_max_iterations", cfg.em_max_iterations);
    read_field(j, "em_tolerance", cfg.em_tolerance);
    read_field(j, "em_unweighted_gram", cfg.em_unweighted_gram);
    read_field(j, "em_fresh_noise", cfg.em_fresh_noise);
    read_field(j, "keep_samples", cfg.keep_samples);
    return cfg;
}

namespace {

json config_json(const ExperimentConfig& cfg) {
    json j;
    j["modulation"] = cfg.modulation;
    j["n"] = cfg.n;
    j["n_p"] = cfg.n_p;
    j["n_r"] = cfg.n_r;
    j["fdts"] = cfg.fdts;
    j["channel"] = cfg.channel;
    j["oscillator_count"] = cfg.oscillator_count;
    j["poly_window"] = cfg.poly_window;
    j["poly_order"] = cfg.poly_order;
    j["nbar_da"] = cfg.nbar_da;
    j["nbar_nda"] = cfg.nbar_nda;
    j["order_da"] = cfg.order_da;
    j["order_nda"] = cfg.order_nda;
    j["gamma_db"] = cfg.gamma_db;
    j["trials"] = cfg.trials;
    j["estimators"] = cfg.estimators;
    j["seed"] = cfg.seed;
    j["report_antenna"] = cfg.report_antenna;
    j["em_max_iterations"] = cfg.em_max_iterations;
    j["em_tolerance"] = cfg.em_tolerance;
    j["em_unweighted_gram"] = cfg.em_unweighted_gram;
    j["em_fresh_noise"] = cfg.em_fresh_noise;
    j["keep_samples"] = cfg.keep_samples;
    return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2); }

std::string curve_to_json(const NmseCurve& curve) {
    json j;
    j["config"] = config_json(curve.config);
    j["notes"] = curve.notes;
    json pts = json::array();
    for (const auto& pt : curve.points) {
        json p;
        p["gamma_db"] = pt.gamma_db;
        p["estimator"] = pt.estimator;
        p["nmse"] = pt.nmse;
        p["stderr"] = pt.stderr_;
        p["ncrlb"] = pt.ncrlb;
        p["trials"] = pt.trials;
        p["errors"] = pt.errors;
        p["failed"] = pt.failed;
        p["monotonicity_violations"] = pt.monotonicity_violations;
        pts.push_back(std::move(p));
    }
    j["points"] = std::move(pts);
    return j.dump(2);
}

std::string trace_to_json(const TraceResult& trace) {
    json j;
    j["config"] = config_json(trace.config);
    j["gamma_db"] = trace.gamma_db;
    j["estimator"] = trace.estimator;
    j["sigma2_true"] = trace.sigma2_true;
    j["sigma2_hat"] = trace.sigma2_hat;
    j["rho_true"] = trace.rho_true;
    j["rho_hat"] = trace.rho_hat;
    j["true_symbol_indices"] = trace.true_symbol_indices;
    j["h_true"] = complex_array(trace.h_true);
    j["h_hat"] = complex_array(trace.h_hat);
    j["llf_traces"] = trace.llf_traces;
    j["sigma2_traces"] = trace.sigma2_traces;
    j["iterations"] = trace.iterations;
    j["soft_symbols"] = complex_array(trace.soft_symbols);
    j["hard_symbols"] = trace.hard_symbols;
    return j.dump(2);
}

}  // namespace snrml
