// Command-line front end: Monte-Carlo sweeps, bound tables, single-trial
// traces and the Doppler window table. Artifacts are written into an output
// directory as CSV/JSON; exit code 0 on success, 2 for configuration or
// usage problems, 3 for runtime failures.

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snrml/config.h"
#include "snrml/crlb.h"
#include "snrml/errors.h"
#include "snrml/format.h"
#include "snrml/harness.h"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw snrml::IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw snrml::IoError("cannot create output directory '" + dir + "'");
    std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw snrml::IoError("cannot write '" + path + "'");
    out << content;
    if (!out) throw snrml::IoError("short write to '" + path + "'");
    std::cout << "wrote " << path << "\n";
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

struct SweepArgs {
    std::string config_path;
    std::string out_dir = ".";
    int trials = 0;
    std::string estimators;
    int antennas = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int cmd_sweep(const SweepArgs& a) {
    auto cfg = snrml::config_from_json(read_file(a.config_path));
    if (a.trials > 0) cfg.trials = a.trials;
    if (a.seed_set) cfg.seed = a.seed;
    if (!a.estimators.empty()) cfg.estimators = split_csv(a.estimators);
    if (a.antennas > 0) cfg.n_r = a.antennas;

    auto curve = snrml::run_sweep(cfg);
    write_file(a.out_dir, "sweep.csv", snrml::curve_to_csv(curve));
    write_file(a.out_dir, "sweep.json", snrml::curve_to_json(curve));
    for (const auto& note : curve.notes) std::cout << "note: " << note << "\n";
    for (const auto& pt : curve.points)
        if (pt.failed)
            std::cout << "warning: point gamma_db=" << snrml::dtoa(pt.gamma_db) << " estimator="
                      << pt.estimator << " had " << pt.errors << " errored trials (flagged)\n";
    return 0;
}

struct CrlbArgs {
    std::string rho_list;
    int n = 112;
    int n_r = 0;
    std::string out_dir = ".";
};

int cmd_crlb(const CrlbArgs& a) {
    if (a.n_r <= 0) throw snrml::ConfigError("crlb: --n-r must be a positive antenna count");
    auto rho_items = split_csv(a.rho_list);
    if (rho_items.empty()) throw snrml::ConfigError("crlb: --rho list is empty");

    std::string csv = "rho,closed_form,fim\n";
    for (const auto& item : rho_items) {
        double rho = 0.0;
        try {
            rho = std::stod(item);
        } catch (const std::exception&) {
            throw snrml::ConfigError("crlb: bad rho value '" + item + "'");
        }
        auto closed = snrml::crlb_da(rho, a.n, a.n_r);

        // Flat channel at the requested SNR with unit-modulus symbols, so
        // the information-matrix route is evaluated at exactly rho.
        double sigma2 = 0.5;
        std::vector<std::complex<double>> symbols(a.n, {1.0, 0.0});
        std::vector<std::complex<double>> h(static_cast<std::size_t>(a.n_r) * a.n,
                                            {std::sqrt(rho), 0.0});
        double fim = rho == 0.0 ? 0.0 : snrml::crlb_via_fim(h, a.n_r, symbols, sigma2)[0].bound;

        csv += snrml::dtoa(rho);
        csv += ',';
        csv += snrml::dtoa(closed.bound);
        csv += ',';
        csv += snrml::dtoa(fim);
        csv += '\n';
    }
    write_file(a.out_dir, "crlb.csv", csv);
    return 0;
}

struct TraceArgs {
    std::string config_path;
    double gamma_db = 20.0;
    std::string estimator = "completely-DA";
    std::string out_dir = ".";
};

int cmd_trace(const TraceArgs& a) {
    auto cfg = snrml::config_from_json(read_file(a.config_path));
    auto tr = snrml::run_trace(cfg, a.gamma_db, a.estimator);
    write_file(a.out_dir, "trace.json", snrml::trace_to_json(tr));
    for (std::size_t w = 0; w < tr.llf_traces.size(); ++w) {
        const auto& llf = tr.llf_traces[w];
        for (std::size_t k = 0; k + 1 < llf.size(); ++k)
            if (llf[k] - llf[k + 1] > 1e-8)
                std::cout << "warning: window " << w << " likelihood decreased at pass " << k + 1
                          << "\n";
    }
    std::cout << "rho_hat[antenna " << tr.config.report_antenna
              << "] = " << snrml::dtoa(tr.rho_hat[tr.config.report_antenna - 1])
              << " (true " << snrml::dtoa(tr.rho_true[tr.config.report_antenna - 1]) << ")\n";
    return 0;
}

int cmd_table1(double fdts, bool fdts_set) {
    std::cout << "row fdts_max nbar_da nbar_nda order_da order_nda\n";
    for (const auto& row : snrml::doppler_window_table()) {
        std::cout << row.row_index << " "
                  << (std::isinf(row.fdts_max) ? std::string("inf") : snrml::dtoa(row.fdts_max))
                  << " " << row.nbar_da << " " << row.nbar_nda << " " << row.order_da << " "
                  << row.order_nda << "\n";
    }
    if (fdts_set) {
        auto row = snrml::table1_config(fdts);
        std::cout << "selected row " << row.row_index << " for fdts=" << snrml::dtoa(fdts) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"instantaneous SNR estimation over time-varying SIMO channels"};
    app.require_subcommand(1);

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo NMSE sweep over an SNR grid");
    sweep->add_option("--config", sweep_args.config_path, "experiment config JSON")->required();
    sweep->add_option("--out", sweep_args.out_dir, "output directory");
    sweep->add_option("--trials", sweep_args.trials, "override trials per point");
    auto* seed_opt = sweep->add_option("--seed", sweep_args.seed, "override base seed");
    sweep->add_option("--estimators", sweep_args.estimators, "comma-separated estimator set");
    sweep->add_option("--antennas", sweep_args.antennas, "override antenna count");

    CrlbArgs crlb_args;
    auto* crlb = app.add_subcommand("crlb", "known-symbol bound, closed form and information matrix");
    crlb->add_option("--rho", crlb_args.rho_list, "comma-separated SNR values (linear)")->required();
    crlb->add_option("--n", crlb_args.n, "frame length");
    crlb->add_option("--n-r", crlb_args.n_r, "antenna count")->required();
    crlb->add_option("--out", crlb_args.out_dir, "output directory");

    TraceArgs trace_args;
    auto* trace = app.add_subcommand("trace", "single-trial diagnostic dump");
    trace->add_option("--config", trace_args.config_path, "experiment config JSON")->required();
    trace->add_option("--gamma-db", trace_args.gamma_db, "SNR point in dB")->required();
    trace->add_option("--estimator", trace_args.estimator, "estimator name")->required();
    trace->add_option("--out", trace_args.out_dir, "output directory");

    double fdts = 0.0;
    auto* table1 = app.add_subcommand("table1", "Doppler-indexed window size table");
    auto* fdts_opt = table1->add_option("--fdts", fdts, "normalized Doppler to resolve");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    sweep_args.seed_set = seed_opt->count() > 0;

    try {
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (crlb->parsed()) return cmd_crlb(crlb_args);
        if (trace->parsed()) return cmd_trace(trace_args);
        if (table1->parsed()) return cmd_table1(fdts, fdts_opt->count() > 0);
    } catch (const snrml::ConfigError& e) {
        std::cerr << "{\"error\":\"config\",\"message\":\"" << e.what() << "\"}\n";
        return 2;
    } catch (const snrml::IoError& e) {
        std::cerr << "{\"error\":\"io\",\"message\":\"" << e.what() << "\"}\n";
        return 2;
    } catch (const snrml::Error& e) {
        std::cerr << "{\"error\":\"runtime\",\"message\":\"" << e.what() << "\"}\n";
        return 3;
    }
    return 0;
}
