#include "qexp/errors.hpp"
#include "qexp/files.hpp"
#include "qexp/protocol.hpp"
#include "qexp/reduction.hpp"
#include "qexp/spectral.hpp"
#include "qexp/thermal.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using qexp::Json;

enum ExitCode { kOk = 0, kYesOrReject = 1, kInputError = 2, kViolated = 3 };

void emit(const Json &j) {
    std::cout << qexp::dump(j);
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// "0,0.5,1", "lin:a:b:n" or "log:a:b:n" (a > 0).
std::vector<double> parse_times(const std::string &spec) {
    auto fail = [&] { throw qexp::InvalidArgument("bad --times specification '" + spec + "'"); };
    std::vector<std::string> parts;
    const bool ranged = spec.rfind("lin:", 0) == 0 || spec.rfind("log:", 0) == 0;
    {
        std::stringstream ss(ranged ? spec.substr(4) : spec);
        std::string item;
        while (std::getline(ss, item, ranged ? ':' : ',')) {
            parts.push_back(item);
        }
    }
    std::vector<double> times;
    try {
        if (!ranged) {
            for (const auto &p : parts) {
                times.push_back(std::stod(p));
            }
            if (times.empty()) {
                fail();
            }
            return times;
        }
        if (parts.size() != 3) {
            fail();
        }
        const double a = std::stod(parts[0]);
        const double b = std::stod(parts[1]);
        const int n = std::stoi(parts[2]);
        if (n < 1 || !(b >= a)) {
            fail();
        }
        const bool log = spec[1] == 'o';
        if (log && !(a > 0.0)) {
            fail();
        }
        for (int k = 0; k < n; ++k) {
            const double f = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
            times.push_back(log ? a * std::pow(b / a, f) : a + (b - a) * f);
        }
    } catch (const std::logic_error &) {
        fail();
    }
    return times;
}

Json gap_json(const qexp::GapReport &r, const qexp::Channel &channel) {
    Json j = Json::object();
    j["command"] = "gap";
    j["qubits"] = channel.qubits();
    j["degree"] = channel.degree();
    j["kappa"] = r.kappa;
    j["gap"] = r.gap;
    j["method"] = std::string(qexp::to_string(r.method));
    j["iterations"] = r.iterations;
    j["residual"] = r.residual;
    j["converged"] = r.converged;
    return j;
}

struct GapArgs {
    std::string method = "auto";
    double tol = 1e-12;
    int max_iter = 100000;
    std::uint64_t seed = 0;
    std::size_t cap = qexp::kDefaultDenseCap;
};

qexp::GapReport run_gap(const qexp::Channel &channel, const GapArgs &args) {
    if (args.method == "dense") {
        return qexp::spectral_gap_dense(channel, args.cap);
    }
    const auto n2 = static_cast<std::size_t>(channel.dim()) * static_cast<std::size_t>(channel.dim());
    if (args.method == "iterative" || n2 > args.cap) {
        qexp::IterativeOptions opts;
        opts.tol = args.tol;
        opts.max_iter = args.max_iter;
        opts.seed = args.seed;
        return qexp::spectral_gap_iterative(channel, opts);
    }
    return qexp::spectral_gap_dense(channel, args.cap);
}

void add_gap_options(CLI::App *cmd, GapArgs &args) {
    cmd->add_option("--method", args.method, "dense, iterative or auto")
        ->check(CLI::IsMember({"auto", "dense", "iterative"}));
    cmd->add_option("--tol", args.tol, "iterative relative tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", args.max_iter, "iterative iteration limit")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", args.seed, "seed for the iterative start vectors");
    cmd->add_option("--dense-cap", args.cap, "largest N^2 handled densely");
}

int cmd_gap(const std::string &file, const GapArgs &args) {
    const qexp::ChannelFile cf = qexp::load_channel_file(file);
    const qexp::GapReport r = run_gap(cf.channel, args);
    emit(gap_json(r, cf.channel));
    return r.converged ? kOk : kViolated;
}

int cmd_decide(const std::string &file, const GapArgs &args) {
    const qexp::NonExpanderInstance inst = qexp::load_instance(file);
    const qexp::GapReport r = run_gap(inst.channel(), args);
    const qexp::Decision d = qexp::classify(r.kappa, inst.alpha(), inst.beta());
    Json j = Json::object();
    j["command"] = "decide";
    j["decision"] = std::string(qexp::to_string(d));
    j["kappa"] = r.kappa;
    j["alpha"] = inst.alpha();
    j["beta"] = inst.beta();
    j["method"] = std::string(qexp::to_string(r.method));
    j["converged"] = r.converged;
    emit(j);
    if (!r.converged) {
        return kViolated;
    }
    switch (d) {
    case qexp::Decision::yes:
        return kYesOrReject;
    case qexp::Decision::no:
        return kOk;
    default:
        return kViolated;
    }
}

int cmd_verify(const std::string &file, const std::string &witness, const std::string &shots_arg,
               std::uint64_t seed) {
    const qexp::NonExpanderInstance inst = qexp::load_instance(file);
    std::uint64_t shots = qexp::kExactShots;
    if (shots_arg == "auto") {
        shots = qexp::recommended_shots(inst.alpha(), inst.beta());
    } else if (shots_arg != "exact") {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(shots_arg, &used);
            if (used != shots_arg.size() || v < 1) {
                throw std::invalid_argument("");
            }
            shots = static_cast<std::uint64_t>(v);
        } catch (const std::logic_error &) {
            throw qexp::InvalidArgument("--shots must be a positive integer, 'exact' or 'auto'");
        }
    }
    const qexp::VectorizedState psi =
        witness == "auto" ? qexp::merlin_witness(inst.channel()) : qexp::load_witness(witness);
    if (psi.dim() != inst.channel().dim()) {
        throw qexp::DimensionError("witness dimension does not match the channel");
    }
    const qexp::VerifierOutcome out = qexp::arthur_verify(inst, psi, shots, seed);
    Json j = Json::object();
    j["command"] = "verify";
    j["accepted"] = out.accepted;
    j["estimated_contraction_sq"] = out.estimated_contraction_sq;
    j["orthogonality_passed"] = out.orthogonality_passed;
    j["samples_used"] = out.samples_used;
    j["confidence"] = out.confidence;
    j["standard_error"] = out.standard_error;
    j["threshold"] = out.threshold;
    if (shots == qexp::kExactShots) {
        j["shots_per_pair"] = "exact";
    } else {
        j["shots_per_pair"] = shots;
    }
    j["seed"] = seed;
    j["witness"] = witness == "auto" ? "auto" : "file";
    emit(j);
    return out.accepted ? kOk : kYesOrReject;
}

int cmd_reduce(const std::string &file, const std::string &out_file, bool relax) {
    qexp::ReductionSpecFile sf = qexp::load_reduction_spec(file);
    if (relax) {
        sf.spec.strict = false;
    }
    const qexp::Reduction red = qexp::build_reduction(sf.spec);
    Json channel = qexp::channel_to_json(red.channel);
    channel["alpha"] = red.thresholds.alpha;
    channel["beta"] = red.thresholds.beta;
    if (!out_file.empty()) {
        qexp::write_text_file(out_file, qexp::dump(channel));
    }
    Json j = Json::object();
    j["command"] = "reduce";
    j["qubits"] = red.channel.qubits();
    j["witness_qubits"] = sf.spec.layout.witness_qubits;
    j["ancilla_qubits"] = sf.spec.layout.ancilla_qubits;
    j["a"] = sf.spec.a;
    j["b"] = sf.spec.b;
    j["kappa_f"] = sf.spec.kappa_f;
    j["base_degree"] = red.base_degree;
    j["degree"] = red.channel.degree();
    j["alpha"] = red.thresholds.alpha;
    j["beta"] = red.thresholds.beta;
    j["strict"] = sf.spec.strict;
    j["synthesized"] = sf.synthesized.has_value();
    emit(j);
    return kOk;
}

int cmd_synth(int qubits, double target, std::uint64_t seed, int degree, const std::string &out_file) {
    if (qubits < 1 || qubits > qexp::kMaxSimulatedQubits) {
        throw qexp::InvalidArgument("--qubits must be between 1 and " + std::to_string(qexp::kMaxSimulatedQubits));
    }
    if (!(target > 0.0 && target < 1.0)) {
        throw qexp::InvalidArgument("--target-kappa must lie in (0, 1)");
    }
    if (degree < 2) {
        throw qexp::InvalidArgument("--degree must be at least 2");
    }
    const qexp::BaseExpander base = qexp::build_base_expander(qubits, target, degree, seed);
    if (!out_file.empty()) {
        Json channel = qexp::channel_to_json(base.channel);
        channel["certified_kappa"] = base.certified_kappa;
        qexp::write_text_file(out_file, qexp::dump(channel));
    }
    Json j = Json::object();
    j["command"] = "synth-expander";
    j["qubits"] = qubits;
    j["certified_kappa"] = base.certified_kappa;
    j["stage_kappa"] = base.stage_kappa;
    j["repetitions"] = base.repetitions;
    j["degree_per_stage"] = degree;
    j["degree"] = base.channel.degree();
    j["seed"] = base.seed;
    j["attempts"] = base.attempts;
    j["target_kappa"] = target;
    emit(j);
    return kOk;
}

int cmd_thermalize(const std::string &file, const std::string &rho0_arg, const std::string &times_arg,
                   const std::string &csv_file, const std::string &method) {
    const qexp::ThermalModel model = qexp::load_thermal_model(file);
    qexp::Operator rho0;
    if (rho0_arg == "pure-zero") {
        rho0 = qexp::Operator::Zero(model.dim(), model.dim());
        rho0(0, 0) = 1.0;
    } else {
        rho0 = qexp::load_density(rho0_arg);
    }
    qexp::EvolveOptions opts;
    if (method == "dense") {
        opts.method = qexp::EvolutionMethod::dense;
    } else if (method == "series") {
        opts.method = qexp::EvolutionMethod::series;
    }
    const std::vector<double> times = parse_times(times_arg);
    const qexp::DecayReport rep = qexp::decay_bound_check(model, rho0, times, opts);
    if (!csv_file.empty()) {
        std::string csv = "t,residual,bound\n";
        for (const auto &row : rep.rows) {
            csv += format_double(row.t) + "," + format_double(row.residual) + "," + format_double(row.bound) + "\n";
        }
        qexp::write_text_file(csv_file, csv);
    }
    Json rows = Json::array();
    for (const auto &row : rep.rows) {
        Json r = Json::object();
        r["t"] = row.t;
        r["residual"] = row.residual;
        r["bound"] = row.bound;
        rows.push_back(std::move(r));
    }
    Json j = Json::object();
    j["command"] = "thermalize";
    j["qubits"] = model.channel().qubits();
    j["rate"] = rep.rate;
    j["kappa"] = rep.kappa;
    j["adjoint_closed"] = model.adjoint_closed();
    j["worst_margin"] = rep.worst_margin;
    j["holds"] = rep.holds;
    j["rows"] = std::move(rows);
    emit(j);
    return rep.holds ? kOk : kViolated;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum expander toolkit"};
    app.require_subcommand(1);

    std::string input;
    GapArgs gap_args;
    auto *gap = app.add_subcommand("gap", "contraction coefficient and spectral gap of a channel");
    gap->add_option("instance", input, "instance or channel file")->required();
    add_gap_options(gap, gap_args);

    auto *decide = app.add_subcommand("decide", "decide a non-expander instance (exit 1 YES, 0 NO, 3 violated)");
    decide->add_option("instance", input, "instance file")->required();
    add_gap_options(decide, gap_args);

    std::string witness = "auto";
    std::string shots = "exact";
    std::uint64_t seed = 0;
    auto *verify = app.add_subcommand("verify", "run Arthur's verifier (exit 0 accept, 1 reject)");
    verify->add_option("instance", input, "instance file")->required();
    verify->add_option("--witness", witness, "witness file or 'auto'");
    verify->add_option("--shots", shots, "shots per Hadamard test: integer, 'exact' or 'auto'");
    verify->add_option("--seed", seed, "root seed");

    std::string out_file;
    bool relax = false;
    auto *reduce = app.add_subcommand("reduce", "build the channel for a verifier circuit");
    reduce->add_option("spec", input, "reduction spec file")->required();
    reduce->add_option("--out", out_file, "channel file to write");
    reduce->add_flag("--relax", relax, "skip the strict-mode constants (alpha > beta is still required)");

    int synth_qubits = 0;
    double target_kappa = 0.1;
    int degree = 4;
    auto *synth = app.add_subcommand("synth-expander", "synthesize and certify a base expander");
    synth->add_option("--qubits", synth_qubits, "number of qubits")->required();
    synth->add_option("--target-kappa", target_kappa, "certified contraction to reach");
    synth->add_option("--seed", seed, "root seed");
    synth->add_option("--degree", degree, "unitaries per stage");
    synth->add_option("--out", out_file, "channel file to write");

    std::string rho0 = "pure-zero";
    std::string times = "lin:0:1:11";
    std::string csv;
    std::string evolve_method = "auto";
    auto *thermal = app.add_subcommand("thermalize", "relaxation under the induced master equation");
    thermal->add_option("model", input, "thermal model file")->required();
    thermal->add_option("--rho0", rho0, "density matrix file or 'pure-zero'");
    thermal->add_option("--times", times, "t1,t2,... | lin:a:b:n | log:a:b:n");
    thermal->add_option("--csv", csv, "CSV file with columns t,residual,bound");
    thermal->add_option("--method", evolve_method, "auto, dense or series")
        ->check(CLI::IsMember({"auto", "dense", "series"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (gap->parsed()) {
            return cmd_gap(input, gap_args);
        }
        if (decide->parsed()) {
            return cmd_decide(input, gap_args);
        }
        if (verify->parsed()) {
            return cmd_verify(input, witness, shots, seed);
        }
        if (reduce->parsed()) {
            return cmd_reduce(input, out_file, relax);
        }
        if (synth->parsed()) {
            return cmd_synth(synth_qubits, target_kappa, seed, degree, out_file);
        }
        if (thermal->parsed()) {
            return cmd_thermalize(input, rho0, times, csv, evolve_method);
        }
    } catch (const qexp::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const qexp::InvalidArgument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const qexp::DimensionError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const qexp::CapExceeded &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const qexp::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kViolated;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
