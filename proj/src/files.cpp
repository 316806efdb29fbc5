#include "qexp/files.hpp"

#include "qexp/circuit_io.hpp"
#include "qexp/errors.hpp"

#include <cmath>
#include <numeric>

namespace qexp {

namespace {

UnitaryMatrix unitary_entry(const JsonDocument &doc, const JsonPath &path, int qubits) {
    const Json &node = doc.at(path);
    Matrix m;
    if (node.is_string() || (node.is_object() && node.contains("file"))) {
        const JsonPath p = node.is_string() ? path : path / "file";
        const std::filesystem::path file = doc.base_dir() / doc.get_string(p);
        GateCircuit circuit = [&] {
            try {
                return load_circuit(file);
            } catch (const ParseError &) {
                throw;
            } catch (const Error &e) {
                doc.fail(p, e.what());
            }
        }();
        if (circuit.num_qubits() != qubits) {
            doc.fail(p, "circuit acts on " + std::to_string(circuit.num_qubits()) + " qubits, expected " +
                            std::to_string(qubits));
        }
        m = simulate_unitary(circuit).matrix();
    } else if (node.is_object() && node.contains("circuit")) {
        doc.check_keys(path, {"circuit"});
        const GateCircuit circuit = circuit_from_json(doc, path / "circuit");
        if (circuit.num_qubits() != qubits) {
            doc.fail(path / "circuit" / "qubits", "circuit acts on " + std::to_string(circuit.num_qubits()) +
                                                      " qubits, expected " + std::to_string(qubits));
        }
        m = simulate_unitary(circuit).matrix();
    } else if (node.is_object() && node.contains("matrix")) {
        doc.check_keys(path, {"matrix"});
        m = doc.get_matrix(path / "matrix");
        const Eigen::Index dim = Eigen::Index{1} << qubits;
        if (m.rows() != dim || m.cols() != dim) {
            doc.fail(path / "matrix", "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
        }
    } else {
        doc.fail(path, "expected a circuit path, {\"file\"}, {\"circuit\"} or {\"matrix\"}");
    }
    try {
        return UnitaryMatrix(std::move(m));
    } catch (const Error &e) {
        doc.fail(path, e.what());
    }
}

std::vector<UnitaryMatrix> unitary_list(const JsonDocument &doc, const JsonPath &path, int qubits) {
    const Json &node = doc.at(path);
    if (!node.is_array() || node.empty()) {
        doc.fail(path, "expected a nonempty array");
    }
    std::vector<UnitaryMatrix> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        out.push_back(unitary_entry(doc, path / i, qubits));
    }
    return out;
}

KrausLayer layer_from_json(const JsonDocument &doc, const JsonPath &path, int qubits) {
    const std::vector<UnitaryMatrix> unitaries = unitary_list(doc, path / "kraus", qubits);
    std::vector<double> weights;
    if (doc.has(path / "weights")) {
        weights = doc.get_double_list(path / "weights");
        if (weights.size() != unitaries.size()) {
            doc.fail(path / "weights", "expected " + std::to_string(unitaries.size()) + " weights");
        }
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (!(weights[i] >= 0.0)) {
                doc.fail(path / "weights" / i, "weights must be nonnegative");
            }
        }
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        if (std::abs(total - 1.0) > 1e-9) {
            doc.fail(path / "weights", "weights must sum to 1");
        }
    } else {
        weights.assign(unitaries.size(), 1.0 / static_cast<double>(unitaries.size()));
    }
    KrausLayer layer;
    for (std::size_t i = 0; i < unitaries.size(); ++i) {
        layer.push_back({weights[i], unitaries[i]});
    }
    return normalize_weights(std::move(layer));
}

std::optional<double> optional_double(const JsonDocument &doc, const JsonPath &path) {
    if (!doc.has(path)) {
        return std::nullopt;
    }
    return doc.get_double(path);
}

int qubit_count(const JsonDocument &doc, const JsonPath &path, int max_qubits = kMaxSimulatedQubits) {
    const int qubits = doc.get_int(path);
    if (qubits < 1 || qubits > max_qubits) {
        doc.fail(path, "qubit count must be between 1 and " + std::to_string(max_qubits));
    }
    return qubits;
}

}  // namespace

ChannelFile channel_file_from_json(const JsonDocument &doc) {
    doc.check_keys({}, {"qubits", "kraus", "weights", "layers", "alpha", "beta", "separation", "certified_kappa",
                        "description"});
    const int qubits = qubit_count(doc, {"qubits"});
    std::vector<KrausLayer> layers;
    if (doc.has({"layers"})) {
        if (doc.has({"kraus"}) || doc.has({"weights"})) {
            doc.fail({"layers"}, "give either \"layers\" or \"kraus\", not both");
        }
        const Json &node = doc.at({"layers"});
        if (!node.is_array() || node.empty()) {
            doc.fail({"layers"}, "expected a nonempty array of layers");
        }
        for (std::size_t i = 0; i < node.size(); ++i) {
            const JsonPath lp = JsonPath{"layers"} / i;
            doc.check_keys(lp, {"kraus", "weights"});
            layers.push_back(layer_from_json(doc, lp, qubits));
        }
    } else {
        layers.push_back(layer_from_json(doc, {}, qubits));
    }
    ChannelFile out{Channel(std::move(layers)), optional_double(doc, {"alpha"}), optional_double(doc, {"beta"}),
                    optional_double(doc, {"separation"}), optional_double(doc, {"certified_kappa"})};
    return out;
}

ChannelFile load_channel_file(const std::filesystem::path &file) {
    return channel_file_from_json(JsonDocument::load(file));
}

NonExpanderInstance instance_from_json(const JsonDocument &doc) {
    ChannelFile file = channel_file_from_json(doc);
    const double alpha = doc.get_double({"alpha"});
    const double beta = doc.get_double({"beta"});
    try {
        return NonExpanderInstance(std::move(file.channel), alpha, beta, file.separation);
    } catch (const InvalidArgument &e) {
        doc.fail(file.separation ? JsonPath{"separation"} : JsonPath{"alpha"}, e.what());
    }
}

NonExpanderInstance load_instance(const std::filesystem::path &file) {
    return instance_from_json(JsonDocument::load(file));
}

Json channel_to_json(const Channel &channel) {
    Json j = Json::object();
    j["qubits"] = channel.qubits();
    Json layers = Json::array();
    for (const auto &layer : channel.layers()) {
        Json weights = Json::array();
        Json kraus = Json::array();
        for (const auto &term : layer) {
            weights.push_back(term.weight);
            Json entry = Json::object();
            entry["matrix"] = matrix_to_json(term.unitary.matrix());
            kraus.push_back(std::move(entry));
        }
        Json l = Json::object();
        l["kraus"] = std::move(kraus);
        l["weights"] = std::move(weights);
        layers.push_back(std::move(l));
    }
    j["layers"] = std::move(layers);
    return j;
}

ReductionSpecFile reduction_spec_from_json(const JsonDocument &doc) {
    doc.check_keys({}, {"verifier", "witness_qubits", "ancilla_qubits", "a", "b", "strict", "base_expander",
                        "description"});
    const int n_w = doc.get_int({"witness_qubits"});
    const int n_a = doc.get_int({"ancilla_qubits"});
    if (n_w < 1) {
        doc.fail({"witness_qubits"}, "need at least one witness qubit");
    }
    if (n_a < 0) {
        doc.fail({"ancilla_qubits"}, "ancilla count must be nonnegative");
    }
    if (n_w + n_a + 1 > kMaxSimulatedQubits) {
        doc.fail({"ancilla_qubits"}, "layout exceeds " + std::to_string(kMaxSimulatedQubits) + " qubits");
    }
    const RegisterLayout layout(n_w, n_a);

    const JsonPath vp{"verifier"};
    const Json &vnode = doc.at(vp);
    GateCircuit verifier = [&] {
        if (vnode.is_string()) {
            try {
                return load_circuit(doc.base_dir() / vnode.get<std::string>());
            } catch (const ParseError &) {
                throw;
            } catch (const Error &e) {
                doc.fail(vp, e.what());
            }
        }
        if (vnode.is_object()) {
            return circuit_from_json(doc, vp);
        }
        doc.fail(vp, "expected a circuit path or an inline circuit");
    }();
    if (verifier.num_qubits() != layout.verifier_qubits()) {
        doc.fail(vp, "verifier acts on " + std::to_string(verifier.num_qubits()) + " qubits, layout needs " +
                         std::to_string(layout.verifier_qubits()));
    }

    const double a = doc.get_double({"a"});
    const double b = doc.get_double({"b"});
    const bool strict = doc.has({"strict"}) ? doc.get_bool({"strict"}) : true;

    const JsonPath bp{"base_expander"};
    std::optional<BaseExpander> synthesized;
    std::optional<Channel> base;
    double kappa_f = 1.0;
    if (doc.has(bp / "file")) {
        doc.check_keys(bp, {"file"});
        const std::filesystem::path file = doc.base_dir() / doc.get_string(bp / "file");
        ChannelFile cf = [&] {
            try {
                return load_channel_file(file);
            } catch (const ParseError &) {
                throw;
            } catch (const Error &e) {
                doc.fail(bp / "file", e.what());
            }
        }();
        if (cf.channel.qubits() != layout.verifier_qubits()) {
            doc.fail(bp / "file", "base expander must act on the " + std::to_string(layout.verifier_qubits()) +
                                      " witness+ancilla qubits");
        }
        kappa_f = cf.certified_kappa ? *cf.certified_kappa : spectral_gap(cf.channel).kappa;
        base = std::move(cf.channel);
    } else if (doc.has(bp / "synthesize")) {
        doc.check_keys(bp, {"synthesize"});
        const JsonPath sp = bp / "synthesize";
        doc.check_keys(sp, {"degree_per_stage", "seed", "target_kappa"});
        const int degree = doc.has(sp / "degree_per_stage") ? doc.get_int(sp / "degree_per_stage") : 4;
        const double target = doc.has(sp / "target_kappa") ? doc.get_double(sp / "target_kappa") : 0.1;
        const std::uint64_t seed = doc.has(sp / "seed") ? static_cast<std::uint64_t>(doc.get_int(sp / "seed")) : 0;
        if (degree < 2) {
            doc.fail(sp / "degree_per_stage", "need at least two unitaries per stage");
        }
        if (!(target > 0.0 && target < 1.0)) {
            doc.fail(sp / "target_kappa", "target kappa must lie in (0, 1)");
        }
        synthesized = build_base_expander(layout.verifier_qubits(), target, degree, seed);
        kappa_f = synthesized->certified_kappa;
        base = synthesized->channel;
    } else {
        doc.fail(bp, "expected {\"file\": ...} or {\"synthesize\": {...}}");
    }

    ReductionSpecFile out{ReductionSpec{std::move(verifier), layout, a, b, std::move(*base), kappa_f, strict},
                          std::move(synthesized)};
    return out;
}

ReductionSpecFile load_reduction_spec(const std::filesystem::path &file) {
    return reduction_spec_from_json(JsonDocument::load(file));
}

ThermalModel thermal_model_from_json(const JsonDocument &doc) {
    doc.check_keys({}, {"qubits", "unitaries", "R0", "R1", "description"});
    const int qubits = qubit_count(doc, {"qubits"});
    std::vector<UnitaryMatrix> unitaries = unitary_list(doc, {"unitaries"}, qubits);
    const double r0 = doc.get_double({"R0"});
    const double r1 = doc.get_double({"R1"});
    if (!(r0 > 0.0)) {
        doc.fail({"R0"}, "rate must be positive");
    }
    if (!(r1 > 0.0)) {
        doc.fail({"R1"}, "rate must be positive");
    }
    return ThermalModel(std::move(unitaries), r0, r1);
}

ThermalModel load_thermal_model(const std::filesystem::path &file) {
    return thermal_model_from_json(JsonDocument::load(file));
}

VectorizedState witness_from_json(const JsonDocument &doc) {
    doc.check_keys({}, {"amplitudes", "matrix", "description"});
    if (doc.has({"amplitudes"})) {
        if (doc.has({"matrix"})) {
            doc.fail({"matrix"}, "give either \"amplitudes\" or \"matrix\", not both");
        }
        const Vector amps = doc.get_complex_vector({"amplitudes"});
        const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(amps.size()))));
        if (n * n != amps.size() || !is_power_of_two(static_cast<std::uint64_t>(n))) {
            doc.fail({"amplitudes"}, "length must be N^2 for a power of two N");
        }
        if (std::abs(amps.norm() - 1.0) > 1e-9) {
            doc.fail({"amplitudes"}, "witness must have unit norm");
        }
        return VectorizedState(amps);
    }
    const Matrix m = doc.get_matrix({"matrix"});
    if (m.rows() != m.cols() || !is_power_of_two(static_cast<std::uint64_t>(m.rows()))) {
        doc.fail({"matrix"}, "expected a square matrix of power-of-two size");
    }
    if (m.norm() == 0.0) {
        doc.fail({"matrix"}, "witness operator must be nonzero");
    }
    return vec(m).normalized();
}

VectorizedState load_witness(const std::filesystem::path &file) {
    return witness_from_json(JsonDocument::load(file));
}

Operator density_from_json(const JsonDocument &doc) {
    doc.check_keys({}, {"matrix", "description"});
    const Matrix m = doc.get_matrix({"matrix"});
    if (m.rows() != m.cols()) {
        doc.fail({"matrix"}, "expected a square matrix");
    }
    return m;
}

Operator load_density(const std::filesystem::path &file) {
    return density_from_json(JsonDocument::load(file));
}

}  // namespace qexp
