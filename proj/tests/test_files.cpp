#include "qexp/errors.hpp"
#include "qexp/files.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace qexp;

namespace {

const std::filesystem::path kData = QEXP_DATA_DIR;

JsonDocument doc(const std::string &text) {
    return JsonDocument::parse(text, "test.json", kData / "instances");
}

}  // namespace

TEST(Files, CorpusInstancesLoad) {
    EXPECT_EQ(load_instance(kData / "instances/depolarizer.json").channel().degree(), 4u);
    const NonExpanderInstance iz = load_instance(kData / "instances/iz.json");
    EXPECT_DOUBLE_EQ(iz.alpha(), 0.9);
    EXPECT_EQ(decide(iz), Decision::yes);
    EXPECT_EQ(load_instance(kData / "instances/clifford_t.json").channel().qubits(), 2);
    EXPECT_EQ(load_instance(kData / "instances/from_circuit_files.json").channel().qubits(), 4);
}

TEST(Files, MalformedInstanceLocatesNonUnitaryMatrix) {
    try {
        load_instance(kData / "instances/malformed.json");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_EQ(e.column(), 5u);
    }
}

TEST(Files, InstanceErrors) {
    EXPECT_THROW(instance_from_json(doc(R"({"qubits": 1, "kraus": [{"matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}],
        "alpha": 0.4, "beta": 0.5})")),
                 ParseError);
    EXPECT_THROW(instance_from_json(doc(R"({"qubits": 1, "kraus": [{"matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}],
        "beta": 0.5})")),
                 ParseError);
    EXPECT_THROW(channel_file_from_json(doc(R"({"qubits": 2, "kraus": [{"matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}]})")),
                 ParseError);
    EXPECT_THROW(channel_file_from_json(doc(R"({"qubits": 1, "kraus": ["missing.json"]})")), ParseError);
    EXPECT_THROW(channel_file_from_json(doc(R"({"qubits": 1, "kraus": [{"matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}],
        "weights": [0.5]})")),
                 ParseError);
    EXPECT_THROW(channel_file_from_json(doc(R"({"qubits": 1, "kraus": [], "extra": 1})")), ParseError);
}

TEST(Files, WeightsAndLayers) {
    const ChannelFile f = channel_file_from_json(doc(R"({"qubits": 1, "layers": [
        {"kraus": [{"circuit": {"qubits": 1, "gates": [{"kind": "X", "targets": [0]}]}},
                   {"matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}], "weights": [0.25, 0.75]},
        {"kraus": [{"circuit": {"qubits": 1, "gates": [{"kind": "Z", "targets": [0]}]}}]}]})"));
    EXPECT_EQ(f.channel.layers().size(), 2u);
    EXPECT_DOUBLE_EQ(f.channel.layers()[0][0].weight, 0.25);
    EXPECT_FALSE(f.alpha.has_value());
}

TEST(Files, ChannelRoundTrip) {
    const NonExpanderInstance inst = load_instance(kData / "instances/clifford_t.json");
    Json j = channel_to_json(inst.channel());
    const ChannelFile back = channel_file_from_json(JsonDocument::parse(dump(j)));
    const Matrix a = Matrix::Random(4, 4);
    EXPECT_EQ((back.channel.apply(a) - inst.channel().apply(a)).norm(), 0.0);
    EXPECT_EQ(dump(channel_to_json(back.channel)), dump(j));
}

TEST(Files, ReductionSpecs) {
    const ReductionSpecFile s = load_reduction_spec(kData / "specs/toy_no_w2a2.json");
    EXPECT_EQ(s.spec.layout.witness_qubits, 2);
    EXPECT_TRUE(s.synthesized.has_value());
    EXPECT_LE(s.spec.kappa_f, 0.1);
    EXPECT_TRUE(s.spec.strict);
    for (const char *name : {"toy_yes_w2a2", "noisy_yes_w2a2", "noisy_no_w2a2", "toy_yes_w1a1", "toy_no_w1a1"}) {
        EXPECT_NO_THROW(load_reduction_spec(kData / "specs" / (std::string(name) + ".json"))) << name;
    }
}

TEST(Files, ReductionSpecErrors) {
    const auto bad = [](const std::string &text) {
        return reduction_spec_from_json(JsonDocument::parse(text, "spec.json", kData / "specs"));
    };
    EXPECT_THROW(bad(R"({"verifier": "../circuits/toy_no_w2a2.json", "witness_qubits": 1, "ancilla_qubits": 2,
        "a": 1, "b": 0, "base_expander": {"synthesize": {}}})"),
                 ParseError);
    EXPECT_THROW(bad(R"({"verifier": "../circuits/toy_no_w2a2.json", "witness_qubits": 2, "ancilla_qubits": 2,
        "a": 1, "b": 0, "base_expander": {}})"),
                 ParseError);
}

TEST(Files, ThermalModels) {
    const ThermalModel m = load_thermal_model(kData / "models/depolarizer.json");
    EXPECT_DOUBLE_EQ(m.rate(), 4.0);
    EXPECT_TRUE(load_thermal_model(kData / "models/mixing_pair.json").adjoint_closed());
    EXPECT_THROW(thermal_model_from_json(doc(R"({"qubits": 1, "unitaries": [{"matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}],
        "R0": -1, "R1": 1})")),
                 ParseError);
}

TEST(Files, WitnessAndDensity) {
    const VectorizedState w = load_witness(kData / "instances/witness_sigma_z.json");
    EXPECT_NEAR(w.norm(), 1.0, 1e-15);
    const VectorizedState m = witness_from_json(doc(R"({"matrix": [[[0,0],[2,0]],[[2,0],[0,0]]]})"));
    EXPECT_NEAR(m.norm(), 1.0, 1e-15);
    EXPECT_THROW(witness_from_json(doc(R"({"amplitudes": [[1,0],[1,0],[0,0],[0,0]]})")), ParseError);
    const Operator rho = load_density(kData / "models/rho0_plus.json");
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-15);
}
