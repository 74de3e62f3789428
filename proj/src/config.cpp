#include "qimpc/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace qimpc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("config error: " + msg);
}

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail("section '" + section + "' must be an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.contains(key)) {
            fail("unknown key '" + key + "' in '" + section + "'");
        }
    }
}

template <typename T>
void get_if_present(const json& obj, const char* key, T& out) {
    if (auto it = obj.find(key); it != obj.end()) {
        out = it->get<T>();
    }
}

template <typename T>
void get_optional(const json& obj, const char* key, std::optional<T>& out) {
    if (auto it = obj.find(key); it != obj.end()) {
        if (it->is_null()) {
            out = std::nullopt;
        } else {
            out = it->get<T>();
        }
    }
}

// ---- enum <-> string tables ----------------------------------------------

const char* plant_kind_name(PlantKind k) {
    switch (k) {
        case PlantKind::TargetTrack: return "target_track";
        case PlantKind::Building: return "building";
        case PlantKind::Vehicle: return "vehicle";
        case PlantKind::SimplePendulum: return "simple_pendulum";
        case PlantKind::DoublePendulum: return "double_pendulum";
    }
    return "?";
}

const char* encoder_kind_name(EncoderKind k) {
    switch (k) {
        case EncoderKind::RotationTriple: return "rotation_triple";
        case EncoderKind::HadamardRY: return "hadamard_ry";
        case EncoderKind::AngleRY: return "angle_ry";
    }
    return "?";
}

const char* entanglement_name(Entanglement e) {
    return e == Entanglement::Linear ? "linear" : "ring";
}

const char* rot_order_name(RotOrder r) {
    return r == RotOrder::ZYZ ? "zyz" : "zyx";
}

const char* loss_kind_name(LossKind k) {
    switch (k) {
        case LossKind::MseToTarget: return "mse_to_target";
        case LossKind::AlgorithmOne: return "algorithm_one";
        case LossKind::Building: return "building";
        case LossKind::Vehicle: return "vehicle";
        case LossKind::DoublePendulum: return "double_pendulum";
    }
    return "?";
}

const char* mode_name(MpcConfig::Mode m) {
    return m == MpcConfig::Mode::Online ? "online" : "lookahead";
}

template <typename E>
E parse_enum(const std::string& text, const char* what,
             std::initializer_list<std::pair<const char*, E>> table) {
    for (const auto& [name, value] : table) {
        if (text == name) return value;
    }
    fail(std::string("unknown ") + what + " '" + text + "'");
}

// ---- sections -------------------------------------------------------------

json plant_to_json(const Plant& p) {
    json j;
    j["kind"] = plant_kind_name(p.kind);
    switch (p.kind) {
        case PlantKind::TargetTrack: {
            const auto& q = std::get<TargetTrackParams>(p.params);
            j["alpha"] = q.alpha;
            j["dim"] = q.dim;
            break;
        }
        case PlantKind::Building: {
            const auto& q = std::get<BuildingParams>(p.params);
            j["R"] = q.R;
            j["C"] = q.C;
            j["T_out"] = q.T_out;
            j["Q_solar"] = q.Q_solar;
            j["Q_occ"] = q.Q_occ;
            j["dt"] = q.dt;
            j["P_max"] = q.P_max;
            j["n_rooms"] = q.n_rooms;
            break;
        }
        case PlantKind::Vehicle: {
            const auto& q = std::get<VehicleParams>(p.params);
            j["m"] = q.m;
            j["L"] = q.L;
            j["C_d"] = q.C_d;
            j["rho"] = q.rho;
            j["A"] = q.A;
            j["C_r"] = q.C_r;
            j["g"] = q.g;
            j["kappa"] = q.kappa;
            j["dt"] = q.dt;
            break;
        }
        case PlantKind::SimplePendulum: {
            const auto& q = std::get<SimplePendulumParams>(p.params);
            j["m"] = q.m;
            j["l"] = q.l;
            j["g"] = q.g;
            j["dt"] = q.dt;
            j["wrap_angles"] = q.wrap_angles;
            break;
        }
        case PlantKind::DoublePendulum: {
            const auto& q = std::get<DoublePendulumParams>(p.params);
            j["m1"] = q.m1;
            j["m2"] = q.m2;
            j["l1"] = q.l1;
            j["l2"] = q.l2;
            j["g"] = q.g;
            j["dt"] = q.dt;
            j["wrap_angles"] = q.wrap_angles;
            break;
        }
    }
    return j;
}

Plant plant_from_json(const json& j, const Plant& base) {
    Plant out = base;
    std::string kind = plant_kind_name(base.kind);
    get_if_present(j, "kind", kind);
    const PlantKind pk = parse_enum<PlantKind>(
        kind, "plant kind",
        {{"target_track", PlantKind::TargetTrack},
         {"building", PlantKind::Building},
         {"vehicle", PlantKind::Vehicle},
         {"simple_pendulum", PlantKind::SimplePendulum},
         {"double_pendulum", PlantKind::DoublePendulum}});
    if (pk != base.kind) {
        // switching kinds resets params to that kind's defaults
        switch (pk) {
            case PlantKind::TargetTrack: out = make_plant(TargetTrackParams{}); break;
            case PlantKind::Building: out = make_plant(BuildingParams{}); break;
            case PlantKind::Vehicle: out = make_plant(VehicleParams{}); break;
            case PlantKind::SimplePendulum:
                out = make_plant(SimplePendulumParams{});
                break;
            case PlantKind::DoublePendulum:
                out = make_plant(DoublePendulumParams{});
                break;
        }
    }
    switch (pk) {
        case PlantKind::TargetTrack: {
            check_keys(j, "plant", {"kind", "alpha", "dim"});
            auto q = std::get<TargetTrackParams>(out.params);
            get_if_present(j, "alpha", q.alpha);
            get_if_present(j, "dim", q.dim);
            out.params = q;
            break;
        }
        case PlantKind::Building: {
            check_keys(j, "plant",
                       {"kind", "R", "C", "T_out", "Q_solar", "Q_occ", "dt",
                        "P_max", "n_rooms"});
            auto q = std::get<BuildingParams>(out.params);
            get_if_present(j, "R", q.R);
            get_if_present(j, "C", q.C);
            get_if_present(j, "T_out", q.T_out);
            get_if_present(j, "Q_solar", q.Q_solar);
            get_if_present(j, "Q_occ", q.Q_occ);
            get_if_present(j, "dt", q.dt);
            get_if_present(j, "P_max", q.P_max);
            get_if_present(j, "n_rooms", q.n_rooms);
            out.params = q;
            break;
        }
        case PlantKind::Vehicle: {
            check_keys(j, "plant",
                       {"kind", "m", "L", "C_d", "rho", "A", "C_r", "g", "kappa",
                        "dt"});
            auto q = std::get<VehicleParams>(out.params);
            get_if_present(j, "m", q.m);
            get_if_present(j, "L", q.L);
            get_if_present(j, "C_d", q.C_d);
            get_if_present(j, "rho", q.rho);
            get_if_present(j, "A", q.A);
            get_if_present(j, "C_r", q.C_r);
            get_if_present(j, "g", q.g);
            get_if_present(j, "kappa", q.kappa);
            get_if_present(j, "dt", q.dt);
            out.params = q;
            break;
        }
        case PlantKind::SimplePendulum: {
            check_keys(j, "plant", {"kind", "m", "l", "g", "dt", "wrap_angles"});
            auto q = std::get<SimplePendulumParams>(out.params);
            get_if_present(j, "m", q.m);
            get_if_present(j, "l", q.l);
            get_if_present(j, "g", q.g);
            get_if_present(j, "dt", q.dt);
            get_if_present(j, "wrap_angles", q.wrap_angles);
            out.params = q;
            break;
        }
        case PlantKind::DoublePendulum: {
            check_keys(j, "plant",
                       {"kind", "m1", "m2", "l1", "l2", "g", "dt", "wrap_angles"});
            auto q = std::get<DoublePendulumParams>(out.params);
            get_if_present(j, "m1", q.m1);
            get_if_present(j, "m2", q.m2);
            get_if_present(j, "l1", q.l1);
            get_if_present(j, "l2", q.l2);
            get_if_present(j, "g", q.g);
            get_if_present(j, "dt", q.dt);
            get_if_present(j, "wrap_angles", q.wrap_angles);
            out.params = q;
            break;
        }
    }
    out.kind = pk;
    return out;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"target-tracking", "building", "vehicle", "pendulum",
            "double-pendulum"};
}

bool is_preset_name(const std::string& name) {
    for (const auto& n : preset_names()) {
        if (n == name) return true;
    }
    return false;
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig cfg;
    cfg.experiment = name;
    cfg.seeds = {0, 1, 2, 3, 4};
    cfg.optimizer = SgdConfig{0.1, 0.01, 1.0, 0.85, 0.5};
    if (name == "target-tracking") {
        cfg.plant = make_plant(TargetTrackParams{0.1, 3});
        cfg.policy.encoder = {EncoderKind::RotationTriple, {0, 1, 2}};
        cfg.policy.ansatz = {10, 2, Entanglement::Ring, RotOrder::ZYZ};
        cfg.policy.head = {{0, 1, 2}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}};
        cfg.loss = {LossKind::MseToTarget, {0.0, 0.0, 0.0}, {}};
        cfg.mpc.total_steps = 50;
        cfg.mpc.u_min = {-1.0, -1.0, -1.0};
        cfg.mpc.u_max = {1.0, 1.0, 1.0};
        cfg.x0 = {0.8, -0.5, 0.3};  // repository-chosen start
        return cfg;
    }
    if (name == "building") {
        cfg.plant = make_plant(BuildingParams{0.5, 1.0, 15.0, 5.0, 3.0, 0.1,
                                              10.0, 3});
        cfg.policy.encoder = {EncoderKind::RotationTriple, {0, 1, 2}};
        cfg.policy.ansatz = {6, 2, Entanglement::Ring, RotOrder::ZYZ};
        cfg.policy.head = {{0, 1, 2}, {5.0, 5.0, 5.0}, {5.0, 5.0, 5.0}};
        cfg.loss = {LossKind::Building, {22.0, 22.0, 22.0}, {0.01, 0.005}};
        cfg.mpc.total_steps = 200;
        cfg.mpc.u_min = {0.0, 0.0, 0.0};
        cfg.mpc.u_max = {10.0, 10.0, 10.0};
        cfg.x0 = {20.0, 20.0, 20.0};
        return cfg;
    }
    if (name == "vehicle") {
        cfg.plant = make_plant(VehicleParams{1500.0, 2.5, 0.3, 1.225, 2.5, 0.01,
                                             9.81, 0.0, 0.1});
        cfg.policy.encoder = {EncoderKind::RotationTriple, {0, 1, 2, 3}};
        cfg.policy.ansatz = {6, 2, Entanglement::Ring, RotOrder::ZYZ};
        cfg.policy.head = {{0, 1}, {1500.0, 0.5}, {0.0, 0.0}};
        cfg.loss = {LossKind::Vehicle, {0.0, 0.0, 0.0, 0.0},
                    {0.1, 0.1, 0.01, 0.01}};
        cfg.mpc.total_steps = 60;
        cfg.mpc.u_min = {-1500.0, -0.5};
        cfg.mpc.u_max = {1500.0, 0.5};
        cfg.x0 = {0.0, 10.0, 0.0, 0.0};
        return cfg;
    }
    if (name == "pendulum") {
        cfg.plant = make_plant(SimplePendulumParams{1.0, 1.0, 9.81, 0.05, false});
        cfg.policy.encoder = {EncoderKind::HadamardRY, {0, 1}};
        cfg.policy.ansatz = {2, 2, Entanglement::Ring, RotOrder::ZYZ};
        cfg.policy.head = {{0}, {2.0}, {0.0}};
        cfg.loss = {LossKind::AlgorithmOne, {0.0, 0.0}, {0.05}};
        cfg.mpc.total_steps = 50;
        cfg.mpc.u_min = {-2.0};
        cfg.mpc.u_max = {2.0};
        cfg.optimizer = SgdConfig{0.3, 0.01, 0.95, 0.85, 0.5};
        cfg.x0 = {0.0, 1.4};  // repository-chosen start
        return cfg;
    }
    if (name == "double-pendulum") {
        cfg.plant = make_plant(DoublePendulumParams{1.0, 1.0, 1.0, 1.0, 9.81,
                                                    0.05, false});
        cfg.policy.encoder = {EncoderKind::RotationTriple, {0, 1, 2, 3}};
        cfg.policy.ansatz = {4, 2, Entanglement::Ring, RotOrder::ZYZ};
        cfg.policy.head = {{0, 1}, {1.0, 1.0}, {0.0, 0.0}};
        cfg.loss = {LossKind::DoublePendulum, {0.79, 0.0, 0.52, 0.0},
                    {1.0, 0.1, 0.01}};
        cfg.mpc.total_steps = 50;
        cfg.mpc.u_min = {-1.0, -1.0};
        cfg.mpc.u_max = {1.0, 1.0};
        cfg.x0 = {0.1, 0.0, 0.1, 0.0};
        cfg.loss_log_scale = true;
        return cfg;
    }
    fail("unknown preset '" + name + "'");
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = cfg.experiment;
    j["plant"] = plant_to_json(cfg.plant);
    j["encoder"] = {
        {"kind", encoder_kind_name(cfg.policy.encoder.kind)},
        {"feature_wires", cfg.policy.encoder.feature_wires},
    };
    j["ansatz"] = {
        {"n_qubits", cfg.policy.ansatz.n_qubits},
        {"n_layers", cfg.policy.ansatz.n_layers},
        {"entanglement", entanglement_name(cfg.policy.ansatz.entanglement)},
        {"rot_order", rot_order_name(cfg.policy.ansatz.rot_order)},
    };
    j["head"] = {
        {"readout_wires", cfg.policy.head.readout_wires},
        {"gains", cfg.policy.head.gains},
        {"offsets", cfg.policy.head.offsets},
    };
    j["loss"] = {
        {"kind", loss_kind_name(cfg.loss.kind)},
        {"weights", cfg.loss.weights},
        {"x_target", cfg.loss.x_target},
    };
    j["mpc"] = {
        {"total_steps", cfg.mpc.total_steps},
        {"horizon", cfg.mpc.horizon},
        {"mode", mode_name(cfg.mpc.mode)},
        {"u_min", cfg.mpc.u_min},
        {"u_max", cfg.mpc.u_max},
        {"epsilon", cfg.mpc.epsilon ? json(*cfg.mpc.epsilon) : json(nullptr)},
        {"shots", cfg.mpc.shots ? json(*cfg.mpc.shots) : json(nullptr)},
    };
    j["optimizer"] = {
        {"lr_init", cfg.optimizer.lr_init},
        {"lr_min", cfg.optimizer.lr_min},
        {"lr_decay", cfg.optimizer.lr_decay},
        {"momentum", cfg.optimizer.momentum},
        {"grad_clip", cfg.optimizer.grad_clip},
    };
    j["x0"] = cfg.x0;
    j["seeds"] = cfg.seeds;
    j["out_dir"] = cfg.out_dir;
    j["loss_log_scale"] = cfg.loss_log_scale;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    check_keys(j, "config",
               {"experiment", "plant", "encoder", "ansatz", "head", "loss",
                "mpc", "optimizer", "x0", "seeds", "out_dir", "loss_log_scale"});
    ExperimentConfig cfg;
    std::string experiment = "custom";
    get_if_present(j, "experiment", experiment);
    if (is_preset_name(experiment)) {
        cfg = preset(experiment);
    } else {
        cfg.experiment = experiment;
    }
    if (auto it = j.find("plant"); it != j.end()) {
        cfg.plant = plant_from_json(*it, cfg.plant);
    }
    if (auto it = j.find("encoder"); it != j.end()) {
        check_keys(*it, "encoder", {"kind", "feature_wires"});
        std::string kind = encoder_kind_name(cfg.policy.encoder.kind);
        get_if_present(*it, "kind", kind);
        cfg.policy.encoder.kind = parse_enum<EncoderKind>(
            kind, "encoder kind",
            {{"rotation_triple", EncoderKind::RotationTriple},
             {"hadamard_ry", EncoderKind::HadamardRY},
             {"angle_ry", EncoderKind::AngleRY}});
        get_if_present(*it, "feature_wires", cfg.policy.encoder.feature_wires);
    }
    if (auto it = j.find("ansatz"); it != j.end()) {
        check_keys(*it, "ansatz",
                   {"n_qubits", "n_layers", "entanglement", "rot_order"});
        get_if_present(*it, "n_qubits", cfg.policy.ansatz.n_qubits);
        get_if_present(*it, "n_layers", cfg.policy.ansatz.n_layers);
        std::string ent = entanglement_name(cfg.policy.ansatz.entanglement);
        get_if_present(*it, "entanglement", ent);
        cfg.policy.ansatz.entanglement = parse_enum<Entanglement>(
            ent, "entanglement",
            {{"linear", Entanglement::Linear}, {"ring", Entanglement::Ring}});
        std::string rot = rot_order_name(cfg.policy.ansatz.rot_order);
        get_if_present(*it, "rot_order", rot);
        cfg.policy.ansatz.rot_order = parse_enum<RotOrder>(
            rot, "rot order", {{"zyz", RotOrder::ZYZ}, {"zyx", RotOrder::ZYX}});
    }
    if (auto it = j.find("head"); it != j.end()) {
        check_keys(*it, "head", {"readout_wires", "gains", "offsets"});
        get_if_present(*it, "readout_wires", cfg.policy.head.readout_wires);
        get_if_present(*it, "gains", cfg.policy.head.gains);
        get_if_present(*it, "offsets", cfg.policy.head.offsets);
    }
    if (auto it = j.find("loss"); it != j.end()) {
        check_keys(*it, "loss", {"kind", "weights", "x_target"});
        std::string kind = loss_kind_name(cfg.loss.kind);
        get_if_present(*it, "kind", kind);
        cfg.loss.kind = parse_enum<LossKind>(
            kind, "loss kind",
            {{"mse_to_target", LossKind::MseToTarget},
             {"algorithm_one", LossKind::AlgorithmOne},
             {"building", LossKind::Building},
             {"vehicle", LossKind::Vehicle},
             {"double_pendulum", LossKind::DoublePendulum}});
        get_if_present(*it, "weights", cfg.loss.weights);
        get_if_present(*it, "x_target", cfg.loss.x_target);
    }
    if (auto it = j.find("mpc"); it != j.end()) {
        check_keys(*it, "mpc",
                   {"total_steps", "horizon", "mode", "u_min", "u_max",
                    "epsilon", "shots"});
        get_if_present(*it, "total_steps", cfg.mpc.total_steps);
        get_if_present(*it, "horizon", cfg.mpc.horizon);
        std::string mode = mode_name(cfg.mpc.mode);
        get_if_present(*it, "mode", mode);
        cfg.mpc.mode = parse_enum<MpcConfig::Mode>(
            mode, "mpc mode",
            {{"online", MpcConfig::Mode::Online},
             {"lookahead", MpcConfig::Mode::Lookahead}});
        get_if_present(*it, "u_min", cfg.mpc.u_min);
        get_if_present(*it, "u_max", cfg.mpc.u_max);
        get_optional(*it, "epsilon", cfg.mpc.epsilon);
        get_optional(*it, "shots", cfg.mpc.shots);
    }
    if (auto it = j.find("optimizer"); it != j.end()) {
        check_keys(*it, "optimizer",
                   {"lr_init", "lr_min", "lr_decay", "momentum", "grad_clip"});
        get_if_present(*it, "lr_init", cfg.optimizer.lr_init);
        get_if_present(*it, "lr_min", cfg.optimizer.lr_min);
        get_if_present(*it, "lr_decay", cfg.optimizer.lr_decay);
        get_if_present(*it, "momentum", cfg.optimizer.momentum);
        get_if_present(*it, "grad_clip", cfg.optimizer.grad_clip);
    }
    get_if_present(j, "x0", cfg.x0);
    get_if_present(j, "seeds", cfg.seeds);
    get_if_present(j, "out_dir", cfg.out_dir);
    get_if_present(j, "loss_log_scale", cfg.loss_log_scale);
    validate_config(cfg);
    return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
    validate_plant(cfg.plant);
    validate_loss(cfg.loss);
    validate_head(cfg.policy.head, cfg.policy.ansatz.n_qubits);
    validate_mpc(cfg.mpc, cfg.plant.control_dim());
    if (cfg.policy.ansatz.n_qubits < 1 ||
        cfg.policy.ansatz.n_qubits > StateVector::kMaxQubits) {
        fail("ansatz n_qubits out of range [1, 12]");
    }
    if (cfg.policy.ansatz.n_layers < 1) fail("ansatz n_layers must be >= 1");
    if (static_cast<int>(cfg.policy.encoder.feature_wires.size()) !=
        cfg.plant.state_dim()) {
        fail("encoder feature wires must match the plant state dimension");
    }
    if (static_cast<int>(cfg.policy.head.readout_wires.size()) !=
        cfg.plant.control_dim()) {
        fail("head readouts must match the plant control dimension");
    }
    if (static_cast<int>(cfg.x0.size()) != cfg.plant.state_dim()) {
        fail("x0 must match the plant state dimension");
    }
    if (cfg.loss.x_target.size() != cfg.x0.size()) {
        fail("loss x_target must match the plant state dimension");
    }
    if (cfg.seeds.empty()) fail("seeds must not be empty");
    // checks feature-wire range and distinctness against the register
    build_encoder(cfg.policy.encoder, cfg.x0, cfg.policy.ansatz.n_qubits);
}

ExperimentConfig load_config(const std::string& path_or_name) {
    if (is_preset_name(path_or_name)) return preset(path_or_name);
    namespace fs = std::filesystem;
    fs::path path(path_or_name);
    if (!fs::exists(path)) {
        const fs::path with_ext = path_or_name + ".json";
        if (fs::exists(with_ext)) {
            path = with_ext;
        } else {
            fail("no such preset or config file: '" + path_or_name + "'");
        }
    }
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        fail("cannot parse '" + path.string() + "': " + e.what());
    }
    return config_from_json(j);
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return to_json(a) == to_json(b);
}

}  // namespace qimpc
