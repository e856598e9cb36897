#include "qevolve/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qevolve/errors.hpp"

namespace qevolve {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "dim",    "ell",       "N",           "R",        "kappa",    "eta",
    "load",   "T",         "delta",       "tol_inner", "tol_feas", "alpha",
    "psi_weights", "out",  "seed",        "jump_tol", "max_inner", "max_solver"};

double get_number(const json& j, const std::string& key)
{
    const auto& v = j.at(key);
    if (!v.is_number())
        throw ParseError(key, "key '" + key + "' must be a number");
    return v.get<double>();
}

int get_int(const json& j, const std::string& key)
{
    const auto& v = j.at(key);
    if (!v.is_number_integer())
        throw ParseError(key, "key '" + key + "' must be an integer");
    return v.get<int>();
}

void require_key(const json& j, const std::string& key)
{
    if (!j.contains(key))
        throw ParseError(key, "missing required key '" + key + "'");
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError("", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ParseError("", "config must be a JSON object");

    for (const auto& item : j.items())
        if (!kKnownKeys.count(item.key()))
            throw ParseError(item.key(), "unknown key '" + item.key() + "'");

    for (const char* key : {"dim", "ell", "N", "R", "kappa", "load", "T", "delta"})
        require_key(j, key);

    RunConfig cfg;
    cfg.dim = get_int(j, "dim");
    if (cfg.dim != 1 && cfg.dim != 2)
        throw ParseError("dim", "dim must be 1 or 2");
    cfg.ell = get_number(j, "ell");
    if (!(cfg.ell > 0.0))
        throw ParseError("ell", "ell must be positive");
    cfg.N = get_int(j, "N");
    if (cfg.N < 1)
        throw ParseError("N", "N must be >= 1");
    cfg.R = get_number(j, "R");
    if (!(cfg.R > 0.0))
        throw ParseError("R", "R must be positive");
    cfg.kappa = get_number(j, "kappa");
    if (!(cfg.kappa > 0.0))
        throw ParseError("kappa", "kappa must be positive");

    if (!j.at("load").is_string())
        throw ParseError("load", "load must be a string");
    try {
        cfg.load = fracture::load_kind_from_string(j.at("load").get<std::string>());
    } catch (const ArgumentError& e) {
        throw ParseError("load", e.what());
    }
    if (cfg.dim == 1 && cfg.load != fracture::LoadKind::w1d)
        throw ParseError("load", "dim 1 requires load w1d");
    if (cfg.dim == 2 && cfg.load == fracture::LoadKind::w1d)
        throw ParseError("load", "dim 2 requires load w1 or w2");

    cfg.T = get_number(j, "T");
    if (!(cfg.T >= 0.0))
        throw ParseError("T", "T must be nonnegative");
    cfg.delta = get_number(j, "delta");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
        throw ParseError("delta", "delta out of (0,1)");

    if (j.contains("eta")) {
        cfg.eta_override = get_number(j, "eta");
        if (!(*cfg.eta_override > 0.0))
            throw ParseError("eta", "eta must be positive");
    }
    if (j.contains("tol_inner")) {
        cfg.tol_inner = get_number(j, "tol_inner");
        if (!(cfg.tol_inner > 0.0))
            throw ParseError("tol_inner", "tol_inner must be positive");
    }
    if (j.contains("tol_feas")) {
        cfg.tol_feas = get_number(j, "tol_feas");
        if (!(cfg.tol_feas > 0.0))
            throw ParseError("tol_feas", "tol_feas must be positive");
    }
    if (j.contains("alpha")) {
        const auto& v = j.at("alpha");
        if (v.is_boolean())
            cfg.alpha = v.get<bool>();
        else if (v.is_number_integer() &&
                 (v.get<int>() == 0 || v.get<int>() == 1))
            cfg.alpha = v.get<int>() == 1;
        else
            throw ParseError("alpha", "alpha must be 0, 1, or a boolean");
    }
    if (j.contains("psi_weights")) {
        if (!cfg.alpha)
            throw ParseError("psi_weights", "psi_weights requires alpha = 1");
        const auto& v = j.at("psi_weights");
        if (!v.is_array())
            throw ParseError("psi_weights", "psi_weights must be an array");
        Vec w;
        for (const auto& x : v) {
            if (!x.is_number())
                throw ParseError("psi_weights", "psi_weights entries must be numbers");
            w.push_back(x.get<double>());
            if (!(w.back() > 0.0))
                throw ParseError("psi_weights", "psi_weights must be positive");
        }
        cfg.psi_weights = std::move(w);
    }
    if (j.contains("out")) {
        if (!j.at("out").is_string())
            throw ParseError("out", "out must be a string");
        cfg.out_dir = j.at("out").get<std::string>();
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer())
            throw ParseError("seed", "seed must be an integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("jump_tol")) {
        cfg.jump_tol = get_number(j, "jump_tol");
        if (!(cfg.jump_tol > 0.0))
            throw ParseError("jump_tol", "jump_tol must be positive");
    }
    if (j.contains("max_inner")) {
        cfg.max_inner = get_int(j, "max_inner");
        if (cfg.max_inner < 1)
            throw ParseError("max_inner", "max_inner must be >= 1");
    }
    if (j.contains("max_solver")) {
        cfg.max_solver = get_int(j, "max_solver");
        if (cfg.max_solver < 1)
            throw ParseError("max_solver", "max_solver must be >= 1");
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("", "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& cfg)
{
    json j;
    j["dim"] = cfg.dim;
    j["ell"] = cfg.ell;
    j["N"] = cfg.N;
    j["R"] = cfg.R;
    j["kappa"] = cfg.kappa;
    j["eta"] = cfg.eta();
    j["load"] = fracture::to_string(cfg.load);
    j["T"] = cfg.T;
    j["delta"] = cfg.delta;
    j["tol_inner"] = cfg.tol_inner_effective();
    j["tol_feas"] = cfg.tol_feas;
    j["alpha"] = cfg.alpha;
    if (cfg.psi_weights)
        j["psi_weights"] = *cfg.psi_weights;
    j["seed"] = cfg.seed;
    j["jump_tol"] = cfg.jump_tol;
    j["max_inner"] = cfg.max_inner;
    j["max_solver"] = cfg.max_solver;
    return j.dump(1);
}

} // namespace qevolve
