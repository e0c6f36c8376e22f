#include "szlab/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace szlab {

using nlohmann::json;

namespace {

const std::map<std::string, std::vector<std::string>> required_time = {
    {"wave_operator_probe", {"t_min", "t_max", "dt", "dtau"}},
    {"cascade", {"tau_end", "dtau", "fit_lo", "fit_hi", "sample"}},
    {"conservation", {}},
    {"resonant_compare", {"t_list"}},
    {"szego1d", {"t_max", "dt"}},
};

struct Reader {
    std::vector<std::string> missing;
    std::vector<std::string> bad;

    const json* child(const json& j, const std::string& key, const std::string& where, bool required)
    {
        if (j.contains(key))
            return &j.at(key);
        if (required)
            missing.push_back(where + key);
        return nullptr;
    }

    void number(const json& j, const std::string& key, const std::string& where, double& out, bool required = false)
    {
        if (const json* v = child(j, key, where, required)) {
            if (!v->is_number())
                bad.push_back(where + key + " must be a number");
            else
                out = v->get<double>();
        }
    }

    void integer(const json& j, const std::string& key, const std::string& where, Index& out, bool required = false)
    {
        if (const json* v = child(j, key, where, required)) {
            if (!v->is_number_integer())
                bad.push_back(where + key + " must be an integer");
            else
                out = v->get<Index>();
        }
    }

    void text(const json& j, const std::string& key, const std::string& where, std::string& out, bool required = false)
    {
        if (const json* v = child(j, key, where, required)) {
            if (!v->is_string())
                bad.push_back(where + key + " must be a string");
            else
                out = v->get<std::string>();
        }
    }

    void grid(const json& j, const std::string& where, GridSpec& g)
    {
        if (!j.is_object()) {
            bad.push_back(where.substr(0, where.size() - 1) + " must be an object");
            return;
        }
        number(j, "Lx", where, g.Lx, true);
        integer(j, "nx", where, g.nx, true);
        number(j, "Ly", where, g.Ly, true);
        integer(j, "ny", where, g.ny, true);
    }
};

RationalDatumd terms_from(const json& arr, Reader& rd)
{
    RationalDatumd d;
    if (!arr.is_array()) {
        rd.bad.push_back("datum.terms must be a list");
        return d;
    }
    for (std::size_t q = 0; q < arr.size(); ++q) {
        const std::string where = "datum.terms[" + std::to_string(q) + "].";
        const json& t = arr[q];
        if (!t.is_object()) {
            rd.bad.push_back(where.substr(0, where.size() - 1) + " must be an object");
            continue;
        }
        Index k = 0;
        double ar = 1, ai = 0, cr = 1, ci = 0;
        rd.integer(t, "k", where, k, true);
        rd.number(t, "alpha_re", where, ar, true);
        rd.number(t, "alpha_im", where, ai);
        rd.number(t, "c_re", where, cr, true);
        rd.number(t, "c_im", where, ci);
        d.push_back({static_cast<int>(k), {ar, ai}, {cr, ci}});
    }
    return d;
}

std::string join(const std::vector<std::string>& v)
{
    std::string s;
    for (const auto& x : v)
        s += (s.empty() ? "" : ", ") + x;
    return s;
}

} // namespace

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config is not valid JSON (byte " + std::to_string(e.byte) + "): " + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");

    ExperimentConfig cfg;
    cfg.base_dir = base_dir;
    Reader rd;
    rd.text(j, "experiment", "", cfg.experiment, true);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            rd.bad.push_back("seed must be a nonnegative integer");
        else
            cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (const json* g = rd.child(j, "grid", "", true))
        rd.grid(*g, "grid.", cfg.grid);

    if (const json* d = rd.child(j, "datum", "", true)) {
        auto& ds = cfg.datum;
        rd.text(*d, "kind", "datum.", ds.kind, true);
        if (d->contains("terms"))
            ds.terms = terms_from((*d)["terms"], rd);
        rd.number(*d, "rho", "datum.", ds.rho);
        rd.number(*d, "psi_scale", "datum.", ds.psi_scale);
        rd.number(*d, "amplitude", "datum.", ds.amplitude);
        rd.number(*d, "tune_lo", "datum.", ds.tune_lo);
        rd.number(*d, "tune_hi", "datum.", ds.tune_hi);
        rd.integer(*d, "tune_scan", "datum.", ds.tune_scan);
        rd.integer(*d, "hankel_n", "datum.", ds.hankel_n);
        rd.number(*d, "mode_eta", "datum.", ds.mode_eta);
        rd.number(*d, "sigma_x", "datum.", ds.sigma_x);
        rd.number(*d, "sigma_y", "datum.", ds.sigma_y);
        rd.text(*d, "path", "datum.", ds.path, ds.kind == "snapshot");
        if (ds.kind == "rational" && !d->contains("terms"))
            rd.missing.push_back("datum.terms");
    }

    rd.text(j, "source", "", cfg.source);
    if (j.contains("refine")) {
        if (!j["refine"].is_boolean())
            rd.bad.push_back("refine must be true or false");
        else
            cfg.refine = j["refine"].get<bool>();
    }

    if (const json* t = rd.child(j, "time", "", true)) {
        auto& ts = cfg.time;
        std::vector<std::string> req;
        if (auto it = required_time.find(cfg.experiment); it != required_time.end())
            req = it->second;
        if (cfg.experiment == "conservation")
            req = cfg.source == "resonant" ? std::vector<std::string>{"tau_end", "dtau"}
                                           : std::vector<std::string>{"t_max", "dt"};
        auto need = [&](const char* k) { return std::find(req.begin(), req.end(), k) != req.end(); };
        rd.number(*t, "t_min", "time.", ts.t_min, need("t_min"));
        rd.number(*t, "t_max", "time.", ts.t_max, need("t_max"));
        rd.number(*t, "dt", "time.", ts.dt, need("dt"));
        rd.number(*t, "tau_end", "time.", ts.tau_end, need("tau_end"));
        rd.number(*t, "dtau", "time.", ts.dtau, need("dtau"));
        rd.number(*t, "fit_lo", "time.", ts.fit_lo, need("fit_lo"));
        rd.number(*t, "fit_hi", "time.", ts.fit_hi, need("fit_hi"));
        rd.number(*t, "sample", "time.", ts.sample, need("sample"));
        rd.number(*t, "fiber_sample", "time.", ts.fiber_sample);
        if (const json* l = rd.child(*t, "t_list", "time.", need("t_list"))) {
            if (!l->is_array())
                rd.bad.push_back("time.t_list must be a list of numbers");
            else
                for (const auto& v : *l) {
                    if (!v.is_number()) {
                        rd.bad.push_back("time.t_list must be a list of numbers");
                        break;
                    }
                    ts.t_list.push_back(v.get<double>());
                }
        }
    }

    if (j.contains("stage_b")) {
        const json& b = j["stage_b"];
        StageBSpec sb;
        if (!b.is_object()) {
            rd.bad.push_back("stage_b must be an object");
        } else {
            if (const json* g = rd.child(b, "grid", "stage_b.", true))
                rd.grid(*g, "stage_b.grid.", sb.grid);
            rd.number(b, "rho", "stage_b.", sb.rho);
            rd.number(b, "dt", "stage_b.", sb.dt);
            rd.integer(b, "hankel_n", "stage_b.", sb.hankel_n);
            rd.integer(b, "samples", "stage_b.", sb.samples);
        }
        cfg.stage_b = sb;
    }

    if (j.contains("tolerances")) {
        const json& tl = j["tolerances"];
        if (!tl.is_object())
            rd.bad.push_back("tolerances must be an object");
        else
            for (auto it = tl.begin(); it != tl.end(); ++it) {
                if (!it.value().is_number())
                    rd.bad.push_back("tolerances." + it.key() + " must be a number");
                else
                    cfg.tolerances[it.key()] = it.value().get<double>();
            }
    }

    if (!rd.missing.empty())
        throw ConfigError("missing required field(s): " + join(rd.missing));

    // Semantic checks, still without numerics.
    std::vector<std::string>& bad = rd.bad;
    if (!cfg.experiment.empty() && !required_time.count(cfg.experiment))
        bad.push_back("unknown experiment '" + cfg.experiment + "'");
    static const std::set<std::string> kinds = {"zero", "rational", "tuned", "single_mode", "gaussian", "random", "snapshot"};
    if (!kinds.count(cfg.datum.kind))
        bad.push_back("datum.kind '" + cfg.datum.kind + "' is not one of zero, rational, tuned, single_mode, "
                      "gaussian, random, snapshot");
    if (cfg.experiment == "conservation" && cfg.source != "halfwave" && cfg.source != "resonant")
        bad.push_back("source must be halfwave or resonant");
    auto check_grid = [&](const GridSpec& g, const std::string& where) {
        try {
            (void)g.make();
        } catch (const std::invalid_argument& e) {
            bad.push_back(where + ": " + e.what());
        }
    };
    check_grid(cfg.grid, "grid");
    if (cfg.stage_b)
        check_grid(cfg.stage_b->grid, "stage_b.grid");
    if (!(cfg.datum.rho > 0))
        bad.push_back("datum.rho must be positive");
    if (cfg.stage_b && !(cfg.stage_b->rho > 0))
        bad.push_back("stage_b.rho must be positive");
    if (!(cfg.datum.psi_scale > 0))
        bad.push_back("datum.psi_scale must be positive");
    const auto& ts = cfg.time;
    if (cfg.experiment == "wave_operator_probe" && !(ts.t_min > 0 && ts.t_min < ts.t_max))
        bad.push_back("time range must satisfy 0 < t_min < t_max");
    if (cfg.experiment == "cascade" && !(ts.fit_lo < ts.fit_hi && ts.fit_hi <= ts.tau_end && ts.fit_lo >= 0))
        bad.push_back("fit window must satisfy 0 <= fit_lo < fit_hi <= tau_end");
    if (cfg.experiment == "cascade" && cfg.stage_b && !(ts.t_min > 0 && ts.t_min < ts.t_max))
        bad.push_back("stage B needs 0 < t_min < t_max");
    if (!(ts.dt > 0) || !(ts.dtau > 0) || !(ts.sample > 0) || !(ts.fiber_sample > 0))
        bad.push_back("time steps must be positive");
    for (std::size_t q = 1; q < ts.t_list.size(); ++q)
        if (!(ts.t_list[q] > ts.t_list[q - 1])) {
            bad.push_back("time.t_list must be strictly increasing");
            break;
        }
    for (double t : ts.t_list)
        if (!(t > 0)) {
            bad.push_back("time.t_list entries must be positive");
            break;
        }
    for (const auto& term : cfg.datum.terms)
        if (term.k < 0 || !(term.alpha.real() > 0)) {
            bad.push_back("datum.terms need k >= 0 and alpha_re > 0");
            break;
        }
    if (cfg.datum.kind == "snapshot") {
        const std::filesystem::path p = std::filesystem::path(base_dir) / cfg.datum.path;
        if (!std::filesystem::exists(p))
            bad.push_back("datum.path refers to a missing file: " + p.string());
    }
    if (!bad.empty())
        throw ConfigError("invalid config: " + join(bad));
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    const std::string base = std::filesystem::path(path).parent_path().string();
    return parse_config(read_text_file(path), base.empty() ? "." : base);
}

std::vector<std::pair<std::string, std::string>> list_experiments()
{
    return {
        {"wave_operator_probe", "backward-anchored half-wave run compared with the resonant solution on tau = pi ln t"},
        {"cascade", "Stage A fiber-norm growth on the resonant clock; optional Stage B on the physical clock"},
        {"conservation", "mass, Hamiltonian, Hankel trace norms and Z norm along a logged run"},
        {"resonant_compare", "decay of N0^t[F,F,F] - (pi/t) R[F,F,F] in t"},
        {"szego1d", "1-D cubic Szego run with mass, singular value and d_y growth diagnostics"},
    };
}

} // namespace szlab
