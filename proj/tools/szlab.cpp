#include "szlab/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* code_version = "szlab 0.1.0";

std::string sha256_hex(const std::string& bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

std::string file_sha256(const fs::path& p)
{
    return sha256_hex(szlab::read_text_file(p.string()));
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream os(p, std::ios::binary);
    os << text;
    if (!os)
        throw std::runtime_error("cannot write " + p.string());
}

struct RunFlags {
    std::string config, out = "out", stage = "A";
    int threads = 0;
    bool check = false;
    long long seed = -1;
};

int run(const RunFlags& f)
{
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    szlab::ExperimentConfig cfg;
    std::string cfg_text;
    try {
        cfg_text = szlab::read_text_file(f.config);
        cfg = szlab::load_config(f.config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    if (f.seed >= 0)
        cfg.seed = static_cast<std::uint64_t>(f.seed);
    if (f.threads > 0)
        szlab::set_num_threads(f.threads);
    const std::string hash = sha256_hex(cfg_text);

    const fs::path root(f.out);
    const fs::path dir = f.check ? root / "check" : root;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        std::cerr << "error: cannot create " << dir << ": " << ec.message() << '\n';
        return 1;
    }

    json manifest;
    manifest["config"] = f.config;
    manifest["config_hash"] = hash;
    manifest["code_version"] = code_version;
    manifest["seed"] = cfg.seed;
    manifest["threads"] = szlab::num_threads();
    manifest["stage"] = f.stage;
    manifest["artifacts"] = json::array();
    auto record = [&](const fs::path& p) {
        manifest["artifacts"].push_back({{"file", p.filename().string()}, {"sha256", file_sha256(p)}});
    };
    auto finish_manifest = [&]() {
        manifest["timings"]["total_seconds"] = std::chrono::duration<double>(clock::now() - t0).count();
        write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    };

    szlab::ExperimentResult res;
    try {
        const auto t1 = clock::now();
        res = szlab::run_experiment(cfg, szlab::RunOptions{f.stage});
        manifest["timings"]["experiment_seconds"] = std::chrono::duration<double>(clock::now() - t1).count();
    } catch (const szlab::NumericalError& e) {
        manifest["abort"] = e.what();
        finish_manifest();
        std::cerr << "numeric abort: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        manifest["abort"] = e.what();
        finish_manifest();
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        for (const auto& t : res.tables) {
            const fs::path p = dir / (t.name + ".csv");
            szlab::write_table_csv(p.string(), t);
            record(p);
        }
        for (const auto& [name, s] : res.snapshots) {
            const fs::path p = dir / (name + ".szg");
            szlab::write_snapshot(p.string(), s);
            record(p);
        }
        const fs::path sp = dir / "summary.json";
        write_file(sp, szlab::summary_json(res, hash, cfg.tol("check_rtol", 1e-9)));
        record(sp);
        for (const auto& a : manifest["artifacts"])
            if (file_sha256(dir / a["file"].get<std::string>()) != a["sha256"].get<std::string>())
                throw std::runtime_error("artifact checksum mismatch for " + a["file"].get<std::string>());
        manifest["verdict"] = res.pass() ? "pass" : "fail";
        finish_manifest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    for (const auto& [k, v] : res.verdicts)
        std::cout << k << ": " << (v ? "pass" : "fail") << '\n';
    for (const auto& n : res.notes)
        std::cout << "note: " << n << '\n';

    if (f.check) {
        const fs::path stored = root / "summary.json";
        if (!fs::exists(stored)) {
            std::cerr << "error: --check needs a stored " << stored << '\n';
            return 1;
        }
        std::vector<std::string> diffs;
        try {
            diffs = szlab::compare_summary(res, szlab::read_text_file(stored.string()));
        } catch (const std::exception& e) {
            std::cerr << "error: stored summary unreadable: " << e.what() << '\n';
            return 1;
        }
        for (const auto& d : diffs)
            std::cout << "check mismatch: " << d << '\n';
        std::cout << "check: " << (diffs.empty() ? "pass" : "fail") << '\n';
        if (!diffs.empty())
            return 2;
    }
    return res.pass() ? 0 : 2;
}

int validate(const std::string& path)
{
    try {
        const auto cfg = szlab::load_config(path);
        std::cout << "valid: " << path << " (" << cfg.experiment << ")\n";
        return 0;
    } catch (const std::exception& e) {
        std::cout << "invalid: " << path << ": " << e.what() << '\n';
        return 2;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Half-wave and cubic Szego experiment runner"};
    app.require_subcommand(1);
    RunFlags f;
    if (const char* env = std::getenv("SZG_THREADS"))
        f.threads = std::atoi(env);

    auto* run_cmd = app.add_subcommand("run", "run the experiment named in a config");
    run_cmd->add_option("--config", f.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", f.out, "output directory");
    run_cmd->add_option("--threads", f.threads, "worker threads for fiber maps (default SZG_THREADS)");
    run_cmd->add_flag("--check", f.check, "compare fresh results with the stored summary in --out");
    run_cmd->add_option("--stage", f.stage, "cascade stage")->check(CLI::IsMember({"A", "B", "both"}));
    run_cmd->add_option("--seed", f.seed, "override the config seed");

    auto* list_cmd = app.add_subcommand("list", "list experiments");

    std::string vpath;
    auto* val_cmd = app.add_subcommand("validate", "check a config against the schema without running it");
    val_cmd->add_option("config", vpath, "config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*list_cmd) {
        for (const auto& [name, doc] : szlab::list_experiments())
            std::cout << std::left << std::setw(22) << name << doc << '\n';
        return 0;
    }
    if (*val_cmd)
        return validate(vpath);
    return run(f);
}
