#include "szlab/experiments.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace szlab {

using nlohmann::json;

void write_table_csv(const std::string& path, const Table& t)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot write " + path);
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? "," : "") << t.columns[c];
    os << '\n' << std::setprecision(17);
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << row[c];
        os << '\n';
    }
    if (!os)
        throw std::runtime_error("write failed for " + path);
}

Table read_table_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    Table t;
    std::string line, cell;
    if (std::getline(in, line)) {
        std::istringstream ls(line);
        while (std::getline(ls, cell, ','))
            t.columns.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::vector<double> row;
        while (std::getline(ls, cell, ','))
            row.push_back(std::stod(cell));
        if (row.size() != t.columns.size())
            throw std::runtime_error("ragged row in " + path);
        t.rows.push_back(row);
    }
    return t;
}

std::string summary_json(const ExperimentResult& r, const std::string& config_hash, double check_rtol)
{
    json j;
    j["experiment"] = r.experiment;
    j["verdicts"] = json::object();
    for (const auto& [k, v] : r.verdicts)
        j["verdicts"][k] = v;
    auto put = [&](const char* key, const std::map<std::string, double>& m) {
        j[key] = json::object();
        for (const auto& [k, v] : m)
            j[key][k] = v;
    };
    put("slopes", r.slopes);
    put("R2", r.r2);
    put("drifts", r.drifts);
    put("values", r.values);
    j["notes"] = r.notes;
    j["pass"] = r.pass();
    j["config_hash"] = config_hash;
    j["check_rtol"] = check_rtol;
    return j.dump(2) + "\n";
}

std::string rational_datum_json(const RationalDatumd& d)
{
    json a = json::array();
    for (const auto& t : d)
        a.push_back({{"k", t.k},
                     {"alpha_re", t.alpha.real()},
                     {"alpha_im", t.alpha.imag()},
                     {"c_re", t.c.real()},
                     {"c_im", t.c.imag()}});
    return a.dump();
}

RationalDatumd rational_datum_from_json(const std::string& text)
{
    const json a = json::parse(text);
    if (!a.is_array())
        throw ConfigError("rational datum must be a list of terms");
    RationalDatumd d;
    for (const auto& t : a) {
        for (const char* k : {"k", "alpha_re", "c_re"})
            if (!t.contains(k))
                throw ConfigError(std::string("rational term is missing ") + k);
        d.push_back({t["k"].get<int>(),
                     {t["alpha_re"].get<double>(), t.value("alpha_im", 0.0)},
                     {t["c_re"].get<double>(), t.value("c_im", 0.0)}});
    }
    validate(d);
    return d;
}

std::vector<std::string> compare_summary(const ExperimentResult& fresh, const std::string& stored_json, double rtol)
{
    std::vector<std::string> out;
    const json s = json::parse(stored_json);
    if (s.contains("check_rtol") && s["check_rtol"].is_number())
        rtol = s["check_rtol"].get<double>();
    if (s.value("experiment", std::string()) != fresh.experiment)
        out.push_back("experiment differs: stored '" + s.value("experiment", std::string()) + "'");
    for (const auto& [k, v] : fresh.verdicts) {
        if (!s["verdicts"].contains(k))
            out.push_back("verdict " + k + " missing from stored summary");
        else if (s["verdicts"][k].get<bool>() != v)
            out.push_back("verdict " + k + " changed");
    }
    auto cmp = [&](const char* key, const std::map<std::string, double>& m) {
        for (const auto& [k, v] : m) {
            if (!s.contains(key) || !s[key].contains(k) || !s[key][k].is_number()) {
                out.push_back(std::string(key) + "." + k + " missing from stored summary");
                continue;
            }
            const double w = s[key][k].get<double>();
            if (std::abs(v - w) > rtol * std::max(std::abs(v), std::abs(w))) {
                std::ostringstream os;
                os << std::setprecision(17) << key << "." << k << ": stored " << w << ", fresh " << v;
                out.push_back(os.str());
            }
        }
    };
    cmp("slopes", fresh.slopes);
    cmp("R2", fresh.r2);
    cmp("drifts", fresh.drifts);
    cmp("values", fresh.values);
    return out;
}

} // namespace szlab
