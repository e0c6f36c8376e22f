#ifndef SZLAB_EXPERIMENTS_HPP
#define SZLAB_EXPERIMENTS_HPP

#include "szlab/szlab.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace szlab {

// The only place where the physical clock t and the resonant clock tau meet: tau = pi ln t.
double tau_of_t(double t);
double t_of_tau(double tau);

struct GridSpec {
    double Lx = 64.0;
    Index nx = 256;
    double Ly = 12.5;
    Index ny = 128;

    Grid2Dd make() const { return make_grid2d(Lx, nx, Ly, ny); }
};

// Fiber datum u0 and its placement G0^(xi, .) = rho psi(xi / psi_scale) u0.
struct DatumSpec {
    // zero | rational | tuned | single_mode | gaussian | random | snapshot
    std::string kind = "rational";
    RationalDatumd terms;
    double rho = 0.05;
    double psi_scale = 1.0;
    // tuned: u0 = amplitude (exp(-eta) - c exp(-2 eta)) with c tuned on [tune_lo, tune_hi]
    double amplitude = 1.0;
    double tune_lo = 1.0;
    double tune_hi = 4.0;
    Index tune_scan = 16;
    Index hankel_n = 512;
    // single_mode: amplitude at the bin nearest mode_eta
    double mode_eta = 1.0;
    // gaussian: amplitude exp(-x^2 / 2 sigma_x^2 - y^2 / 2 sigma_y^2)
    // random: seeded complex noise under amplitude exp(-(xi^2 + eta^2) / 2)
    double sigma_x = 2.0;
    double sigma_y = 1.0;
    std::string path;
};

struct TimeSpec {
    double t_min = 2.718281828459045;
    double t_max = 20.085536923187668;
    double dt = 0.01;
    double tau_end = 100.0;
    double dtau = 0.01;
    double fit_lo = 10.0;
    double fit_hi = 100.0;
    double sample = 1.0;
    // spacing of the stored fiber trajectory that Stage A interpolates
    double fiber_sample = 0.1;
    std::vector<double> t_list;
};

struct StageBSpec {
    GridSpec grid{128.0, 256, 12.5, 128};
    double rho = 0.05;
    double dt = 0.01;
    Index hankel_n = 64;
    Index samples = 24;
};

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 0;
    GridSpec grid;
    DatumSpec datum;
    TimeSpec time;
    // conservation: halfwave | resonant
    std::string source = "halfwave";
    bool refine = false;
    std::optional<StageBSpec> stage_b;
    std::map<std::string, double> tolerances;
    // Directory used to resolve relative datum paths.
    std::string base_dir = ".";

    double tol(const std::string& key, double fallback) const
    {
        const auto it = tolerances.find(key);
        return it == tolerances.end() ? fallback : it->second;
    }
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parsing never runs numerics. Errors name the missing or bad fields.
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);
std::string read_text_file(const std::string& path);

std::vector<std::pair<std::string, std::string>> list_experiments();

struct ScatteringRow {
    double t, z, s, y;
};

struct ScatteringReport {
    std::vector<ScatteringRow> rows;
    double eps = 0.0;
    bool hypothesis_ok = true;
    bool strictly_decreasing = false;
    bool trivial = false;

    bool verdict() const { return trivial || strictly_decreasing; }
};

struct GrowthSample {
    double t, norm;
};

struct GrowthReport {
    // "tau" for Stage A, "t" for Stage B
    std::string clock = "tau";
    std::vector<GrowthSample> rows;
    LinearFit fit;
    double fit_lo = 0.0, fit_hi = 0.0;
    double liminf = 0.0, limsup = 0.0;
    double tuned_param = 0.0, tuned_gap = 0.0;
    bool tuned = false;
    // Stage B: max over checkpoints of | ||U||_{L2 H1} - ||G||_{L2 H1} | - ||F - G||_Y, at most 0 when coherent
    double coherence_excess = 0.0;
};

// A logged run: snapshots carry their own grids.
struct Trajectory {
    // halfwave | resonant
    std::string kind = "halfwave";
    std::vector<double> times;
    std::vector<Spectrum2Dd> states;
    double sign = 1.0;
    Index hankel_n = -1;
};

struct ConservationReport {
    std::vector<NormReport> series;
    std::map<std::string, double> drifts;
};

RationalDatumd tuned_family(double amplitude, double c);
SzegoStated make_fiber_datum(const DatumSpec& d, const Grid1Dd& gy, TuneResult<double>* tune = nullptr);
Spectrum2Dd make_datum(const DatumSpec& d, const Grid2Dd& g, TuneResult<double>* tune = nullptr);
double psi_profile(const DatumSpec& d, double xi);

// Dyadic checkpoints t_min 2^k below t_max, then t_max itself.
std::vector<double> dyadic_checkpoints(double t_min, double t_max);

ScatteringReport wave_operator_probe(const ExperimentConfig& cfg);
GrowthReport cascade_stage_a(const ExperimentConfig& cfg);
GrowthReport cascade_stage_b(const ExperimentConfig& cfg);

Trajectory record_halfwave(const ExperimentConfig& cfg, double dt);
Trajectory record_resonant(const ExperimentConfig& cfg);
ConservationReport conservation_battery(const Trajectory& tr);

DecayTable<double> resonant_compare(const ExperimentConfig& cfg);

struct Szego1DResult {
    GrowthReport1D<double> growth;
    RArray<double> sv_start, sv_end;
    double mass_drift = 0.0;
};

Szego1DResult szego1d(const ExperimentConfig& cfg);

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
    std::string experiment;
    std::map<std::string, bool> verdicts;
    std::map<std::string, double> slopes, r2, drifts, values;
    std::vector<Table> tables;
    std::vector<std::pair<std::string, Spectrum2Dd>> snapshots;
    std::vector<std::string> notes;

    bool pass() const
    {
        for (const auto& [k, v] : verdicts)
            if (!v)
                return false;
        return true;
    }
};

struct RunOptions {
    // A | B | both, cascade only
    std::string stage = "A";
};

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});

void write_table_csv(const std::string& path, const Table& t);
Table read_table_csv(const std::string& path);
std::string summary_json(const ExperimentResult& r, const std::string& config_hash, double check_rtol = 1e-9);
std::string rational_datum_json(const RationalDatumd& d);
RationalDatumd rational_datum_from_json(const std::string& text);

// Compares a fresh result with a stored summary.json; returns one line per mismatch. The stored
// check_rtol wins over `rtol` when present.
std::vector<std::string> compare_summary(const ExperimentResult& fresh, const std::string& stored_json,
                                         double rtol = 1e-9);

} // namespace szlab

#endif
