#include "szlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

namespace szlab {

namespace {

using cd = std::complex<double>;

double rel_drift(double v, double v0)
{
    if (v0 == 0.0)
        return std::abs(v);
    return std::abs(v - v0) / std::abs(v0);
}

Index hankel_size(Index requested, const Grid1Dd& gy)
{
    return (requested < 0 || requested > gy.n / 2) ? -1 : requested;
}

std::string resolve(const ExperimentConfig& cfg, const std::string& p)
{
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? p : (std::filesystem::path(cfg.base_dir) / fp).string();
}

Spectrum2Dd random_datum(const ExperimentConfig& cfg, const Grid2Dd& g)
{
    // Seeded band-limited noise under a Gaussian spectral envelope.
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> nd;
    Spectrum2Dd s = Spectrum2Dd::zeros(g, Representation::Fourier);
    for (Index i = 0; i < g.nx(); ++i)
        for (Index j = 0; j < g.ny(); ++j) {
            const double xi = g.gx.xi(i), eta = g.gy.xi(j);
            const double env = cfg.datum.amplitude * std::exp(-(xi * xi + eta * eta) / 2.0);
            s.values(i, j) = env * cd(nd(rng), nd(rng));
        }
    return s;
}

Spectrum2Dd datum_for(const ExperimentConfig& cfg, const Grid2Dd& g, TuneResult<double>* tune = nullptr)
{
    if (cfg.datum.kind == "snapshot") {
        Spectrum2Dd s = read_snapshot(resolve(cfg, cfg.datum.path));
        if (!(s.grid == g))
            throw ConfigError("snapshot grid does not match the configured grid");
        return to_representation(s, Representation::Fourier);
    }
    if (cfg.datum.kind == "random")
        return random_datum(cfg, g);
    return make_datum(cfg.datum, g, tune);
}

Spectrum2Dd minus(const Spectrum2Dd& a, const Spectrum2Dd& b)
{
    const auto fa = to_representation(a, Representation::Fourier);
    const auto fb = to_representation(b, Representation::Fourier);
    return {fa.grid, fa.values - fb.values, Representation::Fourier};
}

// Window ratio norm / (1 + clock) over the final third of the samples.
void tail_ratios(GrowthReport& r, const std::vector<double>& clock)
{
    const std::size_t n = r.rows.size();
    if (n == 0)
        return;
    r.liminf = std::numeric_limits<double>::infinity();
    r.limsup = 0.0;
    for (std::size_t i = n - std::max<std::size_t>(1, n / 3); i < n; ++i) {
        const double q = r.rows[i].norm / (1.0 + clock[i]);
        r.liminf = std::min(r.liminf, q);
        r.limsup = std::max(r.limsup, q);
    }
}

struct AnchoredRun {
    ScatteringReport scattering;
    std::vector<GrowthSample> samples;
    std::vector<double> coherence_excess;
    Spectrum2Dd G0, U_min;
};

// Resonant solution on the tau clock, anchored at t_max and integrated backward to t_min.
AnchoredRun anchored_run(const Grid2Dd& g, const Spectrum2Dd& datum, double t_min, double t_max, double dt,
                         double dtau, Index samples, double eps_max)
{
    AnchoredRun out;
    const ResonantStated G0 = make_resonant_state(datum);
    out.G0 = to_representation(datum, Representation::Fourier);
    auto& rep = out.scattering;
    rep.eps = y_plus_norm(G0.spectrum);
    rep.hypothesis_ok = rep.eps <= eps_max;

    const std::vector<double> cps = dyadic_checkpoints(t_min, t_max);
    std::vector<Spectrum2Dd> Gk;
    ResonantStated G = G0;
    for (double t : cps) {
        G = evolve_resonant(G, tau_of_t(t), dtau);
        Gk.push_back(to_representation(G.spectrum, Representation::Fourier));
    }

    HalfWaveStated U = unprofile(ProfileStated{Gk.back(), t_max});
    const Index steps_total = step_count(t_max - t_min, dt);
    const Index every = samples > 0 ? std::max<Index>(1, steps_total / samples) : steps_total + 1;
    const std::function<void(const HalfWaveStated&)> observe = [&](const HalfWaveStated& s) {
        if (samples > 0 && (out.samples.empty() || out.samples.back().t != s.t))
            out.samples.push_back({s.t, mixed_sobolev(s.field, 1.0)});
    };
    std::vector<ScatteringRow> rows(cps.size());
    for (std::size_t q = cps.size(); q-- > 0;) {
        if (q + 1 < cps.size()) {
            const Index seg = step_count(cps[q + 1] - cps[q], dt);
            U = evolve_halfwave<double>(U, cps[q], (cps[q + 1] - cps[q]) / double(seg), HalfWaveOptions{}, observe,
                                std::max<Index>(1, std::min(every, seg)));
        } else {
            observe(U);
        }
        const Spectrum2Dd d = minus(profile(U).field, Gk[q]);
        rows[q] = {cps[q], z_norm(d), s_norm(d), y_norm(d)};
        // Unitary propagation leaves L^2_x H^1_y unchanged, so U and its profile share the norm.
        const double gap = mixed_sobolev(U.field, 1.0) - mixed_sobolev(Gk[q], 1.0);
        out.coherence_excess.push_back(std::abs(gap) - rows[q].y);
    }
    out.U_min = to_representation(U.field, Representation::Fourier);
    std::reverse(out.samples.begin(), out.samples.end());
    rep.rows = rows;
    rep.trivial = std::all_of(rows.begin(), rows.end(), [](const ScatteringRow& r) { return r.y == 0.0; });
    rep.strictly_decreasing = rows.size() >= 2;
    for (std::size_t q = 1; q < rows.size(); ++q)
        if (!(rows[q].y < rows[q - 1].y))
            rep.strictly_decreasing = false;
    for (const auto& r : rows)
        if (!std::isfinite(r.y) || !std::isfinite(r.s) || !std::isfinite(r.z))
            throw NumericalError("non-finite scattering difference at t = " + std::to_string(r.t));
    return out;
}

} // namespace

RationalDatumd tuned_family(double amplitude, double c)
{
    return {{0, cd(1.0), cd(amplitude)}, {0, cd(2.0), cd(-amplitude * c)}};
}

double psi_profile(const DatumSpec& d, double xi)
{
    return psi0(xi / d.psi_scale);
}

SzegoStated make_fiber_datum(const DatumSpec& d, const Grid1Dd& gy, TuneResult<double>* tune)
{
    if (d.kind == "zero")
        return {gy, CArray<double>::Zero(gy.n), 0.0};
    if (d.kind == "rational")
        return rational_datum_to_state(d.terms, gy);
    if (d.kind == "single_mode") {
        SzegoStated u{gy, CArray<double>::Zero(gy.n), 0.0};
        const Index m = gy.zero_bin() + static_cast<Index>(std::llround(d.mode_eta / gy.dxi()));
        if (m < gy.zero_bin() || m >= gy.n)
            throw ConfigError("single_mode frequency lies outside the fiber band");
        u.coeffs(m) = d.amplitude;
        return u;
    }
    if (d.kind == "tuned") {
        const double amp = d.amplitude;
        const auto res = tune_multiplicity<double>([amp](double c) { return tuned_family(amp, c); }, d.tune_lo,
                                                   d.tune_hi, gy, d.tune_scan, hankel_size(d.hankel_n, gy));
        if (tune)
            *tune = res;
        return rational_datum_to_state(tuned_family(amp, res.param), gy);
    }
    throw ConfigError("datum kind '" + d.kind + "' has no fiber form");
}

Spectrum2Dd make_datum(const DatumSpec& d, const Grid2Dd& g, TuneResult<double>* tune)
{
    if (d.kind == "zero")
        return Spectrum2Dd::zeros(g, Representation::Fourier);
    if (d.kind == "gaussian") {
        Spectrum2Dd s = Spectrum2Dd::zeros(g, Representation::Physical);
        for (Index i = 0; i < g.nx(); ++i)
            for (Index j = 0; j < g.ny(); ++j) {
                const double x = g.gx.x(i), y = g.gy.x(j);
                s.values(i, j) = d.amplitude * std::exp(-x * x / (2 * d.sigma_x * d.sigma_x) -
                                                        y * y / (2 * d.sigma_y * d.sigma_y));
            }
        return to_representation(s, Representation::Fourier);
    }
    if (d.kind == "snapshot")
        throw ConfigError("snapshot data are loaded by the runner");
    const SzegoStated u = make_fiber_datum(d, g.gy, tune);
    Spectrum2Dd s = Spectrum2Dd::zeros(g, Representation::Fourier);
    for (Index i = 0; i < g.nx(); ++i) {
        const double p = psi_profile(d, g.gx.xi(i));
        if (p != 0.0)
            s.values.row(i) = (d.rho * p * u.coeffs).transpose();
    }
    return s;
}

std::vector<double> dyadic_checkpoints(double t_min, double t_max)
{
    if (!(t_min > 0 && t_min < t_max))
        throw std::invalid_argument("checkpoints need 0 < t_min < t_max");
    std::vector<double> t;
    for (double s = t_min; s < t_max * (1 - 1e-12); s *= 2)
        t.push_back(s);
    t.push_back(t_max);
    return t;
}

ScatteringReport wave_operator_probe(const ExperimentConfig& cfg)
{
    const Grid2Dd g = cfg.grid.make();
    return anchored_run(g, datum_for(cfg, g), cfg.time.t_min, cfg.time.t_max, cfg.time.dt, cfg.time.dtau, 0,
                        cfg.tol("eps_max", 1.0))
        .scattering;
}

GrowthReport cascade_stage_a(const ExperimentConfig& cfg)
{
    const auto& d = cfg.datum;
    const auto& ts = cfg.time;
    const Grid1Dd gx = make_grid(cfg.grid.Lx, cfg.grid.nx);
    const Grid1Dd gy = make_grid(cfg.grid.Ly, cfg.grid.ny);
    GrowthReport rep;
    rep.clock = "tau";
    TuneResult<double> tr;
    const SzegoStated u0 = make_fiber_datum(d, gy, &tr);
    if (d.kind == "tuned") {
        rep.tuned = true;
        rep.tuned_param = tr.param;
        rep.tuned_gap = tr.gap;
    }
    const std::function<double(double)> psi = [&d](double xi) { return psi_profile(d, xi); };
    double pmax = 0.0;
    for (Index i = 0; i < gx.n; ++i)
        pmax = std::max(pmax, psi(gx.xi(i)));
    const double s_end = d.rho * d.rho * pmax * pmax * ts.tau_end;
    const SzegoTrajectory<double> traj = sample_szego(u0, s_end, std::min(ts.fiber_sample, s_end), ts.dtau);

    std::vector<double> taus, fx, fy;
    const Index n = step_count(ts.tau_end, ts.sample);
    for (Index k = 0; k <= n; ++k) {
        const double tau = ts.tau_end * double(k) / double(n);
        const ResonantStated G = scaled_solution(traj, d.rho, psi, gx, tau);
        rep.rows.push_back({tau, mixed_sobolev(G.spectrum, 1.0)});
        taus.push_back(tau);
        if (tau >= ts.fit_lo - 1e-12 && tau <= ts.fit_hi + 1e-12) {
            fx.push_back(tau);
            fy.push_back(rep.rows.back().norm);
        }
    }
    rep.fit_lo = ts.fit_lo;
    rep.fit_hi = ts.fit_hi;
    rep.fit = linear_fit(fx, fy);
    tail_ratios(rep, taus);
    return rep;
}

GrowthReport cascade_stage_b(const ExperimentConfig& cfg)
{
    const StageBSpec sb = cfg.stage_b.value_or(StageBSpec{});
    const Grid2Dd g = sb.grid.make();
    DatumSpec d = cfg.datum;
    d.rho = sb.rho;
    d.hankel_n = sb.hankel_n;
    TuneResult<double> tr;
    const Spectrum2Dd datum = make_datum(d, g, &tr);
    const AnchoredRun run =
        anchored_run(g, datum, cfg.time.t_min, cfg.time.t_max, sb.dt, cfg.time.dtau, sb.samples, cfg.tol("eps_max", 1.0));
    GrowthReport rep;
    rep.clock = "t";
    rep.rows = run.samples;
    rep.coherence_excess = *std::max_element(run.coherence_excess.begin(), run.coherence_excess.end());
    rep.tuned = d.kind == "tuned";
    rep.tuned_param = tr.param;
    rep.tuned_gap = tr.gap;
    std::vector<double> x, y, logs;
    for (const auto& r : rep.rows) {
        x.push_back(1.0 + std::log(r.t));
        y.push_back(r.norm);
        logs.push_back(std::log(r.t));
    }
    rep.fit_lo = cfg.time.t_min;
    rep.fit_hi = cfg.time.t_max;
    if (x.size() >= 2)
        rep.fit = linear_fit(x, y);
    tail_ratios(rep, logs);
    return rep;
}

Trajectory record_halfwave(const ExperimentConfig& cfg, double dt)
{
    const Grid2Dd g = cfg.grid.make();
    Trajectory tr;
    tr.kind = "halfwave";
    tr.sign = cfg.tol("nonlinear_sign", 1.0);
    HalfWaveOptions opt;
    opt.sign = tr.sign;
    const HalfWaveStated U0{datum_for(cfg, g), 0.0};
    const Index every = std::max<Index>(1, static_cast<Index>(std::llround(cfg.time.sample / dt)));
    evolve_halfwave<double>(
        U0, cfg.time.t_max, dt, opt,
        [&](const HalfWaveStated& s) {
            tr.times.push_back(s.t);
            tr.states.push_back(s.field);
        },
        every);
    return tr;
}

Trajectory record_resonant(const ExperimentConfig& cfg)
{
    const Grid2Dd g = cfg.grid.make();
    Trajectory tr;
    tr.kind = "resonant";
    tr.hankel_n = hankel_size(cfg.datum.hankel_n, g.gy);
    const ResonantStated G0 = make_resonant_state(datum_for(cfg, g));
    const Index every = std::max<Index>(1, static_cast<Index>(std::llround(cfg.time.sample / cfg.time.dtau)));
    evolve_resonant<double>(
        G0, cfg.time.tau_end, cfg.time.dtau,
        [&](const ResonantStated& s) {
            tr.times.push_back(s.tau);
            tr.states.push_back(s.spectrum);
        },
        every);
    return tr;
}

ConservationReport conservation_battery(const Trajectory& tr)
{
    ConservationReport rep;
    if (tr.states.empty())
        return rep;
    const bool hw = tr.kind == "halfwave";
    std::vector<RArray<double>> traces;
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
        const Spectrum2Dd& s = tr.states[k];
        NormReport r;
        r.t = tr.times[k];
        r.grid = std::to_string(s.grid.nx()) + "x" + std::to_string(s.grid.ny());
        r.add("mass", mass(s));
        if (hw) {
            r.add("hamiltonian_abs", std::abs(hamiltonian(s, tr.sign)));
        } else {
            traces.push_back(fiber_trace_norms(ResonantStated{s, tr.times[k]}, tr.hankel_n));
            r.add("trace_norm_sum", traces.back().sum());
            r.add("trace_norm_max", traces.back().maxCoeff());
        }
        r.add("z_norm", z_norm(s));
        r.add("mixed_sobolev_1", mixed_sobolev(s, 1.0));
        rep.series.push_back(r);
    }
    auto value = [&](std::size_t k, const std::string& name) {
        for (const auto& [n, v] : rep.series[k].values)
            if (n == name)
                return v;
        return 0.0;
    };
    const double span = std::abs(tr.times.back() - tr.times.front());
    double dm = 0, dh = 0, dtr = 0, zlo = 1, zhi = 1;
    const double m0 = value(0, "mass"), z0 = value(0, "z_norm");
    const double h0 = hw ? hamiltonian(tr.states[0], tr.sign) : 0.0;
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
        dm = std::max(dm, rel_drift(value(k, "mass"), m0));
        if (hw)
            dh = std::max(dh, rel_drift(hamiltonian(tr.states[k], tr.sign), h0));
        else
            for (Index i = 0; i < traces[k].size(); ++i)
                if (traces[0](i) > 0)
                    dtr = std::max(dtr, rel_drift(traces[k](i), traces[0](i)));
        if (z0 > 0) {
            zlo = std::min(zlo, value(k, "z_norm") / z0);
            zhi = std::max(zhi, value(k, "z_norm") / z0);
        }
    }
    rep.drifts["mass_rel"] = dm;
    rep.drifts["mass_rate"] = span > 0 ? dm / span : 0.0;
    if (hw)
        rep.drifts["hamiltonian_rel"] = dh;
    else
        rep.drifts["trace_rel"] = dtr;
    rep.drifts["z_ratio_min"] = z0 > 0 ? zlo : 0.0;
    rep.drifts["z_ratio_max"] = z0 > 0 ? zhi : 0.0;
    return rep;
}

DecayTable<double> resonant_compare(const ExperimentConfig& cfg)
{
    const Grid2Dd g = cfg.grid.make();
    return resonant_comparison(datum_for(cfg, g), cfg.time.t_list, cfg.tol("with_z", 0.0) != 0.0);
}

Szego1DResult szego1d(const ExperimentConfig& cfg)
{
    const Grid1Dd gy = make_grid(cfg.grid.Ly, cfg.grid.ny);
    const SzegoStated u0 = make_fiber_datum(cfg.datum, gy);
    const Index hn = hankel_size(cfg.datum.hankel_n, gy);
    Szego1DResult out;
    std::vector<double> times;
    const Index n = step_count(cfg.time.t_max, cfg.time.sample);
    for (Index k = 0; k <= n; ++k)
        times.push_back(cfg.time.t_max * double(k) / double(n));
    out.growth = cascade_rate_1d(u0, times, cfg.time.dt, hn);
    const bool zero = (u0.coeffs == cd(0)).all();
    const SzegoStated u1 = evolve_szego(u0, cfg.time.t_max, cfg.time.dt);
    if (!zero) {
        out.sv_start = hankel_singular_values(hankel_matrix(u0, hn));
        out.sv_end = hankel_singular_values(hankel_matrix(u1, hn));
    }
    const double m0 = out.growth.rows.front().mass;
    for (const auto& r : out.growth.rows)
        out.mass_drift = std::max(out.mass_drift, rel_drift(r.mass, m0));
    return out;
}

namespace {

Table growth_table(const std::string& name, const GrowthReport& r)
{
    Table t{name, {r.clock, "mixed_sobolev_1"}, {}};
    for (const auto& s : r.rows)
        t.rows.push_back({s.t, s.norm});
    return t;
}

void run_probe(const ExperimentConfig& cfg, ExperimentResult& res)
{
    const Grid2Dd g = cfg.grid.make();
    const AnchoredRun run = anchored_run(g, datum_for(cfg, g), cfg.time.t_min, cfg.time.t_max, cfg.time.dt,
                                         cfg.time.dtau, 0, cfg.tol("eps_max", 1.0));
    const auto& rep = run.scattering;
    Table t{"scattering", {"t", "z_diff", "s_diff", "y_diff"}, {}};
    for (const auto& r : rep.rows)
        t.rows.push_back({r.t, r.z, r.s, r.y});
    res.tables.push_back(t);
    res.values["eps"] = rep.eps;
    res.values["y_diff_first"] = rep.rows.front().y;
    res.values["y_diff_last"] = rep.rows.back().y;
    res.verdicts["monotone"] = rep.verdict();
    if (!rep.hypothesis_ok)
        res.notes.push_back("hypothesis violated: ||G0||_Y+ = " + std::to_string(rep.eps) + " exceeds eps_max");
    res.values["hypothesis_ok"] = rep.hypothesis_ok ? 1.0 : 0.0;
    res.snapshots.push_back({"G0", run.G0});
    res.snapshots.push_back({"U_tmin", run.U_min});
}

void run_cascade(const ExperimentConfig& cfg, const RunOptions& opt, ExperimentResult& res)
{
    const bool flat = cfg.datum.kind == "single_mode" || cfg.datum.kind == "zero";
    if (opt.stage == "A" || opt.stage == "both") {
        const GrowthReport a = cascade_stage_a(cfg);
        res.tables.push_back(growth_table("growth_stage_a", a));
        res.slopes["stage_a"] = a.fit.slope;
        res.r2["stage_a"] = a.fit.r2;
        res.values["stage_a_liminf"] = a.liminf;
        res.values["stage_a_limsup"] = a.limsup;
        if (a.tuned) {
            res.values["tuned_param"] = a.tuned_param;
            res.values["tuned_gap"] = a.tuned_gap;
        }
        const double norm0 = a.rows.empty() ? 0.0 : a.rows.front().norm;
        if (flat)
            res.verdicts["stage_a_flat"] = std::abs(a.fit.slope) <= cfg.tol("flat_slope", 1e-10) * std::max(1.0, norm0);
        else
            res.verdicts["stage_a_growth"] = a.fit.slope > 0 && a.fit.r2 > cfg.tol("r2_min", 0.99);
    }
    if (opt.stage == "B" || opt.stage == "both") {
        const GrowthReport b = cascade_stage_b(cfg);
        res.tables.push_back(growth_table("growth_stage_b", b));
        res.slopes["stage_b"] = b.fit.slope;
        res.r2["stage_b"] = b.fit.r2;
        res.values["stage_b_liminf"] = b.liminf;
        res.values["stage_b_limsup"] = b.limsup;
        res.values["stage_b_coherence_excess"] = b.coherence_excess;
        res.verdicts["stage_ab_coherence"] = b.coherence_excess <= 1e-12;
        if (!flat)
            res.verdicts["stage_b_linear"] = b.fit.r2 > cfg.tol("r2_min_b", 0.95);
    }
}

void run_conservation(const ExperimentConfig& cfg, ExperimentResult& res)
{
    const bool hw = cfg.source == "halfwave";
    const Trajectory tr = hw ? record_halfwave(cfg, cfg.time.dt) : record_resonant(cfg);
    const ConservationReport rep = conservation_battery(tr);
    const std::vector<std::string> names = hw ? std::vector<std::string>{"mass", "hamiltonian_abs", "z_norm",
                                                                         "mixed_sobolev_1"}
                                              : std::vector<std::string>{"mass", "trace_norm_sum", "trace_norm_max",
                                                                         "z_norm"};
    Table t{"trajectory", {hw ? "t" : "tau"}, {}};
    for (const auto& n : names)
        t.columns.push_back(n);
    for (const auto& r : rep.series) {
        std::vector<double> row{r.t};
        for (const auto& n : names)
            for (const auto& [k, v] : r.values)
                if (k == n)
                    row.push_back(v);
        t.rows.push_back(row);
    }
    res.tables.push_back(t);
    for (const auto& [k, v] : rep.drifts)
        res.drifts[k] = v;
    if (hw) {
        res.verdicts["mass"] = rep.drifts.at("mass_rate") <= cfg.tol("mass_rate", 1e-8);
        if (cfg.refine) {
            const ConservationReport fine = conservation_battery(record_halfwave(cfg, cfg.time.dt / 2));
            const double h1 = rep.drifts.at("hamiltonian_rel"), h2 = fine.drifts.at("hamiltonian_rel");
            res.drifts["hamiltonian_rel_half_dt"] = h2;
            res.values["hamiltonian_ratio"] = h2 > 0 ? h1 / h2 : 0.0;
            res.verdicts["hamiltonian_order"] =
                h1 == 0.0 || (h2 > 0 && h1 / h2 >= cfg.tol("hamiltonian_ratio", 4.0));
        }
    } else {
        res.verdicts["trace_norms"] = rep.drifts.at("trace_rel") <= cfg.tol("trace_drift", 1e-5);
        const double lo = rep.drifts.at("z_ratio_min"), hi = rep.drifts.at("z_ratio_max");
        const bool zero = rep.series.front().values.empty() || rep.drifts.at("z_ratio_max") == 0.0;
        res.verdicts["z_band"] = zero || (lo >= cfg.tol("z_lo", 0.9) && hi <= cfg.tol("z_hi", 1.1));
    }
    res.snapshots.push_back({"final", tr.states.back()});
}

void run_compare(const ExperimentConfig& cfg, ExperimentResult& res)
{
    const DecayTable<double> tab = resonant_compare(cfg);
    Table t{"decay", {"t", "z_value", "l2_value"}, {}};
    std::vector<double> ts, ls;
    for (const auto& r : tab.rows) {
        t.rows.push_back({r.t, r.z_value, r.l2_value});
        if (r.l2_value > 0) {
            ts.push_back(r.t);
            ls.push_back(r.l2_value);
        }
    }
    res.tables.push_back(t);
    if (ts.size() >= 2) {
        const LinearFit f = loglog_fit(ts, ls);
        res.slopes["l2_all"] = f.slope;
        res.r2["l2_all"] = f.r2;
        res.slopes["l2_upper"] = tab.fit_l2.slope;
        res.verdicts["decay"] = f.slope <= cfg.tol("slope_max", -1.05);
    } else {
        res.verdicts["decay"] = ts.empty();
    }
}

void run_szego(const ExperimentConfig& cfg, ExperimentResult& res)
{
    const Szego1DResult r = szego1d(cfg);
    Table t{"growth", {"t", "dy_norm", "mass", "trace_norm"}, {}};
    for (const auto& row : r.growth.rows)
        t.rows.push_back({row.t, row.dy_norm, row.mass, row.trace_norm});
    res.tables.push_back(t);
    res.slopes["dy_norm"] = r.growth.fit.slope;
    res.r2["dy_norm"] = r.growth.fit.r2;
    res.drifts["mass_rel"] = r.mass_drift;
    double sv = 0.0;
    Index rank = 0;
    if (r.sv_start.size()) {
        const double cut = cfg.tol("rank_cut", 1e-8) * r.sv_start(0);
        for (Index i = 0; i < r.sv_start.size(); ++i)
            if (r.sv_start(i) > cut) {
                ++rank;
                sv = std::max(sv, rel_drift(r.sv_end(i), r.sv_start(i)));
            }
    }
    res.drifts["singular_values_rel"] = sv;
    res.values["rank"] = double(rank);
    res.verdicts["mass"] = r.mass_drift <= cfg.tol("mass_drift", 1e-8);
    res.verdicts["singular_values"] = sv <= cfg.tol("sv_drift", 1e-5);
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt)
{
    ExperimentResult res;
    res.experiment = cfg.experiment;
    if (opt.stage != "A" && opt.stage != "B" && opt.stage != "both")
        throw ConfigError("stage must be A, B or both");
    const ExperimentConfig& c = cfg;
    if (cfg.experiment == "wave_operator_probe")
        run_probe(c, res);
    else if (cfg.experiment == "cascade")
        run_cascade(c, opt, res);
    else if (cfg.experiment == "conservation")
        run_conservation(c, res);
    else if (cfg.experiment == "resonant_compare")
        run_compare(c, res);
    else if (cfg.experiment == "szego1d")
        run_szego(c, res);
    else
        throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    return res;
}

} // namespace szlab
