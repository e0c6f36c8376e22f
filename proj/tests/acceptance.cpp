// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed here.
#include "oracles.hpp"

#include "szlab/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>

using namespace szlab;
using oracle::cd;

namespace {

struct Outcome {
    bool pass = false;
    // failure analysed as out of reach for any finite test set
    bool known_unreachable = false;
    std::string detail;
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

RationalDatumd two_term() { return {{0, cd(1.0), cd(1.0)}, {0, cd(2.0, 0.3), cd(-0.8)}}; }

ExperimentConfig shipped(const std::string& name) { return load_config(std::string(SZLAB_CONFIG_DIR) + "/" + name); }

double rel(const CField<double>& a, const CField<double>& b)
{
    const double nb = std::sqrt(b.abs2().sum());
    return std::sqrt((a - b).abs2().sum()) / (nb > 0 ? nb : 1.0);
}

// 1. transforms, Parseval, projectors, Littlewood-Paley partition
Outcome spectral_substrate()
{
    std::mt19937_64 rng(101);
    double rt = 0, pv = 0, pu = 0;
    bool exact = true;
    for (auto [L, n] : {std::pair{10.0, Index(256)}, std::pair{1.3, Index(64)}, std::pair{25.0, Index(4096)}}) {
        const auto g = make_grid(L, n);
        const CArray<double> f = oracle::random_field(rng, n);
        const CArray<double> c = forward(g, f);
        rt = std::max(rt, oracle::rel_err(inverse(g, c), f));
        const double lhs = f.abs2().sum() * g.dx(), rhs = 2 * pi_v<double> * c.abs2().sum() * g.dxi();
        pv = std::max(pv, std::abs(lhs - rhs) / lhs);

        const CArray<double> p = szego_project(g, c, Sign::Plus), m = szego_project(g, c, Sign::Minus);
        exact = exact && (szego_project(g, p, Sign::Plus) == p).all() && (szego_project(g, p, Sign::Minus) == cd(0)).all() &&
                ((p + m) == c).all();

        const auto [lo, hi] = lp_range(g);
        CArray<double> sum = CArray<double>::Zero(n);
        for (int k = lo; k <= hi; ++k)
            sum += lp_block(g, c, k);
        for (Index q = 0; q < n; ++q)
            if (g.xi(q) != 0.0)
                pu = std::max(pu, std::abs(sum(q) - c(q)) / std::abs(c(q)));
    }
    const auto g2 = make_grid2d(6.0, 64, 3.0, 32);
    const Spectrum2Dd s{g2, oracle::random_field2(rng, 64, 32), Representation::Physical};
    const auto f = to_representation(s, Representation::Fourier);
    const auto back = to_representation(to_representation(f, Representation::XFourier), Representation::Physical);
    rt = std::max(rt, rel(back.values, s.values));
    const double lhs = s.values.abs2().sum() * g2.gx.dx() * g2.gy.dx();
    const double rhs = 4 * pi_v<double> * pi_v<double> * f.values.abs2().sum() * g2.gx.dxi() * g2.gy.dxi();
    pv = std::max(pv, std::abs(lhs - rhs) / lhs);
    Outcome o;
    o.pass = rt <= 1e-12 && pv <= 1e-12 && exact && pu <= 1e-10;
    o.detail = "round trip " + fmt(rt) + " <= 1e-12, Parseval " + fmt(pv) + " <= 1e-12, projectors " +
               (exact ? "exact" : "NOT exact") + ", partition of unity " + fmt(pu) + " <= 1e-10";
    return o;
}

// 2. rank-2 Szego datum: mass and singular values
Outcome szego_conservation()
{
    const ExperimentConfig cfg = shipped("szego1d.json");
    const ExperimentResult r = run_experiment(cfg);
    const double dm = r.drifts.at("mass_rel"), ds = r.drifts.at("singular_values_rel");
    Outcome o;
    o.pass = dm <= 1e-8 && ds <= 1e-5 && r.values.at("rank") == 2.0;
    o.detail = "mass drift " + fmt(dm) + " <= 1e-8, singular value drift " + fmt(ds) + " <= 1e-5 (rank " +
               fmt(r.values.at("rank")) + ")";
    return o;
}

// 3. Lax residual under probe-step halving
Outcome lax_convergence()
{
    const auto g = make_grid(25.0, 512);
    const std::vector<RationalDatumd> data = {
        two_term(),
        {{0, cd(1.0), cd(1.0)}, {1, cd(1.5, 0.3), cd(-0.6)}},
        {{0, cd(0.8), cd(0.0, 0.7)}, {0, cd(1.5, -0.4), cd(0.5)}},
    };
    double worst = 1e300;
    std::string shown;
    for (const auto& d : data) {
        const auto u = rational_datum_to_state(d, g);
        const double a = lax_residual(u, 0.1), b = lax_residual(u, 0.05);
        worst = std::min(worst, a / b);
        shown += (shown.empty() ? "" : ", ") + fmt(a / b);
    }
    Outcome o;
    o.pass = worst >= 3.5;
    o.detail = "residual ratios " + shown + " >= 3.5";
    return o;
}

// 4. decoupled vs direct resonant tendency
Outcome resonant_decoupling()
{
    std::mt19937_64 rng(404);
    const auto g = make_grid2d(4.0, 8, pi_v<double>, 16);
    double worst = 0;
    for (int r = 0; r < 10; ++r) {
        const auto G = make_resonant_state(Spectrum2Dd{g, 0.3 * oracle::random_field2(rng, 8, 16), Representation::Fourier});
        const auto a = to_representation(resonant_rhs(G), Representation::Fourier);
        const auto b = to_representation(resonant_rhs_direct(G), Representation::Fourier);
        worst = std::max(worst, rel(a.values, b.values));
    }
    Outcome o;
    o.pass = worst <= 1e-10;
    o.detail = "max relative L2 difference " + fmt(worst) + " <= 1e-10 over 10 states on 8x16";
    return o;
}

// 5. classifier coverage, exact omega, worked triples
Outcome classifier()
{
    std::mt19937_64 rng(505);
    std::uniform_int_distribution<int> pick(-8, 8);
    std::set<int> hit;
    bool exact = true;
    for (int s = 0; s < 10000; ++s) {
        const double e = pick(rng) * 0.25, e1 = pick(rng) * 0.25, e2 = pick(rng) * 0.25;
        const auto rc = classify_resonance(e, e1, e2);
        if (rc.case_id >= 1)
            hit.insert(rc.case_id);
        exact = exact && rc.omega == omega_direct(e, e1, e2);
    }
    const auto a = classify_resonance(1.0, 2.0, -1.0);
    const auto b = classify_resonance(2.0, 1.0, 1.0);
    const auto c = classify_resonance(-1.0, -2.0, 1.0);
    const bool worked = a.case_id == 1 && a.omega == 2.0 && a.signs == std::array<int, 4>{+1, -1, -1, -1} &&
                        b.case_id == 0 && b.omega == 0.0 && c.case_id == 2 && c.omega == 2.0 &&
                        omega_direct(-1.0, -2.0, 1.0) == 2.0;
    Outcome o;
    const bool coverage = hit.size() == 14;
    o.pass = coverage && exact && worked;
    o.known_unreachable = !coverage && exact && worked && !hit.count(11) && !hit.count(12) && hit.size() == 12;
    o.detail = "coverage " + std::to_string(hit.size()) + "/14 (cases 11 and 12 have empty interior), omega " +
               (exact ? "exact" : "NOT exact") + " on 10^4 triples, worked triples " + (worked ? "match" : "DIFFER");
    return o;
}

// 6. N^t two evaluation paths
Outcome n_identity()
{
    std::mt19937_64 rng(606);
    const auto g = make_grid2d(8.0, 64, 8.0, 64);
    double worst = 0;
    for (int r = 0; r < 100; ++r) {
        const CField<double> F = oracle::random_field2(rng, 64, 64), G = oracle::random_field2(rng, 64, 64),
                             H = oracle::random_field2(rng, 64, 64);
        const double t = 0.05 + 0.07 * r;
        worst = std::max(worst, rel(op_N(g, F, G, H, t), op_N_via_I(g, F, G, H, t)));
    }
    Outcome o;
    o.pass = worst <= 1e-12;
    o.detail = "max relative difference " + fmt(worst) + " <= 1e-12 over 100 fields on 64x64";
    return o;
}

// 7. remainder decay
Outcome remainder_decay()
{
    const ExperimentConfig cfg = shipped("resonant_compare.json");
    const ExperimentResult r = run_experiment(cfg);
    const double s = r.slopes.at("l2_all");
    Outcome o;
    o.pass = s <= -1.05;
    o.detail = "log-log slope " + fmt(s) + " <= -1.05 on t in [4, 256] (nx 4096, Lx 800)";
    return o;
}

// 8. half-wave conservation
Outcome halfwave_conservation()
{
    const ExperimentConfig cfg = shipped("conservation_halfwave.json");
    const ExperimentResult r = run_experiment(cfg);
    const double rate = r.drifts.at("mass_rate"), ratio = r.values.at("hamiltonian_ratio");
    Outcome o;
    o.pass = rate <= 1e-8 && ratio >= 4.0;
    o.detail = "mass drift " + fmt(rate) + "/unit time <= 1e-8, Hamiltonian drift ratio " +
               std::to_string(ratio) + " >= 4 under dt halving (" + fmt(r.drifts.at("hamiltonian_rel")) + " -> " +
               fmt(r.drifts.at("hamiltonian_rel_half_dt")) + ")";
    return o;
}

ExperimentConfig probe_config(double rho)
{
    ExperimentConfig cfg = shipped("wave_operator_probe.json");
    cfg.datum.rho = rho;
    return cfg;
}

// 9. wave-operator trend and rho halving
Outcome wave_operator_trend()
{
    const ScatteringReport a = wave_operator_probe(probe_config(0.05));
    const ScatteringReport b = wave_operator_probe(probe_config(0.025));
    // The anchor row is zero up to roundoff by construction, so the halving ratio is read below it.
    double worst = 1e300;
    std::string shown;
    for (std::size_t q = 0; q + 1 < a.rows.size(); ++q) {
        const double r = a.rows[q].y / b.rows[q].y;
        worst = std::min(worst, r);
        shown += (shown.empty() ? "" : ", ") + fmt(r);
    }
    std::string ys;
    for (const auto& r : a.rows)
        ys += (ys.empty() ? "" : ", ") + fmt(r.y);
    Outcome o;
    o.pass = a.strictly_decreasing && worst >= 4.0;
    o.detail = std::string("Y gap at t = e, 2e, 4e, e^3: ") + ys + (a.strictly_decreasing ? " strictly decreasing" : " NOT decreasing") +
               "; rho halving ratios " + shown + " >= 4; small-data flag eps " + fmt(a.eps) +
               (a.hypothesis_ok ? " within eps_max" : " exceeds eps_max (reported, not gating)");
    return o;
}

ExperimentConfig cascade_config(const std::string& kind)
{
    return shipped(kind == "tuned" ? "cascade.json" : "cascade_control.json");
}

// 10. Stage A cascade and single-mode control
Outcome cascade(std::string& info)
{
    const GrowthReport a = cascade_stage_a(cascade_config("tuned"));
    const GrowthReport c = cascade_stage_a(cascade_config("single_mode"));
    Outcome o;
    o.pass = a.fit.slope > 0 && a.fit.r2 > 0.99 && std::abs(c.fit.slope) < 1e-3 * a.fit.slope;
    o.detail = "tuned slope " + fmt(a.fit.slope) + " > 0 with R2 " + std::to_string(a.fit.r2) +
               " > 0.99 on tau in [10, 100]; control |slope| " + fmt(std::abs(c.fit.slope)) + " < 1e-3 x tuned";

    const ExperimentConfig b = cascade_config("tuned");
    const GrowthReport sb = cascade_stage_b(b);
    const double rel_growth = (sb.rows.back().norm - sb.rows.front().norm) / sb.rows.front().norm;
    info = "Stage B (optional, not gating): slope " + fmt(sb.fit.slope) + " vs 1 + log t, R2 " + fmt(sb.fit.r2) +
           " (> 0.95 wanted), relative growth over [e, e^3] " + fmt(rel_growth) + "; consistent with, not a check of, log growth";
    return o;
}

// 11. Z profile and per-fiber trace norms along the resonant flow
Outcome z_profile(std::string& info)
{
    ExperimentConfig cfg = shipped("conservation_resonant.json");
    const ConservationReport r = conservation_battery(record_resonant(cfg));
    const double tr = r.drifts.at("trace_rel"), lo = r.drifts.at("z_ratio_min"), hi = r.drifts.at("z_ratio_max");
    Outcome o;
    o.pass = tr <= 1e-5 && lo >= 0.9 && hi <= 1.1;
    o.detail = "rho 0.05: trace norm drift " + fmt(tr) + " <= 1e-5, Z ratio in [" + std::to_string(lo) + ", " +
               std::to_string(hi) + "] within [0.9, 1.1]";

    cfg.datum.rho = 1.0;
    const ConservationReport u = conservation_battery(record_resonant(cfg));
    info = "unit-size datum rho 1 (not gating): trace norm drift " + fmt(u.drifts.at("trace_rel")) + ", Z ratio in [" +
           std::to_string(u.drifts.at("z_ratio_min")) + ", " + std::to_string(u.drifts.at("z_ratio_max")) + "]";
    return o;
}

} // namespace

int main()
{
    using clock = std::chrono::steady_clock;
    int unexpected = 0, known = 0;
    auto report = [&](int id, const char* name, const Outcome& o, double seconds) {
        const char* tag = o.pass ? "PASS" : "FAIL";
        std::cout << "criterion " << id << " " << tag << (o.known_unreachable ? " (known-unreachable)" : "") << "  "
                  << name << ": " << o.detail << "  [" << fmt(seconds) << " s]" << std::endl;
        if (!o.pass)
            (o.known_unreachable ? known : unexpected) += 1;
    };
    auto timed = [&](int id, const char* name, auto&& fn) {
        const auto t0 = clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("error: ") + e.what();
        }
        report(id, name, o, std::chrono::duration<double>(clock::now() - t0).count());
    };

    std::string info10, info11;
    timed(1, "spectral substrate", spectral_substrate);
    timed(2, "Szego conservation", szego_conservation);
    timed(3, "Lax residual convergence", lax_convergence);
    timed(4, "resonant decoupling", resonant_decoupling);
    timed(5, "resonance classifier", classifier);
    timed(6, "N identity", n_identity);
    timed(7, "remainder decay", remainder_decay);
    timed(8, "half-wave conservation", halfwave_conservation);
    timed(9, "wave-operator trend", wave_operator_trend);
    timed(10, "cascade", [&] { return cascade(info10); });
    if (!info10.empty())
        std::cout << "  info 10: " << info10 << std::endl;
    timed(11, "conserved Z profile", [&] { return z_profile(info11); });
    if (!info11.empty())
        std::cout << "  info 11: " << info11 << std::endl;

    std::cout << "summary: " << (11 - unexpected - known) << " pass, " << known << " known-unreachable, " << unexpected
              << " unexpected failures" << std::endl;
    return unexpected == 0 ? 0 : 1;
}
