#ifndef SZLAB_SZEGO_HPP
#define SZLAB_SZEGO_HPP

#include "szlab/norms.hpp"
#include "szlab/stats.hpp"

#include <Eigen/SVD>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>

namespace szlab {

// Fourier coefficients c_m = u^(eta_m) of a Hardy-space fiber (c_m = 0 for eta_m < 0).
template <typename Scalar>
struct SzegoState {
    Grid1D<Scalar> grid;
    CArray<Scalar> coeffs;
    Scalar t = Scalar(0);
};

using SzegoStated = SzegoState<double>;

inline constexpr double default_szego_dt = 1e-2;

// 2 pi sum |c|^2 d_eta, i.e. the physical L^2 mass.
template <typename Scalar>
Scalar spectral_mass(const Grid1D<Scalar>& g, const CArray<Scalar>& c)
{
    return Scalar(2) * pi_v<Scalar> * c.abs2().sum() * g.dxi();
}

template <typename Scalar>
Scalar dy_norm(const Grid1D<Scalar>& g, const CArray<Scalar>& c)
{
    using std::sqrt;
    Scalar s(0);
    for (Index m = 0; m < g.n; ++m)
        s += g.xi(m) * g.xi(m) * std::norm(c(m));
    return sqrt(Scalar(2) * pi_v<Scalar> * s * g.dxi());
}

// -i Pi_sign(|u|^2 u) for u supported in the given sector.
template <typename Scalar>
CArray<Scalar> sector_tendency(const Grid1D<Scalar>& g, const CArray<Scalar>& c, Sign sign)
{
    return Complex<Scalar>(0, -1) * szego_project(g, cubic_product(g, c, c, c), sign);
}

template <typename Scalar>
CArray<Scalar> szego_rhs(const SzegoState<Scalar>& u)
{
    if (u.coeffs.size() != u.grid.n)
        throw std::invalid_argument("Szego state does not match its grid");
    return sector_tendency(u.grid, u.coeffs, Sign::Plus);
}

template <typename Scalar, typename Rhs>
void rk4_step(CArray<Scalar>& c, Scalar dt, Rhs&& f)
{
    const CArray<Scalar> k1 = f(c);
    const CArray<Scalar> k2 = f(CArray<Scalar>(c + (dt / 2) * k1));
    const CArray<Scalar> k3 = f(CArray<Scalar>(c + (dt / 2) * k2));
    const CArray<Scalar> k4 = f(CArray<Scalar>(c + dt * k3));
    c += (dt / 6) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
}

inline Index step_count(double span, double dt)
{
    if (!(dt > 0))
        throw std::invalid_argument("time step must be positive");
    return std::max<Index>(span == 0 ? 0 : 1, static_cast<Index>(std::llround(std::abs(span) / dt)));
}

template <typename Scalar>
void check_mass(const CArray<Scalar>& c, Scalar m0, Scalar t, Scalar limit = Scalar(0.01))
{
    using std::abs;
    const Scalar m = c.abs2().sum();
    if (!std::isfinite(static_cast<double>(m)) || !c.allFinite())
        throw NumericalError("Szego flow produced non-finite values at t = " + std::to_string(double(t)));
    if (m0 > Scalar(0) && abs(m - m0) > limit * m0)
        throw NumericalError("Szego flow mass drift above 1% at t = " + std::to_string(double(t)));
}

// Classical RK4 from u0.t to t_end (either direction). The observer, if any, sees the
// initial state, every `every`-th step and the final state.
template <typename Scalar>
SzegoState<Scalar> evolve_szego(const SzegoState<Scalar>& u0, Scalar t_end, Scalar dt = Scalar(default_szego_dt),
                                const std::function<void(const SzegoState<Scalar>&)>& observer = {}, Index every = 1)
{
    SzegoState<Scalar> u = u0;
    const Index steps = step_count(double(t_end - u0.t), double(dt));
    const Scalar h = steps ? (t_end - u0.t) / Scalar(steps) : Scalar(0);
    const Scalar m0 = u.coeffs.abs2().sum();
    auto f = [&](const CArray<Scalar>& c) { return sector_tendency(u.grid, c, Sign::Plus); };
    if (observer)
        observer(u);
    for (Index s = 1; s <= steps; ++s) {
        rk4_step(u.coeffs, h, f);
        u.t = u0.t + Scalar(s) * h;
        check_mass(u.coeffs, m0, u.t);
        if (observer && (s % every == 0 || s == steps))
            observer(u);
    }
    u.t = t_end;
    return u;
}

template <typename Scalar>
struct HankelOp {
    Index n = 0;
    CMatrix<Scalar> matrix;
    Scalar deta = Scalar(0);
};

// M[i][j] = u^(eta_i + eta_j) d_eta on eta >= 0 bins; zero past the band.
template <typename Scalar>
HankelOp<Scalar> hankel_matrix(const SzegoState<Scalar>& u, Index n = -1)
{
    const auto& g = u.grid;
    if (n < 0)
        n = g.n / 2;
    if (n > g.n / 2)
        throw std::invalid_argument("Hankel truncation exceeds grid half-size");
    HankelOp<Scalar> H;
    H.n = n;
    H.deta = g.dxi();
    H.matrix.resize(n, n);
    const Index z = g.zero_bin();
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            const Index m = z + i + j;
            H.matrix(i, j) = m < g.n ? u.coeffs(m) * H.deta : Complex<Scalar>(0);
        }
    return H;
}

// M_T[i][j] = b^(eta_i - eta_j) d_eta.
template <typename Scalar>
CMatrix<Scalar> toeplitz_from_coeffs(const Grid1D<Scalar>& g, const CArray<Scalar>& bhat, Index n)
{
    if (n > g.n / 2)
        throw std::invalid_argument("Toeplitz truncation exceeds grid half-size");
    CMatrix<Scalar> T(n, n);
    const Index z = g.zero_bin();
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            T(i, j) = bhat(z + i - j) * g.dxi();
    return T;
}

template <typename Scalar>
CMatrix<Scalar> toeplitz_matrix(const Field1D<Scalar>& b, Index n = -1)
{
    if (n < 0)
        n = b.grid.n / 2;
    return toeplitz_from_coeffs(b.grid, forward(b.grid, b.values), n);
}

// Singular values of the complex symmetric M, descending. They coincide with the
// square roots of the eigenvalues of M conj(M) = M M^*.
template <typename Scalar>
RArray<Scalar> hankel_singular_values(const HankelOp<Scalar>& H)
{
    if (H.n == 0)
        return RArray<Scalar>();
    Eigen::BDCSVD<CMatrix<Scalar>> svd(H.matrix);
    if (svd.info() != Eigen::Success)
        throw NumericalError("Hankel singular value decomposition failed");
    return svd.singularValues().array();
}

template <typename Scalar>
Scalar peller_trace_norm(const HankelOp<Scalar>& H)
{
    return hankel_singular_values(H).sum();
}

// ||(M(t+dt) - M(t-dt)) / 2dt - (B M - M conj(B))||_F with B = (i/2) M conj(M) - i T_{|u|^2}.
template <typename Scalar>
Scalar lax_residual(const SzegoState<Scalar>& u, Scalar dt_probe, Index n = -1)
{
    using std::ceil;
    const auto& g = u.grid;
    if (n < 0)
        n = g.n / 2;
    const Index sub = std::max<Index>(1, static_cast<Index>(ceil(double(dt_probe) / 5e-3)));
    const Scalar h = dt_probe / Scalar(sub);
    SzegoState<Scalar> up = evolve_szego(u, u.t + dt_probe, h);
    SzegoState<Scalar> um = evolve_szego(u, u.t - dt_probe, h);
    const CMatrix<Scalar> Mp = hankel_matrix(up, n).matrix;
    const CMatrix<Scalar> Mm = hankel_matrix(um, n).matrix;
    const CMatrix<Scalar> M = hankel_matrix(u, n).matrix;

    // |u|^2 coefficients without aliasing: product on the padded grid, cropped back.
    const Grid1D<Scalar> p = padded_grid(g);
    const CArray<Scalar> phys = inverse(p, pad(u.coeffs, p.n));
    const CArray<Scalar> bhat = truncate(forward(p, CArray<Scalar>(phys.abs2().template cast<Complex<Scalar>>())), g.n);
    const CMatrix<Scalar> T = toeplitz_from_coeffs(g, bhat, n);

    const Complex<Scalar> I(0, 1);
    const CMatrix<Scalar> B = (I / Scalar(2)) * (M * M.conjugate()) - I * T;
    const CMatrix<Scalar> comm = B * M - M * B.conjugate();
    const CMatrix<Scalar> Mdot = (Mp - Mm) / (Scalar(2) * dt_probe);
    return (Mdot - comm).norm();
}

template <typename Scalar>
struct RationalTerm {
    int k = 0;
    Complex<Scalar> alpha{1, 0};
    Complex<Scalar> c{1, 0};
};

template <typename Scalar>
using RationalDatum = std::vector<RationalTerm<Scalar>>;

using RationalDatumd = RationalDatum<double>;

template <typename Scalar>
void validate(const RationalDatum<Scalar>& d)
{
    for (const auto& t : d) {
        if (t.k < 0)
            throw std::invalid_argument("rational term power k must be nonnegative");
        if (!(t.alpha.real() > Scalar(0)))
            throw std::invalid_argument("rational term needs Re(alpha) > 0");
    }
}

// u^(eta) = sum c eta^k exp(-alpha eta) for eta >= 0.
template <typename Scalar>
Complex<Scalar> rational_symbol(const RationalDatum<Scalar>& d, Scalar eta)
{
    using std::exp;
    using std::pow;
    Complex<Scalar> s(0);
    if (eta < Scalar(0))
        return s;
    for (const auto& t : d)
        s += t.c * pow(eta, Scalar(t.k)) * exp(-t.alpha * eta);
    return s;
}

// u(y) = sum c k! / (alpha - i y)^(k+1), the inverse transform of the symbol on the line.
template <typename Scalar>
Complex<Scalar> rational_value(const RationalDatum<Scalar>& d, Scalar y)
{
    using std::pow;
    Complex<Scalar> s(0);
    for (const auto& t : d) {
        Scalar fact(1);
        for (int q = 2; q <= t.k; ++q)
            fact *= Scalar(q);
        s += t.c * fact / pow(t.alpha - Complex<Scalar>(0, y), t.k + 1);
    }
    return s;
}

template <typename Scalar>
SzegoState<Scalar> rational_datum_to_state(const RationalDatum<Scalar>& d, const Grid1D<Scalar>& g,
                                           Scalar tail_budget = Scalar(1e-12))
{
    validate(d);
    SzegoState<Scalar> u{g, CArray<Scalar>::Zero(g.n), Scalar(0)};
    Scalar inside(0);
    for (Index m = g.zero_bin(); m < g.n; ++m) {
        u.coeffs(m) = rational_symbol(d, g.xi(m));
        inside += std::norm(u.coeffs(m));
    }
    if (d.empty())
        return u;
    Scalar amin = d.front().alpha.real();
    for (const auto& t : d)
        amin = std::min(amin, t.alpha.real());
    Scalar tail(0);
    const Scalar top = g.xi(g.n - 1);
    for (Scalar eta = top + g.dxi(); eta < top + Scalar(40) / amin + Scalar(1); eta += g.dxi())
        tail += std::norm(rational_symbol(d, eta));
    if (tail > tail_budget * (inside + tail))
        throw std::invalid_argument("rational datum tail beyond the grid band exceeds the mass budget (relative tail " +
                                    std::to_string(double(tail / (inside + tail))) + ")");
    return u;
}

template <typename Scalar>
struct TuneResult {
    Scalar param = Scalar(0);
    Scalar gap = Scalar(0);
    Scalar lambda1 = Scalar(0);
    Scalar lambda2 = Scalar(0);
    Scalar lambda3 = Scalar(0);
    // (parameter, signed or plain gap) at every evaluation, in order.
    std::vector<std::pair<Scalar, Scalar>> history;
};

class TuneFailure : public std::runtime_error {
public:
    TuneFailure(const std::string& what, std::vector<std::pair<double, double>> history)
        : std::runtime_error(what), history(std::move(history))
    {
    }
    std::vector<std::pair<double, double>> history;
};

namespace detail {

template <typename Scalar>
struct GapProbe {
    Scalar signed_gap;
    bool real_symbol;
    RArray<Scalar> sv;
};

// For a real symmetric M the singular values are |mu| over its eigenvalues; the signed gap
// compares the largest positive and largest negative eigenvalue and changes sign where they
// cross.
template <typename Scalar>
GapProbe<Scalar> probe_gap(const SzegoState<Scalar>& u, Index n)
{
    const HankelOp<Scalar> H = hankel_matrix(u, n);
    GapProbe<Scalar> r;
    r.sv = hankel_singular_values(H);
    const Scalar scale = H.matrix.cwiseAbs().maxCoeff();
    r.real_symbol = H.matrix.imag().cwiseAbs().maxCoeff() <= Scalar(1e-14) * scale;
    if (r.real_symbol) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> es(
            H.matrix.real(), Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw NumericalError("Hankel eigen-solver failed");
        const auto& mu = es.eigenvalues();
        r.signed_gap = mu.maxCoeff() + mu.minCoeff();
    } else {
        r.signed_gap = r.sv.size() > 1 ? r.sv(0) - r.sv(1) : Scalar(0);
    }
    return r;
}

} // namespace detail

// Find a parameter of `family` where the top Hankel singular value is double.
template <typename Scalar>
TuneResult<Scalar> tune_multiplicity(const std::function<RationalDatum<Scalar>(Scalar)>& family, Scalar lo, Scalar hi,
                                     const Grid1D<Scalar>& g, Index n_scan = 64, Index n = -1,
                                     Scalar rel_tol = Scalar(1e-8))
{
    using std::abs;
    std::vector<std::pair<double, double>> hist;
    TuneResult<Scalar> res;
    auto eval = [&](Scalar p) {
        auto r = detail::probe_gap(rational_datum_to_state(family(p), g), n);
        hist.emplace_back(double(p), double(r.signed_gap));
        res.history.emplace_back(p, r.signed_gap);
        return r;
    };
    auto finish = [&](Scalar p, const detail::GapProbe<Scalar>& r) {
        res.param = p;
        res.lambda1 = r.sv.size() > 0 ? r.sv(0) : Scalar(0);
        res.lambda2 = r.sv.size() > 1 ? r.sv(1) : Scalar(0);
        res.lambda3 = r.sv.size() > 2 ? r.sv(2) : Scalar(0);
        res.gap = res.lambda1 - res.lambda2;
        if (res.lambda2 <= rel_tol * res.lambda1)
            throw TuneFailure("Hankel spectrum has rank 1; no multiple top singular value exists", hist);
        if (res.gap > rel_tol * res.lambda1)
            throw TuneFailure("gap " + std::to_string(double(res.gap)) + " above tolerance after refinement", hist);
        return res;
    };

    std::vector<Scalar> ps(n_scan + 1);
    std::vector<detail::GapProbe<Scalar>> rs;
    bool any_rank2 = false;
    for (Index s = 0; s <= n_scan; ++s) {
        ps[s] = lo + (hi - lo) * Scalar(s) / Scalar(n_scan);
        rs.push_back(eval(ps[s]));
        const auto& r = rs.back();
        const Scalar l1 = r.sv.size() ? r.sv(0) : Scalar(0);
        const Scalar l2 = r.sv.size() > 1 ? r.sv(1) : Scalar(0);
        if (l2 > rel_tol * l1)
            any_rank2 = true;
        if (l2 > rel_tol * l1 && l1 - l2 <= rel_tol * l1)
            return finish(ps[s], r);
    }
    if (!any_rank2)
        throw TuneFailure("Hankel spectrum has rank 1 across the scan range", hist);

    if (rs.front().real_symbol) {
        for (Index s = 0; s < n_scan; ++s) {
            if ((rs[s].signed_gap < 0) == (rs[s + 1].signed_gap < 0))
                continue;
            Scalar a = ps[s], b = ps[s + 1];
            Scalar fa = rs[s].signed_gap;
            detail::GapProbe<Scalar> rm = rs[s];
            Scalar m = a;
            for (int it = 0; it < 200 && b - a > Scalar(4) * std::numeric_limits<Scalar>::epsilon() * abs(a + b); ++it) {
                m = (a + b) / 2;
                rm = eval(m);
                const Scalar l1 = rm.sv(0), l2 = rm.sv.size() > 1 ? rm.sv(1) : Scalar(0);
                if (l1 - l2 <= rel_tol * l1 * Scalar(1e-3))
                    break;
                if ((rm.signed_gap < 0) == (fa < 0)) {
                    a = m;
                    fa = rm.signed_gap;
                } else {
                    b = m;
                }
            }
            return finish(m, rm);
        }
        throw TuneFailure("no sign change of the signed Hankel gap in the scan range", hist);
    }

    // Complex symbols: golden-section minimisation of lambda1 - lambda2 around the best scan point.
    Index best = 0;
    for (Index s = 1; s <= n_scan; ++s)
        if (rs[s].signed_gap < rs[best].signed_gap)
            best = s;
    Scalar a = ps[std::max<Index>(0, best - 1)], b = ps[std::min<Index>(n_scan, best + 1)];
    const Scalar phi = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
    Scalar c = b - phi * (b - a), d = a + phi * (b - a);
    auto rc = eval(c), rd = eval(d);
    for (int it = 0; it < 200 && abs(b - a) > Scalar(1e-15) * (Scalar(1) + abs(a)); ++it) {
        if (rc.signed_gap < rd.signed_gap) {
            b = d;
            d = c;
            rd = rc;
            c = b - phi * (b - a);
            rc = eval(c);
        } else {
            a = c;
            c = d;
            rc = rd;
            d = a + phi * (b - a);
            rd = eval(d);
        }
    }
    return rc.signed_gap < rd.signed_gap ? finish(c, rc) : finish(d, rd);
}

template <typename Scalar>
struct GrowthRow {
    Scalar t, dy_norm, mass, trace_norm;
};

template <typename Scalar>
struct GrowthReport1D {
    std::vector<GrowthRow<Scalar>> rows;
    LinearFit fit;
};

// Sample (||d_y u||, mass, trace norm) on t_grid; fit the last half of the samples.
template <typename Scalar>
GrowthReport1D<Scalar> cascade_rate_1d(const SzegoState<Scalar>& u0, const std::vector<Scalar>& t_grid,
                                       Scalar dt = Scalar(default_szego_dt), Index n = -1)
{
    if (t_grid.size() < 2)
        throw std::invalid_argument("cascade_rate_1d needs at least two sample times");
    GrowthReport1D<Scalar> rep;
    SzegoState<Scalar> u = u0;
    for (Scalar t : t_grid) {
        if (t < u.t)
            throw std::invalid_argument("cascade_rate_1d sample times must be increasing");
        if (t > u.t)
            u = evolve_szego(u, t, dt);
        const bool zero = (u.coeffs == Complex<Scalar>(0)).all();
        rep.rows.push_back({t, dy_norm(u.grid, u.coeffs), spectral_mass(u.grid, u.coeffs),
                            zero ? Scalar(0) : peller_trace_norm(hankel_matrix(u, n))});
    }
    std::vector<double> x, y;
    for (std::size_t i = t_grid.size() / 2; i < t_grid.size(); ++i) {
        x.push_back(double(rep.rows[i].t));
        y.push_back(double(rep.rows[i].dy_norm));
    }
    rep.fit = linear_fit(x, y);
    return rep;
}

} // namespace szlab

#endif
