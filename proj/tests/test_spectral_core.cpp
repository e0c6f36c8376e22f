#include "oracles.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace szlab;
using oracle::cd;

TEST_CASE("make_grid spacing and frequency list")
{
    const auto g = make_grid(pi_v<double>, 8);
    CHECK(g.dx() == doctest::Approx(pi_v<double> / 4));
    CHECK(g.dxi() == doctest::Approx(1.0));
    for (Index m = 0; m < 8; ++m)
        CHECK(g.xi(m) == doctest::Approx(double(m) - 4.0));
    CHECK(make_grid(32.0, 256).dxi() == doctest::Approx(pi_v<double> / 32));
    for (Index n : {8, 64, 1024})
        CHECK(make_grid(3.7, n).dx() * make_grid(3.7, n).dxi() * double(n) == doctest::Approx(2 * pi_v<double>));
}

TEST_CASE("make_grid rejects bad input")
{
    CHECK_THROWS_AS(make_grid(0.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(-1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1.0, 12), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1.0, 4), std::invalid_argument);
}

TEST_CASE("forward transform of simple fields")
{
    const auto g = make_grid(pi_v<double>, 8);
    CHECK((forward(g, CArray<double>(CArray<double>::Zero(8))) == cd(0)).all());

    CArray<double> f(8);
    for (Index j = 0; j < 8; ++j)
        f(j) = std::exp(cd(0, g.x(j)));
    const CArray<double> c = forward(g, f);
    for (Index m = 0; m < 8; ++m) {
        if (g.xi(m) == 1.0)
            CHECK(std::abs(c(m) - cd(1.0 / g.dxi())) < 1e-14);
        else
            CHECK(std::abs(c(m)) < 1e-14);
    }
}

TEST_CASE("transforms agree with the direct DFT and round trip")
{
    std::mt19937_64 rng(11);
    for (Index n : {8, 16, 32, 64}) {
        const auto g = make_grid(2.5, n);
        const CArray<double> f = oracle::random_field(rng, n);
        const CArray<double> c = forward(g, f);
        CHECK(oracle::rel_err(c, oracle::dft_direct(g, f)) < 1e-10);
        CHECK(oracle::rel_err(inverse(g, c), oracle::idft_direct(g, c)) < 1e-10);
        CHECK(oracle::rel_err(inverse(g, c), f) < 1e-12);
    }
}

TEST_CASE("Parseval on random fields")
{
    std::mt19937_64 rng(12);
    for (Index n : {16, 128, 512}) {
        const auto g = make_grid(7.0, n);
        double worst = 0;
        for (int r = 0; r < 1000; ++r) {
            const CArray<double> f = oracle::random_field(rng, n);
            const double phys = f.abs2().sum() * g.dx();
            const double spectral = 2 * pi_v<double> * forward(g, f).abs2().sum() * g.dxi();
            worst = std::max(worst, std::abs(phys - spectral) / phys);
            worst = std::max(worst, oracle::rel_err(inverse(g, forward(g, f)), f));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("2-D representations round trip with Parseval")
{
    std::mt19937_64 rng(13);
    const auto g = make_grid2d(4.0, 32, 3.0, 16);
    for (int r = 0; r < 20; ++r) {
        Spectrum2D<double> u{g, oracle::random_field2(rng, 32, 16), Representation::Physical};
        const auto f = to_representation(u, Representation::Fourier);
        const auto x = to_representation(f, Representation::XFourier);
        const auto back = to_representation(x, Representation::Physical);
        CHECK(oracle::rel_err(back.values, u.values) < 1e-12);
        const double phys = u.values.abs2().sum() * g.gx.dx() * g.gy.dx();
        const double spectral = 4 * pi_v<double> * pi_v<double> * f.values.abs2().sum() * g.gx.dxi() * g.gy.dxi();
        CHECK(std::abs(phys - spectral) / phys < 1e-12);
        // x-Fourier rows are the forward transforms of physical columns.
        CArray<double> col = u.values.col(5);
        CHECK(oracle::rel_err(CArray<double>(x.values.col(5)), forward(g.gx, col)) < 1e-12);
    }
}

TEST_CASE("Szego projectors")
{
    const auto g = make_grid(pi_v<double>, 16);
    CArray<double> s = CArray<double>::Zero(16);
    s(g.zero_bin() + 2) = 1.0;
    CHECK((szego_project(g, s, Sign::Plus) == s).all());
    CArray<double> t = CArray<double>::Zero(16);
    t(g.zero_bin() - 2) = 1.0;
    CHECK((szego_project(g, t, Sign::Plus) == cd(0)).all());

    std::mt19937_64 rng(14);
    for (int r = 0; r < 50; ++r) {
        const CArray<double> v = oracle::random_field(rng, 16);
        const CArray<double> p = szego_project(g, v, Sign::Plus);
        const CArray<double> m = szego_project(g, v, Sign::Minus);
        CHECK((szego_project(g, p, Sign::Plus) == p).all());
        CHECK((szego_project(g, m, Sign::Minus) == m).all());
        CHECK((szego_project(g, p, Sign::Minus) == cd(0)).all());
        CHECK((p + m == v).all());
        CHECK(p(g.zero_bin()) == v(g.zero_bin()));
    }
}

TEST_CASE("plateau bump and Littlewood-Paley blocks")
{
    CHECK(psi0(0.5) == 1.0);
    CHECK(psi0(1.0) == 1.0);
    CHECK(psi0(2.0) == 0.0);
    CHECK(psi0(-1.5) > 0.0);
    CHECK(psi0(-1.5) < 1.0);
    CHECK(lp_phi(1.0) == 1.0);
    CHECK(lp_phi(0.0) == 0.0);

    const auto g = make_grid(pi_v<double>, 64); // integer frequencies
    for (int k = 0; k < 5; ++k) {
        CArray<double> s = CArray<double>::Zero(64);
        s(g.zero_bin() + (1 << k)) = cd(0.3, -1.2);
        s(g.zero_bin() - (1 << k)) = cd(2.0, 0.5);
        CHECK((lp_block(g, s, k) == s).all());
    }
    CArray<double> z = CArray<double>::Zero(64);
    z(g.zero_bin()) = 1.0;
    for (int k = -3; k < 6; ++k)
        CHECK((lp_block(g, z, k) == cd(0)).all());
}

TEST_CASE("Littlewood-Paley partition of unity")
{
    std::mt19937_64 rng(15);
    for (auto [L, n] : {std::pair{10.0, Index(256)}, std::pair{1.3, Index(64)}}) {
        const auto g = make_grid(L, n);
        const auto [lo, hi] = lp_range(g);
        const CArray<double> s = oracle::random_field(rng, n);
        CArray<double> sum = CArray<double>::Zero(n);
        for (int k = lo; k <= hi; ++k)
            sum += lp_block(g, s, k);
        double worst = 0;
        for (Index m = 0; m < n; ++m)
            if (g.xi(m) != 0.0)
                worst = std::max(worst, std::abs(sum(m) - s(m)) / std::abs(s(m)));
        CHECK(worst < 1e-12);
        // the range is tight: one block further out on either side is empty
        CHECK((lp_block(g, s, lo - 1) == cd(0)).all());
        CHECK((lp_block(g, s, hi + 1) == cd(0)).all());
    }
}

TEST_CASE("x-frequency cutoffs")
{
    std::mt19937_64 rng(16);
    const auto g = make_grid2d(8.0, 64, 4.0, 16);
    Spectrum2D<double> s{g, CField<double>::Zero(64, 16), Representation::Fourier};
    for (Index i = 0; i < 64; ++i)
        if (std::abs(g.gx.xi(i)) <= 2.0)
            s.values.row(i) = oracle::random_field2(rng, 1, 16);
    CHECK((q_project(s, 2.0, QMode::AtMost).values == s.values).all());

    Spectrum2D<double> r{g, oracle::random_field2(rng, 64, 16), Representation::Fourier};
    const auto q1 = q_project(r, 1.5, QMode::AtMost);
    const auto q2 = q_project(q1, 1.5, QMode::AtMost);
    for (Index i = 0; i < 64; ++i)
        if (std::abs(g.gx.xi(i)) <= 1.5)
            CHECK((q2.values.row(i) == q1.values.row(i)).all());

    CField<double> sum = q_project(r, 1.0, QMode::AtMost).values;
    for (double A = 2; A <= 64; A *= 2)
        sum += q_project(r, A, QMode::Annulus).values;
    CHECK(oracle::rel_err(sum, r.values) < 1e-10);
    CHECK_THROWS(q_project(r, 0.0, QMode::AtMost));
}

TEST_CASE("dealiased cubic product equals the linear convolution")
{
    std::mt19937_64 rng(17);
    const auto g = make_grid(3.0, 16);
    for (int r = 0; r < 5; ++r) {
        const CArray<double> a = oracle::random_field(rng, 16), b = oracle::random_field(rng, 16),
                             c = oracle::random_field(rng, 16);
        CHECK(oracle::rel_err(cubic_product(g, a, b, c), oracle::cubic_convolution(g, a, b, c)) < 1e-12);
    }
}

TEST_CASE("snapshot round trip and corruption reporting")
{
    namespace fs = std::filesystem;
    std::mt19937_64 rng(18);
    const auto dir = fs::temp_directory_path() / "szlab_snapshot_test";
    fs::create_directories(dir);
    const std::string path = (dir / "a.szg").string();
    Spectrum2D<double> s{make_grid2d(5.0, 16, 2.5, 8), oracle::random_field2(rng, 16, 8), Representation::XFourier};
    write_snapshot(path, s);
    CHECK(fs::file_size(path) == 32 + 16 * 8 * 16);
    const auto t = read_snapshot(path);
    CHECK(t.rep == Representation::XFourier);
    CHECK(t.grid == s.grid);
    CHECK((t.values == s.values).all());

    {
        std::ifstream in(path, std::ios::binary);
        std::vector<char> bytes((std::istreambuf_iterator<char>(in)), {});
        CHECK(std::string(bytes.data(), 4) == "SZG1");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), 500);
    }
    try {
        read_snapshot(path);
        FAIL("truncated snapshot accepted");
    } catch (const SnapshotError& e) {
        CHECK(e.offset() == 500);
        CHECK(std::string(e.what()).find("500") != std::string::npos);
    }
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << "XXXX0000000000000000000000000000";
    }
    CHECK_THROWS_AS(read_snapshot(path), SnapshotError);
    fs::remove_all(dir);
}
