#ifndef SZLAB_SNAPSHOT_HPP
#define SZLAB_SNAPSHOT_HPP

#include "szlab/fft.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>

namespace szlab {

// Layout (little endian):
//   0..3 "SZG1" | 4..7 u32 representation | 8..11 u32 nx | 12..15 u32 ny
//   16..23 f64 Lx | 24..31 f64 Ly | nx*ny complex values, row major, (re, im) f64 pairs.
class SnapshotError : public std::runtime_error {
public:
    SnapshotError(const std::string& what, std::uint64_t offset)
        : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset)
    {
    }
    std::uint64_t offset() const { return offset_; }

private:
    std::uint64_t offset_;
};

constexpr std::size_t snapshot_header_bytes = 32;

namespace detail {

template <typename T>
void put_le(unsigned char* dst, T v)
{
    std::memcpy(dst, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(dst, dst + sizeof(T));
}

template <typename T>
T get_le(const unsigned char* src)
{
    unsigned char tmp[sizeof(T)];
    std::memcpy(tmp, src, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(tmp, tmp + sizeof(T));
    T v;
    std::memcpy(&v, tmp, sizeof(T));
    return v;
}

} // namespace detail

inline void write_snapshot(const std::string& path, const Spectrum2D<double>& s)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open snapshot for writing: " + path);
    std::array<unsigned char, snapshot_header_bytes> h{};
    std::memcpy(h.data(), "SZG1", 4);
    detail::put_le<std::uint32_t>(h.data() + 4, static_cast<std::uint32_t>(s.rep));
    detail::put_le<std::uint32_t>(h.data() + 8, static_cast<std::uint32_t>(s.grid.nx()));
    detail::put_le<std::uint32_t>(h.data() + 12, static_cast<std::uint32_t>(s.grid.ny()));
    detail::put_le<double>(h.data() + 16, s.grid.gx.L);
    detail::put_le<double>(h.data() + 24, s.grid.gy.L);
    out.write(reinterpret_cast<const char*>(h.data()), h.size());

    std::vector<unsigned char> body(static_cast<std::size_t>(s.values.size()) * 16);
    std::size_t pos = 0;
    for (Index i = 0; i < s.values.rows(); ++i)
        for (Index j = 0; j < s.values.cols(); ++j) {
            detail::put_le<double>(body.data() + pos, s.values(i, j).real());
            detail::put_le<double>(body.data() + pos + 8, s.values(i, j).imag());
            pos += 16;
        }
    out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
    if (!out)
        throw std::runtime_error("snapshot write failed: " + path);
}

inline Spectrum2D<double> read_snapshot(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open snapshot: " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < snapshot_header_bytes)
        throw SnapshotError("truncated snapshot header", bytes.size());
    if (std::memcmp(bytes.data(), "SZG1", 4) != 0)
        throw SnapshotError("bad snapshot magic", 0);
    const auto rep = detail::get_le<std::uint32_t>(bytes.data() + 4);
    if (rep > 2)
        throw SnapshotError("unknown representation flag " + std::to_string(rep), 4);
    const auto nx = detail::get_le<std::uint32_t>(bytes.data() + 8);
    const auto ny = detail::get_le<std::uint32_t>(bytes.data() + 12);
    const double Lx = detail::get_le<double>(bytes.data() + 16);
    const double Ly = detail::get_le<double>(bytes.data() + 24);

    Spectrum2D<double> s;
    try {
        s.grid = make_grid2d(Lx, nx, Ly, ny);
    } catch (const std::invalid_argument& e) {
        throw SnapshotError(std::string("invalid snapshot grid: ") + e.what(), 8);
    }
    s.rep = static_cast<Representation>(rep);
    const std::uint64_t need = snapshot_header_bytes + std::uint64_t(nx) * ny * 16;
    if (bytes.size() < need)
        throw SnapshotError("truncated snapshot body (expected " + std::to_string(need) + " bytes)", bytes.size());
    if (bytes.size() > need)
        throw SnapshotError("trailing bytes after snapshot body", need);
    s.values.resize(nx, ny);
    std::size_t pos = snapshot_header_bytes;
    for (Index i = 0; i < Index(nx); ++i)
        for (Index j = 0; j < Index(ny); ++j) {
            s.values(i, j) = {detail::get_le<double>(bytes.data() + pos), detail::get_le<double>(bytes.data() + pos + 8)};
            pos += 16;
        }
    return s;
}

} // namespace szlab

#endif
