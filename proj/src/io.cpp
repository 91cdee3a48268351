#include "mnls/io.hpp"

#include "mnls/version.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

namespace mnls {

namespace {

constexpr std::uint32_t kDumpVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    std::array<char, 4> b;
    for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xffu);
    os.write(b.data(), 4);
}

void put_f64(std::ostream& os, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((bits >> (8 * i)) & 0xffu);
    os.write(b.data(), 8);
}

std::uint32_t get_u32(std::istream& is) {
    std::array<unsigned char, 4> b;
    if (!is.read(reinterpret_cast<char*>(b.data()), 4)) throw IoError("truncated dump: u32 field");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[static_cast<std::size_t>(i)]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) {
    std::array<unsigned char, 8> b;
    if (!is.read(reinterpret_cast<char*>(b.data()), 8)) throw IoError("truncated dump: f64 field");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[static_cast<std::size_t>(i)]) << (8 * i);
    return std::bit_cast<double>(v);
}

} // namespace

void write_field(const std::string& path, const ComplexField& u, const MagneticData& m, double p) {
    if (m.dim != u.grid.dim) throw std::invalid_argument("grid-mismatch in write_field");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path);

    const Grid& g = u.grid;
    os.write("MNLS", 4);
    put_u32(os, kDumpVersion);
    put_u32(os, static_cast<std::uint32_t>(g.dim));
    for (int a = 0; a < g.dim; ++a) put_u32(os, static_cast<std::uint32_t>(g.points[static_cast<std::size_t>(a)]));
    for (int a = 0; a < g.dim; ++a) put_f64(os, g.half_extent[static_cast<std::size_t>(a)]);
    for (int j = 0; j < g.dim; ++j)
        for (int k = 0; k < g.dim; ++k) put_f64(os, m.entry(j, k));
    put_f64(os, p);
    for (const Complex& v : u.values) {
        put_f64(os, v.real());
        put_f64(os, v.imag());
    }
    os.flush();
    if (!os) throw IoError("write failed: " + path);
}

FieldDump read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path);

    std::array<char, 4> magic;
    if (!is.read(magic.data(), 4) || std::memcmp(magic.data(), "MNLS", 4) != 0)
        throw IoError("not an MNLS dump: " + path);
    const std::uint32_t version = get_u32(is);
    if (version != kDumpVersion)
        throw IoError("unsupported dump version " + std::to_string(version));
    const std::uint32_t dim = get_u32(is);
    if (dim != 2 && dim != 3) throw IoError("dump has invalid dimension " + std::to_string(dim));

    std::array<int, 3> points{1, 1, 1};
    for (std::uint32_t a = 0; a < dim; ++a) {
        const std::uint32_t np = get_u32(is);
        if (np < 33 || np % 2 == 0 || np > (1u << 24))
            throw IoError("dump has invalid point count " + std::to_string(np));
        points[a] = static_cast<int>(np);
    }
    std::array<double, 3> half{0.0, 0.0, 0.0};
    for (std::uint32_t a = 0; a < dim; ++a) {
        half[a] = get_f64(is);
        if (!(half[a] > 0.0) || !std::isfinite(half[a])) throw IoError("dump has invalid half-extent");
    }
    std::array<double, 9> bmat{};
    for (std::uint32_t j = 0; j < dim * dim; ++j) bmat[j] = get_f64(is);
    const double p = get_f64(is);

    FieldDump out;
    // Anisotropic boxes are not expressible through make_grid's single
    // half-extent; the dump format carries one value per axis, so rebuild the
    // grid axis by axis.
    Grid g = make_grid(static_cast<int>(dim), half[0], points[0]);
    for (std::uint32_t a = 1; a < dim; ++a) {
        if (points[a] != points[0] || half[a] != half[0]) {
            g.points[a] = points[a];
            g.half_extent[a] = half[a];
            g.spacing[a] = 2.0 * half[a] / (points[a] - 1);
        }
    }
    try {
        out.magnetic = MagneticData::from_matrix(static_cast<int>(dim), bmat);
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("dump B matrix rejected: ") + e.what());
    }
    out.p = p;
    out.field = zeros(g);
    for (auto& v : out.field.values) {
        const double re = get_f64(is);
        const double im = get_f64(is);
        if (!std::isfinite(re) || !std::isfinite(im)) throw IoError("dump contains non-finite values");
        v = Complex{re, im};
    }
    return out;
}

std::ofstream open_csv(const std::string& path, const std::string& config_echo) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << "# mnls " << kVersion << " " << config_echo << "\n";
    if (!os) throw IoError("write failed: " + path);
    return os;
}

} // namespace mnls
