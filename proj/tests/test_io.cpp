#include "mnls/grid.hpp"
#include "mnls/io.hpp"
#include "mnls/magnetics.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

using namespace mnls;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("mnls_io_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

ComplexField sample_field(const Grid& g, unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexField u = zeros(g);
    for (auto& z : u.values) z = Complex(dist(rng), dist(rng));
    return u;
}

void clobber_byte(const std::string& path, std::streamoff offset, char value) {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(offset);
    f.put(value);
}

} // namespace

TEST_CASE("field dumps round-trip bitwise") {
    TempDir tmp;
    const Grid g = make_grid(2, 8.0, 65);
    const ComplexField u = sample_field(g, 5);
    const MagneticData m = MagneticData::uniform_2d(0.2);
    const std::string path = tmp.file("round.fld");

    write_field(path, u, m, 4.0);
    const FieldDump dump = read_field(path);

    CHECK(dump.p == 4.0);
    CHECK(dump.field.grid == g);
    CHECK(dump.magnetic.dim == 2);
    CHECK(dump.magnetic.entry(0, 1) == 0.2);
    REQUIRE(dump.field.values.size() == u.values.size());
    for (std::size_t k = 0; k < u.values.size(); ++k)
        CHECK(dump.field.values[k] == u.values[k]); // exact, not approximate
}

TEST_CASE("3D dumps round-trip as well") {
    TempDir tmp;
    const Grid g = make_grid(3, 6.0, 33);
    const ComplexField u = sample_field(g, 9);
    const MagneticData m = MagneticData::axis_3d(0.15);
    const std::string path = tmp.file("round3.fld");

    write_field(path, u, m, 3.0);
    const FieldDump dump = read_field(path);
    CHECK(dump.field.grid == g);
    CHECK(dump.magnetic.entry(0, 1) == 0.15);
    CHECK(dump.field.values == u.values);
}

TEST_CASE("write_field and read_field report I/O failures as IoError") {
    TempDir tmp;
    const Grid g = make_grid(2, 8.0, 65);
    const ComplexField u = sample_field(g, 11);
    const MagneticData m = MagneticData::zero(2);

    CHECK_THROWS_AS(write_field("/nonexistent-dir/out.fld", u, m, 4.0), IoError);
    CHECK_THROWS_AS(read_field(tmp.file("missing.fld")), IoError);

    // Dimension mismatch between field and magnetic data is caught before
    // anything is written.
    CHECK_THROWS_AS(write_field(tmp.file("bad.fld"), u, MagneticData::zero(3), 4.0),
                    std::invalid_argument);
}

TEST_CASE("corrupted dumps are rejected with IoError") {
    TempDir tmp;
    const Grid g = make_grid(2, 8.0, 65);
    const ComplexField u = sample_field(g, 13);
    const MagneticData m = MagneticData::uniform_2d(0.1);

    const std::string path = tmp.file("corrupt.fld");

    // Bad magic.
    write_field(path, u, m, 4.0);
    clobber_byte(path, 0, 'X');
    CHECK_THROWS_AS(read_field(path), IoError);

    // Unsupported version.
    write_field(path, u, m, 4.0);
    clobber_byte(path, 4, 99);
    CHECK_THROWS_AS(read_field(path), IoError);

    // Invalid dimension.
    write_field(path, u, m, 4.0);
    clobber_byte(path, 8, 7);
    CHECK_THROWS_AS(read_field(path), IoError);

    // Even point count (layout: magic 4, version 4, dim 4, then points).
    write_field(path, u, m, 4.0);
    clobber_byte(path, 12, 64);
    CHECK_THROWS_AS(read_field(path), IoError);

    // Truncated payload.
    write_field(path, u, m, 4.0);
    std::filesystem::resize_file(path, 100);
    CHECK_THROWS_AS(read_field(path), IoError);
}

TEST_CASE("open_csv stamps the version and configuration") {
    TempDir tmp;
    const std::string path = tmp.file("table.csv");
    {
        std::ofstream os = open_csv(path, "config={\"n\":65}");
        os << "a,b\n1,2\n";
    }
    std::ifstream is(path);
    std::string first;
    std::getline(is, first);
    CHECK(first.substr(0, 7) == "# mnls ");
    CHECK(first.find("config={\"n\":65}") != std::string::npos);
    std::string second;
    std::getline(is, second);
    CHECK(second == "a,b");
}
