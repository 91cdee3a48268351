#pragma once

#include "mnls/grid.hpp"
#include "mnls/magnetics.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace mnls {

/// I/O failures (unreadable file, short read, bad magic, unwritable path).
/// Kept distinct from numerical failures so the CLI can map them to its own
/// exit code.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FieldDump {
    ComplexField field;
    MagneticData magnetic; // B matrix embedded in the header
    double p = 0.0;        // exponent echo
};

/// Writes the binary field dump: magic bytes `MNLS`, version u32 = 1,
/// dim u32, per-axis points u32, per-axis half-extent f64, B-matrix entries
/// f64 (dim² values, row-major), exponent p f64, then the node values as
/// little-endian f64 (re, im) pairs in row-major order, last axis fastest.
/// All multi-byte fields are little-endian regardless of host order.
void write_field(const std::string& path, const ComplexField& u, const MagneticData& m, double p);

/// Reads a dump written by write_field, validating magic, version, grid
/// shape, the antisymmetry of the embedded B matrix, and value finiteness.
FieldDump read_field(const std::string& path);

/// Opens a text output file whose first line is a `#` comment embedding the
/// code version and the caller's resolved configuration, so every table
/// stays traceable to the run that produced it.
std::ofstream open_csv(const std::string& path, const std::string& config_echo);

} // namespace mnls
