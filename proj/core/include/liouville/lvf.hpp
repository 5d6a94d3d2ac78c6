#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "liouville/grid.hpp"

namespace liouville {

/// Field snapshot container for the "LVF1" format:
///   4-byte magic "LVF1", little-endian u32 N, u32 n, f64 L, u32 component
///   count c, then c * n^N little-endian f64 values, row-major.
struct FieldSnapshot {
    Grid grid;
    std::vector<ScalarField> components;
};

void lvf_write(std::ostream& os, const FieldSnapshot& snapshot);
void lvf_write_file(const std::string& path, const FieldSnapshot& snapshot);

FieldSnapshot lvf_read(std::istream& is);
FieldSnapshot lvf_read_file(const std::string& path);

FieldSnapshot to_snapshot(const VectorField& v);
FieldSnapshot to_snapshot(const ScalarField& f);
VectorField vector_from_snapshot(const FieldSnapshot& snapshot);

}  // namespace liouville
