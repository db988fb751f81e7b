#pragma once

// Raw field dump format: one JSON header line {dim, extent, points, kind}
// followed by the node values as little-endian 64-bit floats in row-major
// order. Bit-exact across platforms.

#include <string>

#include "fracfront/grid.hpp"

namespace fracfront {

void write_field(const std::string& path, const RealField& field,
                 const std::string& kind);
void write_field(const std::string& path, const SignField& field);

struct LoadedField {
    RealField field;
    std::string kind;
};

LoadedField read_field(const std::string& path);

}  // namespace fracfront
