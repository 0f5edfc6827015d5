#pragma once

#include <string>
#include <utility>

#include "geoflow/euler_arnold.hpp"
#include "geoflow/grid.hpp"

namespace geoflow {

/// Flat row-major CSV with header "# n=<n>, component=<name>"; one grid row
/// per line, full round-trip precision.
void write_field_csv(const std::string& path, const Buffer2D& field, const std::string& name);

struct FieldCsv {
    int n = 0;
    std::string component;
    Buffer2D values;
};
FieldCsv read_field_csv(const std::string& path);

/// Columns t,energy,div_norm,c1,c2.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// 8-bit binary PGM, min-max normalized; returns the (min,max) scale for the
/// sidecar record.
std::pair<double, double> write_pgm(const std::string& path, const Buffer2D& field);

} // namespace geoflow
