#include "geoflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace geoflow {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_field_csv(const std::string& path, const Buffer2D& field, const std::string& name) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    const int n = field.n();
    out << "# n=" << n << ", component=" << name << "\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) out << ',';
            out << format_double(field(i, j));
        }
        out << '\n';
    }
}

FieldCsv read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string header;
    std::getline(in, header);
    FieldCsv out;
    const auto npos = header.find("n=");
    const auto cpos = header.find("component=");
    if (header.empty() || header[0] != '#' || npos == std::string::npos ||
        cpos == std::string::npos)
        throw Error("malformed field CSV header in " + path);
    out.n = std::stoi(header.substr(npos + 2));
    out.component = header.substr(cpos + 10);
    out.values = Buffer2D(out.n);
    std::string line;
    for (int i = 0; i < out.n; ++i) {
        if (!std::getline(in, line)) throw Error("truncated field CSV " + path);
        std::istringstream row(line);
        std::string cell;
        for (int j = 0; j < out.n; ++j) {
            if (!std::getline(row, cell, ',')) throw Error("short row in field CSV " + path);
            out.values(i, j) = std::stod(cell);
        }
    }
    return out;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "t,energy,div_norm,c1,c2\n";
    for (const GeodesicState& s : traj.records)
        out << format_double(s.t) << ',' << format_double(s.energy) << ','
            << format_double(s.div_norm) << ',' << format_double(s.c1) << ','
            << format_double(s.c2) << '\n';
}

std::pair<double, double> write_pgm(const std::string& path, const Buffer2D& field) {
    double lo = field.values()[0], hi = field.values()[0];
    for (double v : field.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double range = hi > lo ? hi - lo : 1.0;
    const int n = field.n();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "P5\n" << n << ' ' << n << "\n255\n";
    // image row = fixed y (j), so the picture axes match the chart
    for (int j = n - 1; j >= 0; --j)
        for (int i = 0; i < n; ++i) {
            const double t = (field(i, j) - lo) / range;
            out.put(static_cast<char>(static_cast<unsigned char>(std::lround(t * 255.0))));
        }
    return {lo, hi};
}

} // namespace geoflow
