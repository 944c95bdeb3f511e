#include "pareto/csv_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace pareto {

std::string format_float(Scalar x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

void write_point_set_csv(const PointSet& s, const std::string& path) {
    auto out = open_out(path);
    for (int d = 0; d < s.cols(); ++d) out << (d ? "," : "") << "y" << d + 1;
    out << "\n";
    for (int i = 0; i < s.rows(); ++i) {
        for (int d = 0; d < s.cols(); ++d) out << (d ? "," : "") << format_float(s(i, d));
        out << "\n";
    }
}

PointSet read_point_set_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty point set file: " + path);
    const int m = static_cast<int>(split_csv(line).size());
    std::vector<Vector> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (static_cast<int>(fields.size()) != m)
            throw std::runtime_error("ragged CSV row in " + path);
        Vector v(m);
        for (int d = 0; d < m; ++d) v(d) = std::stod(fields[static_cast<size_t>(d)]);
        rows.push_back(v);
    }
    PointSet s(static_cast<int>(rows.size()), m);
    for (size_t i = 0; i < rows.size(); ++i) s.row(static_cast<int>(i)) = rows[i].transpose();
    require_finite(s, "read_point_set_csv");
    return s;
}

void write_frontier_csv(const FrontierEstimate& e, const std::string& path) {
    auto out = open_out(path);
    out << "component,vertex_index,y1,y2\n";
    for (size_t c = 0; c < e.polylines.size(); ++c)
        for (size_t v = 0; v < e.polylines[c].size(); ++v)
            out << c << "," << v << "," << format_float(e.polylines[c][v](0)) << ","
                << format_float(e.polylines[c][v](1)) << "\n";
}

FrontierEstimate read_frontier_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);  // header
    FrontierEstimate e;
    Vector lo = Vector::Constant(2, std::numeric_limits<Scalar>::infinity());
    Vector hi = Vector::Constant(2, -std::numeric_limits<Scalar>::infinity());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 4) throw std::runtime_error("bad frontier CSV row in " + path);
        const size_t c = std::stoul(fields[0]);
        Vector p(2);
        p << std::stod(fields[2]), std::stod(fields[3]);
        if (c >= e.polylines.size()) e.polylines.resize(c + 1);
        e.polylines[c].push_back(p);
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    e.component_count = static_cast<int>(e.polylines.size());
    if (!e.empty()) e.bounding_box = Box{lo, hi};
    return e;
}

void write_contour_grid_csv(const Box& box, int nx, int ny, const Matrix& values,
                            const std::string& path) {
    require(values.rows() == nx + 1 && values.cols() == ny + 1,
            "write_contour_grid_csv: value grid must be (nx+1) x (ny+1)");
    auto out = open_out(path);
    out << "y1,y2,f\n";
    const Scalar dx = (box.hi(0) - box.lo(0)) / nx;
    const Scalar dy = (box.hi(1) - box.lo(1)) / ny;
    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j <= ny; ++j)
            out << format_float(box.lo(0) + i * dx) << "," << format_float(box.lo(1) + j * dy) << ","
                << format_float(values(i, j)) << "\n";
}

void write_validity_csv(const ValidityReport& report, const std::string& path) {
    auto out = open_out(path);
    out << "point,direction,delta,f_plus,f_minus,pass\n";
    const auto joined = [](const Vector& v) {
        std::string s;
        for (int i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_float(v(i));
        return s;
    };
    for (const auto& row : report.samples)
        out << joined(row.point) << "," << joined(row.direction) << "," << format_float(row.delta)
            << "," << format_float(row.f_plus) << "," << format_float(row.f_minus) << ","
            << (row.pass ? 1 : 0) << "\n";
}

}  // namespace pareto
