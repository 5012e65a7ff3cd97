#include "vfb/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "vfb/errors.hpp"

namespace vfb::boundary {

namespace {

double shoelace_area(const std::vector<TraceNode>& nodes) {
    double twice = 0.0;
    const std::size_t n = nodes.size();
    for (std::size_t k = 0; k < n; ++k) {
        const TraceNode& a = nodes[k];
        const TraceNode& b = nodes[(k + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

// Counterclockwise copy of the trace, first node kept first.
std::vector<TraceNode> normalized(const BoundaryTrace& trace, bool& reoriented) {
    if (trace.nodes.size() < 3)
        throw ValidationError("boundary: trace needs at least 3 nodes");
    for (const TraceNode& nd : trace.nodes)
        if (!std::isfinite(nd.x) || !std::isfinite(nd.y) || !std::isfinite(nd.t1) ||
            !std::isfinite(nd.t2) || !std::isfinite(nd.u1) || !std::isfinite(nd.u2))
            throw ValidationError("boundary: non-finite node data");

    std::vector<TraceNode> nodes = trace.nodes;
    const double area = shoelace_area(nodes);
    reoriented = area < 0.0;
    if (area == 0.0) throw ValidationError("boundary: degenerate polygon (zero area)");
    if (reoriented) std::reverse(nodes.begin() + 1, nodes.end());

    const std::size_t n = nodes.size();
    for (std::size_t k = 0; k < n; ++k) {
        const TraceNode& a = nodes[k];
        const TraceNode& b = nodes[(k + 1) % n];
        if (std::hypot(b.x - a.x, b.y - a.y) == 0.0)
            throw ValidationError("boundary: zero-length segment at node " + std::to_string(k));
    }
    return nodes;
}

// det-stress null-Lagrangian from the cumulative flux potential, starting the
// accumulation at node `start`. Sign calibrated so that uniform stress data
// reproduces det of the average stress.
double det_stress_from(const std::vector<TraceNode>& nodes, std::size_t start, double area) {
    const std::size_t n = nodes.size();
    double q2_sum = 0.0;
    double raw = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const TraceNode& a = nodes[(start + s) % n];
        const TraceNode& b = nodes[(start + s + 1) % n];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        const double q2_next = q2_sum + 0.5 * len * (a.t2 + b.t2);
        raw += 0.5 * len * (a.t1 * q2_sum + b.t1 * q2_next);
        q2_sum = q2_next;
    }
    return -raw / area;
}

struct Integrals {
    Diagnostics diag;
    Measurements meas;
};

Integrals integrate(const BoundaryTrace& trace) {
    Integrals out;
    bool reoriented = false;
    const std::vector<TraceNode> nodes = normalized(trace, reoriented);
    const std::size_t n = nodes.size();
    const double area = shoelace_area(nodes);

    double stress_mom[2][2] = {};
    double grad_mom[2][2] = {};
    double energy = 0.0, b_val = 0.0, perimeter = 0.0;
    double force[2] = {};
    double moment = 0.0;

    for (std::size_t k = 0; k < n; ++k) {
        const TraceNode& a = nodes[k];
        const TraceNode& b = nodes[(k + 1) % n];
        const double dx = b.x - a.x, dy = b.y - a.y;
        const double len = std::hypot(dx, dy);
        const double nx = dy / len, ny = -dx / len; // outward for CCW order
        perimeter += len;

        const double ta[2] = {a.t1, a.t2}, tb[2] = {b.t1, b.t2};
        const double xa[2] = {a.x, a.y}, xb[2] = {b.x, b.y};
        const double ua[2] = {a.u1, a.u2}, ub[2] = {b.u1, b.u2};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                stress_mom[i][j] += 0.5 * len * (xa[i] * ta[j] + xb[i] * tb[j]);
                grad_mom[i][j] += 0.5 * len * ((i == 0 ? nx : ny) * (ua[j] + ub[j]));
            }
        energy += 0.5 * len * (a.t1 * a.u1 + a.t2 * a.u2 + b.t1 * b.u1 + b.t2 * b.u2);
        b_val += 0.5 * (a.u1 + b.u1) * (b.u2 - a.u2);
        force[0] += 0.5 * len * (a.t1 + b.t1);
        force[1] += 0.5 * len * (a.t2 + b.t2);
        moment += 0.5 * len * ((a.x * a.t2 - a.y * a.t1) + (b.x * b.t2 - b.y * b.t1));
    }

    Diagnostics& d = out.diag;
    d.area = area;
    d.perimeter = perimeter;
    d.reoriented = reoriented;
    d.net_force_x = force[0];
    d.net_force_y = force[1];
    d.net_force = std::hypot(force[0], force[1]);
    d.net_moment = moment;
    d.sigma_asymmetry = std::abs(stress_mom[0][1] - stress_mom[1][0]) / area;

    const double a0 = det_stress_from(nodes, 0, area);
    const double a1 = det_stress_from(nodes, 1, area);
    d.x0_shift_residual = std::abs(a1 - a0);

    Measurements& m = out.meas;
    m.sigma0 = to_mandel({stress_mom[0][0] / area, stress_mom[1][1] / area,
                          0.5 * (stress_mom[0][1] + stress_mom[1][0]) / area});
    m.grad0 = to_grad4({grad_mom[0][0] / area, grad_mom[0][1] / area,
                        grad_mom[1][0] / area, grad_mom[1][1] / area});
    m.energy = energy / area;
    m.a = a0;
    m.b = b_val / area;
    m.area = area;
    return out;
}

} // namespace

Diagnostics validate(const BoundaryTrace& trace) { return integrate(trace).diag; }

IngestResult ingest_full(const BoundaryTrace& trace) {
    const Integrals result = integrate(trace);
    return {result.meas, result.diag};
}

BoundaryTrace read_trace_csv(std::istream& in) {
    BoundaryTrace trace;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;

        TraceNode nd;
        double* fields[6] = {&nd.x, &nd.y, &nd.t1, &nd.t2, &nd.u1, &nd.u2};
        std::size_t pos = first;
        for (int f = 0; f < 6; ++f) {
            std::size_t comma = line.find(',', pos);
            std::string cell = (comma == std::string::npos) ? line.substr(pos)
                                                            : line.substr(pos, comma - pos);
            if (f < 5 && comma == std::string::npos)
                throw ParseError("trace row needs 6 comma-separated fields", line_no);
            char* end = nullptr;
            const char* begin = cell.c_str();
            *fields[f] = std::strtod(begin, &end);
            while (end && *end == ' ') ++end;
            if (end == begin || (end && *end != '\0' && *end != '\r'))
                throw ParseError("bad number '" + cell + "' in trace row", line_no);
            pos = (comma == std::string::npos) ? line.size() : comma + 1;
        }
        if (line.find_first_not_of(" \t\r", pos) != std::string::npos)
            throw ParseError("trace row has more than 6 fields", line_no);
        trace.nodes.push_back(nd);
    }
    return trace;
}

BoundaryTrace read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open trace file '" + path + "'");
    return read_trace_csv(in);
}

void write_trace_csv(std::ostream& out, const BoundaryTrace& trace) {
    out << "# x, y, t1, t2, u1, u2\n";
    char buf[256];
    for (const TraceNode& nd : trace.nodes) {
        std::snprintf(buf, sizeof buf, "%.17g, %.17g, %.17g, %.17g, %.17g, %.17g\n",
                      nd.x, nd.y, nd.t1, nd.t2, nd.u1, nd.u2);
        out << buf;
    }
}

} // namespace vfb::boundary
