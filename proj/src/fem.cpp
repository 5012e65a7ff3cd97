#include "vfb/fem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "vfb/errors.hpp"

namespace vfb::fem {

namespace {

constexpr double kGauss = 0.57735026918962576451; // 1/sqrt(3)

// Local node order bl, br, tr, tl; parent coordinates in [-1,1]^2.
constexpr double kXi[4] = {-1.0, 1.0, 1.0, -1.0};
constexpr double kEta[4] = {-1.0, -1.0, 1.0, 1.0};

struct ShapeGrads {
    // Physical-space shape gradients for the four local nodes.
    double nx[4];
    double ny[4];
};

ShapeGrads shape_grads(double xi, double eta, double h) {
    ShapeGrads g;
    for (int a = 0; a < 4; ++a) {
        const double dxi = 0.25 * kXi[a] * (1.0 + kEta[a] * eta);
        const double deta = 0.25 * kEta[a] * (1.0 + kXi[a] * xi);
        g.nx[a] = dxi * 2.0 / h;
        g.ny[a] = deta * 2.0 / h;
    }
    return g;
}

void shape_values(double xi, double eta, double out[4]) {
    for (int a = 0; a < 4; ++a)
        out[a] = 0.25 * (1.0 + kXi[a] * xi) * (1.0 + kEta[a] * eta);
}

// Mandel strain rows of the B matrix: eps = B * u_local for the 8 local dofs
// (ux, uy per node).
void strain_rows(const ShapeGrads& g, double b[3][8]) {
    for (int a = 0; a < 4; ++a) {
        b[0][2 * a] = g.nx[a] / kSqrt2;
        b[0][2 * a + 1] = g.ny[a] / kSqrt2;
        b[1][2 * a] = g.nx[a] / kSqrt2;
        b[1][2 * a + 1] = -g.ny[a] / kSqrt2;
        b[2][2 * a] = g.ny[a] / kSqrt2;
        b[2][2 * a + 1] = g.nx[a] / kSqrt2;
    }
}

// F0 row: (d(u2)/dx - d(u1)/dy)/sqrt(2).
void rotation_row(const ShapeGrads& g, double row[8]) {
    for (int a = 0; a < 4; ++a) {
        row[2 * a] = -g.ny[a] / kSqrt2;
        row[2 * a + 1] = g.nx[a] / kSqrt2;
    }
}

using ElementMatrix = std::array<double, 64>;

ElementMatrix element_stiffness(const IsotropicPhase& p, double h) {
    const DiagMat3 d = stiffness(p);
    const double dd[3] = {d.d1, d.d2, d.d3};
    ElementMatrix ke{};
    const double w = h * h / 4.0;
    for (int gy = 0; gy < 2; ++gy) {
        for (int gx = 0; gx < 2; ++gx) {
            const double xi = (gx == 0 ? -kGauss : kGauss);
            const double eta = (gy == 0 ? -kGauss : kGauss);
            double b[3][8];
            strain_rows(shape_grads(xi, eta, h), b);
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j) {
                    double v = 0.0;
                    for (int r = 0; r < 3; ++r) v += b[r][i] * dd[r] * b[r][j];
                    ke[8 * i + j] += w * v;
                }
        }
    }
    return ke;
}

struct Mesh {
    int n = 0;
    double h = 0.0;
    int nodes_per_side = 0;
    int ndof = 0;

    int node(int ix, int iy) const { return iy * nodes_per_side + ix; }
    bool boundary_node(int ix, int iy) const {
        return ix == 0 || iy == 0 || ix == n || iy == n;
    }
    void cell_nodes(int cx, int cy, int out[4]) const {
        out[0] = node(cx, cy);
        out[1] = node(cx + 1, cy);
        out[2] = node(cx + 1, cy + 1);
        out[3] = node(cx, cy + 1);
    }
};

// y = K u over the whole mesh, fixed traversal order.
void apply_stiffness(const Mesh& mesh, const PixelGeometry& geom, const ElementMatrix& k1,
                     const ElementMatrix& k2, const std::vector<double>& u,
                     std::vector<double>& y) {
    std::fill(y.begin(), y.end(), 0.0);
    int nodes[4];
    for (int cy = 0; cy < mesh.n; ++cy) {
        for (int cx = 0; cx < mesh.n; ++cx) {
            const ElementMatrix& ke = geom.phase[geom.cell(cx, cy)] == 1 ? k1 : k2;
            mesh.cell_nodes(cx, cy, nodes);
            double ul[8];
            for (int a = 0; a < 4; ++a) {
                ul[2 * a] = u[2 * nodes[a]];
                ul[2 * a + 1] = u[2 * nodes[a] + 1];
            }
            for (int i = 0; i < 8; ++i) {
                double v = 0.0;
                for (int j = 0; j < 8; ++j) v += ke[8 * i + j] * ul[j];
                y[2 * nodes[i / 2] + (i % 2)] += v;
            }
        }
    }
}

std::vector<double> stiffness_diagonal(const Mesh& mesh, const PixelGeometry& geom,
                                       const ElementMatrix& k1, const ElementMatrix& k2) {
    std::vector<double> diag(mesh.ndof, 0.0);
    int nodes[4];
    for (int cy = 0; cy < mesh.n; ++cy)
        for (int cx = 0; cx < mesh.n; ++cx) {
            const ElementMatrix& ke = geom.phase[geom.cell(cx, cy)] == 1 ? k1 : k2;
            mesh.cell_nodes(cx, cy, nodes);
            for (int i = 0; i < 8; ++i)
                diag[2 * nodes[i / 2] + (i % 2)] += ke[8 * i + i];
        }
    return diag;
}

void check_geometry(const PixelGeometry& geom, const char* where) {
    if (geom.n < 2) throw DomainError(std::string(where) + ": grid size must be >= 2");
    if (geom.n > 4096)
        throw DomainError(std::string(where) + ": grid size above 4096 is not supported");
    if (static_cast<int>(geom.phase.size()) != geom.n * geom.n)
        throw DomainError(std::string(where) + ": phase table size mismatch");
    for (unsigned char p : geom.phase)
        if (p != 1 && p != 2)
            throw DomainError(std::string(where) + ": phase ids must be 1 or 2");
}

} // namespace

double PixelGeometry::f1() const {
    long count = 0;
    for (unsigned char p : phase) count += (p == 1);
    return static_cast<double>(count) / (static_cast<double>(n) * n);
}

PixelGeometry geometry_disk(int n, double radius) {
    if (n < 2) throw DomainError("geometry_disk: n must be >= 2");
    if (!(radius > 0.0 && radius < 0.5))
        throw DomainError("geometry_disk: radius must lie in (0, 0.5)");
    PixelGeometry g{n, std::vector<unsigned char>(static_cast<std::size_t>(n) * n, 2)};
    const double r2 = radius * radius;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const double cx = (ix + 0.5) / n - 0.5;
            const double cy = (iy + 0.5) / n - 0.5;
            if (cx * cx + cy * cy < r2) g.phase[g.cell(ix, iy)] = 1;
        }
    return g;
}

PixelGeometry geometry_stripes(int n, double f1, int period) {
    if (n < 2) throw DomainError("geometry_stripes: n must be >= 2");
    if (period < 1 || period > n) throw DomainError("geometry_stripes: period must lie in [1, n]");
    if (!(f1 >= 0.0 && f1 <= 1.0)) throw DomainError("geometry_stripes: f1 must lie in [0, 1]");
    const int cols1 = static_cast<int>(std::lround(f1 * period));
    PixelGeometry g{n, std::vector<unsigned char>(static_cast<std::size_t>(n) * n, 2)};
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            if (ix % period < cols1) g.phase[g.cell(ix, iy)] = 1;
    return g;
}

PixelGeometry read_geometry(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        lines.push_back(line);
    }
    const int n = static_cast<int>(lines.size());
    if (n < 2) throw ParseError("geometry grid needs at least 2 rows");
    PixelGeometry g{n, std::vector<unsigned char>(static_cast<std::size_t>(n) * n, 2)};
    for (int row = 0; row < n; ++row) {
        if (static_cast<int>(lines[row].size()) != n)
            throw ParseError("geometry grid row has wrong length", row + 1);
        const int iy = n - 1 - row; // top row first
        for (int ix = 0; ix < n; ++ix) {
            const char ch = lines[row][ix];
            if (ch != '1' && ch != '2')
                throw ParseError("geometry grid entries must be '1' or '2'", row + 1);
            g.phase[g.cell(ix, iy)] = ch == '1' ? 1 : 2;
        }
    }
    return g;
}

void write_geometry(std::ostream& out, const PixelGeometry& geom) {
    for (int iy = geom.n - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < geom.n; ++ix)
            out << (geom.phase[geom.cell(ix, iy)] == 1 ? '1' : '2');
        out << '\n';
    }
}

Solution solve(const PixelGeometry& geom, const PhasePair& phases, const GradVec4& avg_strain) {
    const Mat2 m = from_grad4(avg_strain);
    return solve(geom, phases, [m](double x, double y) {
        return std::array<double, 2>{m.m11 * x + m.m21 * y, m.m12 * x + m.m22 * y};
    });
}

Solution solve(const PixelGeometry& geom, const PhasePair& phases,
               const BoundaryDisplacement& boundary_u) {
    check_geometry(geom, "fem::solve");
    require_valid(phases.phase1, "fem::solve");
    require_valid(phases.phase2, "fem::solve");

    Mesh mesh;
    mesh.n = geom.n;
    mesh.h = 1.0 / geom.n;
    mesh.nodes_per_side = geom.n + 1;
    mesh.ndof = 2 * mesh.nodes_per_side * mesh.nodes_per_side;

    const ElementMatrix k1 = element_stiffness(phases.phase1, mesh.h);
    const ElementMatrix k2 = element_stiffness(phases.phase2, mesh.h);

    std::vector<char> fixed(mesh.ndof, 0);
    std::vector<double> u(mesh.ndof, 0.0);
    for (int iy = 0; iy <= mesh.n; ++iy)
        for (int ix = 0; ix <= mesh.n; ++ix) {
            if (!mesh.boundary_node(ix, iy)) continue;
            const auto ub = boundary_u(ix * mesh.h, iy * mesh.h);
            const int id = mesh.node(ix, iy);
            u[2 * id] = ub[0];
            u[2 * id + 1] = ub[1];
            fixed[2 * id] = fixed[2 * id + 1] = 1;
        }

    // Residual of the full system restricted to free dofs; CG on that block.
    std::vector<double> r(mesh.ndof), p(mesh.ndof, 0.0), ap(mesh.ndof), z(mesh.ndof, 0.0);
    apply_stiffness(mesh, geom, k1, k2, u, r);
    for (int d = 0; d < mesh.ndof; ++d) r[d] = fixed[d] ? 0.0 : -r[d];

    const std::vector<double> diag = stiffness_diagonal(mesh, geom, k1, k2);
    const auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (int d = 0; d < mesh.ndof; ++d) s += a[d] * b[d];
        return s;
    };

    const double rhs_norm = std::sqrt(dot(r, r));
    Convergence conv;
    // Target well below the contract residual so that pointwise stresses from
    // exact-in-space solutions come out clean.
    const double tol = 1e-12;
    const double tol_accept = 1e-10;
    if (rhs_norm > 0.0) {
        for (int d = 0; d < mesh.ndof; ++d) z[d] = fixed[d] ? 0.0 : r[d] / diag[d];
        p = z;
        double rz = dot(r, z);
        const int cap = 50000;
        int it = 0;
        double rel = 1.0;
        while (it < cap) {
            apply_stiffness(mesh, geom, k1, k2, p, ap);
            for (int d = 0; d < mesh.ndof; ++d)
                if (fixed[d]) ap[d] = 0.0;
            const double alpha = rz / dot(p, ap);
            for (int d = 0; d < mesh.ndof; ++d) u[d] += alpha * p[d];
            for (int d = 0; d < mesh.ndof; ++d) r[d] -= alpha * ap[d];
            ++it;
            rel = std::sqrt(dot(r, r)) / rhs_norm;
            if (rel <= tol) break;
            for (int d = 0; d < mesh.ndof; ++d) z[d] = fixed[d] ? 0.0 : r[d] / diag[d];
            const double rz_next = dot(r, z);
            const double beta = rz_next / rz;
            rz = rz_next;
            for (int d = 0; d < mesh.ndof; ++d) p[d] = z[d] + beta * p[d];
        }
        conv.iterations = it;
        conv.rel_residual = rel;
        if (rel > tol_accept)
            throw SolverError("fem::solve: conjugate gradients stalled at residual " +
                              std::to_string(rel));
    }

    Solution sol;
    sol.geometry = geom;
    sol.phases = phases;
    sol.displacement = std::move(u);
    sol.convergence = conv;

    // Per-Gauss-point fields in a fixed order.
    sol.gp_stress.resize(static_cast<std::size_t>(geom.n) * geom.n * 4);
    sol.gp_grad.resize(sol.gp_stress.size());
    int nodes[4];
    std::size_t idx = 0;
    for (int cy = 0; cy < mesh.n; ++cy)
        for (int cx = 0; cx < mesh.n; ++cx) {
            mesh.cell_nodes(cx, cy, nodes);
            double ul[8];
            for (int a = 0; a < 4; ++a) {
                ul[2 * a] = sol.displacement[2 * nodes[a]];
                ul[2 * a + 1] = sol.displacement[2 * nodes[a] + 1];
            }
            const DiagMat3 d =
                stiffness(geom.phase[geom.cell(cx, cy)] == 1 ? phases.phase1 : phases.phase2);
            for (int gy = 0; gy < 2; ++gy)
                for (int gx = 0; gx < 2; ++gx) {
                    const double xi = (gx == 0 ? -kGauss : kGauss);
                    const double eta = (gy == 0 ? -kGauss : kGauss);
                    const ShapeGrads g = shape_grads(xi, eta, mesh.h);
                    double b[3][8], f0row[8];
                    strain_rows(g, b);
                    rotation_row(g, f0row);
                    GradVec4 grad;
                    for (int j = 0; j < 8; ++j) {
                        grad.f0 += f0row[j] * ul[j];
                        grad.e1 += b[0][j] * ul[j];
                        grad.e2 += b[1][j] * ul[j];
                        grad.e3 += b[2][j] * ul[j];
                    }
                    sol.gp_grad[idx] = grad;
                    sol.gp_stress[idx] = d * grad.strain();
                    ++idx;
                }
        }
    return sol;
}

Measurements measurements_of(const Solution& sol) {
    const int n = sol.geometry.n;
    const double w = 1.0 / (4.0 * n * n); // Gauss weight x Jacobian
    Measurements m;
    double area = 0.0;
    for (std::size_t i = 0; i < sol.gp_stress.size(); ++i) {
        const MandelVec& s = sol.gp_stress[i];
        const GradVec4& g = sol.gp_grad[i];
        m.sigma0 = m.sigma0 + w * s;
        m.grad0 = m.grad0 + w * g;
        m.energy += w * s.dot(g.strain());
        m.a += w * det_mandel(s);
        m.b += w * det_grad4(g);
        area += w;
    }
    const double inv = 1.0 / area;
    m.sigma0 = inv * m.sigma0;
    m.grad0 = inv * m.grad0;
    m.energy *= inv;
    m.a *= inv;
    m.b *= inv;
    m.area = area;
    return m;
}

namespace {

// Stress at a parent-space point of one cell.
MandelVec stress_at(const Solution& sol, int cx, int cy, double xi, double eta) {
    const int n = sol.geometry.n;
    const double h = 1.0 / n;
    const int nps = n + 1;
    const int node_ids[4] = {cy * nps + cx, cy * nps + cx + 1, (cy + 1) * nps + cx + 1,
                             (cy + 1) * nps + cx};
    double ul[8];
    for (int a = 0; a < 4; ++a) {
        ul[2 * a] = sol.displacement[2 * node_ids[a]];
        ul[2 * a + 1] = sol.displacement[2 * node_ids[a] + 1];
    }
    double b[3][8];
    strain_rows(shape_grads(xi, eta, h), b);
    MandelVec eps;
    for (int j = 0; j < 8; ++j) {
        eps.v1 += b[0][j] * ul[j];
        eps.v2 += b[1][j] * ul[j];
        eps.v3 += b[2][j] * ul[j];
    }
    const DiagMat3 d = stiffness(sol.geometry.phase[sol.geometry.cell(cx, cy)] == 1
                                     ? sol.phases.phase1
                                     : sol.phases.phase2);
    return d * eps;
}

std::array<double, 2> displacement_at(const Solution& sol, double x, double y) {
    const int n = sol.geometry.n;
    const double h = 1.0 / n;
    const int cx = std::clamp(static_cast<int>(std::floor(x * n)), 0, n - 1);
    const int cy = std::clamp(static_cast<int>(std::floor(y * n)), 0, n - 1);
    const double xi = 2.0 * (x - cx * h) / h - 1.0;
    const double eta = 2.0 * (y - cy * h) / h - 1.0;
    double nv[4];
    shape_values(xi, eta, nv);
    const int nps = n + 1;
    const int node_ids[4] = {cy * nps + cx, cy * nps + cx + 1, (cy + 1) * nps + cx + 1,
                             (cy + 1) * nps + cx};
    std::array<double, 2> u{0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
        u[0] += nv[a] * sol.displacement[2 * node_ids[a]];
        u[1] += nv[a] * sol.displacement[2 * node_ids[a] + 1];
    }
    return u;
}

// Boundary traction at an edge point; averages the two touching cells when
// the point sits on a shared cell edge so that trapezoid sums keep their
// cancellation across stress jumps.
std::array<double, 2> traction_at(const Solution& sol, int edge, double s) {
    const int n = sol.geometry.n;
    const double sn = s * n;
    const int nearest = static_cast<int>(std::lround(sn));
    const bool on_joint =
        std::abs(sn - static_cast<double>(nearest)) < 1e-9 && nearest >= 1 && nearest <= n - 1;

    const auto eval = [&](int cell_along) {
        int cx, cy;
        double xi, eta;
        const double local = 2.0 * (sn - cell_along) - 1.0;
        switch (edge) {
            case 0: cx = cell_along; cy = 0; xi = local; eta = -1.0; break;      // bottom
            case 1: cx = n - 1; cy = cell_along; xi = 1.0; eta = local; break;   // right
            case 2: cx = cell_along; cy = n - 1; xi = local; eta = 1.0; break;   // top
            default: cx = 0; cy = cell_along; xi = -1.0; eta = local; break;     // left
        }
        return from_mandel(stress_at(sol, cx, cy, xi, eta));
    };

    SymMat2 sig;
    if (on_joint) {
        const SymMat2 lo = eval(nearest - 1);
        const SymMat2 hi = eval(nearest);
        sig = {0.5 * (lo.a11 + hi.a11), 0.5 * (lo.a22 + hi.a22), 0.5 * (lo.a12 + hi.a12)};
    } else {
        sig = eval(std::clamp(static_cast<int>(std::floor(sn)), 0, n - 1));
    }

    const double nxs[4] = {0.0, 1.0, 0.0, -1.0};
    const double nys[4] = {-1.0, 0.0, 1.0, 0.0};
    return {sig.a11 * nxs[edge] + sig.a12 * nys[edge],
            sig.a12 * nxs[edge] + sig.a22 * nys[edge]};
}

} // namespace

boundary::BoundaryTrace boundary_trace_of(const Solution& sol, int samples_per_edge) {
    if (samples_per_edge < 1) throw DomainError("fem::boundary_trace_of: need >= 1 sample per edge");
    const int s = samples_per_edge;
    const double eps = 1e-12; // corner split, below every comparison tolerance

    boundary::BoundaryTrace trace;
    trace.nodes.reserve(4 * (s + 1));
    for (int edge = 0; edge < 4; ++edge) {
        for (int k = 0; k <= s; ++k) {
            double along = static_cast<double>(k) / s;
            if (k == 0) along = eps;
            if (k == s) along = 1.0 - eps;

            double x, y;
            switch (edge) {
                case 0: x = along; y = 0.0; break;
                case 1: x = 1.0; y = along; break;
                case 2: x = 1.0 - along; y = 1.0; break;
                default: x = 0.0; y = 1.0 - along; break;
            }
            const double coord = (edge == 0) ? x : (edge == 1) ? y : (edge == 2) ? x : y;
            const auto t = traction_at(sol, edge, coord);
            const auto u = displacement_at(sol, x, y);
            trace.nodes.push_back({x, y, t[0], t[1], u[0], u[1]});
        }
    }
    return trace;
}

double boundary_work(const Solution& sol) {
    Mesh mesh;
    mesh.n = sol.geometry.n;
    mesh.h = 1.0 / mesh.n;
    mesh.nodes_per_side = mesh.n + 1;
    mesh.ndof = 2 * mesh.nodes_per_side * mesh.nodes_per_side;

    const ElementMatrix k1 = element_stiffness(sol.phases.phase1, mesh.h);
    const ElementMatrix k2 = element_stiffness(sol.phases.phase2, mesh.h);
    std::vector<double> y(mesh.ndof);
    apply_stiffness(mesh, sol.geometry, k1, k2, sol.displacement, y);

    double work = 0.0;
    for (int iy = 0; iy <= mesh.n; ++iy)
        for (int ix = 0; ix <= mesh.n; ++ix) {
            if (!mesh.boundary_node(ix, iy)) continue;
            const int id = mesh.node(ix, iy);
            work += y[2 * id] * sol.displacement[2 * id] +
                    y[2 * id + 1] * sol.displacement[2 * id + 1];
        }
    return work;
}

} // namespace vfb::fem
