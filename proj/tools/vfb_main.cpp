// vfb: volume-fraction bounds for two-phase 2-D elastic bodies from boundary
// measurements, plus (average stress, average strain) pair admissibility.
//
// Subcommands: ingest, bounds, pairs, sweep, oracle.
// Exit codes: 0 ok, 2 parse error, 3 validation error, 4 empty intersection
// (data inconsistent with the model), 5 missing phase contrast.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "vfb/admissibility.hpp"
#include "vfb/boundary.hpp"
#include "vfb/errors.hpp"
#include "vfb/fem.hpp"
#include "vfb/interval.hpp"
#include "vfb/laminate.hpp"
#include "vfb/measurements_io.hpp"
#include "vfb/splitting.hpp"
#include "vfb/translation.hpp"

using nlohmann::json;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitEmptyIntersection = 4;
constexpr int kExitContrast = 5;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string interval_str(const vfb::FractionInterval& iv) {
    if (iv.empty()) return "(empty)";
    std::string s;
    for (std::size_t i = 0; i < iv.parts().size(); ++i) {
        if (i) s += " u ";
        s += "[" + num(iv.parts()[i].first) + ", " + num(iv.parts()[i].second) + "]";
    }
    return s;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw vfb::ParseError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw vfb::ParseError(std::string("config: ") + e.what());
    }
}

double get_number(const json& j, const std::string& key) {
    if (!j.contains(key)) throw vfb::ParseError("config: missing key '" + key + "'");
    if (!j.at(key).is_number()) throw vfb::ParseError("config: '" + key + "' must be a number");
    return j.at(key).get<double>();
}

std::vector<double> get_numbers(const json& j, const std::string& key, std::size_t count) {
    if (!j.contains(key)) throw vfb::ParseError("config: missing key '" + key + "'");
    const json& arr = j.at(key);
    if (!arr.is_array() || arr.size() != count)
        throw vfb::ParseError("config: '" + key + "' must be an array of " +
                              std::to_string(count) + " numbers");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number()) throw vfb::ParseError("config: '" + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

vfb::PhasePair parse_phases(const json& j) {
    if (!j.contains("phases")) throw vfb::ParseError("config: missing 'phases'");
    const json& p = j.at("phases");
    vfb::PhasePair phases{{get_number(p, "kappa1"), get_number(p, "mu1")},
                          {get_number(p, "kappa2"), get_number(p, "mu2")}};
    if (!phases.valid())
        throw vfb::ValidationError("config: phase moduli must be positive and finite");
    return phases;
}

vfb::Measurements parse_measurements_inline(const json& m) {
    const auto s0 = get_numbers(m, "sigma0", 3);
    const auto g0 = get_numbers(m, "grad0", 4);
    vfb::Measurements out;
    out.sigma0 = {s0[0], s0[1], s0[2]};
    out.grad0 = {g0[0], g0[1], g0[2], g0[3]};
    out.energy = get_number(m, "energy");
    out.a = get_number(m, "a");
    out.b = get_number(m, "b");
    out.area = m.contains("area") ? get_number(m, "area") : 1.0;
    if (!(out.area > 0.0)) throw vfb::ValidationError("config: area must be positive");
    return out;
}

// Exactly one measurement source for a bounds job.
vfb::Measurements parse_measurement_source(const json& cfg) {
    const int present = cfg.contains("measurements") + cfg.contains("measurements_file") +
                        cfg.contains("trace");
    if (present != 1)
        throw vfb::ValidationError(
            "config: exactly one of 'measurements', 'measurements_file', 'trace' is required");
    if (cfg.contains("measurements")) return parse_measurements_inline(cfg.at("measurements"));
    if (cfg.contains("measurements_file"))
        return vfb::read_measurements_file(cfg.at("measurements_file").get<std::string>());
    return vfb::boundary::ingest(
        vfb::boundary::read_trace_file(cfg.at("trace").get<std::string>()));
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw vfb::Error("cannot write output file '" + path + "'");
    return out;
}

// --------------------------------------------------------------------------
// ingest

int cmd_ingest(const std::string& trace_path, const std::string& out_path,
               const std::string& diag_path) {
    const vfb::boundary::BoundaryTrace trace = vfb::boundary::read_trace_file(trace_path);
    const vfb::boundary::IngestResult r = vfb::boundary::ingest_full(trace);

    std::ostringstream meas;
    vfb::write_measurements(meas, r.measurements);
    std::ostringstream diag;
    diag << "area = " << num(r.diagnostics.area) << "\n"
         << "perimeter = " << num(r.diagnostics.perimeter) << "\n"
         << "reoriented = " << (r.diagnostics.reoriented ? 1 : 0) << "\n"
         << "net_force = " << num(r.diagnostics.net_force) << "\n"
         << "net_moment = " << num(r.diagnostics.net_moment) << "\n"
         << "sigma_asymmetry = " << num(r.diagnostics.sigma_asymmetry) << "\n"
         << "x0_shift_residual = " << num(r.diagnostics.x0_shift_residual) << "\n";

    if (out_path.empty()) {
        std::cout << meas.str();
    } else {
        open_out(out_path) << meas.str();
    }
    if (diag_path.empty()) {
        std::cout << "# diagnostics\n" << diag.str();
    } else {
        open_out(diag_path) << diag.str();
    }
    return 0;
}

// --------------------------------------------------------------------------
// bounds

int cmd_bounds(const std::string& config_path) {
    const json cfg = load_json(config_path);
    const vfb::PhasePair phases = parse_phases(cfg);
    const vfb::Measurements m = parse_measurement_source(cfg);
    const double tol = cfg.contains("tolerance") ? get_number(cfg, "tolerance")
                                                 : vfb::translation_bounds::kDefaultTolerance;
    const double res = cfg.contains("scan_resolution") ? get_number(cfg, "scan_resolution")
                                                       : vfb::splitting::kDefaultResolution;

    const auto [alpha_min, alpha_max] = vfb::translation_bounds::alpha_endpoints(phases);
    vfb::FractionInterval tr_lo = vfb::FractionInterval::whole();
    vfb::FractionInterval tr_hi = vfb::FractionInterval::whole();
    {
        const double tol_abs = tol * vfb::measurement_scale(m);
        for (int side = 0; side < 2; ++side) {
            vfb::QuadraticInequality q =
                vfb::translation_bounds::quadratic(m, phases, side == 0 ? alpha_min : alpha_max);
            q.q2 -= tol_abs;
            q.q1 += tol_abs;
            (side == 0 ? tr_lo : tr_hi) =
                vfb::FractionInterval::from_quadratic(q).without_boundary_points();
        }
    }
    const vfb::splitting::SplitKnowns knowns = vfb::splitting::split_knowns(m, phases);
    const vfb::FractionInterval split = vfb::splitting::invert(knowns, phases, res, tol);
    const vfb::FractionInterval inter = tr_lo.intersect(tr_hi).intersect(split);

    std::ostringstream rep;
    rep << "# volume-fraction bounds report\n"
        << "phases: kappa1=" << num(phases.phase1.kappa) << " mu1=" << num(phases.phase1.mu)
        << " kappa2=" << num(phases.phase2.kappa) << " mu2=" << num(phases.phase2.mu) << "\n"
        << "alpha_endpoints: " << num(alpha_min) << " " << num(alpha_max) << "\n"
        << "interval translation_alpha_min: " << interval_str(tr_lo) << "\n"
        << "interval translation_alpha_max: " << interval_str(tr_hi) << "\n"
        << "interval splitting: " << interval_str(split) << "\n"
        << "intersection: " << interval_str(inter) << "\n";

    if (cfg.contains("report")) {
        open_out(cfg.at("report").get<std::string>()) << rep.str();
    } else {
        std::cout << rep.str();
    }

    if (cfg.contains("slack_csv")) {
        std::ofstream csv = open_out(cfg.at("slack_csv").get<std::string>());
        csv << "f1,translation_alpha_min,translation_alpha_max,splitting_margin,"
               "closed_form_bulk,closed_form_shear\n";
        for (double f = res; f < 1.0 - 0.5 * res; f += res) {
            const double s_lo = vfb::translation_bounds::slack(f, m, phases, alpha_min);
            const double s_hi = vfb::translation_bounds::slack(f, m, phases, alpha_max);
            const auto feas = vfb::splitting::feasible(f, knowns, phases, tol);
            const auto cf = vfb::splitting::closed_form_slacks(f, knowns, phases);
            csv << num(f) << "," << num(s_lo) << "," << num(s_hi) << ","
                << num(-feas.violation) << "," << num(cf[0]) << "," << num(cf[1]) << "\n";
        }
    }
    return inter.empty() ? kExitEmptyIntersection : 0;
}

// --------------------------------------------------------------------------
// pairs

void print_verdict(std::ostream& out, double f1, const vfb::pairs::Verdict& v) {
    out << "f1 = " << num(f1) << "\n"
        << "admissible = " << (v.admissible ? 1 : 0) << "\n"
        << "min_slack = " << num(v.min_slack) << "\n";
    for (const auto& c : v.constraints)
        out << "constraint " << c.name << ": slack = " << num(c.slack)
            << (c.violated ? " VIOLATED" : "") << "\n";
}

int cmd_pairs(const std::string& config_path) {
    const json cfg = load_json(config_path);
    const vfb::PhasePair phases = parse_phases(cfg);
    const auto s0 = get_numbers(cfg, "sigma0", 3);
    const auto e0 = get_numbers(cfg, "eps0", 3);
    const vfb::pairs::CompositePair pair{{s0[0], s0[1], s0[2]}, {e0[0], e0[1], e0[2]}};
    const double tol = cfg.contains("tolerance") ? get_number(cfg, "tolerance")
                                                 : vfb::pairs::kDefaultTolerance;

    const bool single = cfg.contains("f1");
    const bool range = cfg.contains("f1_range");
    if (single == range)
        throw vfb::ValidationError("config: exactly one of 'f1' or 'f1_range' is required");

    std::ostringstream body;
    if (single) {
        const double f1 = get_number(cfg, "f1");
        print_verdict(body, f1, vfb::pairs::admissible(pair, f1, phases, tol));
    } else {
        const json& r = cfg.at("f1_range");
        const double from = get_number(r, "from");
        const double to = get_number(r, "to");
        const int count = static_cast<int>(get_number(r, "count"));
        if (count < 2) throw vfb::ValidationError("config: f1_range.count must be >= 2");
        body << "f1,admissible,min_slack\n";
        for (int i = 0; i < count; ++i) {
            const double f1 = from + (to - from) * i / (count - 1);
            const vfb::pairs::Verdict v = vfb::pairs::admissible(pair, f1, phases, tol);
            body << num(f1) << "," << (v.admissible ? 1 : 0) << "," << num(v.min_slack) << "\n";
        }
    }

    if (cfg.contains("output")) {
        open_out(cfg.at("output").get<std::string>()) << body.str();
    } else {
        std::cout << body.str();
    }
    return 0;
}

// --------------------------------------------------------------------------
// sweep

int cmd_sweep(const std::string& config_path) {
    const json cfg = load_json(config_path);
    const vfb::PhasePair phases = parse_phases(cfg);
    const auto s0 = get_numbers(cfg, "sigma0", 3);
    const double f1 = get_number(cfg, "f1");
    const double tol = cfg.contains("tolerance") ? get_number(cfg, "tolerance")
                                                 : vfb::pairs::kDefaultTolerance;

    if (!cfg.contains("grid")) throw vfb::ParseError("config: missing 'grid'");
    const json& g = cfg.at("grid");
    const auto vary = get_numbers(g, "vary", 2);
    const auto lo = get_numbers(g, "lo", 2);
    const auto hi = get_numbers(g, "hi", 2);
    const auto count = get_numbers(g, "count", 2);

    vfb::pairs::GridSpec grid;
    grid.vary_i = static_cast<int>(vary[0]);
    grid.vary_j = static_cast<int>(vary[1]);
    grid.lo_i = lo[0];
    grid.hi_i = hi[0];
    grid.count_i = static_cast<int>(count[0]);
    grid.lo_j = lo[1];
    grid.hi_j = hi[1];
    grid.count_j = static_cast<int>(count[1]);
    grid.fixed_value = get_number(g, "fixed_value");

    const auto rows =
        vfb::pairs::region_scan({s0[0], s0[1], s0[2]}, grid, f1, phases, tol);

    std::ostringstream body;
    body << "eps1,eps2,eps3,admissible,min_slack\n";
    for (const auto& row : rows)
        body << num(row.eps0.v1) << "," << num(row.eps0.v2) << "," << num(row.eps0.v3) << ","
             << (row.admissible ? 1 : 0) << "," << num(row.min_slack) << "\n";

    if (cfg.contains("output")) {
        open_out(cfg.at("output").get<std::string>()) << body.str();
    } else {
        std::cout << body.str();
    }
    return 0;
}

// --------------------------------------------------------------------------
// oracle

struct OracleOptions {
    std::string kind; // laminate | fem
    double kappa1 = 2.0, mu1 = 1.0, kappa2 = 1.0, mu2 = 0.5;
    double theta = 0.0;
    double f1 = 0.5;
    std::string loading = "hydrostatic";
    std::string strain; // "f0,e1,e2,e3" overrides loading presets
    std::string fem_kind = "disk";
    int n = 64;
    double radius = 0.25;
    int period = 8;
    std::string geometry_file;
    int trace_samples = 0;
    std::string out_prefix;
};

vfb::GradVec4 oracle_loading(const OracleOptions& opt) {
    if (!opt.strain.empty()) {
        vfb::GradVec4 g;
        double* comp[4] = {&g.f0, &g.e1, &g.e2, &g.e3};
        std::istringstream in(opt.strain);
        std::string cell;
        for (int i = 0; i < 4; ++i) {
            if (!std::getline(in, cell, ','))
                throw vfb::ParseError("--strain needs 4 comma-separated numbers");
            try {
                *comp[i] = std::stod(cell);
            } catch (const std::exception&) {
                throw vfb::ParseError("--strain: bad number '" + cell + "'");
            }
        }
        return g;
    }
    if (opt.loading == "hydrostatic") return {0.0, vfb::kSqrt2, 0.0, 0.0};
    if (opt.loading == "uniaxial") return {0.0, 1.0 / vfb::kSqrt2, 1.0 / vfb::kSqrt2, 0.0};
    if (opt.loading == "shear") return {0.0, 0.0, 0.0, vfb::kSqrt2};
    throw vfb::ParseError("unknown loading preset '" + opt.loading + "'");
}

void write_truth(const std::string& path, const std::string& kind, double f1) {
    std::ofstream out = open_out(path);
    char buf[128];
    std::snprintf(buf, sizeof buf, "kind = %s\nf1 = %.17g\n", kind.c_str(), f1);
    out << buf;
}

int cmd_oracle(const OracleOptions& opt) {
    if (opt.out_prefix.empty()) throw vfb::ParseError("oracle: --out-prefix is required");
    const vfb::PhasePair phases{{opt.kappa1, opt.mu1}, {opt.kappa2, opt.mu2}};
    if (!phases.valid()) throw vfb::ValidationError("oracle: phase moduli must be positive");

    if (opt.kind == "laminate") {
        if (!(opt.f1 > 0.0 && opt.f1 < 1.0))
            throw vfb::DomainError("oracle laminate: f1 must lie in (0,1)");
        const vfb::laminate::Laminate lam{opt.theta, opt.f1, phases};
        const vfb::laminate::Fields fields = vfb::laminate::solve(lam, oracle_loading(opt));
        const vfb::Measurements m = vfb::laminate::measurements_of(fields, opt.f1);
        vfb::write_measurements_file(opt.out_prefix + ".measurements.txt", m);
        write_truth(opt.out_prefix + ".truth.txt", "laminate", opt.f1);
        return 0;
    }
    if (opt.kind == "fem") {
        vfb::fem::PixelGeometry geom;
        if (opt.fem_kind == "disk") {
            geom = vfb::fem::geometry_disk(opt.n, opt.radius);
        } else if (opt.fem_kind == "stripes") {
            geom = vfb::fem::geometry_stripes(opt.n, opt.f1, opt.period);
        } else if (opt.fem_kind == "file") {
            std::ifstream in(opt.geometry_file);
            if (!in) throw vfb::ParseError("cannot open geometry file '" + opt.geometry_file + "'");
            geom = vfb::fem::read_geometry(in);
        } else {
            throw vfb::ParseError("oracle fem: --shape must be disk, stripes or file");
        }
        const vfb::fem::Solution sol = vfb::fem::solve(geom, phases, oracle_loading(opt));
        const vfb::Measurements m = vfb::fem::measurements_of(sol);
        vfb::write_measurements_file(opt.out_prefix + ".measurements.txt", m);
        write_truth(opt.out_prefix + ".truth.txt", "fem", geom.f1());
        if (opt.trace_samples > 0) {
            std::ofstream out = open_out(opt.out_prefix + ".trace.csv");
            vfb::boundary::write_trace_csv(out,
                                           vfb::fem::boundary_trace_of(sol, opt.trace_samples));
        }
        return 0;
    }
    throw vfb::ParseError("oracle: kind must be 'laminate' or 'fem'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"volume-fraction bounds for two-phase 2-D elastic bodies"};
    app.require_subcommand(1);

    std::string trace_path, out_path, diag_path, config_path;

    CLI::App* ingest = app.add_subcommand("ingest", "boundary trace -> measurements");
    ingest->add_option("trace", trace_path, "trace CSV file")->required();
    ingest->add_option("--out", out_path, "measurements output file (default: stdout)");
    ingest->add_option("--diagnostics", diag_path, "diagnostics output file");

    CLI::App* bounds = app.add_subcommand("bounds", "volume-fraction intervals from measurements");
    bounds->add_option("config", config_path, "JSON config")->required();

    CLI::App* pairs = app.add_subcommand("pairs", "(average stress, average strain) admissibility");
    pairs->add_option("config", config_path, "JSON config")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "admissible-region scan over a strain grid");
    sweep->add_option("config", config_path, "JSON config")->required();

    OracleOptions opt;
    CLI::App* oracle = app.add_subcommand("oracle", "generate reference measurements with truth");
    oracle->add_option("kind", opt.kind, "laminate or fem")->required();
    oracle->add_option("--kappa1", opt.kappa1);
    oracle->add_option("--mu1", opt.mu1);
    oracle->add_option("--kappa2", opt.kappa2);
    oracle->add_option("--mu2", opt.mu2);
    oracle->add_option("--theta", opt.theta, "laminate layer-normal angle");
    oracle->add_option("--f1", opt.f1, "phase-1 fraction (laminate, stripes)");
    oracle->add_option("--loading", opt.loading, "hydrostatic | uniaxial | shear");
    oracle->add_option("--strain", opt.strain, "custom loading f0,e1,e2,e3");
    oracle->add_option("--shape", opt.fem_kind, "disk | stripes | file")->group("fem");
    oracle->add_option("--n", opt.n, "grid size")->group("fem");
    oracle->add_option("--radius", opt.radius, "disk radius")->group("fem");
    oracle->add_option("--period", opt.period, "stripe period in cells")->group("fem");
    oracle->add_option("--geometry", opt.geometry_file, "geometry grid file")->group("fem");
    oracle->add_option("--trace-samples", opt.trace_samples, "also write a boundary trace")
        ->group("fem");
    oracle->add_option("--out-prefix", opt.out_prefix)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitParse : 0;
    }

    try {
        if (*ingest) return cmd_ingest(trace_path, out_path, diag_path);
        if (*bounds) return cmd_bounds(config_path);
        if (*pairs) return cmd_pairs(config_path);
        if (*sweep) return cmd_sweep(config_path);
        if (*oracle) return cmd_oracle(opt);
    } catch (const vfb::ContrastError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitContrast;
    } catch (const vfb::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const vfb::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const vfb::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
