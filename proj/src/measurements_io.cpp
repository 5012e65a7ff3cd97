#include "vfb/measurements_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <vector>

#include "vfb/errors.hpp"

namespace vfb {

void write_measurements(std::ostream& out, const Measurements& m) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "sigma0 = %.17g %.17g %.17g\n"
                  "grad0 = %.17g %.17g %.17g %.17g\n"
                  "energy = %.17g\n"
                  "a = %.17g\n"
                  "b = %.17g\n"
                  "area = %.17g\n",
                  m.sigma0.v1, m.sigma0.v2, m.sigma0.v3, m.grad0.f0, m.grad0.e1, m.grad0.e2,
                  m.grad0.e3, m.energy, m.a, m.b, m.area);
    out << buf;
}

Measurements read_measurements(std::istream& in) {
    std::map<std::string, std::vector<double>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("measurements line needs 'key = values'", line_no);
        std::string key = line.substr(first, eq - first);
        key.erase(key.find_last_not_of(" \t") + 1);

        std::vector<double> values;
        const char* s = line.c_str() + eq + 1;
        char* end = nullptr;
        while (true) {
            const double v = std::strtod(s, &end);
            if (end == s) break;
            values.push_back(v);
            s = end;
        }
        while (*s == ' ' || *s == '\t' || *s == '\r') ++s;
        if (*s != '\0') throw ParseError("trailing junk in measurements line", line_no);
        if (entries.count(key)) throw ParseError("duplicate key '" + key + "'", line_no);
        entries[key] = values;
    }

    const auto take = [&](const std::string& key, std::size_t count) {
        auto it = entries.find(key);
        if (it == entries.end()) throw ParseError("measurements file missing key '" + key + "'");
        if (it->second.size() != count)
            throw ParseError("key '" + key + "' needs " + std::to_string(count) + " numbers");
        return it->second;
    };

    Measurements m;
    const auto s0 = take("sigma0", 3);
    m.sigma0 = {s0[0], s0[1], s0[2]};
    const auto g0 = take("grad0", 4);
    m.grad0 = {g0[0], g0[1], g0[2], g0[3]};
    m.energy = take("energy", 1)[0];
    m.a = take("a", 1)[0];
    m.b = take("b", 1)[0];
    m.area = take("area", 1)[0];
    if (entries.size() != 6) throw ParseError("measurements file has unknown keys");
    if (!(m.area > 0.0)) throw ValidationError("measurements: area must be positive");
    return m;
}

Measurements read_measurements_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open measurements file '" + path + "'");
    return read_measurements(in);
}

void write_measurements_file(const std::string& path, const Measurements& m) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write measurements file '" + path + "'");
    write_measurements(out, m);
}

} // namespace vfb
