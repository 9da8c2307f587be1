#include "tsde/surface_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace tsde {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_field(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const char* b = s.data();
    auto res = std::from_chars(b, b + s.size(), v, std::chars_format::general);
    if (res.ec != std::errc() || res.ptr != b + s.size())
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" + s +
                                 "'");
    return v;
}

}  // namespace

void write_surface_csv(std::ostream& os, const GridFunction& g) {
    const ProductDomain& d = g.domain();
    os << "x,y,z,value\n";
    for (std::size_t i = 0; i < d.n1(); ++i)
        for (std::size_t j = 0; j < d.n2(); ++j)
            for (std::size_t k = 0; k < d.nz(); ++k)
                os << fmt17(d.t1.point(i)) << ',' << fmt17(d.t2.point(j)) << ','
                   << fmt17(d.zscale.point(k)) << ',' << fmt17(g(i, j, k)) << '\n';
}

std::vector<SurfaceRow> read_surface_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "x,y,z,value")
        throw std::runtime_error("csv: missing 'x,y,z,value' header");
    std::vector<SurfaceRow> rows;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::string fields[4];
        std::size_t start = 0;
        int n = 0;
        for (std::size_t pos = 0; pos <= line.size(); ++pos) {
            if (pos == line.size() || line[pos] == ',') {
                if (n >= 4)
                    throw std::runtime_error("csv line " + std::to_string(line_no) +
                                             ": too many fields");
                fields[n++] = line.substr(start, pos - start);
                start = pos + 1;
            }
        }
        if (n != 4)
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 4 fields");
        rows.push_back(SurfaceRow{parse_field(fields[0], line_no), parse_field(fields[1], line_no),
                                  parse_field(fields[2], line_no),
                                  parse_field(fields[3], line_no)});
    }
    return rows;
}

std::string certificate_json_line(const Certificate& cert) {
    nlohmann::ordered_json rec;
    rec["kind"] = std::string(cert_kind_name(cert.kind));
    rec["verdict"] = std::string(cert_verdict_name(cert.verdict));
    rec["pass"] = cert.pass();
    rec["premise_ok"] = cert.premise_ok;
    rec["margin"] = cert.margin;
    nlohmann::ordered_json consts = nlohmann::ordered_json::object();
    for (const auto& [name, value] : cert.constants) consts[name] = value;
    rec["constants"] = consts;
    if (cert.worst) {
        rec["worst"] = {{"x", cert.worst->x},
                        {"y", cert.worst->y},
                        {"z", cert.worst->z},
                        {"bound", cert.worst->bound},
                        {"observed", cert.worst->observed}};
    }
    if (!cert.note.empty()) rec["note"] = cert.note;
    return rec.dump();
}

}  // namespace tsde
