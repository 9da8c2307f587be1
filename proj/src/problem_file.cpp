#include "tsde/problem_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <vector>

namespace tsde {

ProblemFileError::ProblemFileError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, int line) {
    const std::string t = trim(s);
    double v = 0.0;
    const char* b = t.data();
    auto res = std::from_chars(b, b + t.size(), v, std::chars_format::general);
    if (res.ec != std::errc() || res.ptr != b + t.size() || !std::isfinite(v))
        throw ProblemFileError(line, "expected a finite decimal number, got '" + t + "'");
    return v;
}

long parse_integer(const std::string& s, int line) {
    const double v = parse_number(s, line);
    if (v != std::floor(v) || std::abs(v) > 1e15)
        throw ProblemFileError(line, "expected an integer, got '" + trim(s) + "'");
    return static_cast<long>(v);
}

Expr parse_expression(const std::string& s, int line) {
    try {
        return Expr::parse(s);
    } catch (const ParseError& e) {
        throw ProblemFileError(line, std::string("bad expression: ") + e.what());
    }
}

TimeScale parse_scale(const std::string& s, int line) {
    const std::string t = trim(s);
    const std::size_t open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
        throw ProblemFileError(line, "expected scale constructor name(args), got '" + t + "'");
    const std::string name = trim(t.substr(0, open));
    const std::string body = t.substr(open + 1, t.size() - open - 2);

    std::vector<std::string> args;
    std::size_t start = 0;
    for (std::size_t pos = 0; pos <= body.size(); ++pos) {
        if (pos == body.size() || body[pos] == ',') {
            args.push_back(body.substr(start, pos - start));
            start = pos + 1;
        }
    }

    try {
        if (name == "uniform") {
            if (args.size() != 3) throw ProblemFileError(line, "uniform takes (start, stop, n)");
            const long n = parse_integer(args[2], line);
            if (n < 1) throw ProblemFileError(line, "uniform needs n >= 1");
            return TimeScale::uniform(parse_number(args[0], line), parse_number(args[1], line),
                                      static_cast<std::size_t>(n));
        }
        if (name == "integers") {
            if (args.size() != 2) throw ProblemFileError(line, "integers takes (a, b)");
            return TimeScale::integer_range(parse_integer(args[0], line),
                                            parse_integer(args[1], line));
        }
        if (name == "qscale") {
            if (args.size() != 3) throw ProblemFileError(line, "qscale takes (t0, q, n)");
            const long n = parse_integer(args[2], line);
            if (n < 1) throw ProblemFileError(line, "qscale needs n >= 1");
            return TimeScale::geometric(parse_number(args[0], line), parse_number(args[1], line),
                                        static_cast<std::size_t>(n));
        }
        if (name == "points") {
            std::vector<double> pts;
            for (const auto& a : args) pts.push_back(parse_number(a, line));
            return TimeScale(std::move(pts));
        }
    } catch (const std::invalid_argument& e) {
        throw ProblemFileError(line, e.what());
    }
    throw ProblemFileError(line, "unknown scale constructor '" + name + "'");
}

class Sections {
public:
    void add(const std::string& section, const std::string& key, Entry entry) {
        auto [it, fresh] = data_[section].emplace(key, std::move(entry));
        if (!fresh)
            throw ProblemFileError(entry.line, "duplicate key '" + key + "' in [" + section + "]");
    }

    bool has(const std::string& section) const { return data_.count(section) != 0; }

    const Entry& require(const std::string& section, const std::string& key, int section_line) const {
        auto sit = data_.find(section);
        if (sit == data_.end())
            throw ProblemFileError(section_line, "missing section [" + section + "]");
        auto kit = sit->second.find(key);
        if (kit == sit->second.end())
            throw ProblemFileError(section_line,
                                   "missing key '" + key + "' in [" + section + "]");
        return kit->second;
    }

    const Entry* find(const std::string& section, const std::string& key) const {
        auto sit = data_.find(section);
        if (sit == data_.end()) return nullptr;
        auto kit = sit->second.find(key);
        return kit == sit->second.end() ? nullptr : &kit->second;
    }

    void check_known(const std::string& section, std::initializer_list<const char*> known) const {
        auto sit = data_.find(section);
        if (sit == data_.end()) return;
        for (const auto& [key, entry] : sit->second) {
            bool ok = false;
            for (const char* k : known) ok = ok || key == k;
            if (!ok)
                throw ProblemFileError(entry.line,
                                       "unknown key '" + key + "' in [" + section + "]");
        }
    }

private:
    std::map<std::string, Section> data_;
};

}  // namespace

ProblemFile parse_problem_file(std::istream& is) {
    Sections sections;
    std::string raw;
    std::string current;
    int line_no = 0;
    static const char* kSections[] = {"domain", "equation", "conditions",
                                      "weights", "kernels", "conditions2"};

    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ProblemFileError(line_no, "unterminated section header");
            current = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const char* s : kSections) known = known || current == s;
            if (!known) throw ProblemFileError(line_no, "unknown section [" + current + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ProblemFileError(line_no, "expected 'key = value', got '" + line + "'");
        if (current.empty())
            throw ProblemFileError(line_no, "entry before any [section] header");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ProblemFileError(line_no, "empty key or value");
        sections.add(current, key, Entry{value, line_no});
    }

    sections.check_known("domain", {"t1", "t2", "zscale"});
    sections.check_known("equation", {"kind", "F", "G", "f", "j"});
    sections.check_known("conditions", {"alpha", "beta"});
    sections.check_known("weights", {"lambda", "tol", "max_iter"});
    sections.check_known("kernels", {"p", "r", "M", "K"});
    sections.check_known("conditions2", {"alpha2", "beta2"});

    ProblemFile pf;
    {
        const Entry& t1 = sections.require("domain", "t1", 1);
        const Entry& t2 = sections.require("domain", "t2", 1);
        const Entry& zs = sections.require("domain", "zscale", 1);
        try {
            pf.domain = make_domain(parse_scale(t1.value, t1.line), parse_scale(t2.value, t2.line),
                                    parse_scale(zs.value, zs.line));
        } catch (const std::invalid_argument& e) {
            throw ProblemFileError(zs.line, e.what());
        }
    }
    {
        const Entry& kind = sections.require("equation", "kind", 1);
        if (kind.value == "full")
            pf.kind = ProblemKind::Full;
        else if (kind.value == "reduced")
            pf.kind = ProblemKind::Reduced;
        else
            throw ProblemFileError(kind.line, "kind must be 'full' or 'reduced'");
        const char* fkey = pf.kind == ProblemKind::Full ? "F" : "f";
        const char* gkey = pf.kind == ProblemKind::Full ? "G" : "j";
        const Entry& f = sections.require("equation", fkey, kind.line);
        const Entry& g = sections.require("equation", gkey, kind.line);
        pf.forcing = parse_expression(f.value, f.line);
        pf.kernel = parse_expression(g.value, g.line);
        for (const char* other : {pf.kind == ProblemKind::Full ? "f" : "F",
                                  pf.kind == ProblemKind::Full ? "j" : "G"}) {
            if (const Entry* e = sections.find("equation", other))
                throw ProblemFileError(e->line, std::string("key '") + other +
                                                    "' does not fit kind = " + kind.value);
        }
    }
    {
        const Entry& a = sections.require("conditions", "alpha", 1);
        const Entry& b = sections.require("conditions", "beta", 1);
        pf.alpha = parse_expression(a.value, a.line);
        pf.beta = parse_expression(b.value, b.line);
    }
    {
        const Entry& lambda = sections.require("weights", "lambda", 1);
        const Entry& tol = sections.require("weights", "tol", 1);
        const Entry& mi = sections.require("weights", "max_iter", 1);
        pf.lambda = parse_number(lambda.value, lambda.line);
        pf.tol = parse_number(tol.value, tol.line);
        const long iters = parse_integer(mi.value, mi.line);
        if (!(pf.lambda > 0.0)) throw ProblemFileError(lambda.line, "lambda must be positive");
        if (!(pf.tol > 0.0)) throw ProblemFileError(tol.line, "tol must be positive");
        if (iters < 1) throw ProblemFileError(mi.line, "max_iter must be at least 1");
        pf.max_iter = static_cast<int>(iters);
    }
    if (sections.has("kernels")) {
        if (const Entry* e = sections.find("kernels", "p"))
            pf.p = parse_expression(e->value, e->line);
        if (const Entry* e = sections.find("kernels", "r"))
            pf.r = parse_expression(e->value, e->line);
        if (const Entry* e = sections.find("kernels", "M"))
            pf.moduli_M = parse_expression(e->value, e->line);
        if (const Entry* e = sections.find("kernels", "K"))
            pf.moduli_K = parse_expression(e->value, e->line);
    }
    if (sections.has("conditions2")) {
        const Entry& a = sections.require("conditions2", "alpha2", 1);
        const Entry& b = sections.require("conditions2", "beta2", 1);
        pf.alpha2 = parse_expression(a.value, a.line);
        pf.beta2 = parse_expression(b.value, b.line);
    }

    // Surface bad variable usage and degenerate domains now, while line
    // context is still meaningful.
    try {
        pf.to_spec().validate();
    } catch (const std::invalid_argument& e) {
        throw ProblemFileError(0, e.what());
    }
    return pf;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem file '" + path + "'");
    return parse_problem_file(in);
}

ProblemSpec ProblemFile::to_spec() const {
    ProblemSpec spec;
    spec.domain = domain;
    spec.kind = kind;
    spec.forcing = forcing;
    spec.kernel = kernel;
    spec.alpha = alpha;
    spec.beta = beta;
    spec.lambda = lambda;
    spec.tol = tol;
    spec.max_iter = max_iter;
    return spec;
}

ProblemSpec ProblemFile::to_spec2() const {
    if (!alpha2 || !beta2)
        throw std::invalid_argument("problem file has no [conditions2] section");
    ProblemSpec spec = to_spec();
    spec.alpha = *alpha2;
    spec.beta = *beta2;
    return spec;
}

std::optional<KernelPair> ProblemFile::kernel_pair() const {
    if (!p || !r) return std::nullopt;
    return KernelPair{*p, *r};
}

}  // namespace tsde
