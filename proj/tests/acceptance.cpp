// Acceptance suite: one check per shipped guarantee, each printed as a
// single PASS/FAIL line with its runtime. Exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tsde/commands.hpp"
#include "tsde/inequalities.hpp"
#include "tsde/selftest.hpp"
#include "tsde/solver.hpp"
#include "tsde/surface_io.hpp"

using namespace tsde;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void req(bool cond, const std::string& msg) {
    if (!cond) throw Failure(msg);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---- 1. exponential oracles ---------------------------------------------

std::string exponential_oracles() {
    double worst = 0.0;
    const TimeScale z = TimeScale::integer_range(0, 20);
    for (double lambda : {0.5, 1.0, 2.0})
        for (double t : z.points()) {
            const double got = ts_exp(z, lambda, t, 0.0);
            const double want = std::pow(1.0 + lambda, t);
            worst = std::max(worst, std::abs(got - want) / want);
        }
    req(worst <= 1e-12, "integer-scale exponential off by " + fmt(worst));

    const TimeScale fine = TimeScale::uniform(0.0, 1.0, 10000);
    const double err = std::abs(ts_exp(fine, 1.0, 1.0, 0.0) - std::exp(1.0));
    req(err <= 3e-4, "uniform-scale exponential off e by " + fmt(err));

    const TimeScale qs = TimeScale::geometric(1.0, 2.0, 10);
    double qworst = 0.0;
    for (double t : qs.points()) {
        double want = 1.0;
        for (double s : qs.points()) {
            if (s >= t) break;
            want *= 1.0 + s;  // mu(s) = s, coefficient 1
        }
        qworst = std::max(qworst, std::abs(ts_exp(qs, 1.0, t, 1.0) - want) / want);
    }
    req(qworst <= 1e-12, "geometric-scale exponential off by " + fmt(qworst));
    return "integer/uniform/geometric oracles, max rel err " + fmt(std::max(worst, qworst)) +
           ", |e err| " + fmt(err);
}

// ---- 2. calculus identities ----------------------------------------------

std::string calculus_identities() {
    std::mt19937_64 g(2025);
    int grids = 0;
    for (int rep = 0; rep < 50; ++rep, ++grids) {
        const DomainPtr dom = make_domain(tsupport::dyadic_scale(g, tsupport::pick(g, 2, 8)),
                                          tsupport::dyadic_scale(g, tsupport::pick(g, 2, 8)),
                                          tsupport::dyadic_scale(g, tsupport::pick(g, 2, 4)));
        const GridFunction gfun = tsupport::dyadic_grid(g, dom);
        const std::size_t n1 = dom->n1(), n2 = dom->n2(), nz = dom->nz();

        std::vector<double> integral(dom->cells());
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j)
                for (std::size_t k = 0; k < nz; ++k)
                    integral[(i * n2 + j) * nz + k] =
                        double_integral(gfun, k, dom->t1.point(i), dom->t2.point(j));
        const GridFunction recon = mixed_delta(GridFunction(dom, std::move(integral)));
        for (std::size_t i = 0; i + 1 < n1; ++i)
            for (std::size_t j = 0; j + 1 < n2; ++j)
                for (std::size_t k = 0; k < nz; ++k)
                    req(recon(i, j, k) == gfun(i, j, k), "reconstruction not exact");

        const TimeScale& ts = dom->t1;
        std::vector<double> fv;
        for (std::size_t i = 0; i < n1; ++i) fv.push_back(gfun(i, 0, 0));
        const SampledFunction f(ts, fv);
        std::vector<double> prim;
        for (double t : ts.points()) prim.push_back(delta_integral(f, ts.min(), t));
        const SampledFunction F(ts, prim);
        for (std::size_t i = 0; i + 1 < n1; ++i)
            req(delta_derivative(F, ts.point(i)) == f.values[i], "fundamental theorem not exact");

        // Exponential laws on the same scale corpus.
        std::vector<double> pv, nv;
        for (std::size_t i = 0; i < ts.size(); ++i) pv.push_back(tsupport::uniform(g, -0.6, 2.0));
        for (std::size_t i = 0; i < ts.size(); ++i)
            nv.push_back(circle_minus(pv[i], ts.mu_at(i)));
        const SampledFunction p(ts, pv), pneg(ts, nv);
        for (double t : ts.points()) {
            req(std::abs(ts_exp(p, t, ts.min()) * ts_exp(pneg, t, ts.min()) - 1.0) <= 1e-12,
                "reciprocal law violated");
        }
        for (double t : ts.points())
            for (double r : ts.points())
                for (double t0 : ts.points()) {
                    const double rhs = ts_exp(p, t, t0);
                    req(std::abs(ts_exp(p, t, r) * ts_exp(p, r, t0) - rhs) <=
                            1e-12 * std::abs(rhs),
                        "semigroup law violated");
                }
    }
    return std::to_string(grids) + " dyadic grids, identities exact, laws within 1e-12";
}

// ---- 3. randomized inequality sweep ---------------------------------------

std::string gronwall_sweep() {
    const GronwallSweepResult res = run_gronwall_sweep(kDefaultSelftestSeed, 200);
    req(res.passes == res.instances,
        std::to_string(res.instances - res.passes) + " of 200 instances failed");
    req(res.min_rel_margin >= -1e-9, "relative margin " + fmt(res.min_rel_margin));
    req(res.lemma_consistent,
        "single-row bound off the one-variable exponential by " + fmt(res.max_lemma_rel_err));
    return "200/200 certificates, min rel margin " + fmt(res.min_rel_margin) +
           ", single-row match " + fmt(res.max_lemma_rel_err);
}

// ---- 4. manufactured solution ---------------------------------------------

std::string manufactured_solution() {
    const DomainPtr dom = make_domain(TimeScale::integer_range(0, 4),
                                      TimeScale::integer_range(0, 4),
                                      TimeScale::integer_range(0, 2));
    const GridFunction ustar =
        GridFunction::sample(dom, [](double x, double y, double z) { return x * y + z; });
    const GridFunction forcing = mixed_delta(ustar);

    Table2 alpha(dom->n1(), dom->nz()), beta(dom->n2(), dom->nz());
    for (std::size_t i = 0; i < dom->n1(); ++i)
        for (std::size_t k = 0; k < dom->nz(); ++k) alpha.at(i, k) = ustar(i, 0, k);
    for (std::size_t j = 0; j < dom->n2(); ++j)
        for (std::size_t k = 0; k < dom->nz(); ++k) beta.at(j, k) = ustar(0, j, k);

    const PicardOperator op = PicardOperator::from_table(dom, forcing, alpha, beta);
    const SolveReport rep = solve_picard(op, 1.0, 1e-10, 10);
    req(rep.converged, "did not converge");
    req(rep.iterations <= 2, "needed " + std::to_string(rep.iterations) + " sweeps");
    req(rep.residual_history.back() == 0.0, "final residual not exactly zero");
    for (std::size_t i = 0; i < dom->n1(); ++i)
        for (std::size_t j = 0; j < dom->n2(); ++j)
            for (std::size_t k = 0; k < dom->nz(); ++k)
                req(rep.solution.u(i, j, k) == ustar(i, j, k), "recovered surface not bitwise");
    return "recovered x*y + z bitwise in " + std::to_string(rep.iterations) +
           " sweep(s), residual exactly 0";
}

// ---- 5. lattice recursion oracle -------------------------------------------

std::string darboux_oracle() {
    ProblemSpec spec;
    spec.domain = make_domain(TimeScale::integer_range(0, 6), TimeScale::integer_range(0, 6),
                              TimeScale(std::vector<double>{0.0, 1.0}));
    spec.kind = ProblemKind::Reduced;
    spec.forcing = Expr::parse("u");
    spec.kernel = Expr::parse("0");
    spec.alpha = Expr::parse("1");
    spec.beta = Expr::parse("1");
    spec.lambda = 1.0;
    spec.tol = 1e-10;
    spec.max_iter = 60;
    const SolveReport rep = solve_picard(spec);
    req(rep.converged, "did not converge");

    const std::size_t n = 7;
    std::vector<double> oracle(n * n, 1.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j)
            oracle[(i + 1) * n + (j + 1)] = oracle[(i + 1) * n + j] + oracle[i * n + (j + 1)] -
                                            oracle[i * n + j] + oracle[i * n + j];
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                worst = std::max(worst, std::abs(rep.solution.u(i, j, k) - oracle[i * n + j]));
    req(worst <= 1e-10, "recursion mismatch " + fmt(worst));
    req(rep.solution.u(1, 1, 0) == 2.0, "u(1,1) != 2");
    req(rep.solution.u(2, 2, 0) == 6.0, "u(2,2) != 6");
    return "forward recursion matched, max abs err " + fmt(worst) + ", spots u(1,1)=2 u(2,2)=6";
}

// ---- 6. contraction fixture -------------------------------------------------

std::string contraction_fixture() {
    const DomainPtr dom = make_domain(TimeScale::integer_range(0, 3),
                                      TimeScale::integer_range(0, 3),
                                      TimeScale(std::vector<double>{0.0, 1.0}));
    ProblemSpec spec;
    spec.domain = dom;
    spec.kind = ProblemKind::Full;
    spec.forcing = Expr::parse("0.1*(u + u1 + u2 + Hu)");
    spec.kernel = Expr::parse("0.1*u");
    spec.alpha = Expr::parse("1");
    spec.beta = Expr::parse("1");
    spec.lambda = 1.0;
    spec.tol = 1e-10;
    spec.max_iter = 100;

    const ContractionConstants c =
        estimate_constants(spec, Expr::parse("0.1"), Expr::parse("0.1"));
    req(c.contractive(), "gamma = " + fmt(c.gamma()) + " is not below 1");

    // Direct-sum oracle for the three conditions: E = 2^i 2^j ez[k] here.
    const double ez[2] = {1.0, 2.0};
    auto E = [&ez](std::size_t i, std::size_t j, std::size_t k) {
        return std::pow(2.0, double(i)) * std::pow(2.0, double(j)) * ez[k];
    };
    auto bracket = [&](std::size_t s, std::size_t t, std::size_t k) {
        // M [E(s,t,z) + integral over q of K E(s,t,q)] with M = K = 0.1 and
        // a single slice cell of measure one.
        return 0.1 * (E(s, t, k) + 0.1 * E(s, t, 0));
    };
    double g1 = 0.0, g2 = 0.0, g3 = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 2; ++k) {
                double dsum = 0.0, ysum = 0.0, xsum = 0.0;
                for (std::size_t s = 0; s < i; ++s)
                    for (std::size_t t = 0; t < j; ++t) dsum += bracket(s, t, k);
                for (std::size_t t = 0; t < j; ++t) ysum += bracket(i, t, k);
                for (std::size_t s = 0; s < i; ++s) xsum += bracket(s, j, k);
                g1 = std::max(g1, dsum / E(i, j, k));
                g2 = std::max(g2, ysum / E(i, j, k));
                g3 = std::max(g3, xsum / E(i, j, k));
            }
    req(std::abs(c.gamma1 - g1) <= 1e-12, "gamma1 off the direct sum");
    req(std::abs(c.gamma2 - g2) <= 1e-12, "gamma2 off the direct sum");
    req(std::abs(c.gamma3 - g3) <= 1e-12, "gamma3 off the direct sum");

    const SolveReport rep = solve_picard(spec);
    req(rep.converged, "fixture did not converge");
    req(rep.gamma_hat <= c.gamma() + 0.05,
        "empirical ratio " + fmt(rep.gamma_hat) + " above gamma + 0.05");

    const SolutionTriple zero = SolutionTriple::zeros(dom);
    const SolutionTriple ones(GridFunction::constant(dom, 1.0), GridFunction::zeros(dom),
                              GridFunction::zeros(dom));
    const SolveReport a = solve_picard(spec, &zero);
    const SolveReport b = solve_picard(spec, &ones);
    req(a.converged && b.converged, "a seeded solve did not converge");
    const double dist = weighted_sup_distance(a.solution, b.solution, spec.lambda);
    req(dist <= 2.0 * spec.tol, "seeds end " + fmt(dist) + " apart");
    return "gamma = " + fmt(c.gamma()) + " < 1, gamma_hat = " + fmt(rep.gamma_hat) +
           ", seed distance " + fmt(dist);
}

// ---- 7. certificates through the command layer ------------------------------

std::string certificate_fixtures() {
    const fs::path dir = fs::current_path() / "acceptance_scratch";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto fixture = [&dir](const char* name, const std::string& body) {
        const fs::path p = dir / name;
        std::ofstream out(p);
        out << body;
        return p.string();
    };
    const std::string base =
        "[domain]\n"
        "t1 = integers(0, 6)\n"
        "t2 = integers(0, 6)\n"
        "zscale = points(0, 1)\n"
        "[equation]\n"
        "kind = reduced\n"
        "f = u\n"
        "j = 0\n"
        "[conditions]\n"
        "alpha = 1\n"
        "beta = 1\n"
        "[weights]\n"
        "lambda = 1\n"
        "tol = 1e-10\n"
        "max_iter = 60\n";

    std::ostringstream err;
    const RunResult bound = cmd_certify(fixture("bound.problem", base + "[kernels]\np = 1\nr = 0\n"),
                                        "bound", (dir / "bound").string(), err);
    req(bound.exit_code == 0, "boundedness certificate did not pass");

    const RunResult depend = cmd_certify(
        fixture("depend.problem",
                base + "[kernels]\np = 1\nr = 0\n[conditions2]\nalpha2 = 1.1\nbeta2 = 1.1\n"),
        "depend", (dir / "depend").string(), err);
    req(depend.exit_code == 0, "dependence certificate did not pass");
    {
        std::ifstream in(dir / "depend" / "certificate.jsonl");
        std::string line;
        req(static_cast<bool>(std::getline(in, line)), "dependence certificate not written");
        req(line.find("\"a\":0.1") != std::string::npos,
            "condition distance not computed as the grid max");
    }

    const RunResult violation =
        cmd_certify(fixture("violation.problem", base + "[kernels]\np = 0.4\nr = 0\n"), "bound",
                    (dir / "violation").string(), err);
    req(violation.exit_code == 1, "constructed violation exited " +
                                      std::to_string(violation.exit_code) + " instead of 1");
    return "boundedness and dependence pass, |u-v| <= a*bound, violation exits 1";
}

// ---- 8. parser ---------------------------------------------------------------

std::string parser_corpus() {
    const struct {
        const char* text;
        double want;
    } cases[20] = {
        {"2+3*4", 14.0},      {"2^3^2", 512.0},   {"(2^3)^2", 64.0},   {"-2^2", -4.0},
        {"2^-3", 0.125},      {"1-2-3", -4.0},    {"12/4/3", 1.0},     {"2+3*4^2", 50.0},
        {"(2+3)*4", 20.0},    {"-(1+2)*3", -9.0}, {"2*-3", -6.0},      {"abs(-3)+min(2,5)", 5.0},
        {"max(1,2)^2", 4.0},  {"sqrt(16)/2", 2.0}, {"exp(0)+cos(0)", 2.0}, {"2^2^2", 16.0},
        {"1/2 + 1/4", 0.75},  {"10-2-3-4", 1.0},  {"sin(0)*5 + 6", 6.0}, {"((((7))))", 7.0},
    };
    for (const auto& c : cases) {
        const double got = Expr::parse(c.text).eval(Env{});
        req(got == c.want, std::string(c.text) + " evaluated wrong");
    }

    std::mt19937_64 g(88);
    const std::string alphabet = "xyzqu12Hhinmacobseprt+-*/^(), .eE_0356789";
    Env env;
    env.set(Var::X, 0.5).set(Var::Y, 1.5).set(Var::Z, -0.25).set(Var::Q, 2.0);
    env.set(Var::U, 1.0).set(Var::U1, 0.5).set(Var::U2, -1.0).set(Var::HU, 0.125);
    int parsed = 0, rejected = 0;
    for (int rep = 0; rep < 100000; ++rep) {
        std::string s;
        const std::size_t len = g() % 32;
        for (std::size_t i = 0; i < len; ++i) s += alphabet[g() % alphabet.size()];
        try {
            const Expr e = Expr::parse(s);
            ++parsed;
            try {
                (void)e.eval(env);
            } catch (const EvalError&) {
            }
        } catch (const ParseError&) {
            ++rejected;
        }
        // Anything else escapes and fails the criterion.
    }
    req(parsed + rejected == 100000, "fuzz cases unaccounted for");
    return "20/20 precedence cases, 100000 fuzz inputs (" + std::to_string(parsed) +
           " parsed, " + std::to_string(rejected) + " structured rejections), zero crashes";
}

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;  // 0 = no stated limit
    std::function<std::string()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "exponential-oracles", 1.0, exponential_oracles},
        {2, "calculus-identities", 5.0, calculus_identities},
        {3, "gronwall-sweep", 30.0, gronwall_sweep},
        {4, "manufactured-solution", 0.0, manufactured_solution},
        {5, "darboux-oracle", 0.0, darboux_oracle},
        {6, "contraction-fixture", 0.0, contraction_fixture},
        {7, "certificate-fixtures", 10.0, certificate_fixtures},
        {8, "parser-corpus", 0.0, parser_corpus},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = c.run();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && c.time_limit_s > 0.0 && secs > c.time_limit_s) {
            ok = false;
            detail = "exceeded " + fmt(c.time_limit_s) + " s time limit";
        }
        if (!ok) ++failures;
        std::printf("%s  %d %-24s (%.3f s)  %s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs,
                    detail.c_str());
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
