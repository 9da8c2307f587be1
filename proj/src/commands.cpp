#include "tsde/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "tsde/problem_file.hpp"
#include "tsde/selftest.hpp"
#include "tsde/surface_io.hpp"

namespace tsde {

namespace {

namespace fs = std::filesystem;

std::string write_text(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
    return p.string();
}

std::string write_surface(const fs::path& dir, const std::string& name, const GridFunction& g) {
    const fs::path p = dir / name;
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    write_surface_csv(out, g);
    return p.string();
}

int verdict_exit(const Certificate& cert) {
    switch (cert.verdict) {
        case CertVerdict::Pass: return kExitPass;
        case CertVerdict::Fail: return kExitFail;
        case CertVerdict::Inconclusive: return kExitInconclusive;
    }
    return kExitInputError;
}

void emit_certificate(const Certificate& cert, const fs::path& dir, RunResult& result) {
    result.artifacts.push_back(
        write_text(dir, "certificate.jsonl", certificate_json_line(cert) + "\n"));
    if (cert.bound) result.artifacts.push_back(write_surface(dir, "bound.csv", *cert.bound));
    if (cert.observed)
        result.artifacts.push_back(write_surface(dir, "observed.csv", *cert.observed));
}

const KernelPair& require_kernels(const ProblemFile& pf, const std::optional<KernelPair>& kp) {
    (void)pf;
    if (!kp)
        throw std::runtime_error("this certificate needs a [kernels] section with p and r");
    return *kp;
}

RunResult run_certify(const ProblemFile& pf, const std::string& which, const fs::path& dir,
                      std::ostream& err) {
    RunResult result;
    const std::optional<KernelPair> kernels = pf.kernel_pair();

    if (which == "constants") {
        if (!pf.moduli_M || !pf.moduli_K)
            throw std::runtime_error("certify constants needs [kernels] entries M and K");
        const ContractionConstants c = estimate_constants(pf.to_spec(), *pf.moduli_M, *pf.moduli_K);
        Certificate cert;
        cert.kind = CertKind::Contraction;
        cert.verdict = c.contractive() ? CertVerdict::Pass : CertVerdict::Fail;
        cert.margin = 1.0 - c.gamma();
        cert.constants = {{"gamma1", c.gamma1}, {"gamma2", c.gamma2}, {"gamma3", c.gamma3},
                          {"eta1", c.eta1},     {"eta2", c.eta2},     {"eta3", c.eta3},
                          {"gamma", c.gamma()}};
        if (!c.contractive()) cert.note = "gamma >= 1: the fixed-point argument does not apply";
        emit_certificate(cert, dir, result);
        result.exit_code = verdict_exit(cert);
        return result;
    }

    if (which == "unique") {
        const ProblemSpec spec = pf.to_spec();
        const SolutionTriple zero = SolutionTriple::zeros(spec.domain);
        const SolutionTriple ones(GridFunction::constant(spec.domain, 1.0),
                                  GridFunction::zeros(spec.domain),
                                  GridFunction::zeros(spec.domain));
        const Certificate cert =
            uniqueness_check(spec, zero, ones, kernels ? &*kernels : nullptr);
        emit_certificate(cert, dir, result);
        result.exit_code = verdict_exit(cert);
        return result;
    }

    if (which == "depend") {
        if (!pf.alpha2 || !pf.beta2)
            throw std::runtime_error("certify depend needs a [conditions2] section");
        const Certificate cert =
            dependence_certificate(pf.to_spec(), pf.to_spec2(), require_kernels(pf, kernels));
        emit_certificate(cert, dir, result);
        result.exit_code = verdict_exit(cert);
        return result;
    }

    if (which == "bound" || which == "gronwall") {
        const KernelPair& kp = require_kernels(pf, kernels);
        const ProblemSpec spec = pf.to_spec();
        const SolveReport rep = solve_picard(spec);
        if (!rep.converged) {
            err << "solve did not converge within max_iter; certificate is inconclusive\n";
            Certificate cert;
            cert.kind = which == "bound" ? CertKind::Boundedness : CertKind::Gronwall;
            cert.verdict = CertVerdict::Inconclusive;
            cert.note = "solve did not converge";
            emit_certificate(cert, dir, result);
            result.exit_code = kExitInconclusive;
            return result;
        }
        const double c = condition_magnitude(spec);
        const Certificate cert = which == "bound"
                                     ? boundedness_certificate(spec, rep, kp, c)
                                     : verify_gronwall(abs(rep.solution.u), kp, c);
        emit_certificate(cert, dir, result);
        result.exit_code = verdict_exit(cert);
        return result;
    }

    throw std::runtime_error("unknown certificate '" + which +
                             "' (expected gronwall|bound|depend|unique|constants)");
}

}  // namespace

RunResult cmd_solve(const std::string& path, const std::string& out_dir, std::ostream& err) {
    RunResult result;
    try {
        const ProblemFile pf = load_problem_file(path);
        const ProblemSpec spec = pf.to_spec();

        const CompatibilityReport compat = check_compatibility(spec);
        if (!compat.ok) {
            err << "incompatible conditions: |alpha(x0,z) - beta(y0,z)| = " << compat.max_mismatch
                << " at z = " << compat.worst_z << " exceeds " << compat.threshold << "\n";
            result.exit_code = kExitInputError;
            return result;
        }

        const fs::path dir(out_dir);
        fs::create_directories(dir);
        const SolveReport rep = solve_picard(spec);

        result.artifacts.push_back(write_surface(dir, "u.csv", rep.solution.u));
        result.artifacts.push_back(write_surface(dir, "u_d1.csv", rep.solution.d1));
        result.artifacts.push_back(write_surface(dir, "u_d2.csv", rep.solution.d2));

        nlohmann::ordered_json j;
        j["converged"] = rep.converged;
        j["iterations"] = rep.iterations;
        j["gamma_hat"] = rep.gamma_hat;
        j["residual_history"] = rep.residual_history;
        j["final_residual_sup"] = rep.final_residual_sup;
        j["lambda"] = spec.lambda;
        j["tol"] = spec.tol;
        result.artifacts.push_back(write_text(dir, "report.json", j.dump(2) + "\n"));

        result.exit_code = rep.converged ? kExitPass : kExitInconclusive;
        return result;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        result.exit_code = kExitInputError;
        return result;
    }
}

RunResult cmd_certify(const std::string& path, const std::string& which,
                      const std::string& out_dir, std::ostream& err) {
    RunResult result;
    try {
        const ProblemFile pf = load_problem_file(path);
        const fs::path dir(out_dir);
        fs::create_directories(dir);
        return run_certify(pf, which, dir, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        result.exit_code = kExitInputError;
        return result;
    }
}

RunResult cmd_selftest(std::uint64_t seed, std::ostream& out) {
    RunResult result;
    const SelftestReport report = run_selftest(seed);
    print_selftest(out, report);
    result.exit_code = report.all_pass() ? kExitPass : kExitFail;
    return result;
}

}  // namespace tsde
