#include "chebysolve/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chebysolve/lp.hpp"

namespace cheby {

namespace {

ordered_json vec_json(const Vec& v) {
    ordered_json a = ordered_json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

std::string face_name(Face f) {
    switch (f) {
        case Face::Free: return "free";
        case Face::Lower: return "pinned_lower";
        case Face::Upper: return "pinned_upper";
    }
    return "?";
}

}  // namespace

ordered_json certificate_json(const KernelCertificate& cert) {
    ordered_json j;
    j["status"] = to_string(cert.status);
    j["lambda"] = vec_json(cert.lambda);
    j["residual"] = cert.residual;
    j["rank"] = cert.rank;
    j["k"] = cert.k;
    j["n"] = cert.n;
    j["kernel_dim"] = cert.kernel_dim;
    j["zero_count"] = cert.zero_count;
    if (cert.r_hat) j["r_hat"] = *cert.r_hat;
    if (!cert.note.empty()) j["note"] = cert.note;
    return j;
}

ordered_json signature_json(const Signature& sig, const std::vector<ExtremePoint>& extremes) {
    ordered_json entries = ordered_json::array();
    for (const auto& e : sig.entries) {
        ordered_json item;
        item["x"] = vec_json(e.x);
        item["s"] = e.sign;
        item["error"] = e.error;
        if (e.family != TargetFamily::Single)
            item["family"] = e.family == TargetFamily::Lower ? "f_minus" : "f_plus";
        entries.push_back(std::move(item));
    }
    ordered_json j;
    j["norm"] = sig.norm_value;
    j["entries"] = std::move(entries);
    ordered_json faces = ordered_json::array();
    for (const auto& p : extremes) {
        ordered_json item;
        item["x"] = vec_json(p.x);
        ordered_json mask = ordered_json::array();
        for (Face f : p.face) mask.push_back(face_name(f));
        item["face"] = std::move(mask);
        faces.push_back(std::move(item));
    }
    j["face_masks"] = std::move(faces);
    return j;
}

ordered_json lp_json(const LpSolution& lp, const std::vector<ActiveIndex>& active) {
    ordered_json j;
    j["t"] = lp.t;
    j["a"] = vec_json(lp.a);
    j["iterations"] = lp.iterations;
    j["condition"] = lp.condition;
    j["max_violation"] = lp.max_violation;
    j["cs_residual"] = lp.cs_residual;
    ordered_json act = ordered_json::array();
    for (const auto& idx : active) {
        ordered_json item;
        item["x"] = vec_json(idx.x);
        item["side"] = static_cast<int>(idx.side);
        item["dual"] = idx.dual;
        if (idx.family != TargetFamily::Single)
            item["family"] = idx.family == TargetFamily::Lower ? "f_minus" : "f_plus";
        act.push_back(std::move(item));
    }
    j["active"] = std::move(act);
    return j;
}

ordered_json report_json(const RunManifest& manifest, const PipelineResult& result,
                         const std::vector<ActiveIndex>& active, double elapsed_ms) {
    ordered_json j;
    j["schema"] = "chebysolve-report/1";
    j["target"] = manifest.target;
    ordered_json basis;
    basis["m"] = manifest.m;
    basis["degree"] = manifest.degree;
    basis["ordering"] = "grlex";
    j["basis"] = std::move(basis);
    ordered_json dom;
    dom["lower"] = vec_json(manifest.domain.lower);
    dom["upper"] = vec_json(manifest.domain.upper);
    j["domain"] = std::move(dom);
    j["grid"] = manifest.grid_counts;
    j["seed"] = manifest.seed;

    j["status"] = result.status == PipelineStatus::Certified      ? "certified"
                  : result.status == PipelineStatus::NotCertified ? "not_certified"
                                                                  : "failed";
    if (!result.failure.empty()) j["failure"] = result.failure;
    j["discrete_error"] = result.discrete_error;
    j["newton_error"] = result.newton_error;
    j["global_error"] = result.global_error_value;
    j["lp"] = lp_json(result.lp, active);

    ordered_json newton;
    newton["converged"] = result.newton.converged;
    newton["failure"] = to_string(result.newton.failure);
    newton["iterations"] = result.newton.iterations;
    newton["residuals"] = result.newton.residual_history;
    newton["a"] = vec_json(result.newton.vars.a);
    newton["lambda"] = vec_json(result.newton.vars.lambda);
    j["newton"] = std::move(newton);

    j["signature"] = signature_json(result.signature, result.extremes);
    j["certificate"] = certificate_json(result.certificate);

    ordered_json oracle;
    oracle["global_error"] = result.global.value;
    ordered_json argmax = ordered_json::array();
    for (const auto& x : result.global.argmax) argmax.push_back(vec_json(x));
    oracle["argmax"] = std::move(argmax);
    if (result.kolmogorov) {
        ordered_json k;
        k["pass"] = result.kolmogorov->pass;
        k["inconclusive"] = result.kolmogorov->inconclusive;
        k["trials"] = result.kolmogorov->trials;
        k["worst"] = result.kolmogorov->worst;
        if (result.kolmogorov->witness) k["witness"] = vec_json(*result.kolmogorov->witness);
        oracle["kolmogorov"] = std::move(k);
    }
    if (result.perturbation) {
        ordered_json p;
        p["pass"] = result.perturbation->pass;
        p["vacuous"] = result.perturbation->vacuous;
        p["trials"] = result.perturbation->trials;
        ordered_json w = ordered_json::array();
        for (const auto& x : result.perturbation->witnesses) w.push_back(vec_json(x));
        p["witnesses"] = std::move(w);
        oracle["perturbation"] = std::move(p);
    }
    j["oracle"] = std::move(oracle);
    j["timing_ms"] = elapsed_ms;
    return j;
}

void write_report_files(const std::filesystem::path& out_dir, const RunManifest& manifest,
                        const PipelineResult& result, const std::vector<ActiveIndex>& active,
                        const ErrorFunction& final_error, double elapsed_ms) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        std::ofstream f(out_dir / "report.json");
        f << report_json(manifest, result, active, elapsed_ms).dump(2) << "\n";
    }
    {
        std::ofstream f(out_dir / "signature.json");
        f << signature_json(result.signature, result.extremes).dump(2) << "\n";
    }
    {
        std::ofstream f(out_dir / "newton_trace.jsonl");
        const auto& hist = result.newton.residual_history;
        for (size_t i = 0; i < hist.size(); ++i) {
            ordered_json line;
            line["iter"] = i;
            line["residual"] = hist[i];
            if (i > 0 && i - 1 < result.newton.quadratic_ratios.size())
                line["quadratic_ratio"] = result.newton.quadratic_ratios[i - 1];
            f << line.dump() << "\n";
        }
        ordered_json fin;
        fin["final"] = true;
        fin["a"] = vec_json(result.newton.vars.a);
        fin["lambda"] = vec_json(result.newton.vars.lambda);
        f << fin.dump() << "\n";
    }
    {
        // error surface over the sampling grid, for plotting
        std::ofstream f(out_dir / "error_grid.csv");
        const int m = manifest.domain.dim();
        for (int j = 0; j < m; ++j) f << "x" << (j + 1) << ",";
        f << "error\n";
        f << std::setprecision(17);
        std::vector<int> counts = manifest.grid_counts;
        if (counts.empty()) counts = std::vector<int>(m, 36);
        if (static_cast<int>(counts.size()) == 1 && m > 1)
            counts = std::vector<int>(m, counts[0]);
        SampleGrid grid = regular_grid(manifest.domain, counts);
        for (int i = 0; i < grid.size(); ++i) {
            Vec x = grid.points.row(i);
            for (int j = 0; j < m; ++j) f << x[j] << ",";
            f << final_error.value(x) << "\n";
        }
    }
}

std::string format_bench_table(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "label                      n  #act #ext #zero  discrete    newton    global   "
          "expected(disc/newton)   verdict\n";
    for (const auto& row : rows) {
        const auto& r = row.result;
        os << std::left << std::setw(25) << row.label << std::right << std::setw(4) << row.n
           << std::setw(5) << r.n_active << std::setw(5) << r.extremes.size() << std::setw(6)
           << r.certificate.zero_count << std::fixed << std::setprecision(6) << std::setw(10)
           << r.discrete_error << std::setw(10) << r.newton_error << std::setw(10)
           << r.global_error_value << "   " << std::setw(8) << row.expected.discrete_error << "/"
           << row.expected.newton_error << "   " << row.verdict << "\n";
    }
    return os.str();
}

}  // namespace cheby
