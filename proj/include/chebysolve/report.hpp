#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "chebysolve/bench.hpp"
#include "chebysolve/pipeline.hpp"

namespace cheby {

using ordered_json = nlohmann::ordered_json;

struct RunManifest {
    std::string target;
    int m = 0;
    int degree = 0;
    BoxDomain domain;
    std::vector<int> grid_counts;
    uint64_t seed = 0;
};

ordered_json certificate_json(const KernelCertificate& cert);
ordered_json signature_json(const Signature& sig, const std::vector<ExtremePoint>& extremes);
ordered_json lp_json(const LpSolution& lp, const std::vector<ActiveIndex>& active);
ordered_json report_json(const RunManifest& manifest, const PipelineResult& result,
                         const std::vector<ActiveIndex>& active, double elapsed_ms);

// Writes report.json, error_grid.csv, signature.json and newton_trace.jsonl
// under out_dir. Reports are deterministic given inputs and seed; only the
// timing field varies between reruns.
void write_report_files(const std::filesystem::path& out_dir, const RunManifest& manifest,
                        const PipelineResult& result, const std::vector<ActiveIndex>& active,
                        const ErrorFunction& final_error, double elapsed_ms);

std::string format_bench_table(const std::vector<BenchRow>& rows);

}  // namespace cheby
