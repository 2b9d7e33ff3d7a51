#pragma once

#include <string>
#include <vector>

#include "chebysolve/pipeline.hpp"

namespace cheby {

// Reference row for the regression suites; expected values are embedded with
// their provenance so `bench` doubles as a regression harness.
struct BenchExpectation {
    int degree;
    int n;
    int n_active;
    int n_ext;
    int n_zero;
    double discrete_error;
    double newton_error;
    double global_error;
    std::string provenance;
};

struct BenchRow {
    std::string label;
    int m = 0;
    int degree = 0;
    int n = 0;
    int grid_per_dim = 0;
    PipelineResult result;
    BenchExpectation expected;
    bool errors_ok = false;     // discrete/newton/global within tolerance
    bool counts_match = false;  // active/extreme/zero counts equal
    std::string verdict;
};

// Grid sizes per dimension used by the reference experiments (36 for m = 2,
// thinned so the total sample count stays near 1296 for higher m).
int runge_grid_per_dim(int m);

const std::vector<std::pair<int, int>>& runge_cases();  // (m, degree)
BenchExpectation runge_expected(int m, int degree);
BenchExpectation dextar_expected(int output_l, int degree);

BenchRow run_runge_case(int m, int degree, const PipelineOptions& base = {});
BenchRow run_dextar_case(int output_l, int degree, const PipelineOptions& base = {});

struct AiryBenchResult {
    PipelineResult horner;      // Newton from the embedded p0 and extreme points
    Vec p0;                     // published LP-phase coefficients
    Vec p1;                     // published refined coefficients
    Vec refined;                // our Newton limit
    double max_coef_diff_p1 = 0.0;
    double u = 0.0;
    int iterations = 0;
    bool lambda_nonnegative = false;
};

// Embedded initial data of the Airy experiment: degree-6 fit on [-2, 2].
Vec airy_p0_coefficients();
std::vector<double> airy_extreme_points();
Vec airy_reference_lambda();
Vec airy_p1_coefficients();

AiryBenchResult run_airy_case(double u, const PipelineOptions& base = {});

std::vector<BenchRow> run_runge_suite(int jobs = 1);
std::vector<BenchRow> run_dextar_suite(int jobs = 1);

}  // namespace cheby
