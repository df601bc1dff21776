#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "heightlab/numkernel.hpp"
#include "heightlab/report.hpp"

namespace heightlab {

struct SurveyConfig {
    Rational a{2};
    long p = 3;
    int max_r = 3;
    int max_s = 3;
    long m_bound = 2;            // constructed members use 0 <= |m| <= m_bound
    long u_bound = 2;            // ... and the first u_bound units modulo p^r
    long membership_bound = 100;
    long nonmember_samples = 24;
    long metric_samples = 60;    // per tower level
    std::vector<std::pair<Integer, Integer>> curves{{0, -2}, {1, 1}, {0, 3}, {0, 1}};
    long torsion_scan_bound = 40;
    long height_points = 2;      // non-torsion scanned points per curve
    int series_depth = 12;
    int limit_depth = 9;
    long pmax = 100;
    std::vector<long> suz_orders{3, 5, 7, 9, 11, 13};
    double suz_cap = 5.0;
    long gauss_max_level = 6;
    std::vector<long> bernoulli_grid{1, 2, 5, 10, 50, 1000};
    std::uint64_t seed = 20240917;
    double parallelogram_tol = 1e-5;
    double agreement_tol = 1e-4;
};

// key = value lines ('#' starts a comment) or a JSON object with the same keys.
// Throws ValidationError naming the offending field.
SurveyConfig parse_survey_config(const std::string& text);
SurveyConfig load_survey_config(const std::string& path);
void validate_survey_config(const SurveyConfig& cfg);
Json survey_config_json(const SurveyConfig& cfg);

struct SurveyResult {
    Json report;       // schema record; runtime_ms is null so reruns are byte-identical
    std::string text;  // aligned human-readable summary
    long misclassified = 0;
    long failed_checks = 0;
};

SurveyResult run_survey(const SurveyConfig& cfg);

// Writes survey_report.json and survey_report.txt into dir.
void write_survey(const SurveyResult& result, const std::string& dir);

}  // namespace heightlab
