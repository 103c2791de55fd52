#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace eqf {

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    nlohmann::json table;  // per-instance rows where a criterion produces them
};

CriterionResult criterion_fitt_identity(long max_order = 16);
CriterionResult criterion_calj_independence(long max_order = 36);
CriterionResult criterion_rw_exactness(long max_order = 12);
CriterionResult criterion_rw_certificates(long max_order = 12);
CriterionResult criterion_theta_values();
CriterionResult criterion_integrality_sweep(long max_f = 40);
CriterionResult criterion_norm_compatibility();
CriterionResult criterion_kurihara_end_to_end();
CriterionResult criterion_tower_stability(int depth = 4);
CriterionResult criterion_main_rhs_assembly(int depth = 4);

CriterionResult run_criterion(int number, long max_group_order = 16, int tower_depth = 4);
std::vector<CriterionResult> run_all_criteria(long max_group_order = 16, int tower_depth = 4);

nlohmann::json criteria_to_json(const std::vector<CriterionResult>& results);

}  // namespace eqf
