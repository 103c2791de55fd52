// Acceptance suite: one pass/fail line per criterion.
//
//   acceptance                 run all criteria
//   acceptance --only K        run criterion K alone
//   acceptance --max-group-order N --tower-depth D
//
// Exit code 0 iff every executed criterion passes.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "eqf/acceptance.hpp"

int main(int argc, char** argv) {
    int only = 0;
    long max_order = 16;
    int depth = 4;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
        else if (!std::strcmp(argv[i], "--max-group-order") && i + 1 < argc) max_order = std::atol(argv[++i]);
        else if (!std::strcmp(argv[i], "--tower-depth") && i + 1 < argc) depth = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: acceptance [--only K] [--max-group-order N] [--tower-depth D]\n");
            return 2;
        }
    }
    std::vector<eqf::CriterionResult> results;
    try {
        if (only > 0)
            results.push_back(eqf::run_criterion(only, max_order, depth));
        else
            results = eqf::run_all_criteria(max_order, depth);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance: fatal: %s\n", e.what());
        return 1;
    }
    bool all = true;
    for (const auto& r : results) {
        std::printf("CRITERION %2d [%s]: %s — %s\n", r.number, r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.detail.c_str());
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
