#pragma once
// agm_suite: executable compliance harness. 49 scenarios across five
// categories (simple, multi-item, chain, temporal, adversarial) verify
// seven postulates (K*2..K*6, Relevance, Core-Retainment) against a fresh
// graph per scenario. Two grid cells are structurally not applicable:
// K*6 x chain and Core-Retainment x temporal.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cogmem::agm {

enum class Postulate { K2, K3, K4, K5, K6, Relevance, CoreRetainment };
enum class Category { Simple, MultiItem, Chain, Temporal, Adversarial };

inline constexpr Postulate kAllPostulates[] = {
    Postulate::K2, Postulate::K3,        Postulate::K4,            Postulate::K5,
    Postulate::K6, Postulate::Relevance, Postulate::CoreRetainment};
inline constexpr Category kAllCategories[] = {
    Category::Simple, Category::MultiItem, Category::Chain, Category::Temporal,
    Category::Adversarial};

const char* postulate_name(Postulate p);
const char* category_name(Category c);
Postulate postulate_from_name(const std::string& name);
Category category_from_name(const std::string& name);

bool is_na_cell(Postulate p, Category c);

struct Scenario {
    std::string id; // e.g. "K2/simple/01"
    Category category;
    Postulate postulate;
    std::string description;
    std::function<void()> body; // runs on its own fresh graph; throws on failure
};

struct ScenarioResult {
    std::string id;
    Category category;
    Postulate postulate;
    bool passed = false;
    std::string message; // failure detail
};

enum class CellStatus { Pass, Fail, NotApplicable };

struct ComplianceReport {
    std::vector<ScenarioResult> results;
    std::map<std::pair<Postulate, Category>, CellStatus> matrix;
    int total = 0;
    int passed = 0;
    int failed = 0;

    bool all_passed() const { return failed == 0; }
    std::string render_table() const;
    std::string to_json() const;
};

struct RunOptions {
    // Restrict to one postulate/category cell, e.g. {"K2", "simple"}.
    std::optional<std::pair<Postulate, Category>> only;
    bool shuffle = false;
    std::uint64_t seed = 0;
};

const std::vector<Scenario>& scenario_catalog();
ComplianceReport run_all(const RunOptions& options = {});

} // namespace cogmem::agm
