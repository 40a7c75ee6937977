#include "incluster/delta.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "incluster/dataset.hpp"

namespace incluster::delta {

std::string_view to_string(NoCrossover::Reason reason) {
    switch (reason) {
        case NoCrossover::Reason::incremental_never_wins: return "incremental_never_wins";
        case NoCrossover::Reason::incremental_always_wins: return "incremental_always_wins";
        case NoCrossover::Reason::no_upward_crossing: return "no_upward_crossing";
    }
    return "unknown";
}

double delta_percent(std::size_t old_size, std::size_t new_size) {
    if (old_size == 0) throw std::invalid_argument("delta undefined for an empty baseline");
    if (new_size < old_size)
        throw std::invalid_argument("insert-only workload expected: new size " +
                                    std::to_string(new_size) + " < old size " +
                                    std::to_string(old_size));
    return static_cast<double>((new_size - old_size) * 100) / static_cast<double>(old_size);
}

std::vector<ComparisonRow> build_comparison(const std::vector<SizedDuration>& actual,
                                            const std::vector<SizedDuration>& incremental,
                                            std::size_t base_size) {
    if (base_size == 0) throw std::invalid_argument("base size must be positive");
    std::vector<ComparisonRow> rows;
    std::vector<std::size_t> orphans;
    for (const auto& inc : incremental) {
        const std::size_t total = base_size + inc.size;
        auto it = std::find_if(actual.begin(), actual.end(),
                               [&](const SizedDuration& a) { return a.size == total; });
        if (it == actual.end()) {
            orphans.push_back(inc.size);
            continue;
        }
        rows.push_back({delta_percent(base_size, total), it->ms, inc.ms});
    }
    if (!orphans.empty()) {
        std::string msg = "no batch timing at base_size + increment for increments:";
        for (auto d : orphans) msg += " " + std::to_string(d);
        throw std::invalid_argument(msg);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.delta_percent < b.delta_percent;
    });
    return rows;
}

Crossover crossover_threshold(const std::vector<ComparisonRow>& rows) {
    if (rows.size() < 2) throw std::invalid_argument("crossover needs at least two rows");
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].delta_percent < rows[i - 1].delta_percent)
            throw std::invalid_argument("rows must be sorted by delta_percent");

    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double g0 = rows[i - 1].gap();
        const double g1 = rows[i].gap();
        if (g0 <= 0.0 && g1 > 0.0) {
            const double d0 = rows[i - 1].delta_percent;
            const double d1 = rows[i].delta_percent;
            const double t = d0 + (d1 - d0) * (-g0 / (g1 - g0));
            return CrossoverResult{std::clamp(t, d0, d1), rows[i - 1], rows[i]};
        }
    }
    const bool all_positive =
        std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.gap() > 0.0; });
    if (all_positive) return NoCrossover{NoCrossover::Reason::incremental_never_wins};
    const bool all_non_positive =
        std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.gap() <= 0.0; });
    if (all_non_positive) return NoCrossover{NoCrossover::Reason::incremental_always_wins};
    return NoCrossover{NoCrossover::Reason::no_upward_crossing};
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
    std::string out = "delta_percent,actual_ms,incremental_ms\n";
    for (const auto& r : rows) {
        out += format_double(r.delta_percent) + "," + format_double(r.actual_ms) + "," +
               format_double(r.incremental_ms) + "\n";
    }
    return out;
}

std::string crossover_json(const Crossover& result) {
    nlohmann::ordered_json doc;
    if (const auto* hit = std::get_if<CrossoverResult>(&result)) {
        auto row = [](const ComparisonRow& r) {
            return nlohmann::ordered_json{{"delta_percent", r.delta_percent},
                                          {"actual_ms", r.actual_ms},
                                          {"incremental_ms", r.incremental_ms}};
        };
        doc["crossover"] = true;
        doc["threshold_percent"] = hit->threshold_percent;
        doc["method"] = hit->method;
        doc["bracket"] = {{"low", row(hit->low)}, {"high", row(hit->high)}};
    } else {
        doc["crossover"] = false;
        doc["reason"] = to_string(std::get<NoCrossover>(result).reason);
    }
    return doc.dump(2) + "\n";
}

}  // namespace incluster::delta
