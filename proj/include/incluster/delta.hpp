#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace incluster::delta {

/// One line of a batch-vs-incremental table. Times are milliseconds.
struct ComparisonRow {
    double delta_percent = 0.0;
    double actual_ms = 0.0;       // batch re-clustering of old + new data
    double incremental_ms = 0.0;  // incremental insertion of the new data only

    /// incremental_ms - actual_ms; incremental is no worse when this is <= 0.
    double gap() const noexcept { return incremental_ms - actual_ms; }

    friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

inline constexpr std::string_view interpolation_method = "piecewise-linear interpolation";

struct CrossoverResult {
    double threshold_percent = 0.0;
    ComparisonRow low;
    ComparisonRow high;
    std::string method{interpolation_method};
};

struct NoCrossover {
    enum class Reason {
        incremental_never_wins,   // gap > 0 at every row
        incremental_always_wins,  // gap <= 0 at every row
        no_upward_crossing,       // gap starts positive and only turns non-positive later
    };
    Reason reason;
};

std::string_view to_string(NoCrossover::Reason reason);

using Crossover = std::variant<CrossoverResult, NoCrossover>;

/// (new - old) / old * 100. Exact for sizes below 2^46.
double delta_percent(std::size_t old_size, std::size_t new_size);

struct SizedDuration {
    std::size_t size;
    double ms;
};

/// Pairs each incremental entry of `d` inserted points with the batch entry
/// at `base_size + d`. Rows come back sorted by delta. Batch entries without
/// an incremental partner are ignored; an incremental entry without a batch
/// partner is an error.
std::vector<ComparisonRow> build_comparison(const std::vector<SizedDuration>& actual,
                                            const std::vector<SizedDuration>& incremental,
                                            std::size_t base_size);

/// Finds the first adjacent pair where the gap goes from <= 0 to > 0 and
/// linearly interpolates the delta at which it crosses zero.
Crossover crossover_threshold(const std::vector<ComparisonRow>& rows);

std::string comparison_csv(const std::vector<ComparisonRow>& rows);
std::string crossover_json(const Crossover& result);

}  // namespace incluster::delta
