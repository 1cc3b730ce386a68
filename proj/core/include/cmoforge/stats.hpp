#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cmoforge::stats {

enum class Direction { smaller_is_better, larger_is_better };
enum class Mark { plus, minus, equal, none };

char mark_char(Mark m);

struct WilcoxonResult {
    double p = 1.0;
    Mark mark = Mark::equal;
};

/// Two-sided rank-sum test with midrank ties: exact enumeration of the null
/// distribution when |a| + |b| <= 20, normal approximation with tie
/// correction otherwise. NaN samples rank as worst under the direction.
/// The mark is '=' when p >= alpha, else '+'/'-' by whose median is better.
WilcoxonResult wilcoxon_rank_sum(std::vector<double> a, std::vector<double> b,
                                 double alpha = 0.05,
                                 Direction direction = Direction::smaller_is_better);

struct FriedmanResult {
    std::vector<double> mean_ranks;  // one per algorithm, 1 = best
    double chi_square = 0.0;
};

/// Per-problem ranks 1..k with midrank ties over values[algorithm][problem];
/// NaN cells rank worst. Requires at least 2 algorithms and 2 problems.
FriedmanResult friedman_ranks(const std::vector<std::vector<double>>& values,
                              Direction direction);

struct ComparisonCell {
    double mean = 0.0;
    double stddev = 0.0;
    Mark mark = Mark::none;
    bool is_nan = false;
};

struct TableLayout {
    std::vector<std::string> row_labels;  // problems
    std::vector<std::string> col_labels;  // algorithms
    Direction direction = Direction::smaller_is_better;
    std::string footnote;  // appended to the aligned rendering only
};

struct RenderedTable {
    std::string csv;
    std::string markdown;
};

/// Scientific notation with a fixed mantissa precision and unpadded signed
/// exponent: format_sci(0.73863, 4) == "7.3863e-1".
std::string format_sci(double v, int frac_digits);

/// "mean (std) mark" cell, e.g. "7.3863e-1 (3.72e-2) ="; NaN cells render
/// as "NaN (NaN)" with no mark.
std::string format_cell(const ComparisonCell& cell);

/// Results table in CSV and Markdown form: one row per problem, one column
/// per algorithm, the best cell per row bolded in the Markdown rendering,
/// and a final "+/-/=" row counting marks per column.
RenderedTable format_results_table(const std::vector<std::vector<ComparisonCell>>& cells,
                                   const TableLayout& layout);

}  // namespace cmoforge::stats
