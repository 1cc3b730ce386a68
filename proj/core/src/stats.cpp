#include "cmoforge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "cmoforge/core.hpp"

namespace cmoforge::stats {

namespace {

double worst_sentinel(Direction d) {
    return d == Direction::smaller_is_better ? std::numeric_limits<double>::infinity()
                                             : -std::numeric_limits<double>::infinity();
}

// Midranks of the pooled sample, scaled by 2 so ties stay integral.
std::vector<std::int64_t> midranks_x2(const std::vector<double>& pooled) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
    std::vector<std::int64_t> ranks(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        // Positions i..j share the midrank (i+1 + j+1) / 2; doubled it is i+j+2.
        const std::int64_t r2 = static_cast<std::int64_t>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r2;
        i = j + 1;
    }
    return ranks;
}

// Counts subsets of size `remaining` from ranks[start..] whose doubled rank
// sum, added to `sum`, lands at or beyond the observed statistic.
void count_tails(const std::vector<std::int64_t>& ranks, std::size_t start,
                 std::size_t remaining, std::int64_t sum, std::int64_t observed,
                 std::uint64_t& count_le, std::uint64_t& count_ge) {
    if (remaining == 0) {
        if (sum <= observed) ++count_le;
        if (sum >= observed) ++count_ge;
        return;
    }
    if (ranks.size() - start < remaining) return;
    count_tails(ranks, start + 1, remaining - 1, sum + ranks[start], observed,
                count_le, count_ge);
    count_tails(ranks, start + 1, remaining, sum, observed, count_le, count_ge);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

}  // namespace

char mark_char(Mark m) {
    switch (m) {
        case Mark::plus: return '+';
        case Mark::minus: return '-';
        case Mark::equal: return '=';
        case Mark::none: return ' ';
    }
    return ' ';
}

WilcoxonResult wilcoxon_rank_sum(std::vector<double> a, std::vector<double> b,
                                 double alpha, Direction direction) {
    if (a.empty() || b.empty())
        throw ContractViolation("wilcoxon_rank_sum: empty sample");
    const double worst = worst_sentinel(direction);
    for (double& v : a)
        if (std::isnan(v)) v = worst;
    for (double& v : b)
        if (std::isnan(v)) v = worst;

    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    const std::size_t n = na + nb;
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::vector<std::int64_t> r2 = midranks_x2(pooled);
    std::int64_t w2 = 0;
    for (std::size_t i = 0; i < na; ++i) w2 += r2[i];

    double p;
    if (n <= 20) {
        std::uint64_t count_le = 0;
        std::uint64_t count_ge = 0;
        count_tails(r2, 0, na, 0, w2, count_le, count_ge);
        std::uint64_t total = 1;  // C(n, na)
        for (std::size_t i = 0; i < na; ++i) total = total * (n - i) / (i + 1);
        const double tail =
            static_cast<double>(std::min(count_le, count_ge)) / static_cast<double>(total);
        p = std::min(1.0, 2.0 * tail);
    } else {
        const double w = static_cast<double>(w2) / 2.0;
        const double mu = static_cast<double>(na) * (n + 1) / 2.0;
        // Tie correction: sum of t^3 - t over tie groups.
        std::map<double, std::size_t> groups;
        for (double v : pooled) ++groups[v];
        double tie_sum = 0.0;
        for (const auto& [value, t] : groups) {
            (void)value;
            tie_sum += static_cast<double>(t) * t * t - static_cast<double>(t);
        }
        const double var = static_cast<double>(na) * static_cast<double>(nb) / 12.0 *
                           ((n + 1) - tie_sum / (static_cast<double>(n) * (n - 1)));
        if (var <= 0.0) {
            p = 1.0;
        } else {
            double num = w - mu;
            // Continuity correction toward the mean.
            if (num > 0.5) num -= 0.5;
            else if (num < -0.5) num += 0.5;
            else num = 0.0;
            p = normal_two_sided_p(num / std::sqrt(var));
        }
    }

    WilcoxonResult result;
    result.p = p;
    if (p >= alpha) {
        result.mark = Mark::equal;
    } else {
        const double ma = median_of(a);
        const double mb = median_of(b);
        const bool a_better = direction == Direction::smaller_is_better ? ma < mb : ma > mb;
        result.mark = a_better ? Mark::plus : Mark::minus;
    }
    return result;
}

FriedmanResult friedman_ranks(const std::vector<std::vector<double>>& values,
                              Direction direction) {
    const std::size_t k = values.size();
    if (k < 2) throw ContractViolation("friedman_ranks: need at least 2 algorithms");
    const std::size_t problems = values.front().size();
    if (problems < 2) throw ContractViolation("friedman_ranks: need at least 2 problems");
    for (const auto& row : values)
        if (row.size() != problems)
            throw ContractViolation("friedman_ranks: ragged value matrix");

    FriedmanResult result;
    result.mean_ranks.assign(k, 0.0);
    for (std::size_t j = 0; j < problems; ++j) {
        std::vector<double> column(k);
        for (std::size_t i = 0; i < k; ++i) {
            double v = values[i][j];
            if (std::isnan(v)) v = worst_sentinel(direction);
            // Rank ascending by badness: negate when larger is better.
            column[i] = direction == Direction::smaller_is_better ? v : -v;
        }
        const auto r2 = midranks_x2(column);
        for (std::size_t i = 0; i < k; ++i)
            result.mean_ranks[i] += static_cast<double>(r2[i]) / 2.0;
    }
    for (double& r : result.mean_ranks) r /= static_cast<double>(problems);

    const double kd = static_cast<double>(k);
    const double pd = static_cast<double>(problems);
    double sum_sq = 0.0;
    for (double r : result.mean_ranks) {
        const double d = r - (kd + 1.0) / 2.0;
        sum_sq += d * d;
    }
    result.chi_square = 12.0 * pd / (kd * (kd + 1.0)) * sum_sq;
    return result;
}

std::string format_sci(double v, int frac_digits) {
    if (std::isnan(v)) return "NaN";
    char buf[64];
    if (v == 0.0) {
        std::snprintf(buf, sizeof buf, "%.*fe+0", frac_digits, 0.0);
        return buf;
    }
    int exp = static_cast<int>(std::floor(std::log10(std::abs(v))));
    double mant = v / std::pow(10.0, exp);
    std::snprintf(buf, sizeof buf, "%.*f", frac_digits, mant);
    // Rounding can push the mantissa to 10.0; renormalize.
    if (std::abs(std::strtod(buf, nullptr)) >= 10.0) {
        ++exp;
        mant = v / std::pow(10.0, exp);
        std::snprintf(buf, sizeof buf, "%.*f", frac_digits, mant);
    }
    std::string out = buf;
    out += 'e';
    out += exp < 0 ? '-' : '+';
    out += std::to_string(std::abs(exp));
    return out;
}

std::string format_cell(const ComparisonCell& cell) {
    if (cell.is_nan) return "NaN (NaN)";
    std::string out = format_sci(cell.mean, 4) + " (" + format_sci(cell.stddev, 2) + ")";
    if (cell.mark != Mark::none) {
        out += ' ';
        out += mark_char(cell.mark);
    }
    return out;
}

RenderedTable format_results_table(const std::vector<std::vector<ComparisonCell>>& cells,
                                   const TableLayout& layout) {
    const std::size_t rows = layout.row_labels.size();
    const std::size_t cols = layout.col_labels.size();
    if (cells.size() != rows)
        throw ContractViolation("format_results_table: row count mismatch");
    for (const auto& row : cells)
        if (row.size() != cols)
            throw ContractViolation("format_results_table: column count mismatch");

    // Best cell per row for the bold flags in the Markdown rendering.
    std::vector<std::size_t> best(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (cells[r][c].is_nan) continue;
            if (best[r] == cols) {
                best[r] = c;
                continue;
            }
            const bool better = layout.direction == Direction::smaller_is_better
                                    ? cells[r][c].mean < cells[r][best[r]].mean
                                    : cells[r][c].mean > cells[r][best[r]].mean;
            if (better) best[r] = c;
        }
    }

    // Summary counts per column; a column with no marks renders "----".
    std::vector<std::string> summary(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        std::size_t plus = 0, minus = 0, equal = 0, marked = 0;
        for (std::size_t r = 0; r < rows; ++r) {
            switch (cells[r][c].mark) {
                case Mark::plus: ++plus; ++marked; break;
                case Mark::minus: ++minus; ++marked; break;
                case Mark::equal: ++equal; ++marked; break;
                case Mark::none: break;
            }
        }
        summary[c] = marked == 0 ? "----"
                                 : std::to_string(plus) + "/" + std::to_string(minus) +
                                       "/" + std::to_string(equal);
    }

    std::ostringstream csv;
    csv << "Problem";
    for (const auto& label : layout.col_labels) csv << ',' << label;
    csv << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        csv << layout.row_labels[r];
        for (std::size_t c = 0; c < cols; ++c) csv << ',' << format_cell(cells[r][c]);
        csv << '\n';
    }
    csv << "+/-/=";
    for (std::size_t c = 0; c < cols; ++c) csv << ',' << summary[c];
    csv << '\n';

    std::ostringstream md;
    md << "| Problem |";
    for (const auto& label : layout.col_labels) md << ' ' << label << " |";
    md << "\n|---|";
    for (std::size_t c = 0; c < cols; ++c) md << "---|";
    md << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        md << "| " << layout.row_labels[r] << " |";
        for (std::size_t c = 0; c < cols; ++c) {
            const std::string text = format_cell(cells[r][c]);
            if (c == best[r]) md << " **" << text << "** |";
            else md << ' ' << text << " |";
        }
        md << '\n';
    }
    md << "| +/-/= |";
    for (std::size_t c = 0; c < cols; ++c) md << ' ' << summary[c] << " |";
    md << '\n';
    if (!layout.footnote.empty()) md << '\n' << layout.footnote << '\n';

    return {csv.str(), md.str()};
}

}  // namespace cmoforge::stats
