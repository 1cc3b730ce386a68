#include "cmoforge/llm/prompt.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "cmoforge/rng.hpp"

namespace cmoforge::llm {

namespace {

std::string join_numbers(const std::vector<double>& values, int precision) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_number(values[i], precision);
    }
    return out;
}

std::string solution_line(const Solution& s, int precision) {
    std::string out = "decs: [" + join_numbers(s.decs, precision) + "]";
    out += ", objs: [" + join_numbers(s.objs, precision) + "]";
    out += ", CV: " + format_number(s.cv, precision);
    return out;
}

std::string solution_block(const std::vector<Solution>& list, int precision) {
    if (list.empty()) return "none";
    std::string out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i > 0) out += '\n';
        out += solution_line(list[i], precision);
    }
    return out;
}

bool uniform_bounds(const std::vector<double>& v) {
    for (double x : v)
        if (x != v.front()) return false;
    return true;
}

std::string bound_text(const std::vector<double>& v, int precision) {
    if (uniform_bounds(v)) return format_number(v.front(), precision);
    // Per-dimension bounds render as a bracketed vector to stay unambiguous
    // inside the surrounding interval brackets.
    return "[" + join_numbers(v, precision) + "]";
}

}  // namespace

std::string format_number(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

PromptBundle build_prompt(const std::vector<Solution>& feasible,
                          const std::vector<Solution>& infeasible, int n,
                          const std::vector<double>& lower,
                          const std::vector<double>& upper, int precision,
                          PromptMeta meta, int batch) {
    if (feasible.empty() && infeasible.empty())
        throw ContractViolation("build_prompt: no input solutions");
    if (batch < 1) throw ContractViolation("build_prompt: batch must be >= 1");

    PromptBundle bundle;
    bundle.meta = std::move(meta);

    bundle.sections.task_description =
        "You are given solutions of a constrained multiobjective optimization problem. "
        "Each solution has decision variables (decs), objective values (objs), and a "
        "constraint violation degree (CV). A solution with CV = 0 is feasible. A solution "
        "with smaller CV is better; among solutions with equal CV, smaller objective "
        "values are better.";

    bundle.sections.input_information =
        "Feasible solutions:\n" + solution_block(feasible, precision) +
        "\nInfeasible solutions:\n" + solution_block(infeasible, precision);

    const std::string lb = bound_text(lower, precision);
    const std::string ub = bound_text(upper, precision);
    if (batch == 1) {
        bundle.sections.operational_steps =
            "Select two solutions from those provided above and generate one completely "
            "new solution from them. The new solution must contain exactly " +
            std::to_string(n) + " values; value i must lie within [" + lb + ", " + ub + "].";
        bundle.sections.output_format =
            "Output only the new decision variables, separated by commas, placed between "
            "<start> and <end> tags. Do not include any additional explanation.";
    } else {
        bundle.sections.operational_steps =
            "Select two solutions from those provided above and generate " +
            std::to_string(batch) +
            " completely new solutions from them. Each new solution must contain exactly " +
            std::to_string(n) + " values; value i must lie within [" + lb + ", " + ub + "].";
        bundle.sections.output_format =
            "Output only the new decision variables, separated by commas, one solution "
            "per line, each placed between <start> and <end> tags. Do not include any "
            "additional explanation.";
    }

    bundle.rendered = bundle.sections.task_description + "\n\n" +
                      bundle.sections.input_information + "\n\n" +
                      bundle.sections.operational_steps + "\n\n" +
                      bundle.sections.output_format;
    bundle.pool_digest = fnv1a64(bundle.sections.input_information);
    return bundle;
}

const char* to_string(ParseError e) {
    switch (e) {
        case ParseError::missing_tags: return "missing_tags";
        case ParseError::wrong_count: return "wrong_count";
        case ParseError::bad_token: return "bad_token";
        case ParseError::non_finite: return "non_finite";
    }
    return "missing_tags";
}

namespace {

ParseResult parse_body(std::string_view body, int n, const std::vector<double>& lower,
                       const std::vector<double>& upper) {
    ParseResult result;
    std::vector<std::string> tokens;
    std::string current;
    for (char c : body) {
        if (c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
            c == '\v') {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));

    if (tokens.size() != static_cast<std::size_t>(n)) {
        result.error = ParseError::wrong_count;
        return result;
    }
    std::vector<double> values;
    values.reserve(tokens.size());
    for (const auto& tok : tokens) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size()) {
            result.error = ParseError::bad_token;
            return result;
        }
        if (!std::isfinite(v)) {
            result.error = ParseError::non_finite;
            return result;
        }
        values.push_back(v);
    }
    bool repaired = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double clamped = std::min(std::max(values[i], lower[i]), upper[i]);
        if (clamped != values[i]) repaired = true;
        values[i] = clamped;
    }
    result.ok = true;
    result.repaired = repaired;
    result.decs = std::move(values);
    return result;
}

}  // namespace

ParseResult parse_response(std::string_view text, int n,
                           const std::vector<double>& lower,
                           const std::vector<double>& upper) {
    constexpr std::string_view kStart = "<start>";
    constexpr std::string_view kEnd = "<end>";
    const std::size_t start = text.find(kStart);
    if (start == std::string_view::npos) {
        ParseResult r;
        r.error = ParseError::missing_tags;
        return r;
    }
    const std::size_t body_begin = start + kStart.size();
    const std::size_t end = text.find(kEnd, body_begin);
    if (end == std::string_view::npos) {
        ParseResult r;
        r.error = ParseError::missing_tags;
        return r;
    }
    return parse_body(text.substr(body_begin, end - body_begin), n, lower, upper);
}

std::vector<ParseResult> parse_response_blocks(std::string_view text, int n,
                                               const std::vector<double>& lower,
                                               const std::vector<double>& upper,
                                               int max_blocks) {
    constexpr std::string_view kStart = "<start>";
    constexpr std::string_view kEnd = "<end>";
    std::vector<ParseResult> results;
    std::size_t pos = 0;
    while (static_cast<int>(results.size()) < max_blocks) {
        const std::size_t start = text.find(kStart, pos);
        if (start == std::string_view::npos) break;
        const std::size_t body_begin = start + kStart.size();
        const std::size_t end = text.find(kEnd, body_begin);
        if (end == std::string_view::npos) break;
        results.push_back(parse_body(text.substr(body_begin, end - body_begin), n,
                                     lower, upper));
        pos = end + kEnd.size();
    }
    return results;
}

}  // namespace cmoforge::llm
