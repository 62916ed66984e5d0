#include "fmm/executor.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace fmm {

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::ABC: return "abc";
        case Strategy::AB: return "ab";
        case Strategy::Naive: return "naive";
    }
    return "?";
}

Strategy parse_strategy(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "abc") return Strategy::ABC;
    if (lower == "ab") return Strategy::AB;
    if (lower == "naive") return Strategy::Naive;
    throw std::invalid_argument("unknown strategy '" + std::string(text) + "' (expected one of: naive, ab, abc)");
}

std::size_t Schedule::multiply_count() const {
    return static_cast<std::size_t>(
        std::count_if(steps.begin(), steps.end(), [](const Step& s) { return s.kind == StepKind::Multiply; }));
}

ExecOptions ExecOptions::from_env() {
    ExecOptions opts;
    if (const char* env = std::getenv("FMM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) opts.threads = static_cast<std::size_t>(v);
    }
    return opts;
}

namespace {

std::vector<Term> column_terms(const RationalMatrix& m, std::size_t r) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (!is_zero(m(i, r))) terms.push_back({i, m(i, r)});
    return terms;
}

}  // namespace

Schedule build_schedule(const MultiLevelSpec& spec, Strategy strategy) {
    if (!spec.validated) throw std::invalid_argument("build_schedule: spec '" + spec.id() + "' is not validated");
    Schedule s;
    s.strategy = strategy;
    s.specId = spec.id();
    s.Mrad = spec.Mrad;
    s.Krad = spec.Krad;
    s.Nrad = spec.Nrad;
    s.Rtot = spec.Rtot;
    s.steps.reserve(4 * spec.Rtot);
    for (std::size_t r = 0; r < spec.Rtot; ++r) {
        s.steps.push_back({StepKind::PackA, r, column_terms(spec.bigU, r)});
        s.steps.push_back({StepKind::PackB, r, column_terms(spec.bigV, r)});
        s.steps.push_back({StepKind::Multiply, r, {}});
        s.steps.push_back({StepKind::Update, r, column_terms(spec.bigW, r)});
    }
    return s;
}

std::string render_schedule(const Schedule& sched, const MultiLevelSpec& spec) {
    std::ostringstream out;
    out << "# generated fmm schedule\n";
    out << "# spec: " << sched.specId << '\n';
    for (std::size_t l = 0; l < spec.depth(); ++l) {
        const auto& lv = spec.levels[l];
        out << "# level " << l << ": " << lv.name << " <" << lv.mt << ',' << lv.kt << ',' << lv.nt
            << "> R=" << lv.rank << '\n';
    }
    out << "# radices: Mrad=" << sched.Mrad << " Krad=" << sched.Krad << " Nrad=" << sched.Nrad << '\n';
    out << "# Rtot: " << sched.Rtot << '\n';
    out << "# strategy: " << to_string(sched.strategy) << '\n';

    auto sum = [&](const std::vector<Term>& terms, char operand) {
        for (std::size_t t = 0; t < terms.size(); ++t) {
            if (t) out << " + ";
            out << to_string(terms[t].coeff) << '*' << operand << '[' << terms[t].block << ']';
        }
    };
    for (const auto& step : sched.steps) {
        switch (step.kind) {
            case StepKind::PackA:
                out << "PACK_A r=" << step.r << " : ";
                sum(step.terms, 'A');
                break;
            case StepKind::PackB:
                out << "PACK_B r=" << step.r << " : ";
                sum(step.terms, 'B');
                break;
            case StepKind::Multiply:
                out << "MULTIPLY r=" << step.r;
                break;
            case StepKind::Update:
                out << "UPDATE r=" << step.r << " :";
                for (std::size_t t = 0; t < step.terms.size(); ++t) {
                    out << (t ? ", " : " ") << "C[" << step.terms[t].block << "] += "
                        << to_string(step.terms[t].coeff) << "*M";
                }
                break;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace fmm
