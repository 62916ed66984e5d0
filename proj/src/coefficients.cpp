#include "fmm/coefficients.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fmm {

void FmmSpec::check_dimensions() const {
    if (mt == 0 || kt == 0 || nt == 0 || rank == 0)
        throw std::invalid_argument("spec '" + name + "': partition dims and rank must be positive");
    auto expect = [&](const RationalMatrix& m, std::size_t rows, const char* what) {
        if (m.rows() != rows || m.cols() != rank) {
            throw std::invalid_argument("spec '" + name + "': " + what + " is " +
                                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                        ", expected " + std::to_string(rows) + "x" +
                                        std::to_string(rank));
        }
    };
    expect(U, mt * kt, "U");
    expect(V, kt * nt, "V");
    expect(W, mt * nt, "W");
}

// ---------------------------------------------------------------------------
// Coefficient file format

namespace {

struct Line {
    std::size_t number;  // 1-based
    std::vector<std::string> tokens;
};

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw SpecParseError("line " + std::to_string(line) + ": " + msg);
}

std::size_t parse_positive(const std::string& tok, std::size_t line) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
        fail(line, "malformed header field '" + tok + "'");
    }
    if (pos != tok.size() || v <= 0) fail(line, "header field '" + tok + "' is not a positive integer");
    return static_cast<std::size_t>(v);
}

RationalMatrix parse_section(const std::vector<Line>& lines, std::size_t rows, std::size_t rank,
                             const char* what) {
    const std::size_t at = lines.empty() ? 0 : lines.front().number;
    if (lines.size() != rows) {
        fail(at, std::string("section ") + what + " has " + std::to_string(lines.size()) +
                     " rows, expected " + std::to_string(rows));
    }
    RationalMatrix m(rows, rank);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto& ln = lines[r];
        if (ln.tokens.size() != rank) {
            fail(ln.number, std::string("section ") + what + " row has " +
                                std::to_string(ln.tokens.size()) + " entries, expected " +
                                std::to_string(rank));
        }
        for (std::size_t c = 0; c < rank; ++c) {
            try {
                m(r, c) = parse_rational(ln.tokens[c]);
            } catch (const std::invalid_argument& e) {
                fail(ln.number, e.what());
            }
        }
    }
    return m;
}

}  // namespace

FmmSpec parse_spec(std::string_view text, std::string fallback_name) {
    // Blank lines separate sections; comment-only lines are dropped entirely.
    std::vector<std::vector<Line>> groups(1);
    std::string name = std::move(fallback_name);
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) {
            const std::string comment = trim(std::string_view(raw).substr(hash + 1));
            if (comment.rfind("name:", 0) == 0) name = trim(std::string_view(comment).substr(5));
            if (trim(std::string_view(raw).substr(0, hash)).empty()) continue;
            raw.resize(hash);
        }
        auto tokens = split_ws(raw);
        if (tokens.empty()) {
            if (!groups.back().empty()) groups.emplace_back();
            continue;
        }
        groups.back().push_back({number, std::move(tokens)});
    }
    if (groups.back().empty()) groups.pop_back();
    if (groups.empty()) throw SpecParseError("empty coefficient file");

    auto& first = groups.front();
    const Line header = first.front();
    if (header.tokens.size() != 4)
        fail(header.number, "header must be four positive integers 'm k n R'");
    FmmSpec spec;
    spec.mt = parse_positive(header.tokens[0], header.number);
    spec.kt = parse_positive(header.tokens[1], header.number);
    spec.nt = parse_positive(header.tokens[2], header.number);
    spec.rank = parse_positive(header.tokens[3], header.number);
    spec.name = name;
    first.erase(first.begin());

    // The U section may start right after the header or after a blank line.
    if (first.empty()) groups.erase(groups.begin());
    if (groups.size() != 3) {
        throw SpecParseError("expected 3 coefficient sections (U, V, W), found " +
                             std::to_string(groups.size()));
    }
    spec.U = parse_section(groups[0], spec.mt * spec.kt, spec.rank, "U");
    spec.V = parse_section(groups[1], spec.kt * spec.nt, spec.rank, "V");
    spec.W = parse_section(groups[2], spec.mt * spec.nt, spec.rank, "W");
    return spec;
}

std::string serialize_spec(const FmmSpec& spec) {
    spec.check_dimensions();
    std::ostringstream out;
    if (!spec.name.empty()) out << "# name: " << spec.name << '\n';
    out << spec.mt << ' ' << spec.kt << ' ' << spec.nt << ' ' << spec.rank << '\n';
    auto section = [&](const RationalMatrix& m) {
        for (std::size_t r = 0; r < m.rows(); ++r) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                if (c) out << ' ';
                out << to_string(m(r, c));
            }
            out << '\n';
        }
    };
    section(spec.U);
    out << '\n';
    section(spec.V);
    out << '\n';
    section(spec.W);
    return out.str();
}

FmmSpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read coefficient file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_spec(buf.str(), path.stem().string());
    } catch (const SpecParseError& e) {
        throw SpecParseError(path.string() + ": " + e.what());
    }
}

void save_spec(const FmmSpec& spec, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write coefficient file " + path.string());
    out << serialize_spec(spec);
}

// ---------------------------------------------------------------------------
// Built-in specs

FmmSpec strassen_spec() {
    FmmSpec s;
    s.mt = s.kt = s.nt = 2;
    s.rank = 7;
    s.name = "strassen";
    s.U = RationalMatrix{
        {1, 0, 1, 0, 1, -1, 0},
        {0, 0, 0, 0, 1, 0, 1},
        {0, 1, 0, 0, 0, 1, 0},
        {1, 1, 0, 1, 0, 0, -1},
    };
    s.V = RationalMatrix{
        {1, 1, 0, -1, 0, 1, 0},
        {0, 0, 1, 0, 0, 1, 0},
        {0, 0, 0, 1, 0, 0, 1},
        {1, 0, -1, 0, 1, 0, 1},
    };
    s.W = RationalMatrix{
        {1, 0, 0, 1, -1, 0, 1},
        {0, 0, 1, 0, 1, 0, 0},
        {0, 1, 0, 1, 0, 0, 0},
        {1, -1, 1, 0, 0, 1, 0},
    };
    return s;
}

FmmSpec classical_spec(std::size_t mt, std::size_t kt, std::size_t nt) {
    FmmSpec s;
    s.mt = mt;
    s.kt = kt;
    s.nt = nt;
    s.rank = mt * kt * nt;
    s.name = "classical" + std::to_string(mt) + std::to_string(kt) + std::to_string(nt);
    s.U = RationalMatrix(mt * kt, s.rank);
    s.V = RationalMatrix(kt * nt, s.rank);
    s.W = RationalMatrix(mt * nt, s.rank);
    std::size_t r = 0;
    for (std::size_t a = 0; a < mt; ++a)
        for (std::size_t b = 0; b < kt; ++b)
            for (std::size_t c = 0; c < nt; ++c, ++r) {
                s.U(a * kt + b, r) = 1;
                s.V(b * nt + c, r) = 1;
                s.W(a * nt + c, r) = 1;
            }
    return s;
}

std::optional<FmmSpec> builtin_spec(std::string_view name) {
    if (name == "strassen") return strassen_spec();
    constexpr std::string_view prefix = "classical";
    if (name.size() == prefix.size() + 3 && name.substr(0, prefix.size()) == prefix) {
        const auto dims = name.substr(prefix.size());
        if (std::all_of(dims.begin(), dims.end(), [](char c) { return c >= '1' && c <= '9'; }))
            return classical_spec(dims[0] - '0', dims[1] - '0', dims[2] - '0');
    }
    return std::nullopt;
}

FmmSpec embed_spec(const FmmSpec& base, std::size_t mt, std::size_t kt, std::size_t nt,
                   std::string name) {
    base.check_dimensions();
    if (mt < base.mt || kt < base.kt || nt < base.nt)
        throw std::invalid_argument("embed_spec: target partition smaller than base");

    const std::size_t extra = mt * kt * nt - base.mt * base.kt * base.nt;
    FmmSpec s;
    s.mt = mt;
    s.kt = kt;
    s.nt = nt;
    s.rank = base.rank + extra;
    s.name = std::move(name);
    s.U = RationalMatrix(mt * kt, s.rank);
    s.V = RationalMatrix(kt * nt, s.rank);
    s.W = RationalMatrix(mt * nt, s.rank);

    for (std::size_t r = 0; r < base.rank; ++r) {
        for (std::size_t a = 0; a < base.mt; ++a)
            for (std::size_t b = 0; b < base.kt; ++b) s.U(a * kt + b, r) = base.U(a * base.kt + b, r);
        for (std::size_t b = 0; b < base.kt; ++b)
            for (std::size_t c = 0; c < base.nt; ++c) s.V(b * nt + c, r) = base.V(b * base.nt + c, r);
        for (std::size_t a = 0; a < base.mt; ++a)
            for (std::size_t c = 0; c < base.nt; ++c) s.W(a * nt + c, r) = base.W(a * base.nt + c, r);
    }
    std::size_t r = base.rank;
    for (std::size_t a = 0; a < mt; ++a)
        for (std::size_t b = 0; b < kt; ++b)
            for (std::size_t c = 0; c < nt; ++c) {
                if (a < base.mt && b < base.kt && c < base.nt) continue;
                s.U(a * kt + b, r) = 1;
                s.V(b * nt + c, r) = 1;
                s.W(a * nt + c, r) = 1;
                ++r;
            }
    return s;
}

// ---------------------------------------------------------------------------
// Brent equations

ValidationReport validate_brent(std::size_t mt, std::size_t kt, std::size_t nt,
                                const RationalMatrix& U, const RationalMatrix& V,
                                const RationalMatrix& W) {
    const std::size_t na = mt * kt, nb = kt * nt, nc = mt * nt;
    const std::size_t rank = U.cols();
    if (U.rows() != na || V.rows() != nb || W.rows() != nc || V.cols() != rank || W.cols() != rank)
        throw std::invalid_argument("validate_brent: coefficient shapes do not match partition");

    // T(i,j,p) = sum_r U(i,r) V(j,r) W(p,r), accumulated over nonzeros only.
    std::vector<Rational> tensor(na * nb * nc, Rational(0));
    std::vector<std::size_t> ui, vj, wp;
    for (std::size_t r = 0; r < rank; ++r) {
        ui.clear();
        vj.clear();
        wp.clear();
        for (std::size_t i = 0; i < na; ++i) if (!is_zero(U(i, r))) ui.push_back(i);
        for (std::size_t j = 0; j < nb; ++j) if (!is_zero(V(j, r))) vj.push_back(j);
        for (std::size_t p = 0; p < nc; ++p) if (!is_zero(W(p, r))) wp.push_back(p);
        for (auto i : ui)
            for (auto j : vj) {
                const Rational uv = U(i, r) * V(j, r);
                for (auto p : wp) tensor[(i * nb + j) * nc + p] += uv * W(p, r);
            }
    }

    ValidationReport report;
    report.equations = na * nb * nc;
    for (std::size_t a = 0; a < mt; ++a)
        for (std::size_t b = 0; b < kt; ++b)
            for (std::size_t f = 0; f < kt; ++f)
                for (std::size_t d = 0; d < nt; ++d)
                    for (std::size_t e = 0; e < mt; ++e)
                        for (std::size_t c = 0; c < nt; ++c) {
                            const std::size_t i = a * kt + b, j = f * nt + d, p = e * nt + c;
                            const Rational lhs = tensor[(i * nb + j) * nc + p];
                            const Rational expected(a == e && b == f && c == d ? 1 : 0);
                            if (lhs != expected) report.violations.push_back({a, b, c, e, d, f, lhs, expected});
                        }
    return report;
}

ValidationReport validate_brent(const FmmSpec& spec) {
    spec.check_dimensions();
    return validate_brent(spec.mt, spec.kt, spec.nt, spec.U, spec.V, spec.W);
}

// ---------------------------------------------------------------------------
// Catalog

std::vector<CatalogEntry> load_catalog(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("catalog directory not found: " + dir.string());
    std::vector<CatalogEntry> entries;
    for (const auto& de : std::filesystem::directory_iterator(dir)) {
        if (!de.is_regular_file() || de.path().extension() != ".fmm") continue;
        CatalogEntry e{load_spec(de.path()), {}, de.path()};
        e.report = validate_brent(e.spec);
        entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end(),
              [](const CatalogEntry& x, const CatalogEntry& y) { return x.spec.name < y.spec.name; });
    return entries;
}

std::vector<FmmSpec> valid_specs(const std::vector<CatalogEntry>& catalog) {
    std::vector<FmmSpec> out;
    for (const auto& e : catalog)
        if (e.report.passed()) out.push_back(e.spec);
    return out;
}

}  // namespace fmm
