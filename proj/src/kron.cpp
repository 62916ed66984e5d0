#include "fmm/kron.hpp"

#include <sstream>
#include <utility>
#include <vector>

namespace fmm {

RationalMatrix kron(const RationalMatrix& X, const RationalMatrix& Y) {
    const std::size_t p = Y.rows(), q = Y.cols();
    RationalMatrix out(X.rows() * p, X.cols() * q);
    for (std::size_t r = 0; r < X.rows(); ++r)
        for (std::size_t s = 0; s < X.cols(); ++s) {
            const Rational& x = X(r, s);
            if (is_zero(x)) continue;
            for (std::size_t v = 0; v < p; ++v)
                for (std::size_t w = 0; w < q; ++w) out(p * r + v, q * s + w) = x * Y(v, w);
        }
    return out;
}

std::string MultiLevelSpec::id() const {
    std::string out;
    for (const auto& l : levels) {
        if (!out.empty()) out += '+';
        out += l.name;
    }
    return out;
}

MultiLevelSpec compose(std::span<const FmmSpec> specs) {
    if (specs.empty()) throw CompositionError("compose: empty level list");
    for (const auto& s : specs) {
        const auto report = validate_brent(s);
        if (!report.passed()) {
            throw CompositionError("compose: spec '" + s.name + "' fails " +
                                   std::to_string(report.violations.size()) + " Brent equations");
        }
    }

    MultiLevelSpec ml;
    ml.levels.assign(specs.begin(), specs.end());
    ml.bigU = specs[0].U;
    ml.bigV = specs[0].V;
    ml.bigW = specs[0].W;
    ml.Mrad = specs[0].mt;
    ml.Krad = specs[0].kt;
    ml.Nrad = specs[0].nt;
    ml.Rtot = specs[0].rank;
    for (std::size_t l = 1; l < specs.size(); ++l) {
        ml.bigU = kron(ml.bigU, specs[l].U);
        ml.bigV = kron(ml.bigV, specs[l].V);
        ml.bigW = kron(ml.bigW, specs[l].W);
        ml.Mrad *= specs[l].mt;
        ml.Krad *= specs[l].kt;
        ml.Nrad *= specs[l].nt;
        ml.Rtot *= specs[l].rank;
    }
    ml.validated = true;
    return ml;
}

MultiLevelSpec compose(std::initializer_list<FmmSpec> specs) {
    return compose(std::span<const FmmSpec>(specs.begin(), specs.size()));
}

namespace {

// Row-major grid row of every recursive-block index of a (rowRad_l, colRad_l)
// nested partition. Same digit map as blockindex's linear_index.
std::vector<std::size_t> grid_rows(const std::vector<std::pair<std::size_t, std::size_t>>& radices) {
    std::size_t totalCols = 1;
    for (const auto& r : radices) totalCols *= r.second;
    // Build level by level: each existing block splits into rowRad x colRad children.
    std::vector<std::pair<std::size_t, std::size_t>> coords{{0, 0}};
    for (const auto& [rr, cr] : radices) {
        std::vector<std::pair<std::size_t, std::size_t>> next;
        next.reserve(coords.size() * rr * cr);
        for (const auto& [row, col] : coords)
            for (std::size_t i = 0; i < rr; ++i)
                for (std::size_t j = 0; j < cr; ++j) next.push_back({row * rr + i, col * cr + j});
        coords = std::move(next);
    }
    std::vector<std::size_t> out(coords.size());
    for (std::size_t p = 0; p < coords.size(); ++p) out[p] = coords[p].first * totalCols + coords[p].second;
    return out;
}

RationalMatrix permute_rows(const RationalMatrix& M, const std::vector<std::size_t>& target) {
    RationalMatrix out(M.rows(), M.cols());
    for (std::size_t p = 0; p < M.rows(); ++p)
        for (std::size_t r = 0; r < M.cols(); ++r) out(target[p], r) = M(p, r);
    return out;
}

}  // namespace

FmmSpec flatten(const MultiLevelSpec& spec) {
    std::vector<std::pair<std::size_t, std::size_t>> ra, rb, rc;
    for (const auto& l : spec.levels) {
        ra.push_back({l.mt, l.kt});
        rb.push_back({l.kt, l.nt});
        rc.push_back({l.mt, l.nt});
    }
    FmmSpec s;
    s.mt = spec.Mrad;
    s.kt = spec.Krad;
    s.nt = spec.Nrad;
    s.rank = spec.Rtot;
    s.U = permute_rows(spec.bigU, grid_rows(ra));
    s.V = permute_rows(spec.bigV, grid_rows(rb));
    s.W = permute_rows(spec.bigW, grid_rows(rc));
    s.name = spec.id();
    return s;
}

ValidationReport validate_brent(const MultiLevelSpec& spec) { return validate_brent(flatten(spec)); }

std::string serialize_multilevel(const MultiLevelSpec& spec) {
    std::ostringstream out;
    out << "# L = " << spec.depth() << '\n';
    for (std::size_t l = 0; l < spec.depth(); ++l) {
        const auto& s = spec.levels[l];
        out << "# level " << l << ": " << s.name << " <" << s.mt << ',' << s.kt << ',' << s.nt
            << "> R=" << s.rank << '\n';
    }
    out << serialize_spec(flatten(spec));
    return out.str();
}

Rational effective_flop_ratio(const MultiLevelSpec& spec) {
    Rational ratio(1);
    for (const auto& l : spec.levels)
        ratio *= Rational(static_cast<std::int64_t>(l.rank),
                          static_cast<std::int64_t>(l.mt * l.kt * l.nt));
    return ratio;
}

}  // namespace fmm
