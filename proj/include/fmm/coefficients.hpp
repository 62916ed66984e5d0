#pragma once

#include "fmm/rational.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fmm {

/// One-level fast matrix multiplication algorithm <mt,kt,nt> with coefficients [[U,V,W]].
///
/// Block indices are row-major over the block grid: A_i has i = row*kt + col,
/// B_j has j = row*nt + col and C_p has p = row*nt + col. Column r of U, V and W
/// describes the r-th submatrix product
///     M_r = (sum_i U(i,r) A_i) (sum_j V(j,r) B_j),   C_p += W(p,r) M_r.
struct FmmSpec {
    std::size_t mt = 1;
    std::size_t kt = 1;
    std::size_t nt = 1;
    std::size_t rank = 1;
    RationalMatrix U;
    RationalMatrix V;
    RationalMatrix W;
    std::string name;

    bool operator==(const FmmSpec&) const = default;

    // Throws std::invalid_argument if U/V/W shapes disagree with <mt,kt,nt> and rank.
    void check_dimensions() const;
};

class SpecParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Coefficient-file text -> spec. `fallback_name` is used when the text carries
// no `# name:` comment.
FmmSpec parse_spec(std::string_view text, std::string fallback_name = {});
std::string serialize_spec(const FmmSpec& spec);

FmmSpec load_spec(const std::filesystem::path& path);
void save_spec(const FmmSpec& spec, const std::filesystem::path& path);

/// Strassen's <2,2,2> rank-7 algorithm.
FmmSpec strassen_spec();

/// Classical <mt,kt,nt>: product r <-> (a,b,c) computes C_{a,c} += A_{a,b} B_{b,c},
/// with r = (a*kt + b)*nt + c.
FmmSpec classical_spec(std::size_t mt, std::size_t kt, std::size_t nt);

/// Embeds `base` into the leading corner of a larger <mt,kt,nt> partition and
/// covers every block product outside that corner classically. The result has
/// rank base.rank + mt*kt*nt - base.mt*base.kt*base.nt and is Brent-valid
/// whenever `base` is.
FmmSpec embed_spec(const FmmSpec& base, std::size_t mt, std::size_t kt, std::size_t nt,
                   std::string name);

// "strassen" or "classicalMKN" (single digits, e.g. classical232).
std::optional<FmmSpec> builtin_spec(std::string_view name);

struct BrentViolation {
    // Equation coordinates: A block (a,b), B block (f,d), C block (e,c).
    std::size_t a, b, c, e, d, f;
    Rational lhs;       // sum_r U V W
    Rational expected;  // 1 when a==e && b==f && c==d, else 0
    Rational residual() const { return lhs - expected; }
};

struct ValidationReport {
    std::size_t equations = 0;
    std::vector<BrentViolation> violations;
    bool passed() const { return violations.empty(); }
};

/// Exact check of the Brent equations for `spec`.
ValidationReport validate_brent(const FmmSpec& spec);

// Brent check for raw coefficient matrices of a <mt,kt,nt> partition; used for
// composed multi-level coefficients too.
ValidationReport validate_brent(std::size_t mt, std::size_t kt, std::size_t nt,
                                const RationalMatrix& U, const RationalMatrix& V,
                                const RationalMatrix& W);

struct CatalogEntry {
    FmmSpec spec;
    ValidationReport report;
    std::filesystem::path source;
};

// Loads every `*.fmm` file in `dir`, sorted by spec name. Invalid specs are kept
// with their failing report so callers can decide.
std::vector<CatalogEntry> load_catalog(const std::filesystem::path& dir);

// Valid specs only, in catalog order.
std::vector<FmmSpec> valid_specs(const std::vector<CatalogEntry>& catalog);

}  // namespace fmm
