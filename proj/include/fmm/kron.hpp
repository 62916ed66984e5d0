#pragma once

#include "fmm/coefficients.hpp"

#include <span>
#include <string>
#include <vector>

namespace fmm {

// X (m x n) kron Y (p x q): entry (p*r + v, q*s + w) = X(r,s) * Y(v,w).
RationalMatrix kron(const RationalMatrix& X, const RationalMatrix& Y);

/// L-level algorithm built from per-level specs. Level 0 is the outermost
/// partition and the leftmost Kronecker factor.
struct MultiLevelSpec {
    std::vector<FmmSpec> levels;
    RationalMatrix bigU;  // (Mrad*Krad) x Rtot
    RationalMatrix bigV;  // (Krad*Nrad) x Rtot
    RationalMatrix bigW;  // (Mrad*Nrad) x Rtot
    std::size_t Mrad = 1;
    std::size_t Krad = 1;
    std::size_t Nrad = 1;
    std::size_t Rtot = 1;
    // Set by compose() once every level has passed the Brent check.
    bool validated = false;

    std::size_t depth() const { return levels.size(); }
    // "strassen+classical232" style identifier.
    std::string id() const;
};

class CompositionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Composes per-level specs into one multi-level algorithm. Every level is
/// Brent-checked; throws CompositionError on an empty list or a failing level.
MultiLevelSpec compose(std::span<const FmmSpec> specs);
MultiLevelSpec compose(std::initializer_list<FmmSpec> specs);

/// Composed coefficients as a one-level spec over the <Mrad,Krad,Nrad>
/// partition. bigU/bigV/bigW rows follow the recursive block order; flatten
/// permutes them into the plain row-major block order of FmmSpec, so the
/// result is a Brent-valid one-level algorithm in its own right.
FmmSpec flatten(const MultiLevelSpec& spec);

// Brent check of the composed coefficients (independent of the per-level checks).
ValidationReport validate_brent(const MultiLevelSpec& spec);

// serialize_spec(flatten(spec)) with the level chain recorded in comment lines.
std::string serialize_multilevel(const MultiLevelSpec& spec);

/// prod_l R_l / (mt_l kt_l nt_l): multiplies relative to classical recursion.
Rational effective_flop_ratio(const MultiLevelSpec& spec);

}  // namespace fmm
