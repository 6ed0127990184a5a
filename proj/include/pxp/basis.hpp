#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace pxp {

/// A spin configuration of the chain, stored as a bitmask.
///
/// Site indices are 1-based in all documentation (j = 1..L, periodic);
/// site j is stored in bit j-1. A set bit means the atom at that site is
/// excited (up). Valid configurations never have two cyclically adjacent
/// set bits (the blockade constraint).
using Config = std::uint64_t;

/// Maximum chain length supported by the 64-bit mask representation.
inline constexpr int kMaxChainLength = 32;

/// True if no two cyclically adjacent sites are both up.
bool blockade_ok(Config c, int length);

/// Cyclic translation by one site, j -> j+1 (bit b moves to bit (b+1) mod L).
Config translate(Config c, int length);

/// Reflection around the chain mid-point, j -> L-j+1.
Config reflect(Config c, int length);

/// Eigenvalue of the excitation parity operator (product of sigma^z over all
/// sites) on a z-basis configuration: (-1)^(number of down sites).
int particle_hole_sign(Config c, int length);

/// Number of up sites.
int popcount(Config c);

/// The blockaded Hilbert space of a periodic chain of even length.
///
/// States are enumerated in ascending mask order; reverse lookup is a binary
/// search. The dimension equals the Lucas number of the chain length.
class ConstrainedBasis {
public:
    /// Enumerates all valid configurations. Throws std::invalid_argument if
    /// the length is odd, below 4 or above kMaxChainLength.
    explicit ConstrainedBasis(int length);

    int length() const { return length_; }
    std::size_t dimension() const { return states_.size(); }
    Config state(std::size_t i) const { return states_[i]; }
    const std::vector<Config>& states() const { return states_; }

    /// Ordinal of a configuration, or -1 if it is not in the basis.
    std::ptrdiff_t index_of(Config c) const;

    /// CSV dump: index, bitstring (site 1 first), popcount.
    void dump_csv(std::ostream& out) const;

private:
    int length_;
    std::vector<Config> states_;
};

/// Site-1-first bitstring of a configuration ('0' = down, '1' = up).
std::string to_bitstring(Config c, int length);

inline constexpr int kParityEven = +1;
inline constexpr int kParityOdd = -1;
inline constexpr int kParityUnresolved = 0;

/// One orthonormal basis state of a symmetry sector, stored as its
/// translation-orbit representative plus the explicit symmetrized vector
/// over the constrained basis.
struct SectorState {
    Config representative = 0;
    int orbit_size = 0;
    /// Norm of the unnormalized symmetrized sum over the group orbit.
    double normalization = 0.0;
    /// Sparse column of the orthonormal state: (basis index, coefficient).
    std::vector<std::pair<std::size_t, double>> column;
};

/// Basis of one (momentum, parity) symmetry block.
///
/// Momentum indices are canonicalized to n in 0..L/2 (k = 2*pi*n/L).
/// Blocks at k = 0 and k = pi may be parity-resolved; every other momentum
/// is kept together with its conjugate -k as one doublet block spanned by
/// real cosine/sine combinations (two states per translation orbit). This
/// keeps all sector bases real while covering the full space.
class SectorBasis {
public:
    int length() const { return length_; }
    int momentum_index() const { return momentum_; }
    int parity() const { return parity_; }
    /// True for 0 < n < L/2 blocks, which carry both +n and -n.
    bool is_momentum_doublet() const { return momentum_ > 0 && 2 * momentum_ < length_; }
    std::size_t dimension() const { return states_.size(); }
    const std::vector<SectorState>& states() const { return states_; }
    std::string label() const;

private:
    friend SectorBasis build_sector_basis(const ConstrainedBasis&, int, int);
    int length_ = 0;
    int momentum_ = 0;
    int parity_ = kParityUnresolved;
    std::vector<SectorState> states_;
};

/// Builds the symmetrized basis of one sector.
///
/// momentum_index accepts any n in -L/2+1 .. L/2 and canonicalizes to |n|.
/// Parity may be resolved only at k = 0 and k = pi; requesting it
/// elsewhere throws std::invalid_argument.
SectorBasis build_sector_basis(const ConstrainedBasis& basis, int momentum_index,
                               int parity = kParityUnresolved);

/// The full decomposition: (0,+1), (0,-1), doublets n = 1..L/2-1, (pi,+1),
/// (pi,-1). Sector dimensions sum to the constrained dimension.
std::vector<SectorBasis> enumerate_sectors(const ConstrainedBasis& basis);

/// Dimension of a sector without materializing the symmetrized vectors
/// (orbit counting only); used for large chains where only the count is
/// needed. Momentum/parity rules as in build_sector_basis.
std::size_t sector_dimension(const ConstrainedBasis& basis, int momentum_index,
                             int parity = kParityUnresolved);

} // namespace pxp
