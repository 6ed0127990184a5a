#include "pxp/basis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pxp {

namespace {

Config length_mask(int length) {
    return length == 64 ? ~Config{0} : (Config{1} << length) - 1;
}

void check_length(int length) {
    if (length < 4 || length > kMaxChainLength || length % 2 != 0) {
        throw std::invalid_argument("chain length must be even and in [4, " +
                                    std::to_string(kMaxChainLength) + "], got " +
                                    std::to_string(length));
    }
}

} // namespace

bool blockade_ok(Config c, int length) {
    return (c & translate(c, length)) == 0;
}

Config translate(Config c, int length) {
    const Config m = length_mask(length);
    return ((c << 1) | (c >> (length - 1))) & m;
}

Config reflect(Config c, int length) {
    Config out = 0;
    for (int b = 0; b < length; ++b) {
        if (c & (Config{1} << b)) out |= Config{1} << (length - 1 - b);
    }
    return out;
}

int particle_hole_sign(Config c, int length) {
    return (length - popcount(c)) % 2 == 0 ? +1 : -1;
}

int popcount(Config c) {
    return std::popcount(c);
}

ConstrainedBasis::ConstrainedBasis(int length) : length_(length) {
    check_length(length);
    // Enumerate open-chain masks without adjacent set bits, then drop the
    // ones where the cyclic wrap pair (site 1, site L) is both up.
    states_.reserve(1u << (length / 2));
    std::vector<std::pair<Config, int>> stack;
    stack.emplace_back(Config{0}, 0);
    while (!stack.empty()) {
        auto [mask, pos] = stack.back();
        stack.pop_back();
        if (pos == length) {
            const bool wrap = (mask & 1) && (mask >> (length - 1));
            if (!wrap) states_.push_back(mask);
            continue;
        }
        const bool prev_up = pos > 0 && (mask >> (pos - 1)) & 1;
        if (!prev_up) stack.emplace_back(mask | (Config{1} << pos), pos + 1);
        stack.emplace_back(mask, pos + 1);
    }
    std::sort(states_.begin(), states_.end());
}

std::ptrdiff_t ConstrainedBasis::index_of(Config c) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), c);
    if (it == states_.end() || *it != c) return -1;
    return it - states_.begin();
}

std::string to_bitstring(Config c, int length) {
    std::string s(length, '0');
    for (int b = 0; b < length; ++b) {
        if (c & (Config{1} << b)) s[b] = '1';
    }
    return s;
}

void ConstrainedBasis::dump_csv(std::ostream& out) const {
    out << "index,bitstring,popcount\n";
    for (std::size_t i = 0; i < states_.size(); ++i) {
        out << i << ',' << to_bitstring(states_[i], length_) << ','
            << popcount(states_[i]) << '\n';
    }
}

namespace {

struct Orbit {
    Config rep;
    int size;
};

// Translation orbits, keyed by their minimal-mask representative, ascending.
std::vector<Orbit> translation_orbits(const ConstrainedBasis& basis) {
    std::vector<Orbit> orbits;
    const int L = basis.length();
    for (Config c : basis.states()) {
        Config t = c;
        int size = 0;
        bool minimal = true;
        do {
            t = translate(t, L);
            ++size;
            if (t < c) {
                minimal = false;
                break;
            }
        } while (t != c);
        if (minimal) orbits.push_back({c, size});
    }
    return orbits;
}

Config orbit_representative(Config c, int L) {
    Config best = c;
    Config t = translate(c, L);
    while (t != c) {
        best = std::min(best, t);
        t = translate(t, L);
    }
    return best;
}

// Shift q with translate^q(rep) == target; both must share an orbit.
int shift_to(Config rep, Config target, int L) {
    Config t = rep;
    for (int q = 0; q < L; ++q) {
        if (t == target) return q;
        t = translate(t, L);
    }
    throw std::logic_error("configurations not in the same translation orbit");
}

int canonical_momentum(int momentum_index, int L) {
    if (momentum_index <= -L / 2 || momentum_index > L / 2) {
        throw std::invalid_argument("momentum index " + std::to_string(momentum_index) +
                                    " outside -L/2+1..L/2 for L = " + std::to_string(L));
    }
    return std::abs(momentum_index);
}

void check_parity_request(int momentum, int parity, int L) {
    if (parity != kParityEven && parity != kParityOdd && parity != kParityUnresolved) {
        throw std::invalid_argument("parity must be +1, -1 or 0 (unresolved)");
    }
    if (parity != kParityUnresolved && momentum != 0 && 2 * momentum != L) {
        throw std::invalid_argument(
            "parity can be resolved only at k = 0 or k = pi, not momentum index " +
            std::to_string(momentum));
    }
}

// Exact phase cos(k r) for k in {0, pi}.
int real_momentum_phase(int momentum, int r) {
    if (momentum == 0) return 1;
    return r % 2 == 0 ? 1 : -1; // k = pi
}

SectorState make_state(const ConstrainedBasis& basis, Config rep, int orbit_size,
                       const std::map<Config, double>& coeffs) {
    SectorState st;
    st.representative = rep;
    st.orbit_size = orbit_size;
    double norm2 = 0.0;
    for (const auto& [c, v] : coeffs) norm2 += v * v;
    st.normalization = std::sqrt(norm2);
    st.column.reserve(coeffs.size());
    for (const auto& [c, v] : coeffs) {
        if (std::abs(v) < 1e-12) continue;
        st.column.emplace_back(static_cast<std::size_t>(basis.index_of(c)),
                               v / st.normalization);
    }
    return st;
}

} // namespace

std::string SectorBasis::label() const {
    std::string s = "k=" + std::to_string(momentum_);
    if (is_momentum_doublet()) s += "(+-)";
    if (parity_ != kParityUnresolved) s += parity_ == kParityEven ? ",p=+1" : ",p=-1";
    return s;
}

SectorBasis build_sector_basis(const ConstrainedBasis& basis, int momentum_index,
                               int parity) {
    const int L = basis.length();
    const int n = canonical_momentum(momentum_index, L);
    check_parity_request(n, parity, L);

    SectorBasis sector;
    sector.length_ = L;
    sector.momentum_ = n;
    sector.parity_ = parity;

    const bool real_momentum = n == 0 || 2 * n == L;
    const double k = 2.0 * M_PI * n / L;

    for (const Orbit& orbit : translation_orbits(basis)) {
        if ((static_cast<long long>(n) * orbit.size) % L != 0) continue;

        if (!real_momentum) {
            // +-k doublet: cosine and sine combinations are both present and
            // orthogonal for interior momenta.
            std::map<Config, double> cos_coeffs, sin_coeffs;
            Config t = orbit.rep;
            for (int r = 0; r < L; ++r) {
                cos_coeffs[t] += std::cos(k * r);
                sin_coeffs[t] += -std::sin(k * r);
                t = translate(t, L);
            }
            sector.states_.push_back(make_state(basis, orbit.rep, orbit.size, cos_coeffs));
            sector.states_.push_back(make_state(basis, orbit.rep, orbit.size, sin_coeffs));
            continue;
        }

        if (parity == kParityUnresolved) {
            std::map<Config, double> coeffs;
            Config t = orbit.rep;
            for (int r = 0; r < L; ++r) {
                coeffs[t] += real_momentum_phase(n, r);
                t = translate(t, L);
            }
            sector.states_.push_back(make_state(basis, orbit.rep, orbit.size, coeffs));
            continue;
        }

        // Parity-resolved block at k = 0 or pi. Reflection either maps the
        // orbit to itself (the state survives in exactly one parity) or pairs
        // two orbits (one state in each parity, handled at the smaller rep).
        const Config reflected_rep = orbit_representative(reflect(orbit.rep, L), L);
        if (reflected_rep < orbit.rep) continue;

        std::map<Config, double> coeffs;
        Config t = orbit.rep;
        Config rt = reflect(orbit.rep, L);
        for (int r = 0; r < L; ++r) {
            const int phase = real_momentum_phase(n, r);
            coeffs[t] += phase;
            coeffs[rt] += parity * phase;
            t = translate(t, L);
            rt = translate(rt, L);
        }
        double norm2 = 0.0;
        for (const auto& [c, v] : coeffs) norm2 += v * v;
        if (norm2 < 1e-6) continue; // annihilated by the parity projector
        sector.states_.push_back(make_state(basis, orbit.rep, orbit.size, coeffs));
    }
    return sector;
}

std::vector<SectorBasis> enumerate_sectors(const ConstrainedBasis& basis) {
    const int L = basis.length();
    std::vector<SectorBasis> sectors;
    sectors.push_back(build_sector_basis(basis, 0, kParityEven));
    sectors.push_back(build_sector_basis(basis, 0, kParityOdd));
    for (int n = 1; 2 * n < L; ++n) sectors.push_back(build_sector_basis(basis, n));
    sectors.push_back(build_sector_basis(basis, L / 2, kParityEven));
    sectors.push_back(build_sector_basis(basis, L / 2, kParityOdd));
    return sectors;
}

std::size_t sector_dimension(const ConstrainedBasis& basis, int momentum_index,
                             int parity) {
    const int L = basis.length();
    const int n = canonical_momentum(momentum_index, L);
    check_parity_request(n, parity, L);
    const bool real_momentum = n == 0 || 2 * n == L;

    std::size_t dim = 0;
    for (const Orbit& orbit : translation_orbits(basis)) {
        if ((static_cast<long long>(n) * orbit.size) % L != 0) continue;
        if (!real_momentum) {
            dim += 2;
            continue;
        }
        if (parity == kParityUnresolved) {
            dim += 1;
            continue;
        }
        const Config reflected = reflect(orbit.rep, L);
        const Config reflected_rep = orbit_representative(reflected, L);
        if (reflected_rep < orbit.rep) continue;
        if (reflected_rep != orbit.rep) {
            dim += 1; // orbit pair: one state in each parity
            continue;
        }
        const int q = shift_to(orbit.rep, reflected, L);
        const int self_parity = n == 0 ? kParityEven
                                       : (q % 2 == 0 ? kParityEven : kParityOdd);
        if (self_parity == parity) dim += 1;
    }
    return dim;
}

} // namespace pxp
