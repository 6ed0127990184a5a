#include "pxp/operators.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace pxp {

namespace {

bool bit(Config c, int b) { return (c >> b) & 1; }

// Sort row-major and merge duplicate coordinates (terms can hit the same
// pair twice, e.g. next-nearest neighbours on L = 4).
template <typename Entry>
std::vector<Entry> normalize_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Entry> merged;
    merged.reserve(entries.size());
    for (const Entry& e : entries) {
        if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
            merged.back().value += e.value;
        } else {
            merged.push_back(e);
        }
    }
    std::erase_if(merged, [](const Entry& e) { return std::abs(e.value) == 0.0; });
    return merged;
}

} // namespace

HamiltonianMatrix::HamiltonianMatrix(const ConstrainedBasis& basis,
                                     std::vector<Entry> entries)
    : basis_(&basis), entries_(normalize_entries(std::move(entries))) {
    for (const Entry& e : entries_) {
        if (e.row >= dimension() || e.col >= dimension()) {
            throw std::invalid_argument("matrix entry outside basis dimension");
        }
    }
    build_row_index();
}

void HamiltonianMatrix::build_row_index() {
    row_start_.assign(dimension() + 1, 0);
    for (const Entry& e : entries_) ++row_start_[e.row + 1];
    for (std::size_t r = 0; r < dimension(); ++r) row_start_[r + 1] += row_start_[r];
}

void HamiltonianMatrix::apply(const double* x, double* y) const {
    std::fill(y, y + dimension(), 0.0);
    for (const Entry& e : entries_) y[e.row] += e.value * x[e.col];
}

double HamiltonianMatrix::quadratic_form(const double* v, const double* w) const {
    double acc = 0.0;
    for (const Entry& e : entries_) acc += v[e.row] * e.value * w[e.col];
    return acc;
}

double HamiltonianMatrix::coeff(std::size_t row, std::size_t col) const {
    auto [begin, end] = row_range(row);
    for (std::size_t i = begin; i < end; ++i) {
        if (entries_[i].col == col) return entries_[i].value;
    }
    return 0.0;
}

std::pair<std::size_t, std::size_t> HamiltonianMatrix::row_range(std::size_t row) const {
    return {row_start_[row], row_start_[row + 1]};
}

HamiltonianMatrix operator+(const HamiltonianMatrix& a, const HamiltonianMatrix& b) {
    if (a.basis_ != b.basis_) {
        throw std::invalid_argument("operator sum requires a shared basis");
    }
    std::vector<HamiltonianMatrix::Entry> entries = a.entries_;
    entries.insert(entries.end(), b.entries_.begin(), b.entries_.end());
    return HamiltonianMatrix(*a.basis_, std::move(entries));
}

HamiltonianMatrix operator*(double s, const HamiltonianMatrix& h) {
    std::vector<HamiltonianMatrix::Entry> entries = h.entries_;
    for (auto& e : entries) e.value *= s;
    return HamiltonianMatrix(*h.basis_, std::move(entries));
}

void HamiltonianMatrix::dump_csv(std::ostream& out, const std::string& description) const {
    out << "# " << description << '\n';
    out << "row,col,value\n";
    char buf[64];
    for (const Entry& e : entries_) {
        std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g\n", e.row, e.col, e.value);
        out << buf;
    }
}

ObservableMatrix::ObservableMatrix(const ConstrainedBasis& basis,
                                   std::vector<Entry> entries)
    : basis_(&basis) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    entries_ = std::move(entries);
    for (const Entry& e : entries_) {
        if (e.row >= dimension() || e.col >= dimension()) {
            throw std::invalid_argument("matrix entry outside basis dimension");
        }
    }
}

void ObservableMatrix::apply(const std::complex<double>* x,
                             std::complex<double>* y) const {
    std::fill(y, y + dimension(), std::complex<double>{0.0, 0.0});
    for (const Entry& e : entries_) y[e.row] += e.value * x[e.col];
}

HamiltonianMatrix build_pxp(const ConstrainedBasis& basis, double omega) {
    const int L = basis.length();
    std::vector<HamiltonianMatrix::Entry> entries;
    entries.reserve(basis.dimension() * L / 2);
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const Config c = basis.state(i);
        for (int b = 0; b < L; ++b) {
            const int left = (b + L - 1) % L;
            const int right = (b + 1) % L;
            if (bit(c, left) || bit(c, right)) continue; // blockaded flip
            const Config image = c ^ (Config{1} << b);
            const std::ptrdiff_t j = basis.index_of(image);
            entries.push_back({static_cast<std::size_t>(j), i, omega / 2.0});
        }
    }
    return HamiltonianMatrix(basis, std::move(entries));
}

HamiltonianMatrix build_prequench(const ConstrainedBasis& basis, double delta,
                                  double g2x, double g2y) {
    const int L = basis.length();
    std::vector<HamiltonianMatrix::Entry> entries;
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const Config c = basis.state(i);
        const int ups = popcount(c);
        entries.push_back({i, i, delta / 2.0 * (2 * ups - L)});

        // sigma^x sigma^x + sigma^y sigma^y on next-nearest pairs (j, j+2):
        // both terms flip the pair; their interference gives g2x + g2y on
        // anti-aligned pairs and g2x - g2y on aligned ones.
        for (int b = 0; b < L; ++b) {
            const int b2 = (b + 2) % L;
            const Config image = c ^ (Config{1} << b) ^ (Config{1} << b2);
            const std::ptrdiff_t j = basis.index_of(image);
            if (j < 0) continue; // image violates the blockade
            const bool aligned = bit(c, b) == bit(c, b2);
            const double amp = aligned ? g2x - g2y : g2x + g2y;
            if (amp == 0.0) continue;
            entries.push_back({static_cast<std::size_t>(j), i, amp});
        }
    }
    return HamiltonianMatrix(basis, std::move(entries));
}

HamiltonianMatrix build_staggered(const ConstrainedBasis& basis) {
    const int L = basis.length();
    std::vector<HamiltonianMatrix::Entry> entries;
    entries.reserve(basis.dimension());
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const Config c = basis.state(i);
        int value = 0;
        for (int b = 0; b < L; ++b) {
            const int sz = bit(c, b) ? 1 : -1;
            const int sign = (b + 1) % 2 == 0 ? 1 : -1; // site j = b+1 carries (-1)^j
            value += sign * sz;
        }
        if (value != 0) entries.push_back({i, i, static_cast<double>(value)});
    }
    return HamiltonianMatrix(basis, std::move(entries));
}

HamiltonianMatrix build_zfield(const ConstrainedBasis& basis) {
    const int L = basis.length();
    std::vector<HamiltonianMatrix::Entry> entries;
    entries.reserve(basis.dimension());
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const int value = 2 * popcount(basis.state(i)) - L;
        if (value != 0) entries.push_back({i, i, static_cast<double>(value)});
    }
    return HamiltonianMatrix(basis, std::move(entries));
}

HamiltonianMatrix build_postquench(const ConstrainedBasis& basis, double omega,
                                   double epsilon) {
    HamiltonianMatrix h = build_pxp(basis, omega);
    if (epsilon == 0.0) return h;
    return h + epsilon * build_zfield(basis);
}

ObservableMatrix build_local_observable(const ConstrainedBasis& basis, int site,
                                        PauliAxis axis) {
    const int L = basis.length();
    if (site < 1 || site > L) {
        throw std::invalid_argument("site must be in 1..L");
    }
    const int b = site - 1;
    std::vector<ObservableMatrix::Entry> entries;
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const Config c = basis.state(i);
        if (axis == PauliAxis::z) {
            entries.push_back({i, i, {bit(c, b) ? 1.0 : -1.0, 0.0}});
            continue;
        }
        const Config image = c ^ (Config{1} << b);
        const std::ptrdiff_t j = basis.index_of(image);
        if (j < 0) continue;
        if (axis == PauliAxis::x) {
            entries.push_back({static_cast<std::size_t>(j), i, {1.0, 0.0}});
        } else {
            // sigma^y: |down> -> i|up>, |up> -> -i|down>
            const double sign = bit(c, b) ? -1.0 : 1.0;
            entries.push_back({static_cast<std::size_t>(j), i, {0.0, sign}});
        }
    }
    return ObservableMatrix(basis, std::move(entries));
}

} // namespace pxp
