#include "pxp/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

namespace pxp {

double degeneracy_tolerance(const Eigen::VectorXd& eigenvalues) {
    double radius = 0.0;
    if (eigenvalues.size() > 0) radius = eigenvalues.cwiseAbs().maxCoeff();
    return 1e-10 * std::max(1.0, radius);
}

void gauge_fix(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index best = 0;
    double best_abs = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    if (v[best] < 0.0) v = -v;
}

namespace {

Eigen::MatrixXd to_dense(const HamiltonianMatrix& h) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(h.dimension(), h.dimension());
    for (const auto& e : h.entries()) m(e.row, e.col) += e.value;
    return m;
}

// Checks H[perm(i), perm(j)] == H[i, j] for every stored entry.
bool commutes_with_permutation(const HamiltonianMatrix& h,
                               const std::vector<std::size_t>& perm) {
    for (const auto& e : h.entries()) {
        if (std::abs(h.coeff(perm[e.row], perm[e.col]) - e.value) > 1e-12) return false;
    }
    return true;
}

std::vector<std::size_t> symmetry_permutation(const ConstrainedBasis& basis,
                                              Config (*op)(Config, int)) {
    std::vector<std::size_t> perm(basis.dimension());
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        perm[i] = static_cast<std::size_t>(basis.index_of(op(basis.state(i), basis.length())));
    }
    return perm;
}

// B = U^T H U for one sector's sparse symmetrized columns.
Eigen::MatrixXd project_block(const HamiltonianMatrix& h, const SectorBasis& sector) {
    const std::size_t dim = h.dimension();
    const std::size_t d = sector.dimension();
    Eigen::MatrixXd hu = Eigen::MatrixXd::Zero(dim, d);
    const auto& entries = h.entries();
    for (std::size_t j = 0; j < d; ++j) {
        for (const auto& [idx, coeff] : sector.states()[j].column) {
            auto [begin, end] = h.row_range(idx);
            for (std::size_t e = begin; e < end; ++e) {
                // H column idx equals H row idx by symmetry.
                hu(entries[e].col, j) += entries[e].value * coeff;
            }
        }
    }
    Eigen::MatrixXd block(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double acc = 0.0;
            for (const auto& [idx, coeff] : sector.states()[i].column) {
                acc += coeff * hu(idx, j);
            }
            block(i, j) = acc;
        }
    }
    // Symmetrize away projection roundoff.
    return 0.5 * (block + block.transpose());
}

Eigen::VectorXd embed_column(const SectorBasis& sector, const Eigen::VectorXd& block_vec,
                             std::size_t full_dim) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(full_dim);
    for (std::size_t s = 0; s < sector.dimension(); ++s) {
        const double w = block_vec[s];
        if (w == 0.0) continue;
        for (const auto& [idx, coeff] : sector.states()[s].column) {
            out[idx] += w * coeff;
        }
    }
    return out;
}

} // namespace

EigenSystem diagonalize_full(const HamiltonianMatrix& h, std::size_t dense_limit) {
    if (h.dimension() > dense_limit) {
        throw ResourceLimitError(
            "dimension " + std::to_string(h.dimension()) + " exceeds dense limit " +
            std::to_string(dense_limit) + "; diagonalize by symmetry sector instead");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_dense(h));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("dense eigensolver failed to converge");
    }
    EigenSystem es;
    es.eigenvalues = solver.eigenvalues();
    es.eigenvectors = solver.eigenvectors();
    for (Eigen::Index c = 0; c < es.eigenvectors.cols(); ++c) {
        gauge_fix(es.eigenvectors.col(c));
    }
    return es;
}

void require_symmetries(const HamiltonianMatrix& h, bool require_reflection) {
    const ConstrainedBasis& basis = h.basis();
    if (!commutes_with_permutation(h, symmetry_permutation(basis, &translate))) {
        throw std::invalid_argument("matrix does not commute with translation");
    }
    if (require_reflection &&
        !commutes_with_permutation(h, symmetry_permutation(basis, &reflect))) {
        throw std::invalid_argument("matrix does not commute with reflection");
    }
}

std::vector<EigenSystem> diagonalize_sectors(const HamiltonianMatrix& h,
                                             const ConstrainedBasis& basis,
                                             const std::vector<SectorBasis>& sectors) {
    const bool parity_used =
        std::any_of(sectors.begin(), sectors.end(),
                    [](const SectorBasis& s) { return s.parity() != kParityUnresolved; });
    require_symmetries(h, parity_used);

    std::vector<EigenSystem> systems;
    systems.reserve(sectors.size());
    for (const SectorBasis& sector : sectors) {
        EigenSystem es;
        es.sector_label = sector.label();
        if (sector.dimension() == 0) {
            es.eigenvectors.resize(basis.dimension(), 0);
            systems.push_back(std::move(es));
            continue;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(project_block(h, sector));
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("sector eigensolver failed to converge");
        }
        es.eigenvalues = solver.eigenvalues();
        es.eigenvectors.resize(basis.dimension(), sector.dimension());
        for (std::size_t c = 0; c < sector.dimension(); ++c) {
            es.eigenvectors.col(c) = embed_column(sector, solver.eigenvectors().col(c),
                                                  basis.dimension());
            gauge_fix(es.eigenvectors.col(c));
        }
        systems.push_back(std::move(es));
    }
    return systems;
}

Eigen::VectorXd particle_hole_partner(const Eigen::VectorXd& v,
                                      const ConstrainedBasis& basis) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out[i] = particle_hole_sign(basis.state(i), basis.length()) * v[i];
    }
    out.normalize();
    return out;
}

SectorDiagonalization::SectorDiagonalization(const HamiltonianMatrix& h,
                                             const std::vector<SectorBasis>& sectors,
                                             int threads)
    : sectors_(&sectors) {
    const bool parity_used =
        std::any_of(sectors.begin(), sectors.end(),
                    [](const SectorBasis& s) { return s.parity() != kParityUnresolved; });
    require_symmetries(h, parity_used);

    full_dimension_ = h.dimension();
    blocks_.resize(sectors.size());
    const auto work = [&](std::size_t s) {
        const SectorBasis& sector = sectors[s];
        Block& block = blocks_[s];
        if (sector.dimension() == 0) return;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(project_block(h, sector));
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("sector eigensolver failed to converge");
        }
        block.eigenvalues = solver.eigenvalues();
        block.vectors = solver.eigenvectors();
    };
    if (threads <= 1) {
        for (std::size_t s = 0; s < sectors.size(); ++s) work(s);
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        const int n = std::min<int>(threads, static_cast<int>(sectors.size()));
        for (int t = 0; t < n; ++t) {
            pool.emplace_back([&] {
                for (std::size_t s = next.fetch_add(1); s < sectors.size();
                     s = next.fetch_add(1)) {
                    if (failed.load()) return;
                    try {
                        work(s);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!failed.exchange(true)) error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failed.load()) std::rethrow_exception(error);
    }
    for (const SectorBasis& s : sectors) total_dimension_ += s.dimension();
}

Eigen::VectorXd SectorDiagonalization::merged_eigenvalues() const {
    Eigen::VectorXd all(total_dimension_);
    Eigen::Index at = 0;
    for (const Block& b : blocks_) {
        for (Eigen::Index i = 0; i < b.eigenvalues.size(); ++i) all[at++] = b.eigenvalues[i];
    }
    std::sort(all.begin(), all.end());
    return all;
}

std::vector<std::pair<double, double>> SectorDiagonalization::overlaps(
    const Eigen::VectorXd& psi0) const {
    if (static_cast<std::size_t>(psi0.size()) != full_dimension_) {
        throw std::invalid_argument("state vector does not match the operator basis");
    }
    std::vector<std::pair<double, double>> result;
    result.reserve(total_dimension_);
    for (std::size_t s = 0; s < sectors_->size(); ++s) {
        const SectorBasis& sector = (*sectors_)[s];
        if (sector.dimension() == 0) continue;
        Eigen::VectorXd projected(sector.dimension());
        for (std::size_t j = 0; j < sector.dimension(); ++j) {
            double acc = 0.0;
            for (const auto& [idx, coeff] : sector.states()[j].column) {
                acc += coeff * psi0[idx];
            }
            projected[j] = acc;
        }
        const Eigen::VectorXd amps = blocks_[s].vectors.transpose() * projected;
        for (Eigen::Index c = 0; c < amps.size(); ++c) {
            result.emplace_back(blocks_[s].eigenvalues[c], amps[c]);
        }
    }
    std::stable_sort(result.begin(), result.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    return result;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> SectorDiagonalization::lowest(
    std::size_t count) const {
    count = std::min(count, total_dimension_);
    struct Ref {
        double value;
        std::size_t sector;
        Eigen::Index column;
    };
    std::vector<Ref> refs;
    refs.reserve(total_dimension_);
    for (std::size_t s = 0; s < blocks_.size(); ++s) {
        for (Eigen::Index c = 0; c < blocks_[s].eigenvalues.size(); ++c) {
            refs.push_back({blocks_[s].eigenvalues[c], s, c});
        }
    }
    std::stable_sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
        return a.value != b.value ? a.value < b.value
                                  : (a.sector != b.sector ? a.sector < b.sector
                                                          : a.column < b.column);
    });
    Eigen::VectorXd values(count);
    Eigen::MatrixXd vectors(full_dimension_, count);
    for (std::size_t i = 0; i < count; ++i) {
        values[i] = refs[i].value;
        vectors.col(i) = embed_column((*sectors_)[refs[i].sector],
                                      blocks_[refs[i].sector].vectors.col(refs[i].column),
                                      full_dimension_);
        gauge_fix(vectors.col(i));
    }
    return {std::move(values), std::move(vectors)};
}

EigenSystem SectorDiagonalization::embed(std::size_t sector_index) const {
    const SectorBasis& sector = (*sectors_)[sector_index];
    const Block& block = blocks_[sector_index];
    EigenSystem es;
    es.sector_label = sector.label();
    es.eigenvalues = block.eigenvalues;
    es.eigenvectors.resize(full_dimension_, sector.dimension());
    for (std::size_t c = 0; c < sector.dimension(); ++c) {
        es.eigenvectors.col(c) = embed_column(sector, block.vectors.col(c), full_dimension_);
        gauge_fix(es.eigenvectors.col(c));
    }
    return es;
}

void dump_spectrum_csv(std::ostream& out, const std::vector<EigenSystem>& systems) {
    out << "sector,index,eigenvalue\n";
    char buf[96];
    for (const EigenSystem& es : systems) {
        const std::string label = es.sector_label.empty() ? "full" : es.sector_label;
        for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%s,%lld,%.17g\n", label.c_str(),
                          static_cast<long long>(i), es.eigenvalues[i]);
            out << buf;
        }
    }
}

void save_eigenvectors(const std::string& path, int length, const Eigen::MatrixXd& vectors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const char magic[4] = {'P', 'X', 'P', 'V'};
    out.write(magic, 4);
    const std::int32_t l32 = length;
    const std::uint64_t dim = vectors.rows();
    const std::uint64_t count = vectors.cols();
    out.write(reinterpret_cast<const char*>(&l32), sizeof(l32));
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    for (std::uint64_t r = 0; r < dim; ++r) {
        for (std::uint64_t c = 0; c < count; ++c) {
            const double v = vectors(r, c);
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
    }
}

Eigen::MatrixXd load_eigenvectors(const std::string& path, int* length_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (std::memcmp(magic, "PXPV", 4) != 0) {
        throw std::runtime_error(path + " is not an eigenvector container");
    }
    std::int32_t l32 = 0;
    std::uint64_t dim = 0, count = 0;
    in.read(reinterpret_cast<char*>(&l32), sizeof(l32));
    in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    Eigen::MatrixXd vectors(dim, count);
    for (std::uint64_t r = 0; r < dim; ++r) {
        for (std::uint64_t c = 0; c < count; ++c) {
            double v = 0.0;
            in.read(reinterpret_cast<char*>(&v), sizeof(v));
            vectors(r, c) = v;
        }
    }
    if (!in) throw std::runtime_error("truncated eigenvector container: " + path);
    if (length_out) *length_out = l32;
    return vectors;
}

} // namespace pxp
