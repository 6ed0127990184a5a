#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracle_helpers.hpp"
#include "pxp/basis.hpp"
#include "pxp/operators.hpp"
#include "pxp/spectra.hpp"

using namespace pxp;

namespace {

double residual(const HamiltonianMatrix& h, const Eigen::VectorXd& v, double lambda) {
    Eigen::VectorXd hv(v.size());
    h.apply(v.data(), hv.data());
    return (hv - lambda * v).norm();
}

Eigen::VectorXd sorted(Eigen::VectorXd v) {
    std::sort(v.data(), v.data() + v.size());
    return v;
}

} // namespace

TEST_CASE("dense eigensolve: residuals, orthonormality, ordering, gauge") {
    ConstrainedBasis basis(8);
    const HamiltonianMatrix h = build_prequench(basis, -1.0, 0.15, -0.3);
    const EigenSystem sys = diagonalize_full(h);
    REQUIRE(sys.count() == basis.dimension());
    const auto n = static_cast<Eigen::Index>(sys.count());
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        CHECK(sys.eigenvalues[i] <= sys.eigenvalues[i + 1]);
    CHECK((sys.eigenvectors.transpose() * sys.eigenvectors - Eigen::MatrixXd::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd v = sys.eigenvectors.col(i);
        CHECK(residual(h, v, sys.eigenvalues[i]) < 1e-12);
        Eigen::Index arg;
        v.cwiseAbs().maxCoeff(&arg);
        CHECK(v[arg] > 0.0);
    }
}

TEST_CASE("gauge_fix makes the dominant component positive, lowest index on ties") {
    Eigen::VectorXd v(4);
    v << 0.1, -0.9, 0.2, 0.3;
    gauge_fix(v);
    CHECK(v[1] == 0.9);
    CHECK(v[0] == -0.1);

    Eigen::VectorXd w(4);
    w << -0.5, 0.5, -0.5, 0.1; // tie on |w|: index 0 decides
    gauge_fix(w);
    CHECK(w[0] == 0.5);
    CHECK(w[1] == -0.5);

    Eigen::VectorXd already(3);
    already << 0.0, 1.0, 0.0;
    Eigen::VectorXd copy = already;
    gauge_fix(copy);
    CHECK(copy == already);
}

TEST_CASE("sector route reproduces the dense spectrum as a multiset") {
    ConstrainedBasis basis(10);
    const auto sectors = enumerate_sectors(basis);
    for (const HamiltonianMatrix& h :
         {build_pxp(basis, 1.0), build_prequench(basis, -1.0, 0.1, -0.2)}) {
        const Eigen::VectorXd dense = diagonalize_full(h).eigenvalues;
        const SectorDiagonalization sd(h, sectors);
        const Eigen::VectorXd merged = sd.merged_eigenvalues();
        REQUIRE(merged.size() == dense.size());
        CHECK((merged - dense).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("embedded sector eigenvectors diagonalize the full operator") {
    ConstrainedBasis basis(8);
    const auto sectors = enumerate_sectors(basis);
    const HamiltonianMatrix h = build_pxp(basis, 1.0);
    const SectorDiagonalization sd(h, sectors);
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    Eigen::MatrixXd all(dim, dim);
    Eigen::Index col = 0;
    for (std::size_t s = 0; s < sectors.size(); ++s) {
        const EigenSystem sys = sd.embed(s);
        CHECK(sys.count() == sectors[s].dimension());
        for (std::size_t i = 0; i < sys.count(); ++i) {
            const Eigen::VectorXd v = sys.eigenvectors.col(static_cast<Eigen::Index>(i));
            CHECK(residual(h, v, sys.eigenvalues[static_cast<Eigen::Index>(i)]) < 1e-10);
            all.col(col++) = v;
        }
    }
    REQUIRE(col == dim);
    CHECK((all.transpose() * all - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() <
          1e-10);
}

TEST_CASE("particle-hole partner reflects the flip spectrum") {
    ConstrainedBasis basis(8);
    const HamiltonianMatrix h = build_pxp(basis, 1.0);
    const EigenSystem sys = diagonalize_full(h);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(sys.count()); i += 5) {
        const Eigen::VectorXd v = sys.eigenvectors.col(i);
        const Eigen::VectorXd w = particle_hole_partner(v, basis);
        CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(residual(h, w, -sys.eigenvalues[i]) < 1e-10);
        const Eigen::VectorXd back = particle_hole_partner(w, basis);
        CHECK((back - v).norm() < 1e-14); // normalization rounding only
    }
}

TEST_CASE("unperturbed degenerate ground pair sits in the expected blocks") {
    // with no exchange terms the two symmetry-broken ground states split
    // across (k=0, even) and (k=pi, odd)
    ConstrainedBasis basis(8);
    const auto sectors = enumerate_sectors(basis);
    const HamiltonianMatrix h = build_prequench(basis, -1.0, 0.0, 0.0);
    const SectorDiagonalization sd(h, sectors);
    const double global = sd.merged_eigenvalues()[0];
    double e_zero_even = 1e300, e_pi_odd = 1e300, e_other = 1e300;
    for (std::size_t s = 0; s < sectors.size(); ++s) {
        if (sd.blocks()[s].eigenvalues.size() == 0) continue;
        const double e = sd.blocks()[s].eigenvalues[0];
        if (sectors[s].momentum_index() == 0 && sectors[s].parity() == kParityEven)
            e_zero_even = e;
        else if (2 * sectors[s].momentum_index() == 8 && sectors[s].parity() == kParityOdd)
            e_pi_odd = e;
        else
            e_other = std::min(e_other, e);
    }
    CHECK(e_zero_even == doctest::Approx(global).epsilon(1e-12));
    CHECK(e_pi_odd == doctest::Approx(global).epsilon(1e-12));
    CHECK(e_other > global + 0.1);
}

TEST_CASE("lowest eigenpairs agree with the dense route") {
    ConstrainedBasis basis(10);
    const auto sectors = enumerate_sectors(basis);
    const HamiltonianMatrix h = build_prequench(basis, 0.7, -0.35, 0.1);
    const SectorDiagonalization sd(h, sectors);
    const auto [evals, evecs] = sd.lowest(3);
    const EigenSystem dense = diagonalize_full(h);
    REQUIRE(evals.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(evals[i] == doctest::Approx(dense.eigenvalues[i]).epsilon(1e-12));
        CHECK(residual(h, evecs.col(i), evals[i]) < 1e-10);
        // compare states only where the level is isolated
        const bool isolated = (i == 0 || evals[i] - evals[i - 1] > 1e-6) &&
                              (i == 2 ? dense.eigenvalues[3] - evals[i] > 1e-6
                                      : evals[i + 1] - evals[i] > 1e-6);
        if (isolated)
            CHECK(std::abs(evecs.col(i).dot(dense.eigenvectors.col(i))) ==
                  doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK((evecs.transpose() * evecs - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-10);
}

TEST_CASE("threaded block solve is bit-identical to the serial one") {
    ConstrainedBasis basis(12);
    const auto sectors = enumerate_sectors(basis);
    const HamiltonianMatrix h = build_prequench(basis, -1.0, 0.2, -0.1);
    const SectorDiagonalization serial(h, sectors, 1);
    const SectorDiagonalization threaded(h, sectors, 4);
    const Eigen::VectorXd a = serial.merged_eigenvalues();
    const Eigen::VectorXd b = threaded.merged_eigenvalues();
    REQUIRE(a.size() == b.size());
    CHECK(a == b);
    const auto [ea, va] = serial.lowest(3);
    const auto [eb, vb] = threaded.lowest(3);
    CHECK(ea == eb);
    CHECK(va == vb);
}

TEST_CASE("dense solve refuses dimensions above the limit") {
    ConstrainedBasis basis(8); // dimension 47
    const HamiltonianMatrix h = build_pxp(basis, 1.0);
    CHECK_THROWS_AS(diagonalize_full(h, 10), ResourceLimitError);
    CHECK_NOTHROW(diagonalize_full(h, 47));
}

TEST_CASE("empty sectors yield empty blocks and drop out of the merge") {
    // at L=8 the (k=0, odd) sector is empty
    ConstrainedBasis basis(8);
    const auto sectors = enumerate_sectors(basis);
    REQUIRE(sectors[1].momentum_index() == 0);
    REQUIRE(sectors[1].parity() == kParityOdd);
    REQUIRE(sectors[1].dimension() == 0);
    const SectorDiagonalization sd(build_pxp(basis, 1.0), sectors);
    CHECK(sd.blocks()[1].eigenvalues.size() == 0);
    CHECK(sd.total_dimension() == basis.dimension());
    CHECK(sd.merged_eigenvalues().size() == static_cast<Eigen::Index>(basis.dimension()));
}

TEST_CASE("eigenvector container round trip") {
    const std::filesystem::path path =
        std::filesystem::temp_directory_path() / "pxp_vectors_test.bin";
    Eigen::MatrixXd m(5, 3);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 3; ++j) m(i, j) = 0.1 * static_cast<double>(i) - 1.7 * static_cast<double>(j);
    save_eigenvectors(path.string(), 10, m);
    int length = 0;
    const Eigen::MatrixXd back = load_eigenvectors(path.string(), &length);
    CHECK(length == 10);
    CHECK(back == m);
    std::filesystem::remove(path);

    const std::filesystem::path bad = std::filesystem::temp_directory_path() / "pxp_badmagic.bin";
    {
        std::ofstream out(bad, std::ios::binary);
        out << "NOPE garbage";
    }
    CHECK_THROWS(load_eigenvectors(bad.string()));
    std::filesystem::remove(bad);
    CHECK_THROWS(load_eigenvectors("/nonexistent/dir/file.bin"));
}

TEST_CASE("degeneracy tolerance scales with the spectral radius") {
    Eigen::VectorXd small(3);
    small << -0.2, 0.0, 0.5;
    CHECK(degeneracy_tolerance(small) == doctest::Approx(1e-10).epsilon(1e-12));
    Eigen::VectorXd large(3);
    large << -50.0, 0.0, 12.0;
    CHECK(degeneracy_tolerance(large) == doctest::Approx(50.0 * 1e-10).epsilon(1e-12));
}

TEST_CASE("spectrum CSV layout") {
    ConstrainedBasis basis(4);
    const auto sectors = enumerate_sectors(basis);
    const auto systems = diagonalize_sectors(build_pxp(basis, 1.0), basis, sectors);
    std::ostringstream out;
    dump_spectrum_csv(out, systems);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "sector,index,eigenvalue");
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == basis.dimension());
}

TEST_CASE("sector eigenvalues match a brute-force solve of the projected block") {
    // independent check at L=6: project the oracle matrix onto each
    // symmetrized column set and diagonalize with Eigen directly
    ConstrainedBasis basis(6);
    const auto sectors = enumerate_sectors(basis);
    const Eigen::MatrixXcd full = oracle::restrict_to_basis(oracle::full_pxp(6, 1.0), basis);
    const SectorDiagonalization sd(build_pxp(basis, 1.0), sectors);
    for (std::size_t s = 0; s < sectors.size(); ++s) {
        const auto& sec = sectors[s];
        if (sec.dimension() == 0) continue;
        const auto d = static_cast<Eigen::Index>(sec.dimension());
        Eigen::MatrixXd u = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.dimension()), d);
        for (Eigen::Index j = 0; j < d; ++j)
            for (const auto& [idx, coeff] : sec.states()[static_cast<std::size_t>(j)].column)
                u(static_cast<Eigen::Index>(idx), j) = coeff;
        const Eigen::MatrixXd block = (u.transpose() * full.real() * u);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
        const Eigen::VectorXd expect = sorted(es.eigenvalues());
        const Eigen::VectorXd got = sorted(sd.blocks()[s].eigenvalues);
        REQUIRE(got.size() == expect.size());
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
}
