#include "pxp/quench.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace pxp {

namespace {

void check_normalized_weights(const OverlapDistribution& ov) {
    double sum = 0.0;
    for (double w : ov.weights) sum += w;
    if (std::abs(sum - 1.0) > 1e-10) {
        throw std::invalid_argument(
            "overlap weights sum to " + std::to_string(sum) +
            "; initial state unnormalized or eigenbasis incomplete");
    }
}

} // namespace

std::vector<double> time_grid(double t_max, double dt) {
    if (dt <= 0.0 || t_max < 0.0) {
        throw std::invalid_argument("time grid requires dt > 0 and t_max >= 0");
    }
    const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
    std::vector<double> times(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) times[i] = i * dt;
    return times;
}

OverlapDistribution overlaps(const Eigen::VectorXd& psi0, const EigenSystem& eig) {
    if (psi0.size() != eig.eigenvectors.rows()) {
        throw std::invalid_argument("state vector does not match the eigensystem basis");
    }
    OverlapDistribution ov;
    const Eigen::VectorXd amps = eig.eigenvectors.transpose() * psi0;
    ov.energies.assign(eig.eigenvalues.begin(), eig.eigenvalues.end());
    ov.amplitudes.assign(amps.begin(), amps.end());
    ov.weights.resize(ov.amplitudes.size());
    for (std::size_t i = 0; i < ov.amplitudes.size(); ++i) {
        ov.weights[i] = ov.amplitudes[i] * ov.amplitudes[i];
    }
    check_normalized_weights(ov);
    return ov;
}

OverlapDistribution overlaps(const Eigen::VectorXd& psi0,
                             const SectorDiagonalization& eig) {
    OverlapDistribution ov;
    const auto pairs = eig.overlaps(psi0);
    ov.energies.reserve(pairs.size());
    ov.amplitudes.reserve(pairs.size());
    ov.weights.reserve(pairs.size());
    for (const auto& [energy, amp] : pairs) {
        ov.energies.push_back(energy);
        ov.amplitudes.push_back(amp);
        ov.weights.push_back(amp * amp);
    }
    check_normalized_weights(ov);
    return ov;
}

double effective_dimension(const OverlapDistribution& ov, double cluster_tol) {
    double sum_sq = 0.0;
    double cluster_weight = 0.0;
    for (std::size_t i = 0; i < ov.size(); ++i) {
        cluster_weight += ov.weights[i];
        const bool last = i + 1 == ov.size();
        if (last || ov.energies[i + 1] - ov.energies[i] >= cluster_tol) {
            sum_sq += cluster_weight * cluster_weight;
            cluster_weight = 0.0;
        }
    }
    if (sum_sq <= 0.0) {
        throw std::invalid_argument("effective dimension of an empty distribution");
    }
    return 1.0 / sum_sq;
}

double effective_dimension(const OverlapDistribution& ov) {
    double radius = 0.0;
    for (const double e : ov.energies) radius = std::max(radius, std::abs(e));
    return effective_dimension(ov, 1e-12 * std::max(1.0, radius));
}

TimeSeries loschmidt(const OverlapDistribution& ov, const std::vector<double>& times) {
    check_normalized_weights(ov);
    TimeSeries series;
    series.times = times;
    series.values.resize(times.size());
    for (std::size_t t = 0; t < times.size(); ++t) {
        double re = 0.0, im = 0.0;
        for (std::size_t n = 0; n < ov.size(); ++n) {
            const double phase = ov.energies[n] * times[t];
            re += ov.weights[n] * std::cos(phase);
            im -= ov.weights[n] * std::sin(phase);
        }
        series.values[t] = re * re + im * im;
    }
    return series;
}

TimeSeries observable_evolution(const Eigen::VectorXd& psi0, const EigenSystem& eig,
                                const ObservableMatrix& obs,
                                const std::vector<double>& times) {
    if (psi0.size() != eig.eigenvectors.rows() ||
        obs.dimension() != static_cast<std::size_t>(psi0.size())) {
        throw std::invalid_argument("state, eigensystem and observable bases differ");
    }
    const Eigen::VectorXd amps = eig.eigenvectors.transpose() * psi0;
    const std::size_t dim = psi0.size();

    TimeSeries series;
    series.times = times;
    series.values.resize(times.size());
    Eigen::VectorXcd coeff(amps.size());
    Eigen::VectorXcd psi_t(dim);
    std::vector<std::complex<double>> work(dim);
    for (std::size_t t = 0; t < times.size(); ++t) {
        for (Eigen::Index n = 0; n < amps.size(); ++n) {
            coeff[n] = amps[n] * std::exp(std::complex<double>(0.0, -eig.eigenvalues[n] * times[t]));
        }
        psi_t = eig.eigenvectors * coeff;
        obs.apply(psi_t.data(), work.data());
        std::complex<double> value{0.0, 0.0};
        for (std::size_t i = 0; i < dim; ++i) value += std::conj(psi_t[i]) * work[i];
        series.values[t] = value.real();
    }
    return series;
}

double energy_expectation(const Eigen::VectorXd& psi0, const HamiltonianMatrix& h) {
    if (static_cast<std::size_t>(psi0.size()) != h.dimension()) {
        throw std::invalid_argument("state vector does not match the operator basis");
    }
    return h.quadratic_form(psi0.data(), psi0.data());
}

void dump_series_csv(std::ostream& out, const TimeSeries& series,
                     const std::string& value_name) {
    out << "t," << value_name << '\n';
    char buf[80];
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", series.times[i],
                      series.values[i]);
        out << buf;
    }
}

void dump_overlaps_csv(std::ostream& out, const OverlapDistribution& ov) {
    out << "energy,weight\n";
    char buf[80];
    for (std::size_t i = 0; i < ov.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", ov.energies[i], ov.weights[i]);
        out << buf;
    }
}

} // namespace pxp
