#include "ferrohopf/spectral_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

#include "ferrohopf/errors.hpp"

namespace ferrohopf {

Chebyshev chebyshev(int N) {
    if (N < 2) throw std::invalid_argument("chebyshev needs at least 2 nodes");
    const int n = N - 1;
    Chebyshev c;
    c.x.resize(N);
    for (int j = 0; j < N; ++j) c.x[j] = std::cos(std::numbers::pi * j / n);
    Eigen::VectorXd cw(N);
    for (int j = 0; j < N; ++j) cw[j] = ((j == 0 || j == n) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0);
    c.D = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (i != j) c.D(i, j) = cw[i] / cw[j] / (c.x[i] - c.x[j]);
    // Diagonal from the negative row sums, which keeps D exact on constants.
    for (int i = 0; i < N; ++i) c.D(i, i) = -c.D.row(i).sum();

    c.w.resize(N);
    for (int k = 0; k < N; ++k) {
        const double th = std::numbers::pi * k / n;
        double s = 0.0;
        for (int j = 1; j <= n / 2; ++j) {
            const double b = (2 * j == n) ? 1.0 : 2.0;
            s += b / (4.0 * j * j - 1.0) * std::cos(2.0 * j * th);
        }
        c.w[k] = (1.0 - s) * ((k == 0 || k == n) ? 1.0 : 2.0) / n;
    }
    return c;
}

std::vector<double> DiscreteEigenproblem::y_up() const {
    const Chebyshev c = chebyshev(N);
    std::vector<double> y(N);
    for (int i = 0; i < N; ++i) y[i] = (c.x[i] + 1.0) / (2.0 * beta0);
    return y;
}

std::vector<double> DiscreteEigenproblem::y_lo() const {
    const Chebyshev c = chebyshev(N);
    std::vector<double> y(N);
    for (int i = 0; i < N; ++i) y[i] = (c.x[i] - 1.0) / (2.0 * beta0);
    return y;
}

DiscreteEigenproblem assemble(const FluidParams& p, const LawJet& jet, int N) {
    if (N < min_nodes) throw std::invalid_argument("assemble requires N >= 16");
    jet.validate();
    DiscreteEigenproblem P;
    P.N = N;
    P.beta0 = p.beta0();
    P.alpha0 = p.alpha0();
    P.jet = jet;
    const double mu1 = jet.mu1;
    const double pp = jet.mu1 + jet.dmu1;
    const double H = 1.0 / p.beta0();
    const Chebyshev c = chebyshev(N);
    const Eigen::MatrixXd Dy = c.D * (2.0 / H);
    const Eigen::MatrixXd D2 = Dy * Dy;
    const Eigen::VectorXd w = c.w * (H / 2.0);

    const int n = P.size();
    P.A = Eigen::MatrixXd::Zero(n, n);
    P.M = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd& A = P.A;
    const int top = 0, up0 = N - 1, lo0 = 0, bot = N - 1;

    A(P.eta(), P.omega()) = 1.0;
    for (int j = 0; j < N; ++j) {
        A(P.omega(), P.tau_lo(j)) += pp * Dy(lo0, j);
        A(P.omega(), P.tau_up(j)) -= mu1 * Dy(up0, j);
    }
    A(P.omega(), P.eta()) = p.gamma0();

    // Mean coupling (beta0/2)(int zeta / mu1 + int zeta'), the average over the total depth.
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(n);
    const double cf = 0.5 * p.beta0();
    for (int j = 0; j < N; ++j) {
        mean[P.zeta_lo(j)] = cf / mu1 * w[j];
        mean[P.zeta_up(j)] = cf * w[j];
    }
    for (int i = 0; i < N; ++i) {
        A.row(P.tau_up(i)) += mean;
        A(P.tau_up(i), P.zeta_up(i)) -= 1.0;
        A.row(P.tau_lo(i)) += mean;
        A(P.tau_lo(i), P.zeta_lo(i)) -= 1.0 / mu1;
        for (int j = 0; j < N; ++j) {
            A(P.zeta_up(i), P.tau_up(j)) = D2(i, j);
            A(P.zeta_lo(i), P.tau_lo(j)) = pp * D2(i, j);
        }
        A(P.zeta_up(i), P.nu()) = 1.0;
        A(P.zeta_lo(i), P.nu()) = 1.0;
    }

    auto replace = [&](int row, const Eigen::RowVectorXd& v) {
        A.row(row) = v;
        P.M.row(row).setZero();
        P.constraint_rows.push_back(row);
    };
    Eigen::RowVectorXd v(n);

    // tau'_y = 0 at the top
    v.setZero();
    for (int j = 0; j < N; ++j) v[P.tau_up(j)] = Dy(top, j);
    replace(P.zeta_up(top), v);
    // (mu1 + mu1') tau_y = 0 at the bottom
    v.setZero();
    for (int j = 0; j < N; ++j) v[P.tau_lo(j)] = pp * Dy(bot, j);
    replace(P.zeta_lo(bot), v);
    // (mu1 + mu1') tau_y(0) - tau'_y(0) = 0
    v.setZero();
    for (int j = 0; j < N; ++j) {
        v[P.tau_lo(j)] = pp * Dy(lo0, j);
        v[P.tau_up(j)] -= Dy(up0, j);
    }
    replace(P.zeta_up(up0), v);
    // side constraint tau'(0) - tau(0) + (mu1 - 1) eta = 0
    v.setZero();
    v[P.tau_up(up0)] = 1.0;
    v[P.tau_lo(lo0)] = -1.0;
    v[P.eta()] = mu1 - 1.0;
    replace(P.zeta_lo(lo0), v);
    // zeta(0)/mu1 - zeta'(0) + (mu1 - 1) omega = 0
    v.setZero();
    v[P.zeta_lo(lo0)] = 1.0 / mu1;
    v[P.zeta_up(up0)] = -1.0;
    v[P.omega()] = mu1 - 1.0;
    replace(P.tau_up(up0), v);
    // int tau' + int tau = 0
    v.setZero();
    for (int j = 0; j < N; ++j) {
        v[P.tau_up(j)] = w[j];
        v[P.tau_lo(j)] = w[j];
    }
    replace(P.tau_lo(bot), v);
    // int zeta' + int zeta = 0, carried by the multiplier row
    v.setZero();
    for (int j = 0; j < N; ++j) {
        v[P.zeta_up(j)] = w[j];
        v[P.zeta_lo(j)] = w[j];
    }
    replace(P.nu(), v);
    std::sort(P.constraint_rows.begin(), P.constraint_rows.end());
    return P;
}

std::vector<SpectralEigenvalue> spectrum(const DiscreteEigenproblem& P, const SpectralWindow& win) {
    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(P.A, P.M, true);
    if (ges.info() != Eigen::Success) throw numerical_error("QZ eigensolver failed", "GeneralizedEigenSolver");
    const Eigen::VectorXcd alphas = ges.alphas();
    const Eigen::VectorXd betas = ges.betas();
    const Eigen::MatrixXcd V = ges.eigenvectors();
    const double anorm = P.A.norm();
    const FluidParams fp(P.beta0, P.alpha0);

    std::vector<bool> is_constraint(P.size(), false);
    for (int r : P.constraint_rows) is_constraint[r] = true;

    std::vector<SpectralEigenvalue> out;
    for (int k = 0; k < alphas.size(); ++k) {
        if (std::abs(betas[k]) <= 1e-13 * std::abs(alphas[k]) || betas[k] == 0.0) continue;
        const std::complex<double> lam = alphas[k] / betas[k];
        if (!std::isfinite(lam.real()) || !std::isfinite(lam.imag()) || !win.contains(lam)) continue;
        Eigen::VectorXcd v = V.col(k);
        const double vn = v.norm();
        if (vn == 0.0) continue;
        v /= vn;
        const Eigen::VectorXcd r = P.A.cast<std::complex<double>>() * v - lam * (P.M.cast<std::complex<double>>() * v);
        double evo = 0.0, con = 0.0;
        for (int i = 0; i < P.size(); ++i) {
            if (is_constraint[i])
                con = std::max(con, std::abs(r[i]));
            else
                evo += std::norm(r[i]);
        }
        SpectralEigenvalue e;
        e.lambda = lam;
        e.residual = std::sqrt(evo) / (anorm + std::abs(lam));
        e.constraint_residual = con;
        if (e.residual > spectral_residual_tol) continue;
        const std::complex<double> sigma = lam / P.beta0;
        const double scale = disp_complex_scale(sigma, fp, P.jet);
        e.dispersion_residual = std::abs(disp_complex(sigma, fp, P.jet)) / std::max(1.0, scale);
        e.vector = std::move(v);
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const SpectralEigenvalue& a, const SpectralEigenvalue& b) {
        if (a.lambda.imag() != b.lambda.imag()) return a.lambda.imag() < b.lambda.imag();
        return a.lambda.real() < b.lambda.real();
    });
    return out;
}

ConvergenceTable convergence_study(const FluidParams& p, const LawJet& jet,
                                   const std::vector<int>& N_list, int workers) {
    for (std::size_t i = 1; i < N_list.size(); ++i)
        if (!(N_list[i] > N_list[i - 1]))
            throw std::invalid_argument("convergence_study: N_list must be increasing");
    ConvergenceTable t;
    t.roots = imag_roots(p, jet).roots;
    t.rows.resize(N_list.size());
    auto work = [&](std::size_t k) {
        ConvergenceRow& row = t.rows[k];
        row.N = N_list[k];
        const DiscreteEigenproblem P = assemble(p, jet, row.N);
        Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(P.A, P.M, false);
        std::vector<std::complex<double>> lams;
        for (int i = 0; i < ges.alphas().size(); ++i) {
            const double b = ges.betas()[i];
            if (b == 0.0 || std::abs(b) <= 1e-13 * std::abs(ges.alphas()[i])) continue;
            lams.push_back(ges.alphas()[i] / b);
        }
        for (double q : t.roots) {
            const std::complex<double> target(0.0, p.beta0() * q);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& l : lams) best = std::min(best, std::abs(l - target));
            row.errors.push_back(best);
            row.max_error = std::max(row.max_error, best);
        }
        row.resolved = row.max_error < t.resolved_tol;
    };
    workers = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t k = w; k < N_list.size(); k += workers) work(k);
        });
    for (auto& th : pool) th.join();

    t.monotone_to_plateau = true;
    for (std::size_t k = 1; k < t.rows.size(); ++k) {
        const double a = t.rows[k - 1].max_error, b = t.rows[k].max_error;
        if (a > t.plateau && !(b < a)) t.monotone_to_plateau = false;
        if (a <= t.plateau && b > t.plateau) t.monotone_to_plateau = false;
    }
    return t;
}

}  // namespace ferrohopf
