#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cgrape/choi.hpp"
#include "cgrape/phase_qubit.hpp"
#include "model_fixture.hpp"

using namespace cgrape;
using cgrape::testing::default_fit_artifacts;
using cgrape::testing::default_fits;
using cgrape::testing::default_params;

TEST_CASE("table parameters give the expected energy scales") {
    const QubitParams p = default_params();
    // E_J/hbar ~ 2pi * 993 GHz, E_c/hbar ~ 2pi * 77.5 MHz
    CHECK(p.josephson_energy() / kTwoPi == doctest::Approx(993.4).epsilon(1e-3));
    CHECK(p.charging_energy() / kTwoPi * 1e3 == doctest::Approx(77.48).epsilon(1e-3));
    CHECK(p.josephson_energy() / p.charging_energy() > 1e4);
}

TEST_CASE("potential value and stationarity") {
    const QubitParams p = default_params();
    CHECK(potential(0.0, 0.0, p) == doctest::Approx(-p.josephson_energy()).epsilon(1e-15));

    const double phi_b = 0.94 * kTwoPi;
    const PotentialAnalysis pa = find_well_extrema(phi_b, p);
    CHECK(std::abs(potential_derivative(pa.phi_min, phi_b, p)) < 1e-8 * p.josephson_energy());
    CHECK(std::abs(potential_derivative(pa.phi_max, phi_b, p)) < 1e-8 * p.josephson_energy());

    // independent evaluation of the formula over a grid, long double route
    const long double ej = static_cast<long double>(p.josephson_energy());
    for (int i = 0; i <= 50; ++i) {
        const double phi = 1.0 + 0.03 * i;
        const long double d = static_cast<long double>(phi) - static_cast<long double>(phi_b);
        const long double v = ej * (d * d / (2.0L * 4.375L) - std::cos(static_cast<long double>(phi)));
        CHECK(std::abs(potential(phi, phi_b, p) - static_cast<double>(v)) <
              1e-12 * std::abs(static_cast<double>(v)));
    }
}

TEST_CASE("well extrema ordering and disappearance") {
    const QubitParams p = default_params();
    const PotentialAnalysis pa = find_well_extrema(0.94 * kTwoPi, p);
    CHECK(pa.phi_min < pa.phi_max);
    CHECK(pa.v_max > pa.v_min);
    CHECK(pa.alpha > 0.0);
    CHECK_THROWS_AS(find_well_extrema(0.99 * kTwoPi, p), well_disappeared_error);
}

TEST_CASE("extrema agree with a dense-grid oracle") {
    const QubitParams p = default_params();
    const double phi_b = 0.94 * kTwoPi;
    const PotentialAnalysis pa = find_well_extrema(phi_b, p);

    auto dense_refine = [&](double center, bool minimum) {
        const int n = 100000;
        const double half = 0.05;
        double best_phi = center, best_v = minimum ? 1e300 : -1e300;
        for (int i = 0; i <= n; ++i) {
            const double phi = center - half + 2.0 * half * i / n;
            const double v = potential(phi, phi_b, p);
            if (minimum ? (v < best_v) : (v > best_v)) {
                best_v = v;
                best_phi = phi;
            }
        }
        return best_phi;
    };
    CHECK(std::abs(dense_refine(pa.phi_min, true) - pa.phi_min) < 1e-6);
    CHECK(std::abs(dense_refine(pa.phi_max, false) - pa.phi_max) < 1e-6);
}

TEST_CASE("alpha: two-route consistency across the bias range") {
    const QubitParams p = default_params();
    for (int i = 0; i <= 10; ++i) {
        const double phi_b = (0.925 + 0.002 * i) * kTwoPi;
        const PotentialAnalysis pa = find_well_extrema(phi_b, p);
        const double m_omega2 = p.josephson_energy() * (1.0 / p.beta + std::cos(pa.phi_min));
        const double composed = m_omega2 * pa.phi_tilde * pa.phi_tilde / pa.omega_harmonic;
        CHECK(std::abs(pa.alpha - composed) < 1e-9 * pa.alpha);
    }
}

TEST_CASE("alpha decreases with bias and crosses 9 near the quoted value") {
    const QubitParams p = default_params();
    double prev = alpha_of_bias(0.93 * kTwoPi, p);
    for (int i = 1; i <= 15; ++i) {
        const double a = alpha_of_bias((0.93 + 0.001 * i) * kTwoPi, p);
        CHECK(a < prev);
        prev = a;
    }
    // bisect the exact curve for alpha = 9
    double lo = 0.93 * kTwoPi, hi = 0.96 * kTwoPi;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (alpha_of_bias(mid, p) > 9.0 ? lo : hi) = mid;
    }
    const double crossing = 0.5 * (lo + hi) / kTwoPi;
    CHECK(crossing > 0.9454 - 0.001);
    CHECK(crossing < 0.9454 + 0.001);
}

TEST_CASE("box DVR reproduces harmonic levels") {
    const QubitParams p = default_params();
    const double ec = p.charging_energy();
    const double m = 1.0 / (2.0 * ec), omega = 40.0, center = 1.5;
    const auto sol = box_dvr_solve(
        [&](double phi) { return 0.5 * m * omega * omega * (phi - center) * (phi - center); },
        center - 1.0, center + 1.0, 500, ec);
    for (int n = 0; n < 4; ++n) {
        const double expected = (n + 0.5) * omega;
        CHECK(std::abs(sol.energies(n) - expected) < 1e-6 * expected);
    }
    // wavefunction normalization w.r.t. the grid measure
    CHECK(sol.wavefunctions.col(0).squaredNorm() * sol.dx == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("well-state count vs bias") {
    const QubitParams p = default_params();
    const DvrConfig cfg;
    CHECK(dvr_solve(0.94 * kTwoPi, p, cfg).n_well_states >= 2);
    CHECK(dvr_solve(0.95 * kTwoPi, p, cfg).n_well_states < 2);
}

TEST_CASE("DVR energies are converged at the default resolution") {
    const QubitParams p = default_params();
    DvrConfig coarse;
    const DVRSolution a = dvr_solve(0.94 * kTwoPi, p, coarse);
    coarse.n_points *= 2;
    const DVRSolution b = dvr_solve(0.94 * kTwoPi, p, coarse);
    CHECK(std::abs(a.energies(a.well_indices[0]) - b.energies(b.well_indices[0])) < 1e-8);
    CHECK(std::abs(a.energies(a.well_indices[1]) - b.energies(b.well_indices[1])) < 1e-8);
}

TEST_CASE("a deliberately coarse grid trips the resolution check") {
    const QubitParams p = default_params();
    DvrConfig cfg;
    cfg.n_points = 24;
    cfg.refinement_tol = 1e-10;
    CHECK_THROWS_AS(dvr_solve(0.94 * kTwoPi, p, cfg), resolution_error);
}

TEST_CASE("eta overlap properties") {
    const QubitParams p = default_params();
    const DvrConfig cfg;
    const double ref = 0.9226 * kTwoPi;
    CHECK(eta_overlap(ref, ref, p, cfg) == doctest::Approx(1.0).epsilon(1e-10));
    double prev = 1.0;
    for (double f : {0.928, 0.932, 0.936, 0.940, 0.944}) {
        const double eta = eta_overlap(f * kTwoPi, ref, p, cfg);
        CHECK(std::abs(eta) <= 1.0 + 1e-12);
        CHECK(eta < prev);
        prev = eta;
    }
}

TEST_CASE("weighted_polyfit recovers an exact cubic") {
    RVec x(12), y(12);
    const double c[4] = {0.3, -1.1, 2.2, 0.7};
    for (int i = 0; i < 12; ++i) {
        x(i) = 5.2 + 0.1 * i;
        y(i) = c[0] + c[1] * x(i) + c[2] * x(i) * x(i) + c[3] * x(i) * x(i) * x(i);
    }
    const RVec fit = weighted_polyfit(x, y, 3, RVec::Ones(12));
    for (int j = 0; j < 4; ++j) CHECK(std::abs(fit(j) - c[j]) < 1e-9 * std::max(1.0, std::abs(c[j])));
}

TEST_CASE("fitted model curves meet their quality targets") {
    const auto& artifacts = default_fit_artifacts();
    const auto& fits = artifacts.fits;
    const auto& data = artifacts.data;

    // eta fit residual below the threshold
    CHECK((data.eta_fitted - data.eta_data).cwiseAbs().maxCoeff() < 1e-3);
    // alpha relative residual below the threshold
    CHECK(((data.alpha_fitted - data.alpha_data).cwiseAbs().array() /
           data.alpha_data.cwiseAbs().array()).maxCoeff() < 1e-3);
    // omega: five-parameter fit beats the harmonic approximation
    const double fit_resid = (data.omega_fitted - data.omega_data).cwiseAbs().maxCoeff();
    const double harm_resid = (data.omega_harmonic - data.omega_data).cwiseAbs().maxCoeff();
    CHECK(fit_resid < harm_resid);

    // derivative of the fitted eta matches finite differences of the polynomial
    const double phi = 0.935 * kTwoPi, h = 1e-5;
    CHECK(fits.eta_derivative(phi) ==
          doctest::Approx((fits.eta(phi + h) - fits.eta(phi - h)) / (2.0 * h)).epsilon(1e-6));

    // reference bias: gamma1 at phi_ref sits at the config threshold
    CHECK(wkb_rates(fits.phi_ref, fits).gamma1 == doctest::Approx(1e-6).epsilon(1e-6));
    CHECK(fits.omega_ref == doctest::Approx(fits.omega_fit.value(fits.phi_ref)));
}

TEST_CASE("wkb rate identities") {
    const auto& fits = default_fits();
    for (double f : {0.93, 0.9375, 0.9425}) {
        const WkbRates r = wkb_rates(f * kTwoPi, fits);
        CHECK(r.gamma1 / r.gamma0 == doctest::Approx(72.0 * fits.alpha(f * kTwoPi)).epsilon(1e-12));
    }
    // direct formula at alpha = 9 (the validity limit of the fitted quadratic)
    const double phi9 = fits.validity_limit;
    const WkbRates r9 = wkb_rates(phi9, fits);
    const double omega9 = fits.omega(phi9);
    CHECK(r9.gamma0 ==
          doctest::Approx(6.0 * omega9 * std::sqrt(9.0 / M_PI) * std::exp(-54.0 / 5.0))
              .epsilon(1e-9));
    // rates grow with bias
    CHECK(wkb_rates(0.94 * kTwoPi, fits).gamma1 > wkb_rates(0.93 * kTwoPi, fits).gamma1);
    CHECK(r9.dgamma1 > 0.0);
}

TEST_CASE("drift generator matches the explicit superoperator form") {
    const QubitParams p = default_params();
    const Mat s = drift_generator(p);

    // gamma (|0><1| x |0><1| - 1/2(|1><1| x 1 + 1 x |1><1|)) with gamma = 1/T1
    const double gamma = 1.0 / p.t1_ns;
    Mat k01 = Mat::Zero(3, 3);
    k01(0, 1) = 1.0;
    Mat p11 = Mat::Zero(3, 3);
    p11(1, 1) = 1.0;
    const Mat ident = Mat::Identity(3, 3);
    const Mat expected =
        gamma * (kron(k01, k01) - 0.5 * (kron(p11, ident) + kron(ident, p11)));
    CHECK((s - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK(gamma == doctest::Approx(0.002));

    // |1><1| decays to 1/e after T1
    const Propagator t = piecewise_propagator({s}, p.t1_ns);
    Mat rho = Mat::Zero(3, 3);
    rho(1, 1) = 1.0;
    const Mat out = unstack(evolve(t, column_stack(rho)));
    CHECK(out(1, 1).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("pure dephasing is absent: 0-1 coherence decays at the T1 rate only") {
    const QubitParams p = default_params();
    const auto& fits = default_fits();
    // at the reference bias the tunneling rates are ~1e-6 and eta = 1
    const Mat s = drift_generator(p) + control_generator(fits.phi_ref, fits).value;
    Mat coh = Mat::Zero(3, 3);
    coh(0, 1) = 1.0;
    const double t = 100.0;
    const Mat out = unstack(expm(s * t) * column_stack(coh));
    CHECK(std::abs(out(0, 1)) == doctest::Approx(std::exp(-t / (2.0 * p.t1_ns))).epsilon(1e-4));
}

TEST_CASE("control generator reduces to the reference Hamiltonian at phi_ref") {
    const auto& fits = default_fits();
    const GeneratorPair gen = control_generator(fits.phi_ref, fits);
    Mat h_ref = Mat::Zero(3, 3);
    h_ref(1, 1) = fits.omega_ref;
    const Mat expected = hamiltonian_superop(h_ref);
    // rates at the reference are ~1e-6; the coherent part dominates
    CHECK((gen.value - expected).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("the mixing matrix is an involution for any eta") {
    for (double eta : {-1.0, -0.4, 0.0, 0.3, 0.852, 1.0}) {
        const double s = std::sqrt(1.0 - eta * eta);
        Eigen::Matrix3d p;
        p << eta, s, 0, s, -eta, 0, 0, 0, 1;
        CHECK((p * p - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("control generator derivative matches finite differences") {
    const auto& fits = default_fits();
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> bias(0.93 * kTwoPi, 0.944 * kTwoPi);
    for (int trial = 0; trial < 5; ++trial) {
        const double phi = bias(rng);
        const GeneratorPair gen = control_generator(phi, fits);
        const double h = 1e-6;
        const Mat fd = (control_generator(phi + h, fits).value -
                        control_generator(phi - h, fits).value) /
                       (2.0 * h);
        CHECK((gen.derivative - fd).norm() < 1e-6 * fd.norm());
    }
}

TEST_CASE("control generator rejects biases above the validity limit") {
    const auto& fits = default_fits();
    CHECK_THROWS_AS(control_generator(fits.validity_limit + 0.001 * kTwoPi, fits),
                    std::domain_error);
}

TEST_CASE("generators are trace preserving and completely positive in range") {
    const QubitParams p = default_params();
    const auto& fits = default_fits();
    const Mat drift = drift_generator(p);
    std::mt19937 rng(88);
    std::uniform_real_distribution<double> bias(fits.phi_ref, fits.validity_limit);
    for (int trial = 0; trial < 20; ++trial) {
        const double phi = bias(rng);
        const Mat s = drift + control_generator(phi, fits).value;
        CHECK(trace_preservation_residual(s) < 1e-10);
        const Propagator t = piecewise_propagator({s}, 0.2);
        const CptpReport rep = cptp_report(reshuffle(t));
        CHECK(rep.min_eigenvalue > -1e-9);
        CHECK(rep.tp_residual < 1e-9);
    }
}

TEST_CASE("target choi structure") {
    const Mat ct = target_choi();
    CHECK(ct.trace().real() == doctest::Approx(3.0));
    CHECK((ct.adjoint() * ct).trace().real() == doctest::Approx(5.0));

    Eigen::SelfAdjointEigenSolver<Mat> es(ct);
    CHECK(es.eigenvalues()(8) == doctest::Approx(2.0));
    CHECK(es.eigenvalues()(7) == doctest::Approx(1.0));
    CHECK(std::abs(es.eigenvalues()(6)) < 1e-14);

    // read back as a map: |0><0| fixed, |1><1| -> |m><m|
    const Mat prop = reshuffle(ct);
    Mat rho0 = Mat::Zero(3, 3);
    rho0(0, 0) = 1.0;
    Mat rho1 = Mat::Zero(3, 3);
    rho1(1, 1) = 1.0;
    Mat rhom = Mat::Zero(3, 3);
    rhom(2, 2) = 1.0;
    CHECK((unstack(prop * column_stack(rho0)) - rho0).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((unstack(prop * column_stack(rho1)) - rhom).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("contrast of trivial channels") {
    const Contrast ident = contrast({Mat::Identity(9, 9), 1.0});
    CHECK(ident.p_bright == 0.0);
    CHECK(ident.xi == 0.0);

    const Contrast ideal = contrast({reshuffle(target_choi()), 1.0});
    CHECK(ideal.p_bright == doctest::Approx(1.0));
    CHECK(ideal.p_dark == doctest::Approx(0.0));
    CHECK(ideal.xi == doctest::Approx(1.0));
}

TEST_CASE("validity limit sits where the fitted quadratic crosses 9") {
    const auto& fits = default_fits();
    const double limit = fits.validity_limit;
    CHECK(limit / kTwoPi > 0.9444);
    CHECK(limit / kTwoPi < 0.9464);
    CHECK(fits.alpha(limit) == doctest::Approx(9.0).epsilon(1e-9));

    // DVR drops the second well state just above the limit
    const QubitParams p = default_params();
    const DvrConfig cfg;
    CHECK(dvr_solve(limit + 0.0005 * kTwoPi, p, cfg).n_well_states >= 2);
    CHECK(dvr_solve(limit + 0.0011 * kTwoPi, p, cfg).n_well_states < 2);
}
