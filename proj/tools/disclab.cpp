// disclab: numerical laboratory for the lattice point discrepancy of smooth
// convex bodies: exact counting, spectral evaluation, L^p growth scans and
// integral-inequality checks.

#include "disclab/acceptance.hpp"
#include "disclab/bodies.hpp"
#include "disclab/io.hpp"
#include "disclab/lattice.hpp"
#include "disclab/lemmas.hpp"
#include "disclab/measures.hpp"
#include "disclab/mollify.hpp"
#include "disclab/norms.hpp"
#include "disclab/spectra.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace disclab;
using nlohmann::json;

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text << "\n";
    else
        atomic_write(out_path, text + "\n");
}

std::vector<Vec> parse_vec_list(const std::vector<std::string>& items) {
    std::vector<Vec> out;
    for (const auto& s : items) out.push_back(parse_vector(s));
    return out;
}

json ratio_to_json(const RatioReport& rep) {
    return json{{"lemma", rep.lemma_id},
                {"grid", rep.grid_spec},
                {"sup_ratio", rep.sup_ratio},
                {"argmax", rep.argmax},
                {"quad_rel_error", rep.quad_rel_error}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"disclab: lattice point discrepancy laboratory"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker cap (default: DISCLAB_THREADS or hardware)");

    std::string body_path, measure_path, out_path, xi_csv, x_csv;
    double r = 0, delta = 0.02, zre = 1.5, p = 4.0, beta = 0, alpha = 0, gamma = 1.0;
    double r_min = 10, r_max = 1000, xi_max = 1000, x_limit = 1000, t_limit = 1000;
    double y_max = 256, xi_single = std::nan("");
    int points = 12, grid = 0, h_order = -1, d_dim = 2, case_id = 1, budget = 32;
    long long samples = 10'000'000;
    std::uint64_t seed = 7;
    bool ellipse_flag = false, spectral = false, normalized = false;
    std::vector<std::string> k_list, y_list;

    auto* c_count = app.add_subcommand("count", "count integer points in r*Omega - x");
    c_count->add_option("--body", body_path)->required();
    c_count->add_option("--r", r)->required();
    c_count->add_option("--x", x_csv)->required();
    c_count->add_option("--out", out_path);

    auto* c_disc = app.add_subcommand("discrepancy", "exact discrepancy sample");
    c_disc->add_option("--body", body_path)->required();
    c_disc->add_option("--r", r)->required();
    c_disc->add_option("--x", x_csv)->required();
    c_disc->add_option("--out", out_path);

    auto* c_ft = app.add_subcommand("ft", "Fourier transform of the body indicator");
    c_ft->add_option("--body", body_path)->required();
    c_ft->add_option("--xi", xi_csv)->required();
    c_ft->add_option("--asymptotic", h_order, "expansion order h (omit for exact)");
    c_ft->add_option("--out", out_path);

    auto* c_phi = app.add_subcommand("phi", "Phi(delta,z,r,.) field summary on the torus grid");
    c_phi->add_option("--body", body_path)->required();
    c_phi->add_option("--delta", delta)->required();
    c_phi->add_option("--z", zre)->required();
    c_phi->add_option("--r", r)->required();
    c_phi->add_option("--grid", grid, "minimum FFT grid");
    c_phi->add_option("--p", p, "exponent for the L^p summary");
    c_phi->add_flag("--mollified", normalized, "evaluate r^{-(d-1)/2} D_delta instead");
    std::string field_out;
    c_phi->add_option("--field-out", field_out, "CSV dump of the field");
    c_phi->add_option("--out", out_path);

    auto* c_mft = app.add_subcommand("measure-fft", "Fourier transform of a measure");
    c_mft->add_option("--measure", measure_path)->required();
    c_mft->add_option("--xi", xi_single, "single evaluation point");
    c_mft->add_option("--xi-max", xi_max);
    std::string csv_out;
    c_mft->add_option("--csv-out", csv_out, "CSV (xi, re, im) table");
    c_mft->add_option("--out", out_path);

    auto* c_scan = app.add_subcommand("norm-scan", "I(d,Omega,mu,p,R) over an R ladder");
    c_scan->add_option("--body", body_path)->required();
    c_scan->add_option("--measure", measure_path)->required();
    c_scan->add_option("--p", p)->required();
    c_scan->add_option("--R-min", r_min);
    c_scan->add_option("--R-max", r_max);
    c_scan->add_option("--points", points);
    c_scan->add_option("--x-grid", grid, "translation grid per axis (0: default)");
    c_scan->add_option("--r-budget", budget);
    std::string method = "exact";
    c_scan->add_option("--method", method)->check(CLI::IsMember({"exact", "spectral"}));
    c_scan->add_option("--csv-out", csv_out);
    c_scan->add_option("--out", out_path);

    auto* c_crit = app.add_subcommand("critical", "critical exponent table row");
    c_crit->add_option("--d", d_dim)->required();
    c_crit->add_option("--beta", beta)->required();
    c_crit->add_flag("--ellipse", ellipse_flag);
    c_crit->add_option("--out", out_path);

    auto* c_lemma = app.add_subcommand("lemma-check", "integral lemma ratio reports");
    c_lemma->require_subcommand(1);
    auto* l_crucial = c_lemma->add_subcommand("crucial");
    l_crucial->add_option("--case", case_id)->required();
    l_crucial->add_option("--alpha", alpha)->required();
    l_crucial->add_option("--beta", beta)->required();
    l_crucial->add_option("--X-max", x_limit);
    l_crucial->add_option("--T-max", t_limit);
    l_crucial->add_option("--out", out_path);
    auto* l_mu = c_lemma->add_subcommand("mu");
    l_mu->add_option("--gamma", gamma)->required();
    l_mu->add_option("--beta", beta)->required();
    l_mu->add_option("--body", body_path)->required();
    l_mu->add_option("--delta", delta);
    l_mu->add_option("--k", k_list, "k sample, e.g. 3,0 (repeatable)");
    l_mu->add_option("--Y-max", y_max);
    l_mu->add_option("--out", out_path);
    auto* l_int = c_lemma->add_subcommand("integral");
    l_int->add_option("--alpha", alpha)->required();
    l_int->add_option("--beta", beta)->required();
    l_int->add_option("--body", body_path)->required();
    l_int->add_option("--k", k_list, "k sample (repeatable)");
    l_int->add_option("--Y", y_list, "Y value (repeatable)");
    l_int->add_option("--out", out_path);
    auto* l_ell = c_lemma->add_subcommand("ellipse-integral");
    l_ell->add_option("--case", case_id)->required();
    l_ell->add_option("--alpha", alpha)->required();
    l_ell->add_option("--beta", beta);
    l_ell->add_option("--k", k_list, "|k| value (repeatable)");
    l_ell->add_option("--Y", y_list, "Y offset around |k| (repeatable)");
    l_ell->add_option("--out", out_path);
    auto* l_n2 = c_lemma->add_subcommand("n2");
    l_n2->add_option("--body", body_path)->required();
    l_n2->add_option("--z", zre);
    l_n2->add_option("--beta", beta);
    l_n2->add_option("--delta", delta);
    l_n2->add_option("--R", r_min);
    l_n2->add_option("--measure", measure_path);
    l_n2->add_option("--samples", samples);
    l_n2->add_option("--seed", seed);
    l_n2->add_option("--out", out_path);

    auto* c_verify = app.add_subcommand("verify-all", "run the acceptance suite");
    c_verify->add_option("--seed", seed);
    c_verify->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
        if (threads > 0) set_worker_count(threads);

        if (*c_count || *c_disc) {
            ConvexBody body = load_body(body_path);
            DiscrepancySample s = discrepancy(body, r, parse_vector(x_csv));
            json j{{"count", s.count}, {"volume_term", s.volume_term}, {"D", s.discrepancy}};
            emit(j.dump(), out_path);
        } else if (*c_ft) {
            ConvexBody body = load_body(body_path);
            Vec xi = parse_vector(xi_csv);
            cplx v;
            std::string how;
            if (h_order >= 0) {
                v = ft_asymptotic(body, xi, h_order);
                how = "asymptotic";
            } else {
                v = ft_exact(body, xi);
                how = body.kind() == ConvexBody::Kind::perturbed_ball ? "quadrature"
                                                                      : "closed-form";
            }
            json j{{"re", v.real()}, {"im", v.imag()}, {"method", how}};
            emit(j.dump(), out_path);
        } else if (*c_phi) {
            ConvexBody body = load_body(body_path);
            SpectralSeries series(body, delta, cplx(zre, 0.0), 0);
            GridField field = normalized ? series.mollified_field(r, true)
                                         : series.phi_field(r);
            if (grid > field.size())
                throw validation_error("requested grid below the series size is not supported");
            if (!field_out.empty()) {
                std::ostringstream csv;
                csv << "i,j,re,im\n";
                int m = field.size();
                const auto& vals = field.values();
                for (int i = 0; i < m; ++i)
                    for (int jj = 0; jj < m; ++jj) {
                        const cplx& v = vals[std::size_t(i) * m + jj];
                        csv << i << "," << jj << "," << v.real() << "," << v.imag() << "\n";
                    }
                atomic_write(field_out, csv.str());
            }
            json j{{"grid", field.size()},
                   {"n_max", series.n_max()},
                   {"sup", field.max_abs()},
                   {"l2", std::sqrt(field.power_mean(2.0))},
                   {"lp", std::pow(field.power_mean(p), 1.0 / p)},
                   {"p", p},
                   {"max_imag", field.max_imag_abs()}};
            emit(j.dump(), out_path);
        } else if (*c_mft) {
            MeasureSpec mu = load_measure(measure_path);
            if (!std::isnan(xi_single)) {
                cplx v = measure_fourier(mu, xi_single);
                json j{{"re", v.real()}, {"im", v.imag()}};
                emit(j.dump(), out_path);
            } else {
                if (!csv_out.empty()) {
                    std::ostringstream csv;
                    csv << "xi,re,im\n";
                    for (int i = 0; i < 600; ++i) {
                        double xi = std::exp(std::log(xi_max) * (i + 0.5) / 600.0);
                        cplx v = measure_fourier(mu, xi);
                        csv << xi << "," << v.real() << "," << v.imag() << "\n";
                    }
                    atomic_write(csv_out, csv.str());
                }
                BetaFit bf = fit_beta(mu, xi_max);
                json j{{"beta_hat", bf.beta_hat}, {"c_hat", bf.c_hat}};
                emit(j.dump(), out_path);
            }
        } else if (*c_scan) {
            ConvexBody body = load_body(body_path);
            MeasureSpec mu = load_measure(measure_path);
            NormResolution nr;
            nr.x_grid = grid > 0 ? grid : (body.dim() == 2 ? 256 : 64);
            nr.r_budget = budget;
            nr.spectral = method == "spectral";
            auto ladder = geometric_ladder(r_min, r_max, points);
            NormScanResult res = scan_growth(body, mu, p, ladder, nr);
            if (!csv_out.empty()) {
                std::ostringstream csv;
                csv << "R,I\n";
                for (std::size_t i = 0; i < ladder.size(); ++i)
                    csv << ladder[i] << "," << res.values[i] << "\n";
                atomic_write(csv_out, csv.str());
            }
            json j{{"p", p},
                   {"R", res.r_ladder},
                   {"I", res.values},
                   {"fit",
                    json{{"preferred_model", res.preferred_model},
                         {"log_slope", res.log_slope},
                         {"kappa_hat", res.kappa_hat},
                         {"ratio_max_min", res.ratio_max_min},
                         {"resid_bounded", res.resid_bounded},
                         {"resid_log", res.resid_log}}}};
            emit(j.dump(), out_path);
        } else if (*c_crit) {
            BodyClass bc = ellipse_flag ? BodyClass::ellipse : BodyClass::generic;
            CriticalExponent ce = critical_exponent(d_dim, beta, bc);
            CriticalLines cl = critical_lines(d_dim, beta, bc);
            json j{{"d", d_dim},
                   {"beta", beta},
                   {"body_class", ellipse_flag ? "ellipse" : "generic"},
                   {"p_critical", ce.p_critical},
                   {"log_power", ce.log_power_at_critical},
                   {"z2", cl.z2},
                   {"z4", cl.z4}};
            if (cl.z6) j["z6"] = *cl.z6;
            emit(j.dump(), out_path);
        } else if (*c_lemma) {
            RatioReport rep;
            if (*l_crucial) {
                rep = verify_crucial(case_id, alpha, beta, x_limit, t_limit);
            } else if (*l_mu) {
                ConvexBody body = load_body(body_path);
                auto ks = k_list.empty() ? std::vector<Vec>{vec2(3, 0), vec2(4, 3)}
                                         : parse_vec_list(k_list);
                std::vector<double> ys;
                for (double y = 8.0; y <= y_max * (1 + 1e-12); y *= 2.0) ys.push_back(y);
                rep = verify_mu_lemma(gamma, beta, body, ks, ys, delta);
            } else if (*l_int) {
                ConvexBody body = load_body(body_path);
                auto ks = k_list.empty() ? std::vector<Vec>{vec2(3, 0), vec2(0, 5)}
                                         : parse_vec_list(k_list);
                std::vector<double> ys{0.0, 5.0, 12.0, 30.0};
                if (!y_list.empty()) {
                    ys.clear();
                    for (const auto& s : y_list) ys.push_back(std::stod(s));
                }
                rep = verify_integral_lemma(alpha, beta, body, ks, ys);
            } else if (*l_ell) {
                std::vector<double> ks{2.5, 5.0, 10.0, 20.0};
                if (!k_list.empty()) {
                    ks.clear();
                    for (const auto& s : k_list) ks.push_back(std::stod(s));
                }
                std::vector<double> os{-10.0, -2.0, 0.0, 2.0, 10.0};
                if (!y_list.empty()) {
                    os.clear();
                    for (const auto& s : y_list) os.push_back(std::stod(s));
                }
                rep = verify_ellipse_integral(case_id, alpha, beta, ks, os);
            } else if (*l_n2) {
                ConvexBody body = load_body(body_path);
                N2Config cfg;
                cfg.z = zre;
                cfg.beta = beta;
                cfg.delta = delta;
                cfg.r0 = r_min;
                cfg.samples = samples;
                cfg.seed = seed;
                if (!measure_path.empty()) cfg.mu = load_measure(measure_path);
                N2Report n2 = verify_n2_reduction(body, cfg);
                json j{{"lhs", n2.lhs},
                       {"rhs", n2.rhs},
                       {"rhs_stderr", n2.rhs_stderr},
                       {"inconclusive", n2.inconclusive}};
                emit(j.dump(), out_path);
                return 0;
            }
            emit(ratio_to_json(rep).dump(), out_path);
        } else if (*c_verify) {
            auto rows = run_acceptance(seed);
            std::string report = format_report(rows);
            if (out_path.empty())
                std::cout << report;
            else
                atomic_write(out_path, report);
            for (const auto& row : rows)
                if (!row.pass) return 1;
            return 0;
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 2;
    } catch (const unconverged_error& e) {
        std::cerr << "unconverged: " << e.what() << " (estimate " << e.estimate() << ")\n";
        return 3;
    } catch (const validation_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
