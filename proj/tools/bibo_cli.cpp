// Command-line front end: parse system specs and signals, dispatch analyses,
// emit machine-readable reports and plot-ready data. All numeric output is
// rendered with 17 significant digits; identical configs (including seeds)
// produce byte-identical files.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bibo/io.hpp"
#include "bibo/laplace.hpp"
#include "bibo/measure.hpp"
#include "bibo/perturbation.hpp"
#include "bibo/simulate.hpp"
#include "bibo/spectral.hpp"

using nlohmann::ordered_json;

namespace {

ordered_json number(double value, const char* provenance) {
    return ordered_json{{"value", value}, {"provenance", provenance}};
}

ordered_json report_to_json(const bibo::BiboReport& report) {
    ordered_json j;
    j["verdict"] = bibo::verdict_name(report.verdict);
    j["condition"] = bibo::condition_name(report.condition_used);
    if (report.bound) j["bound"] = number(*report.bound, "truncated-sum");
    if (report.tail_bound) j["tail_bound"] = number(*report.tail_bound, "tail-bound");
    if (report.empirical_ratio) j["empirical_ratio"] = number(*report.empirical_ratio, "quadrature");
    j["notes"] = report.notes;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw bibo::Error(bibo::ErrorCode::ParseError, "cannot open output file: " + path);
    out << text;
}

// dump with explicit float rendering: nlohmann's dump already round-trips
// doubles bit-exactly (shortest-representation), but reports store numbers
// pre-formatted where the schema wants fixed 17-digit text.
void write_json(const std::string& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

std::string transfer_csv(const bibo::SpectralSystemSpec& spec, double sigma_lo, double sigma_hi, int nodes) {
    std::string out = "s_re,s_im,g_re,g_im\n";
    for (int i = 0; i < nodes; ++i) {
        const double sigma =
            nodes == 1 ? sigma_lo
                       : sigma_lo * std::pow(sigma_hi / sigma_lo, static_cast<double>(i) / (nodes - 1));
        const bibo::Complex g = bibo::evaluate_transfer(spec, {sigma, 0.0});
        out += bibo::format_double(sigma) + ",0," + bibo::format_double(g.real()) + ',' +
               bibo::format_double(g.imag()) + '\n';
    }
    return out;
}

std::string perturbed_transfer_csv(const bibo::TransferFn& g, double sigma_lo, double sigma_hi, int nodes) {
    std::string out = "sigma,g_re,g_im\n";
    for (int i = 0; i < nodes; ++i) {
        const double sigma =
            nodes == 1 ? sigma_lo
                       : sigma_lo * std::pow(sigma_hi / sigma_lo, static_cast<double>(i) / (nodes - 1));
        const bibo::Complex v = g(bibo::Complex(sigma, 0.0));
        out += bibo::format_double(sigma) + ',' + bibo::format_double(v.real()) + ',' +
               bibo::format_double(v.imag()) + '\n';
    }
    return out;
}

int run_analyze(const std::string& spec_path, const std::string& out_path,
                std::optional<double> alpha_order, std::optional<double> beta_order) {
    const bibo::SpectralSystemSpec spec = bibo::load_spec_json(spec_path);
    ordered_json stages = ordered_json::array();
    bibo::BiboReport final_report;
    bool stopped = false;

    auto push_stage = [&](const bibo::BiboReport& r) {
        stages.push_back(report_to_json(r));
        if (!stopped) final_report = r;
        if (r.verdict == bibo::Verdict::ProvedBibo) stopped = true;
    };

    // Cheap certificates first; stop at the first proof.
    push_stage(bibo::check_cond_riesz(spec));
    if (!stopped) push_stage(bibo::check_finite_unstable(spec));
    if (!stopped) push_stage(bibo::check_impulse_l1(spec));
    if (!stopped && alpha_order && beta_order) {
        push_stage(bibo::check_fractional_orders(spec, *alpha_order, *beta_order));
    }

    ordered_json j;
    j["stages"] = stages;

    const bibo::TransferFn transfer = bibo::make_transfer_fn(spec);
    const bibo::ProbeResult probe = bibo::halfplane_bound_probe(transfer);
    if (final_report.verdict == bibo::Verdict::ProvedBibo &&
        probe.flag == bibo::GrowthFlag::GrowsAlongReals) {
        // A bounded-variation Laplace preimage forces G bounded on C_0, so
        // detected growth can only downgrade, never upgrade.
        final_report.verdict = bibo::Verdict::ConditionFailed;
        final_report.notes += "; downgraded: halfplane probe detected growth along the reals";
    }
    j["verdict"] = bibo::verdict_name(final_report.verdict);
    j["condition"] = bibo::condition_name(final_report.condition_used);
    if (final_report.bound) j["bound"] = number(*final_report.bound, "truncated-sum");
    j["notes"] = final_report.notes;
    j["halfplane_probe"] = ordered_json{{"sup_estimate", number(probe.sup_estimate, "closed-form")},
                                        {"growth_flag", bibo::growth_flag_name(probe.flag)},
                                        {"notes", probe.notes}};
    write_json(out_path, j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BIBO stability toolbox for truncated Riesz-spectral system nodes"};
    app.require_subcommand(1);

    std::string spec_path, signal_path, out_path = "out";
    double dt = 1e-3, tmax = 10.0, sigma = 0.0;
    int nodes = 48, n_inputs = 10;
    std::uint64_t seed = 12345;
    std::string method = "bromwich", format = "csv";
    std::optional<double> alpha_order, beta_order;
    std::size_t n_pairs = 1000;

    auto* analyze = app.add_subcommand("analyze", "run the sufficient-condition cascade on a spec");
    analyze->add_option("--spec", spec_path, "system spec JSON")->required();
    analyze->add_option("--out", out_path, "report JSON path");
    analyze->add_option("--alpha", alpha_order, "fractional input order");
    analyze->add_option("--beta", beta_order, "fractional output order");

    auto* impulse = app.add_subcommand("impulse", "sample the impulse-response density");
    impulse->add_option("--spec", spec_path, "system spec JSON")->required();
    impulse->add_option("--out", out_path, "density CSV path");
    impulse->add_option("--dt", dt, "grid step");
    impulse->add_option("--tmax", tmax, "grid horizon");

    auto* transfer = app.add_subcommand("transfer", "sample G on a log grid of the real axis");
    transfer->add_option("--spec", spec_path, "system spec JSON")->required();
    transfer->add_option("--out", out_path, "samples path");
    transfer->add_option("--sigma", sigma, "left end of the sigma grid (default abscissa+1, floored at 1e-2)");
    transfer->add_option("--tmax", tmax, "right end of the sigma grid (reused flag; default 1e6)");
    transfer->add_option("--nodes", nodes, "number of samples");
    transfer->add_option("--format", format, "csv|json");

    auto* simulate = app.add_subcommand("simulate", "simulate y for an input signal and estimate the BIBO ratio");
    simulate->add_option("--spec", spec_path, "system spec JSON")->required();
    simulate->add_option("--signal", signal_path, "input CSV (default: unit step on the grid)");
    simulate->add_option("--out", out_path, "output CSV path (ratio JSON lands at <out>.ratio.json)");
    simulate->add_option("--dt", dt, "grid step for the generated step input");
    simulate->add_option("--tmax", tmax, "horizon for the generated step input");
    simulate->add_option("--seed", seed, "random-suite seed");
    simulate->add_option("--n-inputs", n_inputs, "random inputs in the ratio suite");

    auto* invlap = app.add_subcommand("invlap", "numerically invert G - alpha back to the density");
    invlap->add_option("--spec", spec_path, "system spec JSON")->required();
    invlap->add_option("--out", out_path, "density CSV path (summary JSON at <out>.json)");
    invlap->add_option("--method", method, "bromwich|talbot");
    invlap->add_option("--nodes", nodes, "contour nodes");
    invlap->add_option("--sigma", sigma, "abscissa shift override (> abscissa)");
    invlap->add_option("--dt", dt, "grid step");
    invlap->add_option("--tmax", tmax, "grid horizon");

    auto* demo_mult = app.add_subcommand("perturb-demo-mult", "multiplicative-perturbation counterexample checks");
    demo_mult->add_option("--N", n_pairs, "truncation pairs");
    demo_mult->add_option("--out", out_path, "report JSON path (G~ CSV at <out>.csv)");

    auto* demo_add = app.add_subcommand("perturb-demo-add", "additive-perturbation decomposition checks");
    demo_add->add_option("--out", out_path, "report JSON path (perturbed-transfer CSV at <out>.csv)");
    demo_add->add_option("--dt", dt, "simulation grid step");
    demo_add->add_option("--tmax", tmax, "simulation horizon");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            return run_analyze(spec_path, out_path, alpha_order, beta_order);
        }

        if (impulse->parsed()) {
            const auto spec = bibo::load_spec_json(spec_path);
            const bibo::ImpulseDensity density = bibo::impulse_density(spec);
            bibo::Signal h;
            h.dt = dt;
            const auto len = static_cast<std::size_t>(std::llround(tmax / dt)) + 1;
            h.samples.resize(len);
            for (std::size_t k = 0; k < len; ++k) h.samples[k] = density.evaluate(h.time_at(k));
            bibo::save_signal_csv(out_path, h);
            return 0;
        }

        if (transfer->parsed()) {
            const auto spec = bibo::load_spec_json(spec_path);
            const double lo = sigma > 0.0 ? sigma : std::max(spec.abscissa() + 1.0, 1e-2);
            const double hi = transfer->count("--tmax") ? tmax : 1e6;
            const std::string csv = transfer_csv(spec, lo, hi, nodes);
            if (format == "json") {
                ordered_json j;
                j["columns"] = {"s_re", "s_im", "g_re", "g_im"};
                j["csv"] = csv;
                write_json(out_path, j);
            } else {
                write_text(out_path, csv);
            }
            return 0;
        }

        if (simulate->parsed()) {
            const auto spec = bibo::load_spec_json(spec_path);
            bibo::Signal u;
            if (!signal_path.empty()) {
                u = bibo::load_signal_csv(signal_path);
            } else {
                u.dt = dt;
                u.samples.assign(static_cast<std::size_t>(std::llround(tmax / dt)) + 1, 1.0);
            }
            const bibo::Signal y = bibo::simulate_output(spec, u);
            bibo::save_signal_csv(out_path, y);

            bibo::RatioSuiteConfig rcfg;
            rcfg.seed = seed;
            rcfg.t_final = u.duration();
            rcfg.dt = u.dt;
            const bibo::RatioEstimate est = bibo::empirical_bibo_ratio(spec, rcfg, n_inputs);
            double tv = 0.0;
            bool tv_ok = true;
            try {
                tv = bibo::total_variation(bibo::BVMeasure::from_spec(spec));
            } catch (const bibo::Error&) {
                tv_ok = false;  // visibly unstable: no finite TV bound
            }
            ordered_json j;
            j["max_ratio"] = est.max_ratio;
            j["tv_bound"] = tv_ok ? ordered_json(tv) : ordered_json(nullptr);
            j["n_inputs"] = est.n_inputs;
            j["seed"] = est.seed;
            j["witness"] = est.witness_kind;
            j["max_ratio_provenance"] = "quadrature";
            j["tv_bound_provenance"] = "quadrature";
            write_json(out_path + ".ratio.json", j);
            return 0;
        }

        if (invlap->parsed()) {
            const auto spec = bibo::load_spec_json(spec_path);
            // invert G - alpha: the atom is not recoverable pointwise
            bibo::SpectralSystemSpec density_only = spec;
            density_only.feedthrough = 0.0;
            density_only = bibo::validate_spec(std::move(density_only));
            const bibo::TransferFn g = bibo::make_transfer_fn(density_only);
            bibo::InversionConfig cfg = bibo::default_inversion_config(g);
            cfg.method = method == "talbot" ? bibo::InversionMethod::TalbotFixed
                                            : bibo::InversionMethod::BromwichTrapezoid;
            cfg.contour_nodes = nodes;
            if (sigma > 0.0) cfg.abscissa_shift = sigma;
            cfg.t_grid.dt = dt;
            cfg.t_grid.len = static_cast<std::size_t>(std::llround(tmax / dt)) + 1;
            const bibo::InversionCrossCheck cross = bibo::invert_laplace_cross(g, cfg);
            bibo::save_signal_csv(out_path, cross.primary);
            ordered_json j;
            j["method"] = method == "talbot" ? "TalbotFixed" : "BromwichTrapezoid";
            j["contour_nodes"] = cfg.contour_nodes;
            j["cross_check_max_discrepancy"] = number(cross.max_discrepancy, "quadrature");
            write_json(out_path + ".json", j);
            return 0;
        }

        if (demo_mult->parsed()) {
            bibo::CounterexampleConfig cfg;
            const bibo::CounterexampleReport report = bibo::verify_counterexample(n_pairs, cfg);
            const auto bundle = bibo::make_counterexample(n_pairs);
            write_text(out_path + ".csv", perturbed_transfer_csv(bundle.perturbed_transfer_fn, 0.5, 1e6, 121));
            ordered_json j;
            j["n_pairs"] = report.n_pairs;
            j["unperturbed_max_residual"] = number(report.unperturbed_max_residual, "truncated-sum");
            j["difference_sum_max_error"] = number(report.difference_sum_max_error, "truncated-sum");
            j["anchored_value_max_error"] = number(report.anchored_value_max_error, "closed-form");
            j["probe_flag"] = bibo::growth_flag_name(report.probe_flag);
            j["probe_sup"] = number(report.probe_sup, "closed-form");
            j["asymptote_max_relative_deviation"] = number(report.asymptote_max_deviation, "closed-form");
            j["sub_checks"] = ordered_json{{"a", report.ok_unperturbed},
                                           {"b", report.ok_convergence},
                                           {"c", report.ok_probe},
                                           {"d", report.ok_asymptote}};
            j["all_ok"] = report.all_ok;
            j["notes"] = report.notes;
            write_json(out_path, j);
            bibo::require_counterexample_ok(report);
            return 0;
        }

        if (demo_add->parsed()) {
            // scalar closed-form case + a 50-mode diagonal case
            bibo::Signal u;
            u.dt = dt;
            u.samples.assign(static_cast<std::size_t>(std::llround(tmax / dt)) + 1, 1.0);

            bibo::SpectralSystemSpec scalar;
            scalar.eigenvalues = {-1.0};
            scalar.b_coeffs = {1.0};
            scalar.c_coeffs = {1.0};
            scalar = bibo::validate_spec(std::move(scalar));
            const double scalar_residual = bibo::additive_decomposition_check(scalar, {-1.0}, u);

            bibo::SpectralSystemSpec diag;
            for (int n = 1; n <= 50; ++n) {
                diag.eigenvalues.push_back(-static_cast<double>(n));
                diag.b_coeffs.push_back(1.0);
                diag.c_coeffs.push_back(1.0);
            }
            diag = bibo::validate_spec(std::move(diag));
            std::vector<bibo::Complex> p(50);
            for (int n = 1; n <= 50; ++n) p[n - 1] = 0.5 * std::sin(static_cast<double>(n));
            const double diag_residual = bibo::additive_decomposition_check(diag, p, u);

            bibo::SpectralSystemSpec small;
            for (int n = 1; n <= 8; ++n) {
                small.eigenvalues.push_back(-static_cast<double>(n));
                small.b_coeffs.push_back(1.0);
                small.c_coeffs.push_back(1.0 / n);
            }
            small = bibo::validate_spec(std::move(small));
            std::vector<std::vector<bibo::Complex>> p_dense(8, std::vector<bibo::Complex>(8));
            for (int i = 0; i < 8; ++i) {
                for (int jx = 0; jx < 8; ++jx) {
                    p_dense[i][jx] = 0.05 * std::cos(static_cast<double>(3 * i + jx));
                }
            }
            const double dense_residual = bibo::additive_decomposition_check_dense(small, p_dense, u);

            const double tol = 1e-8 * (1.0 + bibo::sup_norm(u));
            ordered_json j;
            j["scalar_residual"] = number(scalar_residual, "closed-form");
            j["diagonal_residual"] = number(diag_residual, "truncated-sum");
            j["dense_residual"] = number(dense_residual, "truncated-sum");
            j["tolerance"] = number(tol, "closed-form");
            const bool ok = scalar_residual <= tol && diag_residual <= tol && dense_residual <= tol;
            j["all_ok"] = ok;
            write_json(out_path, j);

            const bibo::TransferFn pert = bibo::make_transfer_fn([&] {
                bibo::SpectralSystemSpec s = diag;
                for (int n = 0; n < 50; ++n) s.eigenvalues[n] += p[n];
                return bibo::validate_spec(std::move(s));
            }());
            write_text(out_path + ".csv", perturbed_transfer_csv(pert, 1.0, 1e6, 121));
            if (!ok) {
                throw bibo::Error(bibo::ErrorCode::AssertionFailure, "additive decomposition residual too large");
            }
            return 0;
        }
    } catch (const bibo::Error& e) {
        ordered_json err;
        err["error"] = bibo::error_code_name(e.code());
        err["message"] = e.what();
        std::cerr << err.dump() << std::endl;
        return e.code() == bibo::ErrorCode::AssertionFailure ? 2 : 1;
    } catch (const std::exception& e) {
        ordered_json err;
        err["error"] = "InternalError";
        err["message"] = e.what();
        std::cerr << err.dump() << std::endl;
        return 1;
    }
    return 1;
}
