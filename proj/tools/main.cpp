// renewal-kit: compute renewal sequences, bracket their limits, verify the
// identity/inequality suite, cross-check via Fourier quadrature, and run the
// Monte Carlo oracle. Emits CSV or JSON with the fully-resolved parameters
// echoed in the output header, so every run is reproducible from its output.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "renewal/distribution.hpp"
#include "renewal/errors.hpp"
#include "renewal/fourier.hpp"
#include "renewal/gentools.hpp"
#include "renewal/mc.hpp"
#include "renewal/renewal.hpp"
#include "renewal/sequence.hpp"

using json = nlohmann::ordered_json;
using namespace renewal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitCheckFailure = 2;
constexpr int kExitBudgetExhausted = 3;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Table accumulator that renders either CSV (with "# key=value" header
// comments) or JSON ({"command", "params", "rows", "summary"}).
class RunOutput {
public:
    RunOutput(std::string command, std::string format) : command_(std::move(command)), format_(std::move(format)) {}

    void param(const std::string& key, const std::string& value) { params_.emplace_back(key, value); }
    void param(const std::string& key, double value) { params_.emplace_back(key, fmt17(value)); }
    void param(const std::string& key, std::size_t value) { params_.emplace_back(key, std::to_string(value)); }

    void columns(std::vector<std::string> names) { columns_ = std::move(names); }
    void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

    void summary(const std::string& key, const std::string& value) { summary_.emplace_back(key, value); }
    void summary(const std::string& key, double value) { summary_.emplace_back(key, fmt17(value)); }
    void summary(const std::string& key, std::size_t value) { summary_.emplace_back(key, std::to_string(value)); }
    void summary(const std::string& key, bool value) { summary_.emplace_back(key, value ? "true" : "false"); }

    std::string render() const {
        if (format_ == "json") {
            json out;
            out["command"] = command_;
            json params = json::object();
            for (const auto& [k, v] : params_) params[k] = v;
            out["params"] = params;
            json rows = json::array();
            for (const auto& r : rows_) {
                json jr = json::object();
                for (std::size_t i = 0; i < columns_.size(); ++i) jr[columns_[i]] = r[i];
                rows.push_back(jr);
            }
            out["rows"] = rows;
            json summary = json::object();
            for (const auto& [k, v] : summary_) summary[k] = v;
            out["summary"] = summary;
            return out.dump(2) + "\n";
        }
        std::ostringstream os;
        os << "# command=" << command_ << "\n";
        for (const auto& [k, v] : params_) os << "# " << k << "=" << v << "\n";
        for (const auto& [k, v] : summary_) os << "# " << k << "=" << v << "\n";
        for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
        os << "\n";
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << "\n";
        }
        return os.str();
    }

private:
    std::string command_, format_;
    std::vector<std::pair<std::string, std::string>> params_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::pair<std::string, std::string>> summary_;
};

void emit(const RunOutput& out, const std::string& path) {
    const std::string text = out.render();
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    f << text;
}

// --dist accepts inline JSON (starts with '{') or a file path.
IncrementDistribution load_distribution(const std::string& spec) {
    std::string text = spec;
    if (!text.empty() && text[0] != '{') {
        std::ifstream f(spec);
        if (!f) throw std::runtime_error("cannot read distribution spec file " + spec);
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    return parse_distribution_spec(text);
}

struct CommonOpts {
    std::string dist_spec;
    std::string format = "csv";
    std::string output = "-";
};

void add_common(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--dist", c.dist_spec, "distribution spec: inline JSON or a file path")->required();
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output,-o", c.output, "output path ('-' = stdout)");
}

// ---------------------------------------------------------------- compute

int run_compute(const CommonOpts& c, std::size_t n, std::string mode) {
    const IncrementDistribution d = load_distribution(c.dist_spec);
    if (mode == "auto") mode = d.exact() ? "exact" : "float";

    RunOutput out("compute", c.format);
    out.param("dist", d.describe());
    out.param("format", c.format);
    out.param("n", n);
    out.param("mode", mode);
    out.columns({"n", "p_n", "delta1", "delta2"});

    if (mode == "exact") {
        const auto p = compute_renewal_exact(d, n);
        const auto d1 = delta(p.terms, 1), d2 = delta(p.terms, 2);
        for (std::size_t i = 0; i <= n; ++i)
            out.row({std::to_string(i), format_rational(p.terms[i]), format_rational(d1[i]), format_rational(d2[i])});
    } else {
        const auto p = compute_renewal(d, n);
        const auto d1 = delta(p.terms, 1), d2 = delta(p.terms, 2);
        out.summary("float_error_bound_at_n", recurrence_error_bound(n));
        for (std::size_t i = 0; i <= n; ++i)
            out.row({std::to_string(i), fmt17(p.terms[i]), fmt17(d1[i]), fmt17(d2[i])});
    }
    emit(out, c.output);
    return kExitOk;
}

// ---------------------------------------------------------------- limit

int run_limit(const CommonOpts& c, double tol, std::size_t budget) {
    const IncrementDistribution d = load_distribution(c.dist_spec);

    RunOutput out("limit", c.format);
    out.param("dist", d.describe());
    out.param("format", c.format);
    out.param("tol", tol);
    out.param("budget", budget);
    out.columns({"M", "lo", "hi", "window_osc"});

    const LimitEstimate est = estimate_limit(d, tol, budget, [&](const LimitEstimate& step) {
        out.row({std::to_string(step.bracket.cutoff),
                 step.bracket.lo_valid ? fmt17(step.bracket.lo) : "",
                 fmt17(step.bracket.hi), fmt17(step.window_osc)});
    });

    out.summary("estimate", est.estimate);
    out.summary("lo_valid", est.bracket.lo_valid);
    out.summary("lo", est.bracket.lo_valid ? fmt17(est.bracket.lo) : "");
    out.summary("hi", est.bracket.hi);
    out.summary("cutoff", est.bracket.cutoff);
    out.summary("n_used", est.n_used);
    out.summary("window_osc", est.window_osc);
    out.summary("converged", est.converged);
    emit(out, c.output);
    return est.converged ? kExitOk : kExitBudgetExhausted;
}

// ---------------------------------------------------------------- verify

int run_verify(const CommonOpts& c, std::size_t n) {
    const IncrementDistribution d = load_distribution(c.dist_spec);

    RunOutput out("verify", c.format);
    out.param("dist", d.describe());
    out.param("format", c.format);
    out.param("n", n);
    out.columns({"check", "pass", "detail"});

    bool all = true;
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        out.row({name, pass ? "pass" : "FAIL", detail});
        all = all && pass;
    };

    const auto rep = check_identities(compute_renewal_exact(d, n));
    for (const auto& chk : rep.checks) add(chk.name, chk.pass, chk.detail);

    const auto grid = default_grid();
    const auto cosrep = check_strict_cos_bound(d, grid);
    add("cos series bound < 1 on grid", cosrep.pass,
        "points=" + std::to_string(cosrep.points) + " min_margin=" + fmt17(cosrep.min_margin));
    const auto modrep = check_kernel_modulus_bound(d, grid);
    add("kernel modulus bound on grid", modrep.pass, "max_excess=" + fmt17(modrep.max_excess));
    add("real-axis tightness <= 1e-12", modrep.real_axis_max_gap <= 1e-12,
        "gap=" + fmt17(modrep.real_axis_max_gap));

    {
        bool pass = true;
        std::string detail;
        const double thetas[] = {-3.1, -1.1, -1e-3, 0.0, 1e-3, 0.7, 1.5707963267948966, 3.1};
        for (double r : {0.5, 0.9, 1.0})
            for (double theta : thetas) {
                if (r == 1.0 && theta == 0.0) continue;
                const auto drep = check_real_part_decomposition(d, PolarPoint(r, theta));
                if (!drep.pass && pass) {
                    pass = false;
                    detail = "fails at r=" + fmt17(r) + " theta=" + fmt17(theta) +
                             " series_diff=" + fmt17(drep.series_abs_diff);
                }
            }
        add("real-part decomposition at samples", pass, detail);
    }
    {
        bool pass = std::fabs(one_minus_cos_over_xsq(0.0) - 0.5) == 0.0;
        double worst = 0.0;
        for (int i = -500; i <= 500; ++i) {
            const double x = 3.141592653589793 * static_cast<double>(i) / 500.0;
            worst = std::max(worst, std::fabs(x * x * one_minus_cos_over_xsq(x) - (1.0 - std::cos(x))));
        }
        pass = pass && worst <= 1e-14;
        add("cos-deficit kernel identity", pass, "max|x^2 G - (1 - cos x)|=" + fmt17(worst));
    }
    {
        // f_p (1 - f_q) = 1 inside the disk, via a long truncation of p
        const auto p = compute_renewal(d, 800);
        bool pass = true;
        double worst = 0.0;
        for (double r : {0.5, 0.9})
            for (double theta : {-2.5, -0.3, 0.0, 1.0, 3.0}) {
                const PolarPoint z(r, theta);
                const auto fp = renewal_gf(p, z);
                const auto fq = weight_gf(d, z);
                const double gap = std::abs(fp.value * (1.0 - fq.value) - 1.0);
                const double allow = 2.0 * (fp.err + fq.err) + 1e-10;
                worst = std::max(worst, gap);
                pass = pass && gap <= allow;
            }
        add("f_p (1 - f_q) = 1 inside the disk", pass, "max_gap=" + fmt17(worst));
    }

    if (!d.mean().is_infinite()) {
        bool pass = true;
        double worst = 0.0, min_abs = 1e300;
        for (const auto& pt : grid) {
            const auto fq = weight_gf(d, pt);
            const auto fQ = tail_gf(d, pt);
            const auto z = pt.to_complex();
            const double gap = std::abs((1.0 - z) * fQ.value - (1.0 - fq.value));
            const double allow = 2.0 * fQ.err + fq.err + 1e-10;
            worst = std::max(worst, gap);
            min_abs = std::min(min_abs, std::abs(fQ.value) - fQ.err);
            pass = pass && gap <= allow;
        }
        add("(1-z) f_Q = 1 - f_q on the closed disk", pass, "max_gap=" + fmt17(worst));
        add("f_Q nonvanishing on the closed disk", min_abs > 0.0, "min|f_Q|-err=" + fmt17(min_abs));

        // radial-limit consistency of the boundary representation
        bool rpass = true;
        double rworst = 0.0;
        for (std::size_t m : {std::size_t{0}, std::size_t{1}, std::size_t{3}}) {
            const auto boundary = boundary_delta1_integral(d, m, 4096);
            const auto interior = delta_coefficient_integral(d, 1, m, 0.999, 4096);
            const double gap =
                std::abs(boundary.value / (2.0 * M_PI) -
                         interior.value / (2.0 * M_PI * std::pow(0.999, static_cast<double>(m))));
            rworst = std::max(rworst, gap);
            rpass = rpass && gap <= 1e-4;
        }
        add("boundary matches r=0.999 interior (delta1)", rpass, "max_gap=" + fmt17(rworst));
    } else {
        const auto shrink = kernel_vanishing_delta(d, 1e-2);
        add("kernel vanishes near the singular point", shrink.found,
            "delta=" + fmt17(shrink.delta) + " sup=" + fmt17(shrink.max_abs));
    }

    {
        // quadrature vs recurrence, small sample
        const auto pexact = compute_renewal_exact(d, 10);
        bool pass = true;
        double worst = 0.0;
        for (unsigned l : {0u, 1u, 2u}) {
            const auto dl = delta(pexact.terms, l);
            for (std::size_t m : {std::size_t{0}, std::size_t{2}, std::size_t{7}}) {
                const auto quad = delta_coefficient_integral(d, l, m, 0.9, 2048);
                const double got = quad.value.real() / (2.0 * M_PI * std::pow(0.9, static_cast<double>(m)));
                const double gap = std::fabs(got - to_double(dl[m]));
                worst = std::max(worst, gap);
                pass = pass && gap <= 1e-8;
            }
        }
        add("quadrature matches recurrence (r=0.9)", pass, "max_gap=" + fmt17(worst));
    }

    out.summary("all_pass", all);
    emit(out, c.output);
    return all ? kExitOk : kExitCheckFailure;
}

// ---------------------------------------------------------------- quadrature

int run_quadrature(const CommonOpts& c, std::vector<unsigned> ls, std::size_t m_max, std::vector<double> rs,
                   std::size_t panels, bool boundary, double tol) {
    const IncrementDistribution d = load_distribution(c.dist_spec);

    RunOutput out("quadrature", c.format);
    out.param("dist", d.describe());
    out.param("format", c.format);
    {
        std::string s;
        for (unsigned l : ls) s += (s.empty() ? "" : " ") + std::to_string(l);
        out.param("l", s);
    }
    out.param("m_max", m_max);
    {
        std::string s;
        for (double r : rs) s += (s.empty() ? "" : " ") + fmt17(r);
        out.param("r", s);
    }
    out.param("panels", panels);
    out.param("boundary", boundary ? "true" : "false");
    out.param("tol", tol);
    out.columns({"l", "m", "r", "recurrence_value", "integral_value", "abs_diff", "est_error"});

    const bool exact = d.exact();
    std::optional<RenewalSequence<Rational>> pexact;
    std::optional<RenewalSequence<double>> pfloat;
    if (exact)
        pexact = compute_renewal_exact(d, m_max + 2);
    else
        pfloat = compute_renewal(d, m_max + 2);
    auto delta_ref = [&](unsigned l, std::size_t m) {
        return exact ? to_double(delta(pexact->terms, l)[m]) : delta(pfloat->terms, l)[m];
    };

    bool all_ok = true;
    auto push = [&](unsigned l, std::size_t m, double r, double ref, double got, double est) {
        const double diff = std::fabs(got - ref);
        all_ok = all_ok && diff <= tol;
        out.row({std::to_string(l), std::to_string(m), fmt17(r), fmt17(ref), fmt17(got), fmt17(diff), fmt17(est)});
    };

    for (double r : rs) {
        const auto table = delta_coefficient_table(d, ls, m_max, r, panels);
        for (const auto& quad : table) {
            const double scale = 2.0 * M_PI * std::pow(r, static_cast<double>(quad.coeff_index));
            push(quad.diff_order, quad.coeff_index, r, delta_ref(quad.diff_order, quad.coeff_index),
                 quad.value.real() / scale, quad.est_error / scale);
        }
    }

    if (boundary) {
        const bool infinite = d.mean().is_infinite();
        const unsigned l = infinite ? 2u : 1u;
        for (std::size_t m = 0; m <= m_max; ++m) {
            const auto quad = infinite ? boundary_delta2_integral(d, m, panels)
                                       : boundary_delta1_integral(d, m, panels);
            push(l, m, 1.0, delta_ref(l, m), quad.value.real() / (2.0 * M_PI), quad.est_error / (2.0 * M_PI));
        }
    }

    out.summary("all_within_tol", all_ok);
    emit(out, c.output);
    return all_ok ? kExitOk : kExitCheckFailure;
}

// ---------------------------------------------------------------- simulate

int run_simulate(const CommonOpts& c, std::size_t n_max, std::uint64_t trials, std::uint64_t seed, double z,
                 double min_pass) {
    const IncrementDistribution d = load_distribution(c.dist_spec);

    SimConfig cfg{d, n_max, trials, seed};
    const HitEstimate est = simulate(cfg);
    const auto recur = compute_renewal(d, n_max);
    const ComparisonReport rep = compare_with_recurrence(est, recur, z);

    RunOutput out("simulate", c.format);
    out.param("dist", d.describe());
    out.param("format", c.format);
    out.param("n_max", n_max);
    out.param("trials", std::size_t{trials});
    out.param("seed", std::size_t{seed});
    out.param("z", z);
    out.param("min_pass", min_pass);
    out.columns({"n", "hits", "p_hat", "half_width", "p_ref", "abs_diff", "pass"});
    for (const auto& lc : rep.levels)
        out.row({std::to_string(lc.level), std::to_string(est.hits[lc.level]), fmt17(lc.p_hat),
                 fmt17(z * lc.sigma), fmt17(lc.p_ref), fmt17(lc.abs_diff), lc.pass ? "1" : "0"});

    out.summary("failures", rep.failures);
    out.summary("pass_fraction", rep.pass_fraction);
    out.summary("expected_false_rate_per_level", rep.expected_false_rate);
    out.summary("insufficient_trials", rep.insufficient_trials);
    out.summary("sampler_bias_bound", est.sampler_bias_bound);
    emit(out, c.output);
    return rep.pass_fraction >= min_pass ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"renewal sequence toolkit"};
    app.require_subcommand(1);

    CommonOpts copt;

    auto* compute = app.add_subcommand("compute", "p_0..p_N with first and second differences");
    std::size_t n = 50;
    std::string mode = "auto";
    add_common(compute, copt);
    compute->add_option("--n", n, "last index of the prefix");
    compute->add_option("--mode", mode, "exact | float | auto")->check(CLI::IsMember({"exact", "float", "auto"}));

    auto* limit = app.add_subcommand("limit", "bracket lim p_n = 1/mu and estimate it");
    double tol = 1e-6;
    std::size_t budget = std::size_t{1} << 20;
    add_common(limit, copt);
    limit->add_option("--tol", tol, "target bracket width and window oscillation");
    limit->add_option("--budget", budget, "maximum prefix length");

    auto* verify = app.add_subcommand("verify", "run the identity and inequality suite");
    std::size_t vn = 200;
    add_common(verify, copt);
    verify->add_option("--n", vn, "prefix length for the exact identity suite");

    auto* quadrature = app.add_subcommand("quadrature", "Fourier-integral route vs the recurrence");
    std::vector<unsigned> ls{0, 1, 2};
    std::vector<double> rs{0.5, 0.9};
    std::size_t m_max = 20, panels = 4096;
    bool boundary = false;
    double qtol = 1e-6;
    add_common(quadrature, copt);
    quadrature->add_option("--l", ls, "difference orders");
    quadrature->add_option("--r", rs, "interior radii (0 < r < 1)");
    quadrature->add_option("--m-max", m_max, "largest coefficient index");
    quadrature->add_option("--panels", panels, "trapezoid panel count");
    quadrature->add_flag("--boundary", boundary, "also integrate on |z| = 1 (kernel chosen by the mean)");
    quadrature->add_option("--tol", qtol, "per-row tolerance on |integral - recurrence|");

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo hit-probability oracle");
    std::size_t n_max = 100;
    std::uint64_t trials = 1'000'000, seed = 0;
    double z = 4.0, min_pass = 0.999;
    add_common(simulate_cmd, copt);
    simulate_cmd->add_option("--n-max", n_max, "highest level to track");
    simulate_cmd->add_option("--trials", trials, "number of walks");
    simulate_cmd->add_option("--seed", seed, "RNG seed (fully determines the output)");
    simulate_cmd->add_option("--z", z, "CI multiplier for the comparison");
    simulate_cmd->add_option("--min-pass", min_pass, "required fraction of passing levels");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed()) return run_compute(copt, n, mode);
        if (limit->parsed()) return run_limit(copt, tol, budget);
        if (verify->parsed()) return run_verify(copt, vn);
        if (quadrature->parsed()) return run_quadrature(copt, ls, m_max, rs, panels, boundary, qtol);
        if (simulate_cmd->parsed()) return run_simulate(copt, n_max, trials, seed, z, min_pass);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
