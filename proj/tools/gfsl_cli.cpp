#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gfsl/discrete.hpp"
#include "gfsl/errors.hpp"
#include "gfsl/global_traces.hpp"
#include "gfsl/io.hpp"
#include "gfsl/means.hpp"
#include "gfsl/parallel.hpp"
#include "gfsl/selberg.hpp"
#include "gfsl/spherical.hpp"

using json = nlohmann::ordered_json;
using namespace gfsl;

namespace {

enum Exit { kPass = 0, kConfig = 1, kVerify = 2, kBudget = 3 };

struct Options {
    double tol = 1e-9;
    unsigned threads = 1;
    std::string out = ".";
    std::string format = "csv";
    double lmax = 8.0;
    int genus = 2;
    std::string laplace_file;
    std::vector<double> lambda;
    std::vector<double> nu;
    int n = -1;
    int k = -1;
    std::vector<double> tau;
    double center = 4.0;
    double sigma = 1.0;
    long max_visited = 40000000;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Typed row cells; CSV uses shortest round-trip numbers, JSON keeps the types.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<json>> rows;
};

std::string cell_text(const json& v) {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::filesystem::path out_path(const Options& o, const std::string& name) {
    return std::filesystem::path(o.out) / name;
}

void write_json_file(const std::filesystem::path& p, const json& j) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("--out: cannot write " + p.string());
    f << j.dump(2) << '\n';
}

void write_table(const Options& o, const std::string& stem, const Table& t) {
    if (o.format == "json") {
        json arr = json::array();
        for (const auto& r : t.rows) {
            json obj;
            for (std::size_t i = 0; i < t.header.size(); ++i) obj[t.header[i]] = r[i];
            arr.push_back(obj);
        }
        write_json_file(out_path(o, stem + ".json"), arr);
        return;
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : t.rows) {
        std::vector<std::string> s;
        for (const auto& v : r) s.push_back(cell_text(v));
        rows.push_back(s);
    }
    std::ofstream f(out_path(o, stem + ".csv"), std::ios::binary);
    if (!f) throw ConfigError("--out: cannot write " + out_path(o, stem + ".csv").string());
    write_csv(f, t.header, rows);
}

void prepare(const Options& o) {
    std::error_code ec;
    std::filesystem::create_directories(o.out, ec);
    if (!std::filesystem::is_directory(o.out)) throw ConfigError("--out: not a directory: " + o.out);
    if (o.threads < 1) throw ConfigError("--threads: must be at least 1");
    set_default_threads(o.threads);
}

std::optional<LaplaceSpectrum> load_laplace(const Options& o) {
    if (o.laplace_file.empty()) return std::nullopt;
    try {
        return read_laplace_file(o.laplace_file, o.genus);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("--laplace-file: ") + e.what());
    }
}

int cmd_spherical_check(const Options& o) {
    prepare(o);
    const int N = o.n < 0 ? 40 : o.n;
    const int K = o.k < 0 ? 8 : o.k;
    if (N < 2 || K < 1) throw ConfigError("--n/--k: need n >= 2 and k >= 1");
    std::vector<double> lams = o.lambda.empty() ? std::vector<double>{0.3, 1.0, 5.0} : o.lambda;
    std::vector<double> nus = o.nu.empty() ? std::vector<double>{0.1, 0.3} : o.nu;
    for (double v : lams)
        if (!(v > 0.0)) throw ConfigError("--lambda: values must be positive");
    for (double v : nus)
        if (!(v > 0.0 && v < 0.5)) throw ConfigError("--nu: values must lie in (0, 1/2)");

    struct Job {
        std::string regime;
        double value;
        SpectralParam p;
    };
    std::vector<Job> jobs;
    for (double v : lams) jobs.push_back({"principal", v, SpectralParam::principal(v)});
    for (double v : nus) jobs.push_back({"complementary", v, SpectralParam::complementary(v)});

    const std::pair<Branch, const char*> branches[] = {
        {Branch::Plus, "+"}, {Branch::Minus, "-"}, {Branch::MinusRenormalized, "-r"}};
    std::vector<std::array<IntertwineResidual, 3>> res(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), [&](int i) {
        KMatrices ops = build_k_matrices(jobs[i].p, K);
        res[i][0] = intertwine_residual(jobs[i].p, coeffs_plus(jobs[i].p, N, K), ops);
        res[i][1] = intertwine_residual(jobs[i].p, coeffs_minus(jobs[i].p, N, K, false), ops);
        res[i][2] = intertwine_residual(jobs[i].p, coeffs_minus(jobs[i].p, N, K, true), ops);
    });

    Table t{{"regime", "lambda", "relation", "max_residual"}, {}};
    bool ok = true;
    auto add = [&](const std::string& regime, double v, const std::string& rel, double r) {
        t.rows.push_back({regime, v, rel, r});
        if (!(r < o.tol)) ok = false;
    };
    for (std::size_t i = 0; i < jobs.size(); ++i)
        for (int b = 0; b < 3; ++b) {
            add(jobs[i].regime, jobs[i].value, std::string("X") + branches[b].second, res[i][b].x);
            add(jobs[i].regime, jobs[i].value, std::string("U") + branches[b].second, res[i][b].u);
            add(jobs[i].regime, jobs[i].value, std::string("S") + branches[b].second, res[i][b].s);
        }

    SpectralParam th = SpectralParam::threshold();
    KMatrices ops = build_k_matrices(th, K);
    CoeffTable tp = coeffs_threshold(N, K, Branch::Plus);
    CoeffTable tm = coeffs_threshold(N, K, Branch::MinusRenormalized);
    IntertwineResidual r0 = intertwine_residual(th, tp, ops);
    IntertwineResidual r1 = intertwine_residual(th, tm, ops);
    add("threshold", 0.0, "X+", r0.x);
    add("threshold", 0.0, "U+", r0.u);
    add("threshold", 0.0, "S+", r0.s);
    add("threshold", 0.0, "X-r", r1.x);
    add("threshold", 0.0, "U-r", r1.u);
    add("threshold", 0.0, "S-r", r1.s);
    // Entries reach 1e10 here, so the two branches are compared relative to their size.
    double gap = 0.0;
    for (std::size_t i = 0; i < tp.s.size(); ++i)
        gap = std::max(gap, std::abs(tp.s[i] - tm.s[i]) / std::max(1.0, std::abs(tp.s[i])));
    add("threshold", 0.0, "coalescence", gap);

    write_table(o, "spherical_residuals", t);
    return ok ? kPass : kVerify;
}

// Floating-point allowance for summing the resonance series.
double roundoff(double v) { return 16.0 * DBL_EPSILON * std::max(1.0, std::abs(v)); }

int cmd_traces(const Options& o) {
    prepare(o);
    std::vector<double> ts = o.tau.empty() ? std::vector<double>{0.5, 1.0, 2.0, std::log(2.0)} : o.tau;
    for (double t : ts)
        if (!(t > 0.0)) throw ConfigError("--tau: trace times must be positive");
    const int N = o.n < 0 ? 60 : o.n;
    if (N < 1) throw ConfigError("--n: must be positive");
    std::optional<LaplaceSpectrum> lap = load_laplace(o);
    LaplaceSpectrum spectrum;
    spectrum.genus = o.genus;
    if (lap) spectrum = *lap;
    if (o.genus < 2) throw ConfigError("--genus: must be at least 2");

    json rows = json::array();
    bool ok = true;
    auto add = [&](const std::string& id, json params, double lhs, double rhs, double bound) {
        double err = std::abs(lhs - rhs);
        bool pass = err <= bound;
        ok = ok && pass;
        rows.push_back({{"identity", id}, {"params", params}, {"lhs", lhs}, {"rhs", rhs}, {"abs_err", err},
                        {"bound", bound}, {"pass", pass}});
    };

    std::vector<double> lams = o.lambda.empty() ? std::vector<double>{0.0, 1.0} : o.lambda;
    for (double t : ts) {
        for (double lam : lams) {
            SpectralParam p = lam == 0.0 ? SpectralParam::threshold() : SpectralParam::principal(lam);
            TraceResult r = trace_spherical(p, t, N);
            add("spherical_flat_trace", {{"t", t}, {"lambda", lam}, {"N", N}}, r.flat, r.spectral_partial.back(),
                r.tail_bound + roundoff(r.flat));
        }
        for (int l : {2, 4}) {
            TraceResult r = trace_ds(l, t, N);
            add("discrete_flat_trace", {{"t", t}, {"l", l}, {"N", N}}, r.flat, r.spectral_partial.back(),
                r.tail_bound + roundoff(r.flat));
        }
        if (t >= 0.5) {
            double pre = global_trace(spectrum, t, TraceForm::PreRR, 200);
            double post = global_trace(spectrum, t, TraceForm::PostRR);
            add("global_pre_vs_post", {{"t", t}, {"genus", spectrum.genus}, {"q_max", 200}}, pre, post, 1e-10);
        }
        TanhCheck c = tanh_transform(t);
        add("tanh_fourier", {{"t", t}, {"terms", 50}}, c.pole_sum, c.closed_form, c.tail_bound + 1e-14);
    }
    // Closed-form rows at t = ln 2.
    const double ln2 = std::log(2.0);
    add("spherical_closed_form", {{"t", ln2}, {"lambda", 0.0}},
        trace_spherical(SpectralParam::threshold(), ln2, N).flat, 2.0 * std::sqrt(2.0), 1e-12);
    add("discrete_closed_form", {{"t", ln2}, {"l", 2}}, trace_ds(2, ln2, N).flat, 1.0, 1e-12);
    LaplaceSpectrum empty;
    empty.genus = 2;
    add("global_worked_value", {{"t", ln2}, {"genus", 2}}, global_trace(empty, ln2, TraceForm::PostRR), 15.0,
        1e-10);

    write_json_file(out_path(o, "traces.json"), {{"identities", rows}, {"pass", ok}});
    return ok ? kPass : kVerify;
}

int cmd_selberg(const Options& o) {
    prepare(o);
    if (!(o.lmax > 0.0 && o.lmax <= 8.0)) throw ConfigError("--lmax: must lie in (0, 8]");
    if (o.genus != 2) throw ConfigError("--genus: the built-in surface has genus 2");
    if (!(o.sigma > 0.0)) throw ConfigError("--sigma: must be positive");
    std::optional<LaplaceSpectrum> lap = load_laplace(o);
    GaussianTestFn g{o.center, o.sigma, 1.0};

    json report;
    FuchsianGroup grp = bolza_group();
    const double systole_exact = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
    report["relator_residual"] = grp.relator_residual();
    report["test_function"] = {{"center", g.center}, {"sigma", g.sigma}};

    std::vector<double> sweep;
    for (double L = 5.0; L < o.lmax - 1e-9; L += 1.0) sweep.push_back(L);
    sweep.push_back(o.lmax);

    json rows = json::array();
    LengthSpectrum last;
    int code = kPass;
    bool monotone = true;
    double prev = INFINITY;
    try {
        for (double L : sweep) {
            last = length_spectrum(grp, L, 2, o.max_visited);
            SelbergReport r = wave_trace_pair(last, lap, g);
            rows.push_back({{"lmax", L},
                            {"primitive_lengths", last.primitives.size()},
                            {"identity_term", r.identity_term},
                            {"identity_term_time_domain",
                             r.identity_term_time_domain ? json(*r.identity_term_time_domain) : json(nullptr)},
                            {"orbit_term", r.orbit_term},
                            {"geometric_side", r.geometric_side},
                            {"spectral_side", r.spectral_side ? json(*r.spectral_side) : json(nullptr)},
                            {"discrepancy", r.discrepancy},
                            {"discrepancy_is_estimate", r.discrepancy_is_estimate},
                            {"leakage", r.leakage}});
            if (!(r.discrepancy < prev)) monotone = false;
            prev = r.discrepancy;
        }
    } catch (const BudgetError& e) {
        report["budget_error"] = e.what();
        code = kBudget;
    }
    report["sweep"] = rows;
    report["discrepancy_monotone"] = monotone;

    bool ok = grp.relator_residual() < 1e-9 && monotone;
    if (!last.primitives.empty()) {
        std::ofstream f(out_path(o, "length_spectrum.csv"), std::ios::binary);
        write_length_spectrum_csv(f, last);
        report["systole"] = last.systole();
        report["systole_error"] = std::abs(last.systole() - systole_exact);
        ok = ok && std::abs(last.systole() - systole_exact) < 1e-9;
        WeylReport w = weyl_consistency(last, {0.05, 0.1, 0.15, 0.2});
        json pts = json::array();
        for (const auto& p : w.points) pts.push_back({{"s", p.s}, {"heat_trace", p.heat_trace}, {"ratio", p.ratio}});
        report["weyl"] = {{"points", pts}, {"consistent", w.consistent}};
        ok = ok && w.consistent;
    } else {
        ok = false;
    }
    report["pass"] = ok && code == kPass;
    write_json_file(out_path(o, "selberg_report.json"), report);
    if (code != kPass) return code;
    return ok ? kPass : kVerify;
}

int cmd_means(const Options& o) {
    prepare(o);
    std::vector<double> lams = o.lambda.empty() ? std::vector<double>{1.0, 2.0, 5.0} : o.lambda;
    for (double v : lams)
        if (!(v > 0.0)) throw ConfigError("--lambda: values must be positive");
    const double t = o.tau.empty() ? 3.0 : o.tau.front();
    if (!(t >= 1.0)) throw ConfigError("--tau: the expansion check needs t >= 1");
    const int M = o.n < 0 ? 8 : o.n;
    if (M < 0) throw ConfigError("--n: must be non-negative");
    bool ok = true;

    Table hc{{"lambda", "t", "M", "value", "exact", "abs_err"}, {}};
    std::vector<double> exact(lams.size());
    parallel_for(static_cast<int>(lams.size()), [&](int i) { exact[i] = legendre_conical(lams[i], t, 1e-15); });
    for (std::size_t i = 0; i < lams.size(); ++i) {
        double lam = lams[i];
        hc.rows.push_back({lam, 0.0, "", legendre_conical(lam, 0.0), 1.0, std::abs(legendre_conical(lam, 0.0) - 1.0)});
        double prev = INFINITY;
        for (int m = 0; m <= M; ++m) {
            double v = hc_partial_sum(lam, t, m);
            double err = std::abs(v - exact[i]);
            hc.rows.push_back({lam, t, m, v, exact[i], err});
            if (err > 1e-14 && !(err < prev)) ok = false;
            prev = err;
        }
        double omitted = std::abs(hc_partial_sum(lam, t, M + 1) - hc_partial_sum(lam, t, M));
        if (!(prev <= 2.0 * omitted + 1e-14)) ok = false;
    }

    auto grid = linspace(2.0, 6.0, 41);
    std::vector<WaveResidual> wr(2 * lams.size());
    for (std::size_t i = 0; i < lams.size(); ++i) {
        wr[2 * i] = wave_residual(lams[i], grid);
        wr[2 * i + 1] = wave_residual(lams[i], grid, 1e-4, 0.25);
    }
    Table ws{{"lambda", "operator", "slope", "rel_residual", "expected", "pass"}, {}};
    for (std::size_t i = 0; i < lams.size(); ++i) {
        double s0 = wr[2 * i].fit.slope, s1 = wr[2 * i + 1].fit.slope;
        bool p0 = std::abs(s0 + 2.0) <= 0.1, p1 = std::abs(s1 + 2.0) > 0.1;
        ws.rows.push_back({lams[i], "lambda^2", s0, wr[2 * i].fit.rel_residual, "slope -2", p0 ? 1 : 0});
        ws.rows.push_back({lams[i], "lambda^2+1/4", s1, wr[2 * i + 1].fit.rel_residual, "slope not -2", p1 ? 1 : 0});
        ok = ok && p0 && p1;
    }

    Table sym{{"lambda", "error", "bound"}, {}};
    for (double lam : {5.0, 10.0, 20.0, 50.0, 100.0}) {
        double e = w_plus_symbol_error(lam);
        sym.rows.push_back({lam, e, 0.2 / lam});
        ok = ok && e <= 0.2 / lam;
    }

    write_table(o, "hc_convergence", hc);
    write_table(o, "wave_slopes", ws);
    write_table(o, "w_symbol", sym);
    return ok ? kPass : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    if (const char* env = std::getenv("GFSL_THREADS")) {
        try {
            std::size_t pos = 0;
            long v = std::stol(env, &pos);
            if (pos != std::string(env).size() || v < 1) throw std::invalid_argument("range");
            o.threads = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            std::cerr << "GFSL_THREADS: expected a positive integer, got '" << env << "'\n";
            return kConfig;
        }
    }

    CLI::App app{"Verification suites for geodesic-flow resonance models"};
    app.set_config("--config", "", "INI file with one [section] per subcommand; flags override it");
    app.require_subcommand(1);
    app.allow_config_extras(CLI::config_extras_mode::error);
    int (*run)(const Options&) = nullptr;
    auto sub = [&](const char* name, const char* desc, int (*f)(const Options&)) {
        CLI::App* c = app.add_subcommand(name, desc);
        c->callback([&run, f] { run = f; });
        c->add_option("--tol", o.tol, "Residual tolerance")->check(CLI::PositiveNumber);
        c->add_option("--threads", o.threads, "Worker threads (default GFSL_THREADS or 1)")
            ->check(CLI::PositiveNumber);
        c->add_option("--out", o.out, "Output directory");
        c->add_option("--format", o.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
        c->add_option("--lmax", o.lmax, "Largest geodesic length");
        c->add_option("--genus", o.genus, "Surface genus");
        c->add_option("--laplace-file", o.laplace_file, "CSV with columns mu,multiplicity")->check(CLI::ExistingFile);
        c->add_option("--lambda", o.lambda, "Spectral parameters")->delimiter(',');
        c->add_option("--nu", o.nu, "Complementary parameters")->delimiter(',');
        c->add_option("--n", o.n, "Truncation order");
        c->add_option("--k", o.k, "K-type bound");
        c->add_option("--tau", o.tau, "Times")->delimiter(',');
        c->add_option("--center", o.center, "Test function center");
        c->add_option("--sigma", o.sigma, "Test function width");
        c->add_option("--max-visited", o.max_visited, "Tile budget for the length search");
    };
    sub("spherical-check", "Intertwining residuals of the spherical models", cmd_spherical_check);
    sub("traces", "Flat trace identities", cmd_traces);
    sub("selberg", "Length spectrum and trace formula harness", cmd_selberg);
    sub("means", "Harish-Chandra expansion and wave asymptotics", cmd_means);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kPass : kConfig;
    }
    try {
        return run(o);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kConfig;
    } catch (const BudgetError& e) {
        std::cerr << e.what() << '\n';
        return kBudget;
    } catch (const gfsl::Error& e) {
        std::cerr << e.what() << '\n';
        return kVerify;
    }
}
