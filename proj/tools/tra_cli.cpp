#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tra/tra.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

// %.17g without the locale
std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, end);
}

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Flag values merged over the config file. Every typed read is echoed in read order.
class Settings {
public:
    std::map<std::string, std::string> flags;  // bound to CLI11 options
    std::vector<std::string> keys;

    void declare(CLI::App* app, const std::string& key, const std::string& help) {
        keys.push_back(key);
        options_[key] = app->add_option("--" + key, flags[key], help);
    }

    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read config file " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw tra::ValidationError(path + ":" + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(line.substr(0, eq));
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                throw tra::ValidationError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
            file_[key] = trim(line.substr(eq + 1));
        }
    }

    std::optional<std::string> raw(const std::string& key) const {
        if (auto o = options_.find(key); o != options_.end() && o->second->count() > 0) return flags.at(key);
        if (auto f = file_.find(key); f != file_.end()) return f->second;
        return std::nullopt;
    }

    std::optional<double> opt_num(const std::string& key) {
        const auto r = raw(key);
        if (!r) return std::nullopt;
        const double v = parse_num(key, *r);
        echo[key] = v;
        return v;
    }
    double num(const std::string& key, double fallback) {
        const double v = opt_num(key).value_or(fallback);
        echo[key] = v;
        return v;
    }
    double num(const std::string& key) {
        const auto v = opt_num(key);
        if (!v) throw tra::ValidationError("missing required value --" + key);
        return *v;
    }
    std::optional<int> opt_int(const std::string& key) {
        const auto r = raw(key);
        if (!r) return std::nullopt;
        int v = 0;
        const auto [end, ec] = std::from_chars(r->data(), r->data() + r->size(), v);
        if (ec != std::errc() || end != r->data() + r->size())
            throw tra::ValidationError("--" + key + ": not an integer: '" + *r + "'");
        echo[key] = v;
        return v;
    }
    int integer(const std::string& key, int fallback) {
        const int v = opt_int(key).value_or(fallback);
        echo[key] = v;
        return v;
    }
    std::string str(const std::string& key, const std::string& fallback) {
        const std::string v = raw(key).value_or(fallback);
        echo[key] = v;
        return v;
    }

    json echo = json::object();

private:
    std::map<std::string, CLI::Option*> options_;
    std::map<std::string, std::string> file_;

    static double parse_num(const std::string& key, const std::string& s) {
        double v = 0.0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || end != s.data() + s.size())
            throw tra::ValidationError("--" + key + ": not a number: '" + s + "'");
        return v;
    }
};

struct Command {
    CLI::App* app;
    Settings settings;
    std::string config;
};

const char* const kOdeKeys[][2] = {{"a", "coefficient of x y'"},          {"b", "coefficient of y'"},
                                   {"Ap", "A+"}, {"Am", "A-"}, {"A1", "A1"}, {"A0", "A0"}};

void declare_common(Command& c) {
    c.app->add_option("--config", c.config, "key = value file; flags override it");
    c.settings.declare(c.app, "format", "csv or json");
    c.settings.declare(c.app, "out", "output file (default stdout)");
}

void declare_ode(Command& c) {
    for (const auto& k : kOdeKeys) c.settings.declare(c.app, k[0], k[1]);
}

void declare_class(Command& c) {
    c.settings.declare(c.app, "class", "K0, K1, C8B, L39A, L39B, L39C or auto");
    c.settings.declare(c.app, "mu", "free Bessel parameter (K1, C8B)");
    c.settings.declare(c.app, "alpha", "free Bessel parameter (C8B)");
    c.settings.declare(c.app, "tau", "free Laguerre parameter (L39C)");
    c.settings.declare(c.app, "branch", "sign of the C8B Hahn binding, +1 or -1");
    c.settings.declare(c.app, "reading", "default, or readings joined by '+'");
}

void declare_grid(Command& c) {
    c.settings.declare(c.app, "x-min", "grid start");
    c.settings.declare(c.app, "x-max", "grid end");
    c.settings.declare(c.app, "grid-count", "grid points");
    c.settings.declare(c.app, "spacing", "log or linear");
}

tra::OdeParams read_ode(Settings& s) {
    return {s.num("a"), s.num("b", 0.0), s.num("Ap", 0.0), s.num("Am", 0.0), s.num("A1", 0.0), s.num("A0", 0.0)};
}

std::string read_format(Settings& s) {
    const std::string f = s.str("format", "csv");
    if (f != "csv" && f != "json") throw tra::ValidationError("--format must be csv or json");
    return f;
}

tra::Reading parse_reading(const std::string& text) {
    tra::Reading r;
    if (text == "default") return r;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, '+')) {
        if (part == "laguerre_exponent_shifted") r.laguerre_exponent_shifted = true;
        else if (part == "g_factorial") r.g_factorial = true;
        else if (part == "k1_constraint_Aplus") r.k1_constraint_Aplus = true;
        else if (part == "xi_alpha_form") r.xi_alpha_form = true;
        else throw tra::ValidationError("unknown reading '" + part + "'");
    }
    return r;
}

tra::ClassId read_class(Settings& s, const tra::OdeParams& p) {
    const std::string name = s.str("class", "auto");
    if (name == "auto") {
        for (const auto& r : tra::classify(p))
            if (!r.redirect) {
                s.echo["resolved_class"] = tra::class_name(r.id);
                return r.id;
            }
        throw tra::ValidationError("no solution class admits these parameters");
    }
    const auto id = tra::parse_class(name);
    if (!id) throw tra::ValidationError("unknown class '" + name + "'");
    return *id;
}

tra::FreeParams read_free(Settings& s) {
    tra::FreeParams f;
    f.mu = s.opt_num("mu");
    f.alpha = s.opt_num("alpha");
    f.tau = s.opt_num("tau");
    f.branch = s.integer("branch", 1);
    if (f.branch != 1 && f.branch != -1) throw tra::ValidationError("--branch must be +1 or -1");
    return f;
}

tra::GridSpec read_grid(Settings& s) {
    tra::GridSpec g;
    g.x_min = s.num("x-min", g.x_min);
    g.x_max = s.num("x-max", g.x_max);
    g.count = s.integer("grid-count", g.count);
    const std::string sp = s.str("spacing", "log");
    if (sp == "log") g.spacing = tra::Spacing::logarithmic;
    else if (sp == "linear") g.spacing = tra::Spacing::linear;
    else throw tra::ValidationError("--spacing must be log or linear");
    tra::validate(g);
    return g;
}

tra::ClassSolution read_solution(Settings& s) {
    const tra::OdeParams p = read_ode(s);
    const tra::ClassId id = read_class(s, p);
    const tra::FreeParams f = read_free(s);
    const std::string reading = s.str("reading", "default");
    return tra::resolve_class(p, id, f, parse_reading(reading));
}

int read_truncation(Settings& s, const tra::ClassSolution& sol) {
    const int N = s.integer("N", tra::default_truncation(sol));
    if (N < 0) throw tra::ValidationError("--N must be nonnegative");
    return N;
}

unsigned thread_cap() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TRA_NUM_THREADS"); env && *env) {
        unsigned cap = 0;
        const std::string v(env);
        const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), cap);
        if (ec != std::errc() || end != v.data() + v.size() || cap == 0)
            throw tra::ValidationError("TRA_NUM_THREADS must be a positive integer");
        n = std::min(n, cap);
    }
    return n;
}

// each index writes only its own slot, so the result does not depend on the thread count
template <class F>
void parallel_for(std::size_t count, F&& body) {
    const std::size_t workers = std::min<std::size_t>(thread_cap(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw IoError("cannot write " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
    void finish() {
        os().flush();
        if (!os()) throw IoError("write failed");
    }

private:
    std::ofstream file_;
};

void emit_json(Settings& s, json body) {
    json doc;
    doc["config_echo"] = s.echo;
    for (auto& [k, v] : body.items()) doc[k] = std::move(v);
    Output out(s.str("out", ""));
    out.os() << doc.dump(2) << '\n';
    out.finish();
}

json metadata_json(const tra::SpectrumResult& r) {
    json m = json::object();
    for (const auto& [k, v] : r.metadata) m[k] = v;
    return m;
}

// ---- subcommands ---------------------------------------------------------------------------

int run_classify(Settings& s) {
    const std::string format = read_format(s);
    const tra::OdeParams p = read_ode(s);
    const double tol = s.num("tol", 1e-12);
    const auto reports = tra::classify(p, tol);
    if (format == "json") {
        json classes = json::array();
        for (const auto& r : reports) {
            json rel = json::array();
            for (const auto& c : r.relations) rel.push_back({{"relation", c.relation}, {"residual", c.residual}, {"holds", c.holds}});
            classes.push_back({{"class", tra::class_name(r.id)}, {"redirect", r.redirect}, {"reason", r.reason}, {"relations", rel}});
        }
        emit_json(s, {{"classes", classes}});
        return 0;
    }
    Output out(s.str("out", ""));
    out.os() << "class,redirect,relation,residual,holds\n";
    for (const auto& r : reports)
        for (const auto& c : r.relations)
            out.os() << tra::class_name(r.id) << ',' << (r.redirect ? "true" : "false") << ",\"" << c.relation << "\","
                     << fmt(c.residual) << ',' << (c.holds ? "true" : "false") << '\n';
    out.finish();
    return 0;
}

int run_solve(Settings& s) {
    const std::string format = read_format(s);
    const tra::ClassSolution sol = read_solution(s);
    const int N = read_truncation(s, sol);
    const auto f = tra::expansion_coefficients(sol, N);
    if (format == "json") {
        emit_json(s, {{"class", tra::class_name(sol.id)},
                      {"reading", sol.reading.describe()},
                      {"binding", sol.binding.label},
                      {"N", N},
                      {"coefficients", f}});
        return 0;
    }
    Output out(s.str("out", ""));
    out.os() << "n,f_n\n";
    for (int n = 0; n <= N; ++n) out.os() << n << ',' << fmt(f[n]) << '\n';
    out.finish();
    return 0;
}

int run_eval(Settings& s) {
    const std::string format = read_format(s);
    const tra::ClassSolution sol = read_solution(s);
    const int N = read_truncation(s, sol);
    const tra::GridSpec grid = read_grid(s);
    const auto series = tra::make_series(sol, N);
    const auto x = tra::grid_points(grid);
    std::vector<double> y(x.size());
    parallel_for(x.size(), [&](std::size_t i) { y[i] = tra::evaluate_series(series, x[i]); });
    if (format == "json") {
        emit_json(s, {{"class", tra::class_name(sol.id)}, {"N", N}, {"x", x}, {"y", y}});
        return 0;
    }
    Output out(s.str("out", ""));
    out.os() << "x,y\n";
    for (std::size_t i = 0; i < x.size(); ++i) out.os() << fmt(x[i]) << ',' << fmt(y[i]) << '\n';
    out.finish();
    return 0;
}

json check_json(const tra::CheckReport& r) {
    json per = json::array();
    for (const auto& d : r.per_n)
        per.push_back({{"n", d.n}, {"max_abs_deviation", d.max_abs_deviation}, {"max_rel_deviation", d.max_rel_deviation}, {"argmax", d.argmax}});
    return {{"max_rel_deviation", r.max_rel_deviation}, {"max_abs_deviation", r.max_abs_deviation}, {"argmax", r.argmax},
            {"tolerance", r.tolerance}, {"pass", r.pass}, {"per_n", per}};
}

int run_verify(Settings& s) {
    const std::string format = read_format(s);
    const tra::OdeParams p = read_ode(s);
    const tra::ClassId id = read_class(s, p);
    const tra::FreeParams f = read_free(s);
    const std::string reading = s.str("reading", "auto");
    const int n_max = s.integer("n-max", 8);
    if (n_max < 0) throw tra::ValidationError("--n-max must be nonnegative");
    const tra::GridSpec grid = read_grid(s);
    const double tol = s.num("tol", 1e-8);

    tra::ReadingOutcome outcome;
    if (reading == "auto") {
        outcome = tra::verify_readings(p, id, f, n_max, grid, tol);
    } else {
        tra::ReadingAttempt a;
        a.reading = parse_reading(reading);
        a.report = tra::tridiagonality_sweep(tra::resolve_class(p, id, f, a.reading), n_max, grid, tol);
        a.resolved = true;
        if (a.report.pass) outcome.adopted = a.reading;
        outcome.first_passed = a.report.pass;
        outcome.attempts.push_back(a);
    }
    const tra::ReadingAttempt& last = outcome.attempts.back();

    if (format == "json") {
        json attempts = json::array();
        for (const auto& a : outcome.attempts) {
            json j = {{"reading", a.reading.describe()}, {"resolved", a.resolved}};
            if (a.resolved) {
                j["max_rel_deviation"] = a.report.max_rel_deviation;
                j["pass"] = a.report.pass;
            } else {
                j["error"] = a.error;
                j["pass"] = false;
            }
            attempts.push_back(j);
        }
        json body = {{"class", tra::class_name(id)},
                     {"adopted_reading", outcome.adopted ? json(outcome.adopted->describe()) : json(nullptr)},
                     {"first_candidate_passed", outcome.first_passed},
                     {"attempts", attempts}};
        json check = check_json(last.report);
        for (auto& [k, v] : check.items()) body[k] = std::move(v);
        emit_json(s, body);
        return 0;
    }
    Output out(s.str("out", ""));
    out.os() << "n,max_abs_deviation,max_rel_deviation,argmax\n";
    for (const auto& d : last.report.per_n)
        out.os() << d.n << ',' << fmt(d.max_abs_deviation) << ',' << fmt(d.max_rel_deviation) << ',' << fmt(d.argmax) << '\n';
    out.finish();
    return 0;
}

void emit_spectrum(Settings& s, const std::string& format, const tra::SpectrumResult& r, std::size_t levels) {
    const std::size_t n = std::min(levels, r.energies.size());
    const std::vector<double> e(r.energies.begin(), r.energies.begin() + n);
    if (format == "json") {
        json body = {{"method", r.method}, {"energies", e}, {"metadata", metadata_json(r)}};
        if (!r.deltas.empty()) body["deltas"] = std::vector<double>(r.deltas.begin(), r.deltas.begin() + n);
        emit_json(s, body);
        return;
    }
    Output out(s.str("out", ""));
    out.os() << "k,E_k,method\n";
    for (std::size_t k = 0; k < n; ++k) out.os() << k << ',' << fmt(e[k]) << ',' << r.method << '\n';
    out.finish();
}

void declare_system(Command& c) {
    c.settings.declare(c.app, "system", "oscillator or well");
    c.settings.declare(c.app, "A1", "oscillator: A1 < 0");
    c.settings.declare(c.app, "Lambda", "oscillator: extra 1/r^2 strength");
    c.settings.declare(c.app, "ell", "oscillator: angular momentum");
    c.settings.declare(c.app, "Am", "well: A-");
    c.settings.declare(c.app, "Ap", "well: A+ <= 0");
    c.settings.declare(c.app, "lambda", "length scale");
    c.settings.declare(c.app, "N", "well: Jacobi truncation");
    c.settings.declare(c.app, "levels", "number of levels");
}

struct Oscillator {
    double A1, Lambda, lambda;
    int ell;
};

Oscillator read_oscillator(Settings& s) {
    Oscillator o{s.num("A1", -0.25), s.num("Lambda", 0.0), s.num("lambda", 1.0), s.integer("ell", 0)};
    if (o.ell < 0) throw tra::ValidationError("--ell must be nonnegative");
    return o;
}

tra::ConfiningWell read_well(Settings& s) {
    const double Am = s.num("Am");
    const double Ap = s.num("Ap");
    const double lambda = s.num("lambda", 1.0);
    const auto N = s.opt_int("N");
    return tra::confining_well(Am, Ap, lambda, N);
}

int read_levels(Settings& s, int fallback) {
    const int levels = s.integer("levels", fallback);
    if (levels < 1) throw tra::ValidationError("--levels must be positive");
    return levels;
}

int run_spectrum(Settings& s) {
    const std::string format = read_format(s);
    const std::string system = s.str("system", "oscillator");
    if (system == "oscillator") {
        const Oscillator o = read_oscillator(s);
        const int levels = read_levels(s, 5);
        tra::SpectrumResult r;
        r.method = "closed_form";
        for (int k = 0; k < levels; ++k) r.energies.push_back(tra::oscillator_energy(k, o.lambda, o.A1, o.Lambda, o.ell));
        emit_spectrum(s, format, r, levels);
    } else if (system == "well") {
        const tra::ConfiningWell w = read_well(s);
        const int levels = read_levels(s, static_cast<int>(w.spectrum.energies.size()));
        emit_spectrum(s, format, w.spectrum, levels);
    } else {
        throw tra::ValidationError("--system must be oscillator or well");
    }
    return 0;
}

int run_oracle(Settings& s) {
    const std::string format = read_format(s);
    const std::string system = s.str("system", "oscillator");
    if (system == "oscillator") {
        const Oscillator o = read_oscillator(s);
        const int levels = read_levels(s, 5);
        const int grid = s.integer("grid-size", 4000);
        const double lh = o.ell + 0.5;
        // A0 that puts Lambda + l(l+1) in front of 1/(2 r^2)
        const double A0 = 0.25 * (o.Lambda + lh * lh) - 1.0 / 16.0;
        const tra::SystemSpec sys = tra::potential_map(1.5, {1.5, 0.0, 0.0, 0.0, o.A1, A0}, o.lambda, o.ell);
        const double top = tra::oscillator_energy(levels - 1, o.lambda, o.A1, o.Lambda, o.ell);
        emit_spectrum(s, format, tra::radial_fd(sys, top, levels, grid), levels);
    } else if (system == "well") {
        const tra::ConfiningWell w = read_well(s);
        const int levels = read_levels(s, 3);
        const int grid = s.integer("grid-size", 2000);
        emit_spectrum(s, format, tra::confining_well_fd(w, levels, grid), levels);
    } else {
        throw tra::ValidationError("--system must be oscillator or well");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tridiagonal representation solver for x^2 y'' + (a x + b) y' + (A+ x + A-/x + A1/x^2 - A0) y = 0"};
    app.require_subcommand(1);

    std::vector<std::unique_ptr<Command>> commands;
    auto add = [&](const char* name, const char* help) -> Command& {
        commands.push_back(std::make_unique<Command>());
        Command& c = *commands.back();
        c.app = app.add_subcommand(name, help);
        return c;
    };

    Command& classify = add("classify", "list admissible solution classes with constraint residuals");
    declare_common(classify);
    declare_ode(classify);
    classify.settings.declare(classify.app, "tol", "constraint tolerance");

    Command& solve = add("solve", "expansion coefficients f_0..f_N");
    declare_common(solve);
    declare_ode(solve);
    declare_class(solve);
    solve.settings.declare(solve.app, "N", "truncation");

    Command& eval = add("eval", "truncated series y_N on a grid");
    declare_common(eval);
    declare_ode(eval);
    declare_class(eval);
    eval.settings.declare(eval.app, "N", "truncation");
    declare_grid(eval);

    Command& verify = add("verify", "tridiagonality check of the operator on the basis");
    declare_common(verify);
    declare_ode(verify);
    declare_class(verify);
    declare_grid(verify);
    verify.settings.declare(verify.app, "n-max", "highest degree checked");
    verify.settings.declare(verify.app, "tol", "pass threshold on the relative deviation");

    Command& spectrum = add("spectrum", "bound-state energies (closed form or Jacobi matrix)");
    declare_common(spectrum);
    declare_system(spectrum);

    Command& oracle = add("oracle", "finite-difference bound-state energies");
    declare_common(oracle);
    declare_system(oracle);
    oracle.settings.declare(oracle.app, "grid-size", "interior points of the coarsest grid");

    app.add_subcommand("version", "print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    if (app.got_subcommand("version")) {
        std::cout << "tra " << kVersion << '\n';
        return 0;
    }

    const std::map<std::string, int (*)(Settings&)> runners = {{"classify", run_classify}, {"solve", run_solve},
                                                              {"eval", run_eval},         {"verify", run_verify},
                                                              {"spectrum", run_spectrum}, {"oracle", run_oracle}};
    try {
        for (auto& c : commands) {
            if (!c->app->parsed()) continue;
            if (!c->config.empty()) {
                c->settings.load(c->config);
                c->settings.echo["config"] = c->config;
            }
            return runners.at(c->app->get_name())(c->settings);
        }
    } catch (const tra::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const tra::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
