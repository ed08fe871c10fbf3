#include "qdimer/cli.hpp"

#include "qdimer/entanglement.hpp"
#include "qdimer/errors.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <ostream>
#include <unistd.h>

namespace qdimer::cli {

using experiments::InitialStateSpec;
using experiments::StateFamily;

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double parse_float_at(std::string_view text, std::size_t& pos, const char* what) {
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin)
        throw ParseError(std::string("expected ") + what, pos);
    pos += static_cast<std::size_t>(ptr - begin);
    return value;
}

// <float>[<sign><float>i], offsets reported relative to the full text.
numerics::Complex parse_complex_literal(std::size_t base, std::string_view token) {
    std::size_t pos = 0;
    const double re = parse_float_at(token, pos, "a real amplitude");
    if (pos == token.size()) return {re, 0.0};

    double sign = 1.0;
    if (token[pos] == '+') {
        ++pos;
    } else if (token[pos] == '-') {
        sign = 1.0;  // from_chars consumes the minus sign itself
    } else {
        throw ParseError("expected '+' or '-' before the imaginary part", base + pos);
    }
    const double im = sign * parse_float_at(token, pos, "an imaginary amplitude");
    if (pos >= token.size() || token[pos] != 'i')
        throw ParseError("expected 'i' after the imaginary part", base + pos);
    if (pos + 1 != token.size())
        throw ParseError("trailing characters after complex amplitude", base + pos + 1);
    return {re, im};
}

bool want_color(const std::ostream& err) {
    if (&err != &std::cerr) return false;
    if (std::getenv("NO_COLOR") != nullptr) return false;
    return isatty(STDERR_FILENO) == 1;
}

void warn(std::ostream& err, const std::string& message) {
    if (want_color(err))
        err << "\033[33mwarning:\033[0m " << message << "\n";
    else
        err << "warning: " << message << "\n";
}

// Output destination: --out path, or the provided stream for "" / "-".
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw IoError("cannot open output file '" + path + "'");
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }
    void finish() {
        os_->flush();
        if (file_.is_open() && !file_) throw IoError("write failure on output file");
    }

private:
    std::ofstream file_;
    std::ostream* os_;
};

GridSpec parse_grid_value(const std::string& text) {
    GridSpec g;
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
        throw UsageError("--grid expects <axis>=<start>:<stop>:<count>, got '" + text + "'");
    const std::string body = text.substr(eq + 1);
    const std::size_t c1 = body.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : body.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw UsageError("--grid expects <axis>=<start>:<stop>:<count>, got '" + text + "'");

    auto to_double = [&](const std::string& s, const char* what) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw UsageError(std::string("--grid: malformed ") + what + " in '" + text + "'");
        return v;
    };
    g.start = to_double(body.substr(0, c1), "start");
    g.stop = to_double(body.substr(c1 + 1, c2 - c1 - 1), "stop");
    const std::string count_text = body.substr(c2 + 1);
    int count = 0;
    const auto [ptr, ec] =
        std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size())
        throw UsageError("--grid: malformed count in '" + text + "'");
    g.count = count;

    if (g.count < 1) throw UsageError("--grid: count must be >= 1 in '" + text + "'");
    if (g.count > 1 && g.stop <= g.start)
        throw UsageError("--grid: stop must exceed start for count > 1 in '" + text + "'");
    return g;
}

const char* axis_names[] = {"p", "t", "T", "lambda", "T1", "T2"};

} // namespace

std::vector<double> linspace(const GridSpec& spec) {
    std::vector<double> v(static_cast<std::size_t>(spec.count));
    if (spec.count == 1) {
        v[0] = spec.start;
        return v;
    }
    const double step = (spec.stop - spec.start) / (spec.count - 1);
    for (int i = 0; i < spec.count; ++i) v[static_cast<std::size_t>(i)] = spec.start + i * step;
    v.back() = spec.stop;
    return v;
}

InitialStateSpec parse_initial_state(std::string_view text) {
    InitialStateSpec spec;
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos)
        throw ParseError("expected ':' after the state family", text.size());
    const std::string_view family = text.substr(0, colon);
    const std::string_view rest = text.substr(colon + 1);
    const std::size_t rest_base = colon + 1;

    if (family == "basis") {
        static constexpr std::string_view labels[] = {"00", "01", "10", "11"};
        for (int k = 0; k < 4; ++k)
            if (rest == labels[k]) {
                spec.family = StateFamily::basis;
                spec.basis_index = k;
                return spec;
            }
        throw ParseError("expected one of 00, 01, 10, 11", rest_base);
    }
    if (family == "eigen") {
        if (rest.size() == 1 && rest[0] >= 'a' && rest[0] <= 'd') {
            spec.family = StateFamily::eigen;
            spec.level = rest[0] - 'a';
            return spec;
        }
        throw ParseError("expected one of a, b, c, d", rest_base);
    }
    if (family == "onebit" || family == "twobit") {
        if (rest.substr(0, 2) != "p=")
            throw ParseError("expected p=<float>", rest_base);
        std::size_t pos = 2;
        const double p = parse_float_at(rest, pos, "a weight value");
        if (pos != rest.size())
            throw ParseError("trailing characters after weight", rest_base + pos);
        if (p < 0.0 || p > 1.0)
            throw ParseError("weight p outside [0, 1]", rest_base + 2);
        spec.family = family == "onebit" ? StateFamily::onebit : StateFamily::twobit;
        spec.weight = p;
        return spec;
    }
    if (family == "ket") {
        spec.family = StateFamily::ket;
        std::array<numerics::Complex, 4> amps{};
        std::size_t start = 0;
        for (int k = 0; k < 4; ++k) {
            const std::size_t comma = k < 3 ? rest.find(',', start) : rest.size();
            if (comma == std::string_view::npos)
                throw ParseError("expected four comma-separated amplitudes", rest_base + start);
            const std::string_view token = rest.substr(start, comma - start);
            if (token.empty())
                throw ParseError("empty amplitude", rest_base + start);
            amps[static_cast<std::size_t>(k)] =
                parse_complex_literal(rest_base + start, token);
            start = comma + 1;
        }
        double norm2 = 0.0;
        for (const numerics::Complex& a : amps) norm2 += std::norm(a);
        if (norm2 < 1e-24) throw ParseError("ket has zero norm", rest_base);
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t k = 0; k < 4; ++k) spec.amplitudes[k] = amps[k] * inv;
        return spec;
    }
    throw ParseError("unknown initial-state family '" + std::string(family) + "'", 0);
}

RunConfig parse_args(int argc, const char* const* argv) {
    RunConfig cfg;

    CLI::App app{"Dissipative dynamics of two coupled qubits in independent thermal "
                 "reservoirs: spectra, rates, concurrence evolution and stationary-"
                 "entanglement sweeps. Frequencies in rad/ns, temperatures in mK, "
                 "times in ns."};
    app.name("qdimer");
    app.require_subcommand(1);
    app.set_config("--config", "", "read `key = value` defaults from a file ('#' comments; "
                                   "command-line flags override)");

    auto* spectrum =
        app.add_subcommand("spectrum", "print eigenenergies, mixing angles, transition frequencies");
    auto* rates = app.add_subcommand("rates", "print microscopic and channel rates");
    auto* evolve = app.add_subcommand("evolve", "propagate an initial state, write trajectory CSV");
    auto* steady = app.add_subcommand("steady", "stationary state populations and concurrence");
    auto* sweep = app.add_subcommand("sweep", "parameter sweeps (CSV grid output)");
    for (CLI::App* sub : {spectrum, rates, evolve, steady, sweep}) sub->fallthrough();

    app.add_option("--omega1", cfg.params.omega1, "qubit 1 frequency (rad/ns)")
        ->capture_default_str();
    app.add_option("--omega2", cfg.params.omega2, "qubit 2 frequency (rad/ns)")
        ->capture_default_str();
    app.add_option("--lambda", cfg.params.lambda, "qubit-qubit coupling (rad/ns)")
        ->capture_default_str();
    app.add_option("--alpha1", cfg.params.alpha1, "Ohmic coupling strength, reservoir 1")
        ->capture_default_str();
    app.add_option("--alpha2", cfg.params.alpha2, "Ohmic coupling strength, reservoir 2")
        ->capture_default_str();
    app.add_option("--t1-mk", cfg.params.t1_mk, "reservoir 1 temperature (mK)")
        ->capture_default_str();
    app.add_option("--t2-mk", cfg.params.t2_mk, "reservoir 2 temperature (mK)")
        ->capture_default_str();

    std::string variant_text = "full";
    app.add_option("--variant", variant_text, "coupling variant")
        ->check(CLI::IsMember({"full", "rwa"}))
        ->capture_default_str();

    app.add_option("--initial", cfg.initial_text,
                   "initial state: basis:<00|01|10|11> | eigen:<a|b|c|d> | onebit:p=<f> | "
                   "twobit:p=<f> | ket:<c>,<c>,<c>,<c>")
        ->capture_default_str();
    app.add_option("--t-max", cfg.t_max_ns, "time horizon (ns); default 10/(decay_lo+excite_lo)");
    app.add_option("--samples", cfg.samples, "number of trajectory samples")
        ->capture_default_str();
    app.add_option("--out", cfg.out, "output path ('-' or empty: stdout)");
    app.add_flag("--full-state", cfg.full_state,
                 "append re/im of the 10 upper-triangle density-matrix entries");

    std::string vary_text;
    app.add_option("--vary", vary_text, "sweep family: p | tlambda | t1t2")
        ->check(CLI::IsMember({"p", "tlambda", "t1t2"}));
    std::vector<std::string> grid_args;
    app.add_option("--grid", grid_args, "axis grid <axis>=<start>:<stop>:<count>; axes: p, t, "
                                        "T, lambda, T1, T2")
        ->allow_extra_args(false);

    app.add_option("--rtol", cfg.rtol, "integrator relative tolerance")->capture_default_str();
    app.add_option("--atol", cfg.atol, "integrator absolute tolerance")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (spectrum->parsed()) cfg.command = Command::spectrum;
    else if (rates->parsed()) cfg.command = Command::rates;
    else if (evolve->parsed()) cfg.command = Command::evolve;
    else if (steady->parsed()) cfg.command = Command::steady;
    else cfg.command = Command::sweep;

    cfg.params.variant = variant_text == "rwa" ? model::Variant::rwa : model::Variant::full;

    if (!vary_text.empty()) {
        if (vary_text == "p") cfg.vary = SweepVary::p;
        else if (vary_text == "tlambda") cfg.vary = SweepVary::tlambda;
        else cfg.vary = SweepVary::t1t2;
    }

    if (cfg.samples < 0) throw UsageError("--samples must be >= 0");
    if (cfg.t_max_ns && *cfg.t_max_ns <= 0.0) throw UsageError("--t-max must be positive");
    if (cfg.rtol <= 0.0 || cfg.atol <= 0.0)
        throw UsageError("--rtol and --atol must be positive");

    for (const std::string& text : grid_args) {
        const std::size_t eq = text.find('=');
        const std::string name = eq == std::string::npos ? text : text.substr(0, eq);
        bool known = false;
        for (const char* n : axis_names) known = known || name == n;
        if (!known)
            throw UsageError("--grid: unknown axis '" + name +
                             "' (expected p, t, T, lambda, T1 or T2)");
        cfg.grids[name] = parse_grid_value(text);  // last occurrence wins
    }

    cfg.params.validate();
    cfg.initial = parse_initial_state(cfg.initial_text);

    if (cfg.command == Command::sweep) {
        if (!cfg.vary) throw UsageError("sweep requires --vary {p|tlambda|t1t2}");
        if (*cfg.vary == SweepVary::p && cfg.initial.family != StateFamily::onebit &&
            cfg.initial.family != StateFamily::twobit)
            throw UsageError("sweep --vary p requires --initial onebit:p=... or twobit:p=...");
    }
    return cfg;
}

void write_csv(const dynamics::Trajectory& trajectory, bool full_state, std::ostream& os) {
    os << "t_ns,pop_a,pop_b,pop_c,pop_d,concurrence";
    if (full_state)
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
                os << ",re_rho_" << i << j << ",im_rho_" << i << j;
    os << "\n";
    for (std::size_t k = 0; k < trajectory.times_ns.size(); ++k) {
        os << fmt12(trajectory.times_ns[k]);
        for (double p : trajectory.populations[k]) os << ',' << fmt12(p);
        os << ',' << fmt12(trajectory.concurrence[k]);
        if (full_state) {
            const numerics::ComplexMatrix& m = trajectory.states[k].matrix();
            for (int i = 0; i < 4; ++i)
                for (int j = i; j < 4; ++j)
                    os << ',' << fmt12(m(i, j).real()) << ',' << fmt12(m(i, j).imag());
        }
        os << "\n";
    }
}

void write_csv(const experiments::SweepGrid& grid, std::ostream& os) {
    for (const experiments::Axis& axis : grid.axes)
        os << axis.name << (axis.unit.empty() ? "" : "_" + axis.unit) << ',';
    os << "concurrence\n";
    const std::size_t inner = grid.axes[1].values.size();
    for (std::size_t i = 0; i < grid.axes[0].values.size(); ++i)
        for (std::size_t j = 0; j < inner; ++j)
            os << fmt12(grid.axes[0].values[i]) << ',' << fmt12(grid.axes[1].values[j]) << ','
               << fmt12(grid.values[i * inner + j]) << "\n";
}

namespace {

void write_steady_csv(const DensityMatrix& rho_comp, const std::array<double, 4>& pops,
                      double concurrence, bool full_state, std::ostream& os) {
    os << "pop_a,pop_b,pop_c,pop_d,concurrence";
    if (full_state)
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
                os << ",re_rho_" << i << j << ",im_rho_" << i << j;
    os << "\n";
    os << fmt12(pops[0]) << ',' << fmt12(pops[1]) << ',' << fmt12(pops[2]) << ','
       << fmt12(pops[3]) << ',' << fmt12(concurrence);
    if (full_state) {
        const numerics::ComplexMatrix& m = rho_comp.matrix();
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
                os << ',' << fmt12(m(i, j).real()) << ',' << fmt12(m(i, j).imag());
    }
    os << "\n";
}

void print_spectrum(const model::SystemParams& p, std::ostream& os) {
    const model::EigenSystem es = model::eigensystem(p);
    os << "level  energy_rad_ns\n";
    const char* labels = "abcd";
    for (int k = 0; k < 4; ++k)
        os << labels[k] << "      " << fmt12(es.energies[static_cast<std::size_t>(k)]) << "\n";
    os << "theta_even_rad  " << fmt12(es.theta_even) << "  (sin " << fmt12(std::sin(es.theta_even))
       << ")\n";
    os << "theta_odd_rad   " << fmt12(es.theta_odd) << "  (sin " << fmt12(std::sin(es.theta_odd))
       << ")\n";
    os << "omega_lo_rad_ns " << fmt12(es.omega_lo) << "\n";
    os << "omega_hi_rad_ns " << fmt12(es.omega_hi) << "\n";
}

void print_rates(const model::SystemParams& p, std::ostream& os) {
    const model::EigenSystem es = model::eigensystem(p);
    const bath::RateSet r = bath::rate_set(p, es);
    os << "per-reservoir rates (rad/ns)\n";
    os << "channel  reservoir  gamma_decay       gamma_excite\n";
    const char* ch_names[] = {"lo", "hi"};
    for (int ch = 0; ch < 2; ++ch)
        for (int l = 0; l < 2; ++l)
            os << ch_names[ch] << "       " << (l + 1) << "          "
               << fmt12(r.gamma_decay[ch][l]) << "  " << fmt12(r.gamma_excite[ch][l]) << "\n";
    os << "\nchannel coefficients (rad/ns)\n";
    os << "decay_lo        " << fmt12(r.decay_lo) << "\n";
    os << "decay_hi        " << fmt12(r.decay_hi) << "\n";
    os << "excite_lo       " << fmt12(r.excite_lo) << "\n";
    os << "excite_hi       " << fmt12(r.excite_hi) << "\n";
    os << "cross_decay_lo  " << fmt12(r.cross_decay_lo) << "\n";
    os << "cross_decay_hi  " << fmt12(r.cross_decay_hi) << "\n";
    os << "cross_excite_lo " << fmt12(r.cross_excite_lo) << "\n";
    os << "cross_excite_hi " << fmt12(r.cross_excite_hi) << "\n";
    os << "\nchannel assignment used by the generator (consistent with the "
          "population rate equations):\n";
    os << "  b->a " << fmt12(r.decay_lo) << "   c->a " << fmt12(r.decay_hi) << "   d->c "
       << fmt12(r.decay_lo) << "   d->b " << fmt12(r.decay_hi) << "\n";
    os << "  a->b " << fmt12(r.excite_lo) << "   a->c " << fmt12(r.excite_hi) << "   c->d "
       << fmt12(r.excite_lo) << "   b->d " << fmt12(r.excite_hi) << "\n";
    os << "alternate labeling sometimes quoted (upper-doublet channels exchanged):\n";
    os << "  d->c " << fmt12(r.decay_hi) << "   d->b " << fmt12(r.decay_lo) << "   c->d "
       << fmt12(r.excite_hi) << "   b->d " << fmt12(r.excite_lo) << "\n";
}

std::vector<double> grid_or_default(const RunConfig& cfg, const std::string& axis,
                                    const GridSpec& fallback) {
    const auto it = cfg.grids.find(axis);
    return linspace(it == cfg.grids.end() ? fallback : it->second);
}

std::vector<double> evolve_times(const RunConfig& cfg) {
    if (cfg.samples == 0) return {};
    const double t_max = cfg.t_max_ns ? *cfg.t_max_ns
                                      : experiments::default_time_horizon_ns(cfg.params);
    if (cfg.samples == 1) return {t_max};
    return linspace({0.0, t_max, cfg.samples});
}

void dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    OutputTarget target(cfg.out, out);

    switch (cfg.command) {
        case Command::spectrum:
            print_spectrum(cfg.params, target.stream());
            break;
        case Command::rates:
            print_rates(cfg.params, target.stream());
            break;
        case Command::evolve: {
            const dynamics::Liouvillian liouv = dynamics::build_liouvillian(cfg.params);
            if (liouv.secular_warning) warn(err, liouv.secular_note);
            const DensityMatrix rho0 = experiments::make_initial_state(cfg.initial, liouv.eigen);
            dynamics::EvolveOptions opts;
            opts.rtol = cfg.rtol;
            opts.atol = cfg.atol;
            const std::vector<double> times = evolve_times(cfg);
            const dynamics::Trajectory tr = dynamics::evolve(liouv, rho0, times, opts);
            write_csv(tr, cfg.full_state, target.stream());
            break;
        }
        case Command::steady: {
            const dynamics::Liouvillian liouv = dynamics::build_liouvillian(cfg.params);
            if (liouv.secular_warning) warn(err, liouv.secular_note);
            const DensityMatrix rho = dynamics::steady_state(liouv);
            const DensityMatrix rho_comp = model::to_computational(rho, liouv.eigen);
            const double c = entanglement::concurrence(rho_comp).value;
            write_steady_csv(rho_comp, rho.populations(), c, cfg.full_state, target.stream());
            break;
        }
        case Command::sweep: {
            experiments::SweepOptions opts;
            opts.evolve.rtol = cfg.rtol;
            opts.evolve.atol = cfg.atol;
            experiments::SweepGrid grid;
            switch (*cfg.vary) {
                case SweepVary::p: {
                    const dynamics::Liouvillian liouv = dynamics::build_liouvillian(cfg.params);
                    if (liouv.secular_warning) warn(err, liouv.secular_note);
                    const std::vector<double> weights =
                        grid_or_default(cfg, "p", {0.0, 1.0, 21});
                    std::vector<double> times;
                    if (cfg.grids.count("t")) {
                        times = linspace(cfg.grids.at("t"));
                    } else {
                        const double t_max =
                            cfg.t_max_ns ? *cfg.t_max_ns
                                         : experiments::default_time_horizon_ns(cfg.params);
                        times = linspace({0.0, t_max, std::max(cfg.samples, 2)});
                    }
                    grid = experiments::sweep_time_weight(cfg.initial.family, weights, times,
                                                          cfg.params, opts);
                    break;
                }
                case SweepVary::tlambda: {
                    const std::vector<double> temps = grid_or_default(cfg, "T", {0.0, 50.0, 26});
                    const std::vector<double> lambdas =
                        grid_or_default(cfg, "lambda", {0.5, 50.0, 34});
                    grid = experiments::sweep_temperature_coupling(temps, lambdas, cfg.params,
                                                                   opts);
                    break;
                }
                case SweepVary::t1t2: {
                    const std::vector<double> t1 = grid_or_default(cfg, "T1", {0.0, 50.0, 26});
                    const std::vector<double> t2 = grid_or_default(cfg, "T2", {0.0, 50.0, 26});
                    grid = experiments::sweep_two_temperatures(t1, t2, cfg.params, opts);
                    break;
                }
            }
            write_csv(grid, target.stream());
            break;
        }
    }
    target.finish();
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_args(argc, argv);
    } catch (const HelpRequested& h) {
        out << h.text;
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return 1;
    }

    try {
        dispatch(cfg, out, err);
        return 0;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace qdimer::cli
