#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "modeq/builtin_series.hpp"
#include "modeq/faber.hpp"
#include "modeq/numeval.hpp"

using namespace modeq;

namespace {

// Exit-code contract: 0 success / property holds, 1 property violated or
// inconclusive, 2 bad input, 3 search or truncation bound exhausted.
constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kBadInput = 2;
constexpr int kBoundExhausted = 3;

struct SeriesOpts {
    std::string builtin;
    std::string file;
    long truncation = 0;  // 0 = choose per command
    long trunc_cap = 4096;
};

void add_series_opts(CLI::App* cmd, SeriesOpts& opts) {
    auto* b = cmd->add_option("--builtin", opts.builtin, "built-in series: j, J or gamma0_3");
    auto* f = cmd->add_option("--series", opts.file, "series file (modeq-series format)");
    b->excludes(f);
    cmd->add_option("--truncation", opts.truncation,
                    "q-expansion truncation (default: chosen per command, capped at 4096)");
}

bool is_builtin_source(const SeriesOpts& o) {
    if (!o.builtin.empty() && !has_builtin(o.builtin))
        throw std::invalid_argument("unknown builtin series '" + o.builtin + "'");
    if (o.builtin.empty() && o.file.empty())
        throw std::invalid_argument("one of --builtin or --series is required");
    return !o.builtin.empty();
}

PuiseuxSeries resolve_series(const SeriesOpts& o, long needed) {
    long t = o.truncation > 0 ? o.truncation : needed;
    if (is_builtin_source(o)) return builtin_series(o.builtin, std::max(t, 2L));
    PuiseuxSeries f = load_series(o.file);
    if (f.trunc().finite && f.trunc().bound < needed)
        throw truncation_error("series file " + o.file + " carries terms below q^" +
                               f.trunc().to_string() + " but q^" + std::to_string(needed) +
                               " is needed");
    return f;
}

SeriesSource resolve_source(const SeriesOpts& o) {
    if (is_builtin_source(o)) return SeriesSource::builtin(o.builtin, o.trunc_cap);
    return SeriesSource::fixed(o.file, load_series(o.file));
}

// Retry a computation with doubled truncation while the series can grow.
template <typename Fn>
int with_growing_series(const SeriesOpts& o, long initial, Fn&& fn) {
    long t = o.truncation > 0 ? o.truncation : initial;
    for (;;) {
        PuiseuxSeries f = resolve_series(o, t);
        try {
            return fn(f);
        } catch (const truncation_error&) {
            if (!is_builtin_source(o) || o.truncation > 0 || t >= o.trunc_cap) throw;
            t = std::min(2 * t, o.trunc_cap);
        }
    }
}

long default_precision() {
    if (const char* env = std::getenv("MODEQ_PRECISION")) {
        long p = std::atol(env);
        if (p >= 32) return p;
    }
    return 192;
}

void write_text_atomic(const std::string& path, const std::string& text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
        os << text;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

int cmd_series(const SeriesOpts& opts, const std::string& output) {
    PuiseuxSeries f = resolve_series(opts, opts.truncation > 0 ? opts.truncation : 16);
    if (output.empty()) {
        write_series(std::cout, f);
    } else {
        save_series(output, f);
        std::cout << "wrote " << output << "\n";
    }
    return kOk;
}

int cmd_faber(const SeriesOpts& opts, long order) {
    if (order < 1) throw std::invalid_argument("--order must be >= 1");
    return with_growing_series(opts, order + 2, [&](const PuiseuxSeries& f) {
        FaberPoly p = faber(f, order);
        std::cout << p.to_string() << "\n";
        return kOk;
    });
}

int cmd_replicable(const SeriesOpts& opts, long bound, bool complete, long s_bound,
                   long t_bound, long period_bound, const std::string& htable_out,
                   const std::string& replicates_out, long replicates_max) {
    long needed = bound * bound + 2;
    if (complete)
        needed = std::max(needed, complete_replicability_truncation(s_bound, t_bound, bound));
    if (period_bound > 0)
        needed = std::max(needed, replicates_truncation(2 * period_bound, bound));
    if (!replicates_out.empty())
        needed = std::max(needed, replicates_truncation(replicates_max, bound));
    return with_growing_series(opts, needed, [&](const PuiseuxSeries& f) {
        std::ostringstream out;
        int code = kOk;
        if (!htable_out.empty()) {
            save_htable(htable_out, h_table(f, bound));
            out << "wrote " << htable_out << "\n";
        }
        ReplicabilityResult r = is_replicable(f, bound);
        if (!r.replicable) {
            auto [m, n, rr, s] = *r.witness;
            out << "not replicable to bound " << bound << ": h(" << m << "," << n
                << ") != h(" << rr << "," << s << ") with equal gcd and lcm\n";
            code = kViolated;
        } else {
            out << "replicable to bound " << bound << "\n";
            if (complete) {
                bool ok = is_completely_replicable(f, s_bound, t_bound, bound);
                out << (ok ? "completely replicable" : "not completely replicable")
                    << " (s <= " << s_bound << ", t <= " << t_bound
                    << ", coefficients to q^" << bound << ")\n";
                if (!ok) code = kViolated;
            }
            if (period_bound > 0 && code == kOk) {
                auto k = replicate_period(f, period_bound, bound);
                if (k)
                    out << "replicate period " << *k << "\n";
                else
                    out << "no replicate period <= " << period_bound << "\n";
            }
            if (!replicates_out.empty() && code == kOk) {
                auto reps = extract_replicates(f, replicates_max, bound);
                for (auto& [s, g] : reps) {
                    std::string path = replicates_out + "." + std::to_string(s) + ".series";
                    save_series(path, g);
                    out << "wrote " << path << "\n";
                }
            }
        }
        std::cout << out.str();
        return code;
    });
}

int cmd_modpoly(const SeriesOpts& opts, long order, long level, bool check, bool diag,
                long verify_bound, const std::string& output) {
    long needed = std::max(modpoly_truncation(order),
                           diag ? diagonal_truncation(order) : 0L);
    if (check) needed = std::max(needed, modeq_check_truncation(order, verify_bound));
    return with_growing_series(opts, needed, [&](const PuiseuxSeries& f) {
        BivarPoly F = build_modpoly(f, order, level);
        std::cout << "F_" << order << ": degree " << F.degree_x() << " in X, "
                  << F.degree_y() << " in Y, " << F.terms.size() << " terms\n";
        if (!output.empty()) {
            save_modpoly(output, F);
            std::cout << "wrote " << output << "\n";
        } else if (F.terms.size() <= 40) {
            std::cout << F.to_string() << "\n";
        }
        if (check) {
            BivarPoly G = output.empty() ? F : load_modpoly(output);
            bool sym = check_symmetry(G, order);
            ModeqCheck mc = check_modeq(f, G, order, level, true, verify_bound);
            std::cout << "symmetry " << (sym ? "ok" : "VIOLATED") << "; modular equations "
                      << (mc.ok ? "verified" : "VIOLATED") << " to order "
                      << mc.verified_order.get_str() << "\n";
            if (!sym || !mc.ok) return kViolated;
        }
        if (diag) {
            DiagonalResult d = diagonal(F, f, order, level);
            std::cout << "diagonal degree " << d.poly.size() - 1 << ", leading coefficient: ";
            if (d.classification == LeadingClass::prime_times_unit)
                std::cout << "p*unit, p = " << d.p.get_str() << "\n";
            else
                std::cout << "unit\n";
        }
        return kOk;
    });
}

int cmd_certify(const SeriesOpts& opts, const std::string& tau_str, long level,
                const CertifyConfig& config, const std::string& output) {
    QuadraticIrrational tau = QuadraticIrrational::parse(tau_str);
    SeriesSource src = resolve_source(opts);
    Certificate cert = certify_cm_integrality(src, tau, level, config);
    std::string text = cert.to_text();
    if (output.empty()) {
        std::cout << text;
    } else {
        write_text_atomic(output, text);
        std::cout << "wrote " << output << "\n";
        std::cout << "verdict "
                  << (cert.verdict == Certificate::Verdict::certified ? "certified"
                                                                      : "inconclusive")
                  << "\n";
    }
    return cert.verdict == Certificate::Verdict::certified ? kOk : kViolated;
}

int cmd_decompose(const std::string& matrix_str, long level) {
    IntMat2 rho = IntMat2::parse(matrix_str);
    Decomposition d = decompose(rho, level);
    std::cout << "gamma " << d.gamma.to_string() << "\n";
    std::cout << "omega " << d.omega.to_string() << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modeq: modular equations, replicability and CM-value certificates "
                 "for Hauptmoduln with cyclotomic coefficients"};
    app.require_subcommand(1);

    SeriesOpts series_opts, faber_opts, repl_opts, modpoly_opts, certify_opts;
    std::string output, tau_str, matrix_str;
    long order = 2, level = 1;
    long repl_bound = 24, s_bound = 3, t_bound = 3, period_bound = 0;
    bool complete = false, check = false, diag = false;
    long verify_bound = 20;
    CertifyConfig config;
    config.precision = default_precision();

    auto* series = app.add_subcommand("series", "generate or re-emit a q-series file");
    add_series_opts(series, series_opts);
    series->add_option("--output", output, "output path (stdout if omitted)");

    auto* fab = app.add_subcommand("faber", "Faber polynomial P_{n,f}");
    add_series_opts(fab, faber_opts);
    fab->add_option("--order", order, "polynomial order n >= 1")->required();

    std::string htable_out, replicates_out;
    long replicates_max = 4;
    auto* repl = app.add_subcommand("replicable", "replicability of a q-series");
    add_series_opts(repl, repl_opts);
    repl->add_option("--max", repl_bound, "h-table bound (default 24)");
    repl->add_flag("--complete", complete, "also decide complete replicability");
    repl->add_option("--complete-s", s_bound, "replicate index bound s (default 3)");
    repl->add_option("--complete-t", t_bound, "inner replicate bound t (default 3)");
    repl->add_option("--period", period_bound, "search for the replicate period up to k");
    repl->add_option("--htable", htable_out, "write the h-table to this file");
    repl->add_option("--replicates", replicates_out,
                     "write replicate series files with this prefix");
    repl->add_option("--replicates-max", replicates_max,
                     "highest replicate index to write (default 4)");

    auto* mp = app.add_subcommand("modpoly", "generalized modular polynomial F_n");
    add_series_opts(mp, modpoly_opts);
    mp->add_option("--order", order, "modular equation order n >= 2")->required();
    mp->add_option("--level", level, "congruence level N (default 1)");
    mp->add_flag("--check", check, "re-verify symmetry and the modular equations");
    mp->add_option("--verify-bound", verify_bound,
                   "positive q-powers to verify with --check (default 20)");
    mp->add_flag("--diagonal", diag, "diagonal restriction and leading-coefficient class");
    mp->add_option("--output", output, "write the polynomial to this file");

    auto* cert = app.add_subcommand("certify", "certify a CM value as an algebraic integer");
    add_series_opts(cert, certify_opts);
    cert->add_option("--tau", tau_str, "CM point as a,b,c with a tau^2 + b tau + c = 0")
        ->required();
    cert->add_option("--level", level, "congruence level N (default 1)");
    cert->add_option("--precision", config.precision, "working precision in bits");
    cert->add_option("--degree-cap", config.degree_cap, "minimal-polynomial degree cap");
    cert->add_option("--modpoly-cap", config.modpoly_order_cap,
                     "build diagonal evidence for orders up to this cap");
    cert->add_option("--prime-bound", config.prime_search_bound, "prime scan shell bound");
    cert->add_option("--output", output, "write the certificate to this file");

    auto* dec = app.add_subcommand("decompose", "rho = gamma * omega factorization");
    dec->add_option("--matrix", matrix_str, "integer matrix p,q,r,s")->required();
    dec->add_option("--level", level, "congruence level N (default 1)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (series->parsed()) return cmd_series(series_opts, output);
        if (fab->parsed()) return cmd_faber(faber_opts, order);
        if (repl->parsed())
            return cmd_replicable(repl_opts, repl_bound, complete, s_bound, t_bound,
                                  period_bound, htable_out, replicates_out, replicates_max);
        if (mp->parsed())
            return cmd_modpoly(modpoly_opts, order, level, check, diag, verify_bound, output);
        if (cert->parsed()) return cmd_certify(certify_opts, tau_str, level, config, output);
        if (dec->parsed()) return cmd_decompose(matrix_str, level);
    } catch (const truncation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBoundExhausted;
    } catch (const bound_exhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBoundExhausted;
    } catch (const replicability_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kViolated;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kBadInput;
}
