#include "modeq/numeval.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

#include "modeq/builtin_series.hpp"

namespace modeq {

namespace {

Complex complex_pow(const Complex& base, long e, long prec) {
    Complex r(Real::from_long(1, prec), Real::from_long(0, prec));
    if (e == 0) return r;
    bool inv = e < 0;
    unsigned long k = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Complex b = base;
    for (;;) {
        if (k & 1) r = r * b;
        k >>= 1;
        if (k == 0) break;
        b = b * b;
    }
    if (inv) {
        Complex one(Real::from_long(1, prec), Real::from_long(0, prec));
        return one.div(r);
    }
    return r;
}

// exp(2 pi i tau / e) for tau from the quadratic data, at working precision.
Complex q_root(const QuadraticIrrational& tau, long e, long prec) {
    Real a = Real::from_int(tau.a, prec);
    Real x = Real::from_int(-tau.b, prec) / (Real::from_long(2, prec) * a);
    Real y = Real::from_int(-tau.disc(), prec).sqrt() / (Real::from_long(2, prec) * a);
    Real two_pi = Real::pi(prec) + Real::pi(prec);
    Real re = Real::from_long(e, prec);
    Real radius = (-(two_pi * y) / re).exp();
    Real angle = two_pi * x / re;
    return Complex(radius * angle.cos(), radius * angle.sin());
}

Complex eval_series_at(const PuiseuxSeries& f, const QuadraticIrrational& tau, long prec) {
    long e = f.ramification();
    Complex qr = q_root(tau, e, prec);
    std::vector<Complex> zeta_pow;
    unsigned long m = f.coeff_order();
    unsigned long deg = euler_phi(m);
    {
        Real two_pi = Real::pi(prec) + Real::pi(prec);
        Real mm = Real::from_long(static_cast<long>(m), prec);
        Complex z(( two_pi / mm).cos(), (two_pi / mm).sin());
        Complex cur(Real::from_long(1, prec), Real::from_long(0, prec));
        for (unsigned long i = 0; i < deg; ++i) {
            zeta_pow.push_back(cur);
            cur = cur * z;
        }
    }
    Complex acc(Real::from_long(0, prec), Real::from_long(0, prec));
    std::optional<long> prev_key;
    Complex qk(Real::from_long(1, prec), Real::from_long(0, prec));
    for (auto& [k, c] : f.terms()) {
        if (!prev_key)
            qk = complex_pow(qr, k, prec);
        else
            qk = qk * complex_pow(qr, k - *prev_key, prec);
        prev_key = k;
        // coefficient value
        Complex cv(Real::from_long(0, prec), Real::from_long(0, prec));
        for (unsigned long i = 0; i < deg; ++i) {
            Rat co = c.coord(i);
            if (co == 0) continue;
            cv = cv + zeta_pow[i].mul_real(Real::from_rat(co, prec));
        }
        acc = acc + cv * qk;
    }
    return acc;
}

Real two_pow(long e, long prec) { return Real::from_long(1, prec).ldexp(e); }

// ---- exact LLL -------------------------------------------------------------

Int dot_int(const std::vector<Int>& a, const std::vector<Int>& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Int round_rat(const Rat& x) {
    Rat shifted = x + make_rat(1, 2);
    return int_fdiv(shifted.get_num(), shifted.get_den());
}

void lll_reduce(std::vector<std::vector<Int>>& basis) {
    size_t n = basis.size();
    if (n < 2) return;
    size_t dim = basis[0].size();
    std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n, Rat(0)));
    std::vector<Rat> norm(n, Rat(0));
    std::vector<std::vector<Rat>> bs(n, std::vector<Rat>(dim, Rat(0)));

    auto gso = [&]() {
        for (size_t i = 0; i < n; ++i) {
            for (size_t k = 0; k < dim; ++k) bs[i][k] = Rat(basis[i][k]);
            for (size_t j = 0; j < i; ++j) {
                Rat num(0);
                for (size_t k = 0; k < dim; ++k) num += Rat(basis[i][k]) * bs[j][k];
                mu[i][j] = norm[j] == 0 ? Rat(0) : num / norm[j];
                if (mu[i][j] != 0)
                    for (size_t k = 0; k < dim; ++k) bs[i][k] -= mu[i][j] * bs[j][k];
            }
            Rat nn(0);
            for (size_t k = 0; k < dim; ++k) nn += bs[i][k] * bs[i][k];
            norm[i] = nn;
        }
    };
    gso();
    size_t k = 1;
    while (k < n) {
        bool changed = false;
        for (size_t jj = k; jj-- > 0;) {
            Int r = round_rat(mu[k][jj]);
            if (r != 0) {
                for (size_t t = 0; t < dim; ++t) basis[k][t] -= r * basis[jj][t];
                changed = true;
            }
        }
        if (changed) gso();
        Rat lovasz = (make_rat(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * norm[k - 1];
        if (norm[k] >= lovasz) {
            ++k;
        } else {
            std::swap(basis[k], basis[k - 1]);
            gso();
            k = k > 1 ? k - 1 : 1;
        }
    }
}

Complex eval_int_poly(const std::vector<Int>& poly, const Complex& v, long prec) {
    Complex acc(Real::from_long(0, prec), Real::from_long(0, prec));
    for (size_t i = poly.size(); i-- > 0;) {
        acc = acc * v;
        acc = acc + Complex(Real::from_int(poly[i], prec), Real::from_long(0, prec));
    }
    return acc;
}

// One lattice pass at a fixed degree; returns candidates in reduced order.
std::vector<std::vector<Int>> relation_candidates(const Complex& v, long degree,
                                                  long scale_bits, long prec) {
    size_t rows = static_cast<size_t>(degree) + 1;
    std::vector<std::vector<Int>> basis(rows, std::vector<Int>(rows + 2, Int(0)));
    Complex vi(Real::from_long(1, prec), Real::from_long(0, prec));
    for (size_t i = 0; i < rows; ++i) {
        basis[i][i] = 1;
        basis[i][rows] = vi.re().ldexp(scale_bits).round_to_int();
        basis[i][rows + 1] = vi.im().ldexp(scale_bits).round_to_int();
        vi = vi * v;
    }
    lll_reduce(basis);
    std::vector<std::vector<Int>> out;
    for (auto& row : basis) {
        Int lead = row[rows - 1];
        if (lead != 1 && lead != -1) continue;
        std::vector<Int> poly(row.begin(), row.begin() + static_cast<long>(rows));
        if (lead == -1)
            for (Int& c : poly) c = -c;
        out.push_back(std::move(poly));
    }
    return out;
}

std::optional<std::vector<Int>> attempt_degree(const std::function<Complex(long)>& value,
                                               long degree, long prec) {
    long wp = prec + 96;
    Complex v = value(wp);
    Real tol = two_pow(-prec / 2, wp);
    for (auto& poly : relation_candidates(v, degree, prec, wp)) {
        if (poly.back() == 0) continue;
        if (!(eval_int_poly(poly, v, wp).abs() < tol)) continue;
        // Stability: the same relation must survive doubled precision with a
        // quadratically smaller residual.
        long wp2 = 2 * prec + 96;
        Complex v2 = value(wp2);
        Real tol2 = two_pow(-prec, wp2);
        if (!(eval_int_poly(poly, v2, wp2).abs() < tol2)) continue;
        auto again = relation_candidates(v2, degree, 2 * prec, wp2);
        bool reproduced = false;
        for (auto& p2 : again)
            if (p2 == poly) {
                reproduced = true;
                break;
            }
        if (!reproduced) continue;
        return poly;
    }
    return std::nullopt;
}

}  // namespace

SeriesSource SeriesSource::builtin(const std::string& name, long cap) {
    if (!has_builtin(name))
        throw std::invalid_argument("unknown builtin series '" + name + "'");
    SeriesSource s;
    s.id = name;
    s.max_truncation = cap;
    s.make = [name](long t) { return builtin_series(name, t); };
    return s;
}

SeriesSource SeriesSource::fixed(const std::string& id, PuiseuxSeries f) {
    SeriesSource s;
    s.id = id;
    s.max_truncation =
        f.trunc().finite ? f.trunc().bound.get_num().get_si() / f.trunc().bound.get_den().get_si()
                         : 1L << 30;
    auto stored = std::make_shared<PuiseuxSeries>(std::move(f));
    s.make = [stored](long t) {
        if (stored->trunc().finite && stored->trunc().bound < t)
            throw truncation_error("series file does not carry enough terms (need " +
                                   std::to_string(t) + ")");
        return *stored;
    };
    return s;
}

Complex cyc_to_complex(const CycNum& c, long prec) {
    unsigned long m = c.order();
    Real two_pi = Real::pi(prec) + Real::pi(prec);
    Real mm = Real::from_long(static_cast<long>(m), prec);
    Complex z((two_pi / mm).cos(), (two_pi / mm).sin());
    Complex acc(Real::from_long(0, prec), Real::from_long(0, prec));
    Complex cur(Real::from_long(1, prec), Real::from_long(0, prec));
    for (unsigned long i = 0; i < c.degree(); ++i) {
        Rat co = c.coord(i);
        if (co != 0) acc = acc + cur.mul_real(Real::from_rat(co, prec));
        cur = cur * z;
    }
    return acc;
}

Complex eval_at(const SeriesSource& src, const QuadraticIrrational& tau, long prec) {
    tau.validate();
    long wp = prec + 64;
    Real target = two_pow(-prec, wp);
    long t = std::min(16L, src.max_truncation / 2 > 2 ? src.max_truncation / 2 : 2L);
    Complex prev = eval_series_at(src.make(t), tau, wp);
    while (t < src.max_truncation) {
        long t2 = std::min(2 * t, src.max_truncation);
        Complex cur = eval_series_at(src.make(t2), tau, wp);
        Real scalev = cur.abs() + Real::from_long(1, wp);
        if ((cur - prev).abs() < target * scalev) return cur;
        prev = cur;
        t = t2;
    }
    throw bound_exhausted("eval_at: series did not stabilize within the truncation cap "
                          "(|q| too close to 1?)");
}

Real verify_thompson_identity(long prec) {
    long wp = prec + 64;
    SeriesSource j = SeriesSource::builtin("j");
    // (1 + sqrt(-15))/4 and (1 + sqrt(-15))/2
    Complex v1 = eval_at(j, {Int(2), Int(-1), Int(2)}, prec);
    Complex v2 = eval_at(j, {Int(1), Int(-1), Int(4)}, prec);
    Real sqrt5 = Real::from_long(5, wp).sqrt();
    Complex s = (v1 - v2).div_real(sqrt5);
    Complex target(Real::from_long(85995, wp), Real::from_long(0, wp));
    return (s - target).abs();
}

Real verify_mathieu_identity(long prec) {
    long wp = prec + 64;
    SeriesSource j3 = SeriesSource::builtin("gamma0_3");
    // (-1 + sqrt(-11))/6 and (1 + sqrt(-11))/6
    Complex v1 = eval_at(j3, {Int(3), Int(1), Int(1)}, prec);
    Complex v2 = eval_at(j3, {Int(3), Int(-1), Int(1)}, prec);
    Complex diff = v1 - v2;
    // divide by i sqrt(11): z / (i r) = (im(z) - i re(z)) / r
    Real r = Real::from_long(11, wp).sqrt();
    Complex s(diff.im() / r, -(diff.re() / r));
    Complex target(Real::from_long(16, wp), Real::from_long(0, wp));
    return (s - target).abs();
}

std::optional<std::vector<Int>> recover_monic_minpoly(
    const std::function<Complex(long)>& value, long degree_bound, long prec) {
    if (degree_bound < 1 || prec < 16)
        throw std::invalid_argument("recover_monic_minpoly: bad degree bound or precision");
    for (long d = 1; d <= degree_bound; ++d) {
        auto p = attempt_degree(value, d, prec);
        if (p) return p;
    }
    return std::nullopt;
}

namespace {

std::string poly_to_string(const std::vector<Int>& poly) {
    std::ostringstream os;
    bool first = true;
    for (size_t i = poly.size(); i-- > 0;) {
        const Int& c = poly[i];
        if (c == 0) continue;
        Int a = c < 0 ? Int(-c) : c;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (a != 1 || i == 0) {
            os << a.get_str();
            if (i > 0) os << "*";
        }
        if (i > 0) {
            os << "X";
            if (i > 1) os << "^" << i;
        }
    }
    if (first) os << "0";
    return os.str();
}

// The polynomial values below cancel almost completely; the honest numeric
// statement is |sum| <= 2^{-prec/2} * sum |term|, which needs only enough
// working precision to resolve the cancellation, not the term magnitudes.
struct CancellingSum {
    Real residual;  // |sum| / (1 + sum |term|)
    bool ok;        // residual below 2^{-prec/2}
};

CancellingSum relative_residual(
    const std::function<std::pair<Complex, Real>(long)>& term_sum_at, long prec) {
    long wp = prec / 2 + 192;
    auto [s, scale] = term_sum_at(wp);
    Real rel = s.abs() / (scale + Real::from_long(1, wp));
    return {rel, rel < two_pow(-prec / 2, wp)};
}

// Evidence for one prime: diagonal polynomial residual when the order is
// within the configured cap.  Returns the relative residual when built.
std::optional<CancellingSum> attach_diagonal(PrimeEvidence& ev, const SeriesSource& src,
                                             const QuadraticIrrational& tau0, long level,
                                             const CertifyConfig& config) {
    Int n_big = ev.l * ev.l;
    if (!n_big.fits_slong_p() || n_big.get_si() > config.modpoly_order_cap) {
        ev.diag_skipped = "order exceeds the configured cap";
        return std::nullopt;
    }
    long n = n_big.get_si();
    try {
        long t = std::max(modpoly_truncation(n), diagonal_truncation(n));
        PuiseuxSeries h = src.make(t);
        BivarPoly F = build_modpoly(h, n, level);
        DiagonalResult d = diagonal(F, h, n, level);
        auto sum_at = [&](long wp) {
            Complex v0 = config.value_override
                             ? Complex(Real::from_rat(*config.value_override, wp),
                                       Real::from_long(0, wp))
                             : eval_at(src, tau0, wp);
            Complex acc(Real::from_long(0, wp), Real::from_long(0, wp));
            Real scale(wp);
            Complex vk(Real::from_long(1, wp), Real::from_long(0, wp));
            for (size_t k = 0; k < d.poly.size(); ++k) {
                Complex term = cyc_to_complex(d.poly[k], wp) * vk;
                acc = acc + term;
                scale = scale + term.abs();
                if (k + 1 < d.poly.size()) vk = vk * v0;
            }
            return std::make_pair(acc, scale);
        };
        CancellingSum cs = relative_residual(sum_at, config.precision);
        ev.diagonal_built = true;
        ev.diag_class =
            d.classification == LeadingClass::prime_times_unit ? "p*unit" : "unit";
        ev.diag_p = d.p;
        ev.diag_residual = cs.residual.sci3();
        return cs;
    } catch (const std::exception& e) {
        ev.diag_skipped = e.what();
        return std::nullopt;
    }
}

}  // namespace

Certificate certify_cm_integrality(const SeriesSource& src, const QuadraticIrrational& tau,
                                   long level, const CertifyConfig& config) {
    tau.validate();
    if (level < 1) throw std::invalid_argument("certify: level must be >= 1");
    if (int_gcd(tau.a, Int(level)) != 1)
        throw std::invalid_argument(
            "certify: gcd(a, N) = 1 is required (theorem hypothesis)");

    Certificate cert;
    cert.series_id = src.id;
    cert.tau = tau;
    cert.level = level;
    cert.precision = config.precision;
    long wp = config.precision + 64;
    Real tol = two_pow(-config.precision / 2, wp);

    auto fail = [&cert](const std::string& stage) {
        if (cert.failed_stage.empty()) cert.failed_stage = stage;
    };

    // Stage 1: scaling to an algebraic-integer point.
    try {
        ScaledPoint sp = scale_to_integer_point(tau, level);
        cert.scaled = !sp.direct;
        cert.a_scaled = sp.a_scaled;
        cert.omega0 = sp.omega0;
        cert.tau0 = sp.tau0;
    } catch (const std::exception&) {
        fail("scaling");
        cert.verdict = Certificate::Verdict::inconclusive;
        return cert;
    }

    // Stage 2: two primes with primitive rho^2.
    bool have_primes = false;
    try {
        PrimitivePrime p1 =
            find_primitive_square_prime(cert.tau0, level, config.prime_search_bound);
        PrimitivePrime p2 = find_primitive_square_prime(cert.tau0, level,
                                                        config.prime_search_bound, {p1.p});
        QForm q = build_form(cert.tau0, level);
        auto fill = [&q, level, this_tau0 = cert.tau0](PrimeEvidence& ev,
                                                       const PrimitivePrime& pp) {
            ev.l = pp.p;
            ev.rho = pp.rho;
            ev.rho_sq = pp.rho_sq;
            ev.rejected = pp.rejected;
            // recover the witness (c, d) from rho: lower-left = c N, last = d
            ev.c = pp.rho.c / level;
            ev.d = pp.rho.d;
            if (q(ev.c, ev.d) != pp.p)
                throw internal_error("certify: prime witness mismatch");
            if (!fixes_tau(pp.rho_sq, this_tau0))
                throw internal_error("certify: rho^2 does not fix tau0");
        };
        fill(cert.first, p1);
        fill(cert.second, p2);
        have_primes = true;
    } catch (const bound_exhausted&) {
        fail("prime search");
    }

    // Stage 3: numeric values.
    Complex v0(wp), v(wp);
    bool have_values = false;
    try {
        if (config.value_override) {
            v0 = Complex(Real::from_rat(*config.value_override, wp), Real::from_long(0, wp));
            v = v0;
        } else {
            v0 = eval_at(src, cert.tau0, config.precision);
            v = cert.scaled ? eval_at(src, tau, config.precision) : v0;
        }
        cert.value_str = v.to_string(40) + " (effective precision " +
                         std::to_string(v.effective_prec()) + " bits)";
        cert.value0_str = v0.to_string(40) + " (effective precision " +
                          std::to_string(v0.effective_prec()) + " bits)";
        have_values = true;
    } catch (const std::exception&) {
        fail("evaluation");
    }

    // Stage 4: monic minimal polynomial of h(tau).
    if (have_values) {
        std::function<Complex(long)> value_fn;
        if (config.value_override) {
            Rat ov = *config.value_override;
            value_fn = [ov](long p) {
                return Complex(Real::from_rat(ov, p), Real::from_long(0, p));
            };
        } else {
            SeriesSource copy = src;
            QuadraticIrrational t = tau;
            value_fn = [copy, t](long p) { return eval_at(copy, t, p); };
        }
        try {
            auto mp = recover_monic_minpoly(value_fn, config.degree_cap, config.precision);
            if (mp) {
                cert.minpoly = *mp;
                Complex res = eval_int_poly(cert.minpoly, v, wp);
                cert.minpoly_residual = res.abs().sci3();
                cert.stable = true;  // stability is part of the recovery contract
                if (!(res.abs() < tol)) fail("minimal-polynomial residual");
            } else {
                fail("minimal-polynomial recovery");
            }
        } catch (const std::exception&) {
            fail("minimal-polynomial recovery");
        }
    }

    // Stage 5: diagonal-polynomial evidence for each prime within the cap.
    if (have_primes && have_values) {
        auto r1 = attach_diagonal(cert.first, src, cert.tau0, level, config);
        if (r1 && !r1->ok) fail("diagonal residual (prime 1)");
        auto r2 = attach_diagonal(cert.second, src, cert.tau0, level, config);
        if (r2 && !r2->ok) fail("diagonal residual (prime 2)");
    }

    // Stage 6: F_{a'} evidence for the scaled case.
    if (cert.scaled && have_values) {
        if (!cert.a_scaled.fits_slong_p() ||
            cert.a_scaled.get_si() > config.modpoly_order_cap) {
            cert.scale_skipped = "order exceeds the configured cap";
        } else {
            try {
                long ap = cert.a_scaled.get_si();
                long t = std::max(modpoly_truncation(ap), diagonal_truncation(ap));
                PuiseuxSeries h = src.make(t);
                BivarPoly F = build_modpoly(h, ap, level);
                DiagonalResult d = diagonal(F, h, ap, level);
                cert.scale_poly_built = true;
                cert.scale_class =
                    d.classification == LeadingClass::prime_times_unit ? "p*unit" : "unit";
                cert.scale_p = d.p;
                // |F_{a'}((h*a')(tau0), h(tau))|: the modular relation that
                // links the scaled point back to the original one.
                PuiseuxSeries hn = galois_series(h, ap);
                SeriesSource twisted = SeriesSource::fixed(src.id + "*n", hn);
                QuadraticIrrational tau_orig = tau;
                auto sum_at = [&](long wpr) {
                    Complex x = config.value_override
                                    ? Complex(Real::from_rat(*config.value_override, wpr),
                                              Real::from_long(0, wpr))
                                    : eval_at(twisted, cert.tau0, wpr);
                    Complex vv = config.value_override
                                     ? x
                                     : eval_at(src, tau_orig, wpr);
                    Complex acc(Real::from_long(0, wpr), Real::from_long(0, wpr));
                    Real scale(wpr);
                    for (auto& [ij, cf] : F.terms) {
                        Complex term = cyc_to_complex(cf, wpr) *
                                       complex_pow(x, ij.first, wpr) *
                                       complex_pow(vv, ij.second, wpr);
                        acc = acc + term;
                        scale = scale + term.abs();
                    }
                    return std::make_pair(acc, scale);
                };
                CancellingSum cs = relative_residual(sum_at, config.precision);
                cert.scale_residual = cs.residual.sci3();
                if (!cs.ok) fail("scaled-relation residual");
            } catch (const std::exception& e) {
                cert.scale_skipped = e.what();
            }
        }
    }

    cert.verdict = (cert.failed_stage.empty() && !cert.minpoly.empty())
                       ? Certificate::Verdict::certified
                       : Certificate::Verdict::inconclusive;
    return cert;
}

std::string Certificate::to_text() const {
    std::ostringstream os;
    os << "modeq-certificate 1\n";
    os << "series " << series_id << "\n";
    os << "tau " << tau.to_string() << "\n";
    os << "level " << level << "\n";
    os << "precision " << precision << "\n";
    os << "scaled " << (scaled ? "yes" : "no") << "\n";
    if (scaled) {
        os << "a_scaled " << a_scaled.get_str() << "\n";
        os << "omega0 " << omega0.to_string() << "\n";
    }
    os << "tau0 " << tau0.to_string() << "\n";
    auto prime_block = [&os](const char* tag, const PrimeEvidence& ev) {
        os << tag << " l " << ev.l.get_str() << " witness " << ev.c.get_str() << ","
           << ev.d.get_str() << "\n";
        os << tag << " rho " << ev.rho.to_string() << "\n";
        os << tag << " rho_sq " << ev.rho_sq.to_string() << " primitive yes\n";
        for (auto& rej : ev.rejected)
            os << tag << " rejected " << rej.l.get_str() << " rho_sq "
               << rej.rho_sq.to_string() << " (imprimitive)\n";
        if (ev.diagonal_built) {
            Int order_sq = ev.l * ev.l;
            os << tag << " diagonal order " << order_sq.get_str() << " leading "
               << ev.diag_class;
            if (ev.diag_p > 1) os << " p " << ev.diag_p.get_str();
            os << " residual " << ev.diag_residual << "\n";
        } else if (!ev.diag_skipped.empty()) {
            os << tag << " diagonal skipped: " << ev.diag_skipped << "\n";
        }
    };
    if (first.l != 0) prime_block("prime1", first);
    if (second.l != 0) prime_block("prime2", second);
    if (scaled) {
        if (scale_poly_built) {
            os << "scale_poly order " << a_scaled.get_str() << " leading " << scale_class;
            if (scale_p > 1) os << " p " << scale_p.get_str();
            os << " residual " << scale_residual << "\n";
        } else if (!scale_skipped.empty()) {
            os << "scale_poly skipped: " << scale_skipped << "\n";
        }
    }
    os << "value " << value_str << "\n";
    os << "value_tau0 " << value0_str << "\n";
    if (!minpoly.empty()) {
        os << "minpoly";
        for (auto& c : minpoly) os << " " << c.get_str();
        os << "\n";
        os << "minpoly_pretty " << poly_to_string(minpoly) << "\n";
        os << "minpoly_residual " << minpoly_residual << "\n";
    } else {
        os << "minpoly absent\n";
    }
    os << "stable " << (stable ? "yes" : "no") << "\n";
    os << "verdict "
       << (verdict == Verdict::certified ? "certified" : "inconclusive") << "\n";
    if (!failed_stage.empty()) os << "failed_stage " << failed_stage << "\n";
    os << "end\n";
    return os.str();
}

}  // namespace modeq
