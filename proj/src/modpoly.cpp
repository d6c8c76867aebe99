#include "modeq/modpoly.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>

namespace modeq {

namespace {

void check_build_inputs(const PuiseuxSeries& h, long n, long level, const char* who) {
    if (n < 2) throw std::invalid_argument(std::string(who) + ": order must be >= 2");
    if (level < 1) throw std::invalid_argument(std::string(who) + ": level must be >= 1");
    if (gcd_long(n, level) != 1)
        throw std::invalid_argument(std::string(who) +
                                    ": order must be coprime to the level");
    if (!is_normalized_hauptmodul(h))
        throw std::invalid_argument(std::string(who) +
                                    ": series must be q^-1 + 0 + O(q) normalized");
    if (static_cast<long>(h.coeff_order()) <= 0 ||
        level % static_cast<long>(h.coeff_order()) != 0)
        throw std::invalid_argument(std::string(who) +
                                    ": coefficient order must divide the level");
}

// Y-polynomial with Puiseux-series coefficients, index = power of Y.
using YPoly = std::vector<PuiseuxSeries>;

YPoly ypoly_mul(const YPoly& a, const YPoly& b, unsigned long order, const Rat& cap) {
    YPoly r(a.size() + b.size() - 1,
            PuiseuxSeries::zero(order, Trunc::inf()));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].known_zero() && !a[i].trunc().finite) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] += truncate_at(a[i] * b[j], cap);
    }
    return r;
}

// Powers f^0..f^n, each certified at least to exponent cap (staged caps keep
// the certified range from decaying as the pole order accumulates).
std::vector<PuiseuxSeries> powers_to(const PuiseuxSeries& f, long n, const Rat& cap) {
    std::vector<PuiseuxSeries> fp;
    fp.reserve(static_cast<size_t>(n) + 1);
    fp.push_back(PuiseuxSeries::monomial(CycNum::one(f.coeff_order()), 0));
    PuiseuxSeries base = truncate_at(f, cap + Rat(n + 1));
    for (long k = 1; k <= n; ++k)
        fp.push_back(truncate_at(fp.back() * base, cap + Rat(n + 1 - k)));
    return fp;
}

// sum_b (h^j composed with (a, b; 0, d)) over the full orbit b = 0..d-1:
// d * sum_{d | m} [q^m](h^j) q^{am/d}.
PuiseuxSeries orbit_sum(const PuiseuxSeries& hj, long a, long d) {
    PuiseuxSeries p = PuiseuxSeries::zero(
        hj.coeff_order(), hj.trunc().finite
                              ? Trunc::at(hj.trunc().bound * make_rat(Int(a), Int(d)))
                              : Trunc::inf());
    if (hj.ramification() != 1)
        throw internal_error("orbit_sum: expected integral exponents");
    for (auto& [m, c] : hj.terms()) {
        if (m % d != 0) continue;
        CycNum v = c;
        v.mul_int(Int(d));
        p.set_term(Rat(a * (m / d)), v);
    }
    return p;
}

// Elementary symmetric functions e_0..e_k from power sums via Newton.
std::vector<PuiseuxSeries> newton_elementary(const std::vector<PuiseuxSeries>& p, long k,
                                             unsigned long order, const Rat& cap) {
    std::vector<PuiseuxSeries> e;
    e.reserve(static_cast<size_t>(k) + 1);
    e.push_back(PuiseuxSeries::monomial(CycNum::one(order), 0));
    for (long m = 1; m <= k; ++m) {
        PuiseuxSeries acc = PuiseuxSeries::zero(order, Trunc::inf());
        for (long i = 1; i <= m; ++i) {
            PuiseuxSeries term = truncate_at(e[static_cast<size_t>(m - i)] * p[static_cast<size_t>(i)], cap);
            if (i % 2 == 0) term = -term;
            acc += term;
        }
        acc = scale(CycNum(make_rat(Int(1), Int(m)), order), acc);
        e.push_back(std::move(acc));
    }
    return e;
}

std::vector<long> kept_offsets(long a, long d) {
    std::vector<long> kept;
    for (long b = 0; b < d; ++b)
        if (gcd_long(gcd_long(a, b), d) == 1) kept.push_back(b);
    return kept;
}

// prod_{b kept} (Y - h((az+b)/d)) for a full orbit, via power sums of the
// substituted series; stays in h's coefficient field.
YPoly stratum_full(const PuiseuxSeries& h, long a, long d, const Rat& cap) {
    Rat hcap = cap * make_rat(Int(d), Int(a)) + Rat(d + 2);
    std::vector<PuiseuxSeries> hp = powers_to(h, d, hcap);
    std::vector<PuiseuxSeries> p(static_cast<size_t>(d) + 1,
                                 PuiseuxSeries::zero(h.coeff_order(), Trunc::inf()));
    for (long j = 1; j <= d; ++j)
        p[static_cast<size_t>(j)] = truncate_at(orbit_sum(hp[static_cast<size_t>(j)], a, d), cap);
    std::vector<PuiseuxSeries> e = newton_elementary(p, d, h.coeff_order(), cap);
    YPoly s(static_cast<size_t>(d) + 1, PuiseuxSeries::zero(h.coeff_order(), Trunc::inf()));
    for (long k = 0; k <= d; ++k) {
        PuiseuxSeries c = e[static_cast<size_t>(k)];
        if (k % 2 == 1) c = -c;
        s[static_cast<size_t>(d - k)] = std::move(c);
    }
    return s;
}

// prod over the kept b of (Y - h((az+b)/d)), by direct substitution.
YPoly stratum_partial(const PuiseuxSeries& h, long a, long d,
                      const std::vector<long>& kept, const Rat& cap) {
    unsigned long order = static_cast<unsigned long>(
        lcm_long(static_cast<long>(h.coeff_order()), d));
    YPoly s{PuiseuxSeries::monomial(CycNum::one(order), 0)};
    for (long b : kept) {
        IntMat2 w{Int(a), Int(b), Int(0), Int(d)};
        PuiseuxSeries g = truncate_at(series_embed(substitute_omega(h, w), order), cap + 1);
        YPoly factor{-g, PuiseuxSeries::monomial(CycNum::one(order), 0)};
        s = ypoly_mul(s, factor, order, cap + 1);
    }
    return s;
}

// Greedy principal-part elimination of s against powers of base (monic with
// leading q^{-1}).  Returns the polynomial coefficients, ascending.
std::vector<CycNum> reduce_against(PuiseuxSeries s, const std::vector<PuiseuxSeries>& base_pow,
                                   long max_degree, long verify_margin, const char* who) {
    unsigned long order = s.coeff_order();
    std::vector<CycNum> poly(static_cast<size_t>(max_degree) + 1, CycNum::zero(order));
    if (s.ramification() != 1)
        throw std::invalid_argument(std::string(who) +
                                    ": surviving fractional-exponent term");
    for (;;) {
        auto o = s.order();
        if (!o || *o > 0) break;
        if (*o < -max_degree)
            throw std::invalid_argument(std::string(who) +
                                        ": pole order exceeds the admissible degree "
                                        "(input is not a Hauptmodul for this order)");
        long k = static_cast<long>(-o->get_num().get_si());
        CycNum c = s.coeff_at(*o);
        poly[static_cast<size_t>(k)] = c;
        s -= scale(c, base_pow[static_cast<size_t>(k)]);
    }
    // Remainder must be certified O(q^{verify_margin}).
    if (!s.known_zero())
        throw std::invalid_argument(std::string(who) +
                                    ": reduction remainder does not vanish (input is "
                                    "not expressible as a polynomial in h*n)");
    if (s.trunc().finite && s.trunc().bound < verify_margin)
        throw truncation_error(std::string(who) +
                               ": cannot certify the reduction remainder to O(q^" +
                               std::to_string(verify_margin) + ")");
    return poly;
}

long diag_pole_order(long n) {
    OmegaSet om = enumerate_omega(n);
    Rat m0(0);
    for (auto& w : om.matrices) {
        Rat ad = make_rat(w.a, w.d);
        m0 += ad > 1 ? ad : Rat(1);
    }
    // ceil; the stratum sums make this integral for every n
    return static_cast<long>(
        int_fdiv(m0.get_num() + m0.get_den() - 1, m0.get_den()).get_si());
}

}  // namespace

long psi(long n) {
    if (n < 1) throw std::invalid_argument("psi: n must be >= 1");
    long r = n;
    long m = n;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            r = r / p * (p + 1);
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) r = r / m * (m + 1);
    return r;
}

OmegaSet enumerate_omega(long n) {
    if (n < 2) throw std::invalid_argument("enumerate_omega: n must be >= 2");
    OmegaSet s;
    s.n = n;
    for (long a = 1; a <= n; ++a) {
        if (n % a != 0) continue;
        long d = n / a;
        for (long b = 0; b < d; ++b)
            if (gcd_long(gcd_long(a, b), d) == 1)
                s.matrices.push_back({Int(a), Int(b), Int(0), Int(d)});
    }
    if (static_cast<long>(s.matrices.size()) != psi(n))
        throw internal_error("enumerate_omega: cardinality differs from psi(n)");
    return s;
}

long BivarPoly::degree_x() const {
    long d = 0;
    for (auto& [ij, c] : terms) d = std::max(d, ij.first);
    return d;
}

long BivarPoly::degree_y() const {
    long d = 0;
    for (auto& [ij, c] : terms) d = std::max(d, ij.second);
    return d;
}

CycNum BivarPoly::coeff(long i, long j) const {
    auto it = terms.find({i, j});
    if (it == terms.end()) return CycNum::zero(coeff_order);
    return it->second;
}

void BivarPoly::set(long i, long j, const CycNum& c) {
    if (c.is_zero())
        terms.erase({i, j});
    else
        terms[{i, j}] = c;
}

bool BivarPoly::monic_in_y() const {
    long dy = degree_y();
    for (auto& [ij, c] : terms)
        if (ij.second == dy && ij.first != 0) return false;
    return coeff(0, dy) == CycNum::one(coeff_order);
}

std::string BivarPoly::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        auto [i, j] = it->first;
        const CycNum& c = it->second;
        std::string cs = c.to_string();
        bool neg = !cs.empty() && cs[0] == '-' && c.is_rational();
        if (first) {
            first = false;
            if (neg) {
                os << "-";
                cs = cs.substr(1);
            }
        } else {
            os << (neg ? " - " : " + ");
            if (neg) cs = cs.substr(1);
        }
        bool unit = (cs == "1") && (i > 0 || j > 0);
        if (!unit) {
            if (c.is_rational())
                os << cs;
            else
                os << "(" << cs << ")";
            if (i > 0 || j > 0) os << "*";
        }
        if (i > 0) {
            os << "X";
            if (i > 1) os << "^" << i;
        }
        if (j > 0) {
            if (i > 0) os << "*";
            os << "Y";
            if (j > 1) os << "^" << j;
        }
    }
    if (first) os << "0";
    return os.str();
}

long modpoly_truncation(long n, long verify_margin) {
    return n * (psi(n) + verify_margin + 6) + 10;
}

long diagonal_truncation(long n, long verify_margin) {
    return n * (diag_pole_order(n) + verify_margin + 6) + 10;
}

long modeq_check_truncation(long n, long verify_bound) {
    return n * (verify_bound + 2 * psi(n) + 4) + 2;
}

BivarPoly build_modpoly(const PuiseuxSeries& h, long n, long level, long verify_margin) {
    check_build_inputs(h, n, level, "build_modpoly");
    long deg = psi(n);
    if (h.trunc().finite && h.trunc().bound < n * deg + n + 2)
        throw truncation_error("build_modpoly: input truncation below the budget n*psi(n)+n+2");
    Rat cap = Rat(deg + verify_margin + 4);

    // One Y-polynomial per (a, d) stratum of Omega(n).
    std::vector<YPoly> strata;
    unsigned long big = h.coeff_order();
    for (long a = 1; a <= n; ++a) {
        if (n % a != 0) continue;
        long d = n / a;
        std::vector<long> kept = kept_offsets(a, d);
        if (kept.empty()) continue;
        YPoly s = (static_cast<long>(kept.size()) == d)
                      ? stratum_full(h, a, d, cap)
                      : stratum_partial(h, a, d, kept, cap);
        big = static_cast<unsigned long>(lcm_long(static_cast<long>(big),
                                                  static_cast<long>(s[0].coeff_order())));
        strata.push_back(std::move(s));
    }
    YPoly f{PuiseuxSeries::monomial(CycNum::one(big), 0)};
    for (auto& s : strata) {
        for (auto& c : s) c = series_embed(c, big);
        f = ypoly_mul(f, s, big, cap + 1);
    }
    if (static_cast<long>(f.size()) != deg + 1)
        throw internal_error("build_modpoly: Y-degree differs from psi(n)");

    // Leading Y-coefficient is exactly 1.
    {
        PuiseuxSeries lead = f.back();
        PuiseuxSeries one = PuiseuxSeries::monomial(CycNum::one(big), 0, 1, lead.trunc());
        if (!(lead == one)) throw internal_error("build_modpoly: product not monic in Y");
    }

    PuiseuxSeries hn = series_embed(galois_series(h, n), big);
    std::vector<PuiseuxSeries> hnp = powers_to(hn, deg, Rat(verify_margin + 2 + deg));

    BivarPoly F;
    F.order_n = n;
    F.level = level;
    F.coeff_order = h.coeff_order();
    F.set(0, deg, CycNum::one(h.coeff_order()));
    for (long j = 0; j < deg; ++j) {
        std::vector<CycNum> poly = reduce_against(f[static_cast<size_t>(j)], hnp, deg,
                                                  verify_margin, "build_modpoly");
        for (long i = 0; i <= deg; ++i) {
            const CycNum& c = poly[static_cast<size_t>(i)];
            if (c.is_zero()) continue;
            auto down = c.in_subfield(h.coeff_order());
            if (!down)
                throw std::invalid_argument(
                    "build_modpoly: coefficient does not descend to Q(zeta_N)");
            F.set(i, j, *down);
        }
    }
    if (F.degree_x() != deg)
        throw internal_error("build_modpoly: X-degree differs from psi(n)");
    return F;
}

ModeqCheck check_modeq(const PuiseuxSeries& f, const BivarPoly& F, long n, long level,
                       bool twist, long verify_bound) {
    check_build_inputs(f, n, level, "check_modeq");
    if (verify_bound < 1)
        throw std::invalid_argument("check_modeq: verify bound must be >= 1");
    long deg_y = F.degree_y();
    long deg_x = F.degree_x();
    unsigned long big = static_cast<unsigned long>(lcm_long(
        lcm_long(static_cast<long>(f.coeff_order()), static_cast<long>(F.coeff_order)), n));
    // The Horner accumulator reaches pole order ~ deg_x + deg_y * (a/d); keep
    // everything that can still influence exponents below the verify bound.
    Rat cap_global = Rat(verify_bound + deg_x + deg_y * n + 2);

    PuiseuxSeries x = series_embed(twist ? galois_series(f, n) : f, big);
    std::vector<PuiseuxSeries> xp = powers_to(x, deg_x, cap_global);
    // C_j(X) = sum_i F[i][j] X^i
    std::vector<PuiseuxSeries> cj(static_cast<size_t>(deg_y) + 1,
                                  PuiseuxSeries::zero(big, Trunc::inf()));
    for (auto& [ij, c] : F.terms)
        cj[static_cast<size_t>(ij.second)] +=
            scale(c.embed(big), xp[static_cast<size_t>(ij.first)]);

    OmegaSet om = enumerate_omega(n);
    auto check_one = [&](const IntMat2& w) -> std::pair<Trunc, std::optional<Rat>> {
        long adr = (w.a.get_si() + w.d.get_si() - 1) / w.d.get_si();  // ceil(a/d)
        Rat cap = Rat(verify_bound + deg_x + deg_y * adr + 2);
        PuiseuxSeries g = truncate_at(series_embed(substitute_omega(f, w), big), cap);
        PuiseuxSeries s = truncate_at(cj[static_cast<size_t>(deg_y)], cap);
        for (long j = deg_y - 1; j >= 0; --j)
            s = truncate_at(s * g, cap) + truncate_at(cj[static_cast<size_t>(j)], cap);
        s = truncate_at(s, Rat(verify_bound));
        std::optional<Rat> bad;
        for (auto& [k, c] : s.terms()) {
            if (!c.is_zero()) {
                bad = make_rat(Int(k), Int(s.ramification()));
                break;
            }
        }
        return {s.trunc(), bad};
    };

    std::vector<std::future<std::pair<Trunc, std::optional<Rat>>>> futs;
    futs.reserve(om.matrices.size());
    for (auto& w : om.matrices)
        futs.push_back(std::async(std::launch::async, check_one, w));

    ModeqCheck result;
    result.ok = true;
    Trunc verified = Trunc::at(Rat(verify_bound));
    for (auto& fu : futs) {
        auto [t, bad] = fu.get();
        verified = min(verified, t);
        if (bad && (!result.failed_exponent || *bad < *result.failed_exponent)) {
            result.ok = false;
            result.failed_exponent = bad;
        }
    }
    if (!verified.finite) throw internal_error("check_modeq: unexpected exact truncation");
    result.verified_order = verified.bound;
    if (result.ok && result.verified_order < 1)
        throw truncation_error(
            "check_modeq: insufficient truncation to verify even one positive power");
    return result;
}

bool check_symmetry(const BivarPoly& F, long n) {
    long m = static_cast<long>(F.coeff_order);
    if (gcd_long(n, m) != 1)
        throw std::invalid_argument("check_symmetry: order not coprime to coefficient order");
    std::map<std::pair<long, long>, bool> keys;
    for (auto& [ij, c] : F.terms) {
        keys[ij] = true;
        keys[{ij.second, ij.first}] = true;
    }
    for (auto& [ij, unused] : keys)
        if (!(F.coeff(ij.first, ij.second) == F.coeff(ij.second, ij.first).galois(n)))
            return false;
    return true;
}

DiagonalResult diagonal(const BivarPoly& F, const PuiseuxSeries& h, long n, long level,
                        long verify_margin) {
    check_build_inputs(h, n, level, "diagonal");
    long root = 1;
    while (root * root < n) ++root;
    if (root * root != n)
        throw std::invalid_argument("diagonal: order must be a perfect square");
    for (auto& [k, c] : h.terms())
        if (!c.is_integral())
            throw std::invalid_argument("diagonal: series must have Z[zeta_N] coefficients");
    if (!(galois_series(h, n) == h))
        throw std::invalid_argument(
            "diagonal: h*n != h for square n: input is not a level-N Hauptmodul");

    long m0 = diag_pole_order(n);
    Rat cap = Rat(m0 + verify_margin + 4);
    unsigned long big = h.coeff_order();

    // prod over strata of prod_b (h - h((az+b)/d))
    std::vector<PuiseuxSeries> parts;
    for (long a = 1; a <= n; ++a) {
        if (n % a != 0) continue;
        long d = n / a;
        std::vector<long> kept = kept_offsets(a, d);
        if (kept.empty()) continue;
        if (static_cast<long>(kept.size()) == d) {
            // power sums of (h - h o omega_b) over the orbit:
            // p_j = sum_i C(j, i) (-1)^i h^{j-i} D_i with D_i the orbit sums
            Rat hcap = cap * make_rat(Int(d), Int(a)) + Rat(d + 2);
            Rat direct_cap = cap + 2;
            std::vector<PuiseuxSeries> hp =
                powers_to(h, d, hcap > direct_cap ? hcap : direct_cap);
            std::vector<PuiseuxSeries> dsum(static_cast<size_t>(d) + 1,
                                            PuiseuxSeries::zero(big, Trunc::inf()));
            dsum[0] = PuiseuxSeries::monomial(CycNum(Rat(d), big), 0);
            for (long i = 1; i <= d; ++i)
                dsum[static_cast<size_t>(i)] =
                    truncate_at(orbit_sum(hp[static_cast<size_t>(i)], a, d), cap + 1);
            std::vector<PuiseuxSeries> p(static_cast<size_t>(d) + 1,
                                         PuiseuxSeries::zero(big, Trunc::inf()));
            for (long j = 1; j <= d; ++j) {
                PuiseuxSeries acc = PuiseuxSeries::zero(big, Trunc::inf());
                Int binom = 1;  // C(j, i)
                for (long i = 0; i <= j; ++i) {
                    PuiseuxSeries term =
                        truncate_at(hp[static_cast<size_t>(j - i)] * dsum[static_cast<size_t>(i)],
                                    cap + 1);
                    CycNum k(Rat(binom), big);
                    if (i % 2 == 1) k = -k;
                    acc += scale(k, term);
                    binom = binom * (j - i) / (i + 1);
                }
                p[static_cast<size_t>(j)] = std::move(acc);
            }
            std::vector<PuiseuxSeries> e = newton_elementary(p, d, big, cap + 1);
            parts.push_back(e[static_cast<size_t>(d)]);
        } else {
            unsigned long order = static_cast<unsigned long>(
                lcm_long(static_cast<long>(h.coeff_order()), d));
            PuiseuxSeries prod = PuiseuxSeries::monomial(CycNum::one(order), 0);
            PuiseuxSeries hb = series_embed(h, order);
            for (long b : kept) {
                IntMat2 w{Int(a), Int(b), Int(0), Int(d)};
                PuiseuxSeries g = series_embed(substitute_omega(h, w), order);
                prod = truncate_at(prod * (hb - g), cap + 1);
            }
            parts.push_back(std::move(prod));
        }
    }
    unsigned long all = big;
    for (auto& s : parts)
        all = static_cast<unsigned long>(
            lcm_long(static_cast<long>(all), static_cast<long>(s.coeff_order())));
    PuiseuxSeries dseries = PuiseuxSeries::monomial(CycNum::one(all), 0);
    for (auto& s : parts) dseries = truncate_at(dseries * series_embed(s, all), cap + 1);

    std::vector<PuiseuxSeries> hpow =
        powers_to(series_embed(h, all), m0, Rat(verify_margin + 2));
    std::vector<CycNum> poly =
        reduce_against(dseries, hpow, m0, verify_margin, "diagonal");

    DiagonalResult res;
    res.poly.reserve(poly.size());
    for (auto& c : poly) {
        auto down = c.in_subfield(h.coeff_order());
        if (!down)
            throw std::invalid_argument("diagonal: coefficient does not descend to Q(zeta_N)");
        if (!down->is_integral())
            throw std::invalid_argument(
                "diagonal: non-integral coefficient (hypothesis violation)");
        res.poly.push_back(*down);
    }

    // Cross-check against the collapse F(X, X).
    std::vector<CycNum> collapse(static_cast<size_t>(std::max(m0, F.degree_x() + F.degree_y())) + 1,
                                 CycNum::zero(h.coeff_order()));
    for (auto& [ij, c] : F.terms)
        collapse[static_cast<size_t>(ij.first + ij.second)] += c.embed(h.coeff_order());
    for (size_t k = 0; k < collapse.size(); ++k) {
        const CycNum& want = collapse[k];
        const CycNum got = k < res.poly.size() ? res.poly[k] : CycNum::zero(h.coeff_order());
        if (!(want == got))
            throw internal_error("diagonal: product route disagrees with F(X, X)");
    }

    while (res.poly.size() > 1 && res.poly.back().is_zero()) res.poly.pop_back();
    CycNum lead = res.poly.back();

    // n is a square; a single prime divisor p means n = p^{2e}.
    long m = n;
    std::vector<long> primes;
    for (long q = 2; q * q <= m; ++q)
        if (m % q == 0) {
            primes.push_back(q);
            while (m % q == 0) m /= q;
        }
    if (m > 1) primes.push_back(m);
    if (primes.size() == 1) {
        Int p(primes[0]);
        CycNum quotient = lead;
        quotient.mul_rat(make_rat(Int(1), p));
        if (!quotient.is_integral() || !is_unit(quotient))
            throw internal_error("diagonal: leading coefficient is not p * unit");
        res.classification = LeadingClass::prime_times_unit;
        res.p = p;
    } else {
        if (!is_unit(lead))
            throw internal_error("diagonal: leading coefficient is not a unit");
        res.classification = LeadingClass::unit;
        res.p = 1;
    }
    return res;
}

void write_modpoly(std::ostream& os, const BivarPoly& F) {
    os << "modeq-modpoly 1\n";
    os << "order " << F.order_n << "\n";
    os << "level " << F.level << "\n";
    os << "cyclotomic_order " << F.coeff_order << "\n";
    os << "terms " << F.terms.size() << "\n";
    for (auto& [ij, c] : F.terms) {
        os << "term " << ij.first << " " << ij.second;
        for (auto& s : c.coord_strings()) os << " " << s;
        os << "\n";
    }
    os << "end\n";
}

BivarPoly read_modpoly(std::istream& is) {
    auto bad = [](const std::string& what) -> void {
        throw std::invalid_argument("modpoly file: " + what);
    };
    std::string word;
    long version = 0;
    if (!(is >> word >> version) || word != "modeq-modpoly" || version != 1)
        bad("missing 'modeq-modpoly 1' header");
    BivarPoly F;
    size_t nterms = 0;
    if (!(is >> word >> F.order_n) || word != "order") bad("bad order");
    if (!(is >> word >> F.level) || word != "level") bad("bad level");
    if (!(is >> word >> F.coeff_order) || word != "cyclotomic_order" || F.coeff_order == 0)
        bad("bad cyclotomic_order");
    if (!(is >> word >> nterms) || word != "terms") bad("bad term count");
    unsigned long deg = euler_phi(F.coeff_order);
    for (size_t t = 0; t < nterms; ++t) {
        long i, j;
        if (!(is >> word >> i >> j) || word != "term") bad("bad term record");
        std::vector<Rat> coords(deg);
        for (unsigned long k = 0; k < deg; ++k) {
            std::string s;
            if (!(is >> s)) bad("bad coordinate");
            coords[k] = parse_rat(s);
        }
        F.set(i, j, CycNum(F.coeff_order, coords));
    }
    if (!(is >> word) || word != "end") bad("missing 'end'");
    return F;
}

void save_modpoly(const std::string& path, const BivarPoly& F) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
        write_modpoly(os, F);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

BivarPoly load_modpoly(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_modpoly(is);
}

}  // namespace modeq
