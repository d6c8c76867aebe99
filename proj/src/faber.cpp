#include "modeq/faber.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace modeq {

namespace {

void require_normalized(const PuiseuxSeries& f, const char* who) {
    if (!is_normalized_hauptmodul(f))
        throw std::invalid_argument(std::string(who) +
                                    ": input must be q^-1 + 0 + O(q) normalized");
}

// Powers f^0..f^n, each truncated at exponent cap + 1.
std::vector<PuiseuxSeries> powers_capped(const PuiseuxSeries& f, long n, long cap) {
    std::vector<PuiseuxSeries> fp;
    fp.reserve(static_cast<size_t>(n) + 1);
    fp.push_back(PuiseuxSeries::monomial(CycNum::one(f.coeff_order()), 0));
    PuiseuxSeries base = truncate_at(f, Rat(cap + 1));
    for (long k = 1; k <= n; ++k) fp.push_back(truncate_at(fp.back() * base, Rat(cap + 1)));
    return fp;
}

// Monic degree-n elimination: returns the Faber coefficients and the
// composition P_{n,f}(f) truncated at cap + 1.
std::pair<std::vector<CycNum>, PuiseuxSeries> eliminate(
    const std::vector<PuiseuxSeries>& fp, long n, unsigned long order) {
    std::vector<CycNum> coeff(static_cast<size_t>(n) + 1, CycNum::zero(order));
    coeff[static_cast<size_t>(n)] = CycNum::one(order);
    PuiseuxSeries s = fp[static_cast<size_t>(n)];
    for (long j = n - 1; j >= 0; --j) {
        CycNum c = s.coeff_at(Rat(-j));
        if (c.is_zero()) continue;
        coeff[static_cast<size_t>(j)] = -c;
        s -= scale(c, fp[static_cast<size_t>(j)]);
    }
    return {std::move(coeff), std::move(s)};
}

// Per-level coefficient bounds for replicate extraction: level s/e must be
// known through e^2 * (bound of level s).
std::vector<long> level_bounds(long max_index, long coeff_bound) {
    std::vector<long> b(static_cast<size_t>(max_index) + 1, coeff_bound);
    for (long s = max_index; s >= 2; --s)
        for (long e = 2; e <= s; ++e)
            if (s % e == 0)
                b[static_cast<size_t>(s / e)] =
                    std::max(b[static_cast<size_t>(s / e)], e * e * b[static_cast<size_t>(s)]);
    return b;
}

PuiseuxSeries replicate_series(unsigned long order, const std::map<long, CycNum>& c,
                               long bound) {
    PuiseuxSeries g = PuiseuxSeries::zero(order, Trunc::at(bound + 1));
    g.set_term(Rat(-1), CycNum::one(order));
    for (auto& [t, v] : c) {
        if (t > bound) break;
        g.set_term(Rat(t), v);
    }
    return g;
}

}  // namespace

std::string FaberPoly::to_string(const std::string& var) const {
    std::ostringstream os;
    bool first = true;
    for (long k = n; k >= 0; --k) {
        const CycNum& c = coeff[static_cast<size_t>(k)];
        if (c.is_zero()) continue;
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
        bool unit = (cs == "1") && k > 0;
        if (!unit) {
            if (c.is_rational())
                os << cs;
            else
                os << "(" << cs << ")";
            if (k > 0) os << "*";
        }
        if (k > 0) {
            os << var;
            if (k > 1) os << "^" << k;
        }
    }
    if (first) os << "0";
    return os.str();
}

PuiseuxSeries FaberPoly::operator()(const PuiseuxSeries& x) const {
    unsigned long big = static_cast<unsigned long>(
        lcm_long(static_cast<long>(coeff_order), static_cast<long>(x.coeff_order())));
    PuiseuxSeries xb = series_embed(x, big);
    PuiseuxSeries acc = PuiseuxSeries::monomial(coeff[static_cast<size_t>(n)].embed(big), 0);
    for (long k = n - 1; k >= 0; --k) {
        acc = acc * xb;
        CycNum c = coeff[static_cast<size_t>(k)].embed(big);
        if (!c.is_zero()) acc += PuiseuxSeries::monomial(c, 0, 1, acc.trunc());
    }
    return acc;
}

const CycNum& HTable::at(long m, long n) const {
    auto it = h.find({m, n});
    if (it == h.end()) throw std::out_of_range("HTable: index out of bounds");
    return it->second;
}

FaberPoly faber(const PuiseuxSeries& f, long n) {
    if (n < 1) throw std::invalid_argument("faber: order must be >= 1");
    require_normalized(f, "faber");
    if (f.trunc().finite && f.trunc().bound < n + 1)
        throw truncation_error("faber: truncation must be >= n + 1");
    auto fp = powers_capped(f, n, n);
    auto [coeff, comp] = eliminate(fp, n, f.coeff_order());
    FaberPoly p;
    p.n = n;
    p.coeff_order = f.coeff_order();
    p.coeff = std::move(coeff);
    return p;
}

HTable h_table(const PuiseuxSeries& f, long bound) {
    if (bound < 1) throw std::invalid_argument("h_table: bound must be >= 1");
    require_normalized(f, "h_table");
    if (f.trunc().finite && f.trunc().bound < bound * bound + 1)
        throw truncation_error("h_table: truncation must be >= bound^2 + 1");
    HTable table;
    table.bound = bound;
    table.coeff_order = f.coeff_order();
    auto fp = powers_capped(f, bound, 2 * bound);
    for (long n = 1; n <= bound; ++n) {
        auto [coeff, comp] = eliminate(fp, n, f.coeff_order());
        Rat inv_n = make_rat(Int(1), Int(n));
        for (long m = 1; m <= bound; ++m) {
            CycNum v = comp.coeff_at(Rat(m));
            v.mul_rat(inv_n);
            table.h[{m, n}] = v;
        }
    }
    // Symmetry is a theorem; a violation means broken arithmetic.
    for (long m = 1; m <= bound; ++m)
        for (long n = m + 1; n <= bound; ++n)
            if (!(table.at(m, n) == table.at(n, m)))
                throw internal_error("h_table: symmetry h_{m,n} = h_{n,m} violated");
    return table;
}

ReplicabilityResult is_replicable(const PuiseuxSeries& f, long bound) {
    HTable table = h_table(f, bound);
    std::map<std::pair<long, long>, std::vector<std::pair<long, long>>> buckets;
    for (long m = 1; m <= bound; ++m)
        for (long n = 1; n <= bound; ++n) {
            long g = gcd_long(m, n);
            buckets[{g, m / g * n}].emplace_back(m, n);
        }
    for (long m = 1; m <= bound; ++m)
        for (long n = 1; n <= bound; ++n) {
            long g = gcd_long(m, n);
            const CycNum& hmn = table.at(m, n);
            for (auto& [r, s] : buckets[{g, m / g * n}]) {
                if (std::make_pair(m, n) >= std::make_pair(r, s)) continue;
                if (!(hmn == table.at(r, s)))
                    return {false, std::array<long, 4>{m, n, r, s}};
            }
        }
    return {true, std::nullopt};
}

std::map<long, PuiseuxSeries> extract_replicates(const PuiseuxSeries& f, long max_index,
                                                 long coeff_bound) {
    if (max_index < 1 || coeff_bound < 1)
        throw std::invalid_argument("extract_replicates: bounds must be >= 1");
    require_normalized(f, "extract_replicates");
    unsigned long order = f.coeff_order();
    std::vector<long> bounds = level_bounds(max_index, coeff_bound);

    // c[s][t], solved level by level.
    std::vector<std::map<long, CycNum>> c(static_cast<size_t>(max_index) + 1);
    for (long t = 1; t <= bounds[1]; ++t) {
        CycNum v = f.coeff_at(Rat(t));
        if (!v.is_zero()) c[1][t] = v;
    }
    long comp_cap = coeff_bound + max_index;
    for (long s = 2; s <= max_index; ++s)
        comp_cap = std::max(comp_cap, s * bounds[static_cast<size_t>(s)] + s);
    auto fp = powers_capped(f, max_index, comp_cap);
    for (long s = 2; s <= max_index; ++s) {
        auto [coeff, comp] = eliminate(fp, s, order);
        for (long t = 1; t <= bounds[static_cast<size_t>(s)]; ++t) {
            CycNum v = comp.coeff_at(Rat(s * t));  // = s * h_{st,s}
            for (long e = 2; e <= s; ++e) {
                if (s % e != 0) continue;
                auto it = c[static_cast<size_t>(s / e)].find(e * e * t);
                if (it != c[static_cast<size_t>(s / e)].end()) {
                    CycNum sub = it->second;
                    sub.mul_int(Int(e));
                    v -= sub;
                }
            }
            if (!v.is_zero()) c[static_cast<size_t>(s)][t] = v;
        }
    }

    // Re-verify the defining identity
    //   P_{n,f}(f) = sum_{ad=n, 0<=b<d} f^{(a)}(zeta_d^b q^{a/d})
    // on all coefficients through q^{coeff_bound}.
    for (long n = 1; n <= max_index; ++n) {
        unsigned long big =
            static_cast<unsigned long>(lcm_long(static_cast<long>(order), n));
        PuiseuxSeries rhs = PuiseuxSeries::zero(big, Trunc::inf());
        for (long a = 1; a <= n; ++a) {
            if (n % a != 0) continue;
            long d = n / a;
            PuiseuxSeries ga = replicate_series(order, c[static_cast<size_t>(a)],
                                                bounds[static_cast<size_t>(a)]);
            for (long b = 0; b < d; ++b) {
                IntMat2 w{Int(a), Int(b), Int(0), Int(d)};
                rhs += series_embed(substitute_omega(ga, w), big);
            }
        }
        auto [coeff, comp] = eliminate(fp, n, order);
        if (!series_agree(comp, rhs, Rat(coeff_bound + 1)))
            throw replicability_error(
                "extract_replicates: series is not consistent with the replication "
                "identity at order " + std::to_string(n));
    }

    std::map<long, PuiseuxSeries> out;
    for (long s = 1; s <= max_index; ++s)
        out.emplace(s, replicate_series(order, c[static_cast<size_t>(s)], coeff_bound));
    return out;
}

bool is_completely_replicable(const PuiseuxSeries& f, long max_s, long max_t,
                              long coeff_bound) {
    if (max_s < 1 || max_t < 1)
        throw std::invalid_argument("is_completely_replicable: bounds must be >= 1");
    std::vector<long> inner = level_bounds(max_t, coeff_bound);
    long deep = std::max(inner[1], coeff_bound * coeff_bound);
    try {
        std::map<long, PuiseuxSeries> reps = extract_replicates(f, max_s * max_t, coeff_bound);
        std::map<long, PuiseuxSeries> reps_deep = extract_replicates(f, max_s, deep);
        for (long s = 1; s <= max_s; ++s) {
            const PuiseuxSeries& g = reps_deep.at(s);
            if (!is_replicable(g, coeff_bound).replicable) return false;
            std::map<long, PuiseuxSeries> gt = extract_replicates(g, max_t, coeff_bound);
            for (long t = 1; t <= max_t; ++t)
                if (!series_agree(gt.at(t), reps.at(s * t), Rat(coeff_bound + 1)))
                    return false;
        }
        return true;
    } catch (const replicability_error&) {
        return false;
    }
}

long replicates_truncation(long max_index, long coeff_bound) {
    std::vector<long> b = level_bounds(max_index, coeff_bound);
    long cap = coeff_bound + max_index;
    for (long s = 2; s <= max_index; ++s)
        cap = std::max(cap, s * b[static_cast<size_t>(s)] + s);
    return std::max(b[1], cap) + max_index + 4;
}

long complete_replicability_truncation(long max_s, long max_t, long coeff_bound) {
    std::vector<long> inner = level_bounds(max_t, coeff_bound);
    long deep = std::max(inner[1], coeff_bound * coeff_bound);
    return std::max(replicates_truncation(max_s * max_t, coeff_bound),
                    replicates_truncation(max_s, deep));
}

std::optional<long> replicate_period(const PuiseuxSeries& f, long k_max, long coeff_bound) {
    if (k_max < 1) throw std::invalid_argument("replicate_period: k_max must be >= 1");
    std::map<long, PuiseuxSeries> reps = extract_replicates(f, 2 * k_max, coeff_bound);
    for (long k = 1; k <= k_max; ++k) {
        bool ok = true;
        for (long s = 1; s <= k_max && ok; ++s) ok = reps.at(s + k) == reps.at(s);
        if (ok) return k;
    }
    return std::nullopt;
}

void write_htable(std::ostream& os, const HTable& t) {
    os << "modeq-htable 1\n";
    os << "bound " << t.bound << "\n";
    os << "cyclotomic_order " << t.coeff_order << "\n";
    os << "entries " << t.h.size() << "\n";
    for (auto& [mn, v] : t.h) {
        os << "h " << mn.first << " " << mn.second;
        for (auto& s : v.coord_strings()) os << " " << s;
        os << "\n";
    }
    os << "end\n";
}

HTable read_htable(std::istream& is) {
    auto bad = [](const std::string& what) -> void {
        throw std::invalid_argument("htable file: " + what);
    };
    std::string word;
    long version = 0;
    if (!(is >> word >> version) || word != "modeq-htable" || version != 1)
        bad("missing 'modeq-htable 1' header");
    HTable t;
    size_t entries = 0;
    if (!(is >> word >> t.bound) || word != "bound") bad("bad bound");
    if (!(is >> word >> t.coeff_order) || word != "cyclotomic_order" || t.coeff_order == 0)
        bad("bad cyclotomic_order");
    if (!(is >> word >> entries) || word != "entries") bad("bad entry count");
    unsigned long deg = euler_phi(t.coeff_order);
    for (size_t i = 0; i < entries; ++i) {
        long m, n;
        if (!(is >> word >> m >> n) || word != "h") bad("bad entry record");
        std::vector<Rat> coords(deg);
        for (unsigned long k = 0; k < deg; ++k) {
            std::string s;
            if (!(is >> s)) bad("bad coordinate");
            coords[k] = parse_rat(s);
        }
        t.h[{m, n}] = CycNum(t.coeff_order, coords);
    }
    if (!(is >> word) || word != "end") bad("missing 'end'");
    return t;
}

void save_htable(const std::string& path, const HTable& t) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
        write_htable(os, t);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace modeq
