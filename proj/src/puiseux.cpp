#include "modeq/puiseux.hpp"

#include <fstream>
#include <sstream>
#include <thread>

namespace modeq {

std::string Trunc::to_string() const {
    if (!finite) return "inf";
    return bound.get_num().get_str() + "/" + bound.get_den().get_str();
}

std::string IntMat2::to_string() const {
    return a.get_str() + "," + b.get_str() + "," + c.get_str() + "," + d.get_str();
}

IntMat2 IntMat2::parse(const std::string& s) {
    std::vector<Int> v;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
        try {
            v.emplace_back(cur);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("IntMat2: malformed entry '" + cur + "'");
        }
    }
    if (v.size() != 4) throw std::invalid_argument("IntMat2: expected p,q,r,s");
    return {v[0], v[1], v[2], v[3]};
}

PuiseuxSeries PuiseuxSeries::zero(unsigned long coeff_order, Trunc t) {
    PuiseuxSeries f;
    f.coeff_order_ = coeff_order;
    f.trunc_ = t;
    return f;
}

PuiseuxSeries PuiseuxSeries::monomial(const CycNum& coeff, long num, long den, Trunc t) {
    if (den <= 0) throw std::invalid_argument("PuiseuxSeries: denominator must be positive");
    PuiseuxSeries f;
    f.coeff_order_ = coeff.order();
    f.ram_ = den;
    f.trunc_ = t;
    if (!coeff.is_zero() && t.covers(make_rat(Int(num), Int(den)))) f.terms_[num] = coeff;
    f.canonicalize();
    return f;
}

std::optional<Rat> PuiseuxSeries::order() const {
    if (terms_.empty()) return std::nullopt;
    return make_rat(Int(terms_.begin()->first), Int(ram_));
}

CycNum PuiseuxSeries::coeff_at(const Rat& e) const {
    if (!trunc_.covers(e))
        throw truncation_error("coefficient at exponent " + e.get_str() +
                               " is beyond the truncation bound " + trunc_.to_string());
    Rat scaled = e * ram_;
    if (scaled.get_den() != 1) return CycNum::zero(coeff_order_);
    if (!scaled.get_num().fits_slong_p()) return CycNum::zero(coeff_order_);
    auto it = terms_.find(scaled.get_num().get_si());
    if (it == terms_.end()) return CycNum::zero(coeff_order_);
    return it->second;
}

void PuiseuxSeries::set_term(const Rat& e, const CycNum& c) {
    if (c.order() != coeff_order_)
        throw std::invalid_argument("PuiseuxSeries::set_term: coefficient order mismatch");
    if (!trunc_.covers(e)) return;
    long l = lcm_long(ram_, static_cast<long>(e.get_den().get_si()));
    if (l != ram_) {
        long f = l / ram_;
        std::map<long, CycNum> scaled;
        for (auto& [k, v] : terms_) scaled.emplace(k * f, v);
        terms_ = std::move(scaled);
        ram_ = l;
    }
    Rat scaled = e * ram_;
    long key = scaled.get_num().get_si();
    if (c.is_zero())
        terms_.erase(key);
    else
        terms_[key] = c;
    canonicalize();
}

void PuiseuxSeries::canonicalize() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second.is_zero())
            it = terms_.erase(it);
        else
            ++it;
    }
    long g = ram_;
    for (auto& [k, v] : terms_) {
        g = gcd_long(g, k);
        if (g == 1) break;
    }
    if (g > 1) {
        std::map<long, CycNum> out;
        for (auto& [k, v] : terms_) out.emplace(k / g, std::move(v));
        terms_ = std::move(out);
        ram_ /= g;
    }
}

void PuiseuxSeries::align(const PuiseuxSeries& o, long& new_ram, long& fa, long& fb) const {
    if (coeff_order_ != o.coeff_order_)
        throw std::invalid_argument("PuiseuxSeries: mixed coefficient orders (embed first)");
    new_ram = lcm_long(ram_, o.ram_);
    fa = new_ram / ram_;
    fb = new_ram / o.ram_;
}

PuiseuxSeries& PuiseuxSeries::operator+=(const PuiseuxSeries& o) {
    long new_ram, fa, fb;
    align(o, new_ram, fa, fb);
    std::map<long, CycNum> out;
    Trunc t = min(trunc_, o.trunc_);
    for (auto& [k, v] : terms_) out.emplace(k * fa, v);
    for (auto& [k, v] : o.terms_) {
        auto [it, fresh] = out.try_emplace(k * fb, v);
        if (!fresh) it->second += v;
    }
    ram_ = new_ram;
    trunc_ = t;
    terms_ = std::move(out);
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (!t.covers(make_rat(Int(it->first), Int(ram_))))
            it = terms_.erase(it);
        else
            ++it;
    }
    canonicalize();
    return *this;
}

PuiseuxSeries& PuiseuxSeries::operator-=(const PuiseuxSeries& o) {
    return *this += -o;
}

PuiseuxSeries PuiseuxSeries::operator-() const {
    PuiseuxSeries r = *this;
    for (auto& [k, v] : r.terms_) v = -v;
    return r;
}

PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    long new_ram, fa, fb;
    a.align(b, new_ram, fa, fb);

    // Sound truncation: exponents below min(Ta + ord(b), Tb + ord(a)) are
    // fully determined.  A factor with no stored terms contributes its own
    // truncation bound as the order lower bound.
    auto ord_lb = [](const PuiseuxSeries& f) -> std::optional<Rat> {
        if (auto o = f.order()) return o;
        if (f.trunc().finite) return f.trunc().bound;
        return std::nullopt;  // exact zero
    };
    Trunc t = Trunc::inf();
    std::optional<Rat> oa = ord_lb(a), ob = ord_lb(b);
    if (a.trunc().finite) {
        if (ob)
            t = min(t, Trunc::at(a.trunc().bound + *ob));
        // exact-zero b: product is exactly zero, keep t infinite
    }
    if (b.trunc().finite) {
        if (oa) t = min(t, Trunc::at(b.trunc().bound + *oa));
    }

    PuiseuxSeries r;
    r.coeff_order_ = a.coeff_order();
    r.ram_ = new_ram;
    r.trunc_ = t;
    if (a.terms().empty() || b.terms().empty()) return r;

    std::vector<std::pair<long, const CycNum*>> av, bv;
    av.reserve(a.terms().size());
    bv.reserve(b.terms().size());
    for (auto& [k, v] : a.terms()) av.emplace_back(k * fa, &v);
    for (auto& [k, v] : b.terms()) bv.emplace_back(k * fb, &v);

    // keys are known iff k/new_ram < t.bound, i.e. k <= key_max
    bool has_kb = t.finite;
    long key_max = 0;
    if (has_kb) {
        Rat kb = t.bound * new_ram;
        Int km = int_fdiv(kb.get_num() - 1, kb.get_den());  // ceil(kb) - 1
        if (!km.fits_slong_p())
            throw std::invalid_argument("PuiseuxSeries: truncation bound out of range");
        key_max = km.get_si();
    }

    // Dense integer fast path: rational integer coefficients convolve as raw
    // mpz values, which is where nearly all the time goes for the built-in
    // series and their powers.
    if (a.coeff_order() == 1 && b.coeff_order() == 1) {
        bool integral = true;
        for (auto& [k, v] : a.terms())
            if (!v.is_integral()) {
                integral = false;
                break;
            }
        if (integral)
            for (auto& [k, v] : b.terms())
                if (!v.is_integral()) {
                    integral = false;
                    break;
                }
        long lo = av.front().first + bv.front().first;
        long hi = av.back().first + bv.back().first;
        if (has_kb) hi = std::min(hi, key_max);
        long span = hi - lo + 1;
        if (integral && span > 0 &&
            span <= 4 * static_cast<long>(av.size() + bv.size()) + 4096) {
            auto convolve = [&](size_t a_begin, size_t a_end, std::vector<Int>& dense) {
                for (size_t ia = a_begin; ia < a_end; ++ia) {
                    auto& [ka, ca] = av[ia];
                    mpz_srcptr x = ca->coord_num(0);
                    if (mpz_sgn(x) == 0) continue;
                    for (auto& [kb, cb] : bv) {
                        long k = ka + kb;
                        if (k > hi) break;
                        mpz_addmul(dense[static_cast<size_t>(k - lo)].get_mpz_t(), x,
                                   cb->coord_num(0));
                    }
                }
            };
            std::vector<Int> dense(static_cast<size_t>(span), Int(0));
            size_t pairs = av.size() * bv.size();
            unsigned hw = std::thread::hardware_concurrency();
            if (pairs >= (1u << 21) && hw >= 2) {
                std::vector<Int> dense2(static_cast<size_t>(span), Int(0));
                size_t mid = av.size() / 2;
                std::thread worker([&] { convolve(mid, av.size(), dense2); });
                convolve(0, mid, dense);
                worker.join();
                for (size_t i = 0; i < dense.size(); ++i) dense[i] += dense2[i];
            } else {
                convolve(0, av.size(), dense);
            }
            for (long k = lo; k <= hi; ++k) {
                Int& c = dense[static_cast<size_t>(k - lo)];
                if (c != 0) r.terms_.emplace_hint(r.terms_.end(), k, CycNum(Rat(c)));
            }
            r.canonicalize();
            return r;
        }
    }

    std::map<long, CycNum> out;
    for (auto& [ka, ca] : av) {
        for (auto& [kb, cb] : bv) {
            long k = ka + kb;
            if (has_kb && k > key_max) break;  // bv sorted ascending
            CycNum prod = *ca * *cb;
            if (prod.is_zero()) continue;
            auto it = out.find(k);
            if (it == out.end())
                out.emplace(k, std::move(prod));
            else
                it->second += prod;
        }
    }
    r.terms_ = std::move(out);
    r.canonicalize();
    return r;
}

bool PuiseuxSeries::operator==(const PuiseuxSeries& o) const {
    return coeff_order_ == o.coeff_order_ && ram_ == o.ram_ && trunc_ == o.trunc_ &&
           terms_ == o.terms_;
}

PuiseuxSeries scale(const CycNum& c, PuiseuxSeries f) {
    if (c.order() != f.coeff_order_)
        throw std::invalid_argument("scale: coefficient order mismatch");
    if (c.is_zero()) {
        f.terms_.clear();
        return f;
    }
    for (auto& [k, v] : f.terms_) v *= c;
    f.canonicalize();
    return f;
}

PuiseuxSeries ps_pow(const PuiseuxSeries& f, unsigned long k) {
    PuiseuxSeries r = PuiseuxSeries::monomial(CycNum::one(f.coeff_order()), 0);
    if (k == 0) return r;
    PuiseuxSeries base = f;
    unsigned long e = k;
    for (;;) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e == 0) break;
        base = base * base;
    }
    return r;
}

PuiseuxSeries truncate_at(PuiseuxSeries f, const Rat& bound) {
    Trunc t = min(f.trunc_, Trunc::at(bound));
    f.trunc_ = t;
    for (auto it = f.terms_.begin(); it != f.terms_.end();) {
        if (!t.covers(make_rat(Int(it->first), Int(f.ram_))))
            it = f.terms_.erase(it);
        else
            ++it;
    }
    f.canonicalize();
    return f;
}

PuiseuxSeries series_embed(const PuiseuxSeries& f, unsigned long target) {
    if (target == f.coeff_order()) return f;
    PuiseuxSeries r = f;
    r.coeff_order_ = target;
    for (auto& [k, v] : r.terms_) v = v.embed(target);
    return r;
}

PuiseuxSeries substitute_omega(const PuiseuxSeries& f, const IntMat2& w) {
    if (!w.is_omega_shape())
        throw std::invalid_argument("substitute_omega: matrix is not of Omega shape");
    if (!w.a.fits_slong_p() || !w.d.fits_slong_p())
        throw std::invalid_argument("substitute_omega: entries too large");
    long a = w.a.get_si(), d = w.d.get_si(), b = w.b.get_si();
    long e = f.ramification();
    long de = d * e;
    unsigned long target = static_cast<unsigned long>(
        lcm_long(static_cast<long>(f.coeff_order()), de));

    PuiseuxSeries r;
    r.coeff_order_ = target;
    r.ram_ = de;
    r.trunc_ = f.trunc().finite
                   ? Trunc::at(f.trunc().bound * make_rat(Int(a), Int(d)))
                   : Trunc::inf();
    long root_stride = static_cast<long>(target) / de;
    for (auto& [k, v] : f.terms()) {
        CycNum c = v.embed(target);
        c.mul_root(root_stride * (k * b % de));
        if (!c.is_zero()) r.terms_.emplace(k * a, std::move(c));
    }
    r.canonicalize();
    return r;
}

PuiseuxSeries galois_series(const PuiseuxSeries& f, long n) {
    long m = static_cast<long>(f.coeff_order());
    if (gcd_long(n, m) != 1)
        throw std::invalid_argument("galois_series: exponent not coprime to coefficient order");
    PuiseuxSeries r = f;
    for (auto& [k, v] : r.terms_) v = v.galois(n);
    r.canonicalize();
    return r;
}

bool is_normalized_hauptmodul(const PuiseuxSeries& f) {
    if (f.ramification() != 1) return false;
    auto o = f.order();
    if (!o || *o != -1) return false;
    if (!(f.coeff_at(Rat(-1)) == CycNum::one(f.coeff_order()))) return false;
    if (f.trunc().finite && f.trunc().bound <= 0) return false;
    if (!f.coeff_at(Rat(0)).is_zero()) return false;
    return true;
}

bool series_agree(const PuiseuxSeries& a, const PuiseuxSeries& b, const Rat& upto) {
    if (a.trunc().finite && a.trunc().bound < upto)
        throw truncation_error("series_agree: first series not known up to the bound");
    if (b.trunc().finite && b.trunc().bound < upto)
        throw truncation_error("series_agree: second series not known up to the bound");
    long l = lcm_long(a.ramification(), b.ramification());
    long fa = l / a.ramification(), fb = l / b.ramification();
    std::map<long, std::pair<CycNum, CycNum>> merged;
    unsigned long big = static_cast<unsigned long>(lcm_long(
        static_cast<long>(a.coeff_order()), static_cast<long>(b.coeff_order())));
    for (auto& [k, v] : a.terms()) {
        Rat e = make_rat(Int(k), Int(a.ramification()));
        if (e >= upto) continue;
        merged[k * fa].first = v.embed(big);
    }
    for (auto& [k, v] : b.terms()) {
        Rat e = make_rat(Int(k), Int(b.ramification()));
        if (e >= upto) continue;
        merged[k * fb].second = v.embed(big);
    }
    for (auto& [k, pair] : merged) {
        CycNum lhs = pair.first.order() == big ? pair.first : pair.first.embed(big);
        CycNum rhs = pair.second.order() == big ? pair.second : pair.second.embed(big);
        if (!(lhs == rhs)) return false;
    }
    return true;
}

std::string PuiseuxSeries::to_string(const std::string& var) const {
    std::ostringstream os;
    bool first = true;
    for (auto& [k, v] : terms_) {
        std::string c = v.to_string();
        bool neg = c.size() && c[0] == '-' && v.is_rational();
        if (first) {
            first = false;
            if (neg) {
                os << "-";
                c = c.substr(1);
            }
        } else {
            if (neg) {
                os << " - ";
                c = c.substr(1);
            } else {
                os << " + ";
            }
        }
        bool needs_paren = !v.is_rational();
        bool unit = (c == "1") && k != 0;
        if (!unit) {
            if (needs_paren) os << "(" << c << ")";
            else os << c;
            if (k != 0) os << "*";
        }
        if (k != 0) {
            os << var;
            if (k != ram_ || ram_ != 1) {
                if (ram_ == 1)
                    os << "^" << k;
                else
                    os << "^(" << k << "/" << ram_ << ")";
            }
        }
    }
    if (first) os << "0";
    os << " + O(" << var << "^" << trunc_.to_string() << ")";
    return os.str();
}

void write_series(std::ostream& os, const PuiseuxSeries& f) {
    os << "modeq-series 1\n";
    os << "cyclotomic_order " << f.coeff_order() << "\n";
    os << "ramification " << f.ramification() << "\n";
    os << "truncation " << f.trunc().to_string() << "\n";
    os << "terms " << f.terms().size() << "\n";
    for (auto& [k, v] : f.terms()) {
        os << "term " << k;
        for (auto& s : v.coord_strings()) os << " " << s;
        os << "\n";
    }
    os << "end\n";
}

namespace {

[[noreturn]] void bad_format(const std::string& what) {
    throw std::invalid_argument("series file: " + what);
}

}  // namespace

PuiseuxSeries read_series(std::istream& is) {
    std::string word;
    long version;
    if (!(is >> word >> version) || word != "modeq-series" || version != 1)
        bad_format("missing 'modeq-series 1' header");
    unsigned long order = 0;
    long ram = 0;
    std::string trunc_str;
    size_t nterms = 0;
    if (!(is >> word >> order) || word != "cyclotomic_order" || order == 0)
        bad_format("bad cyclotomic_order");
    if (!(is >> word >> ram) || word != "ramification" || ram <= 0)
        bad_format("bad ramification");
    if (!(is >> word >> trunc_str) || word != "truncation") bad_format("bad truncation");
    if (!(is >> word >> nterms) || word != "terms") bad_format("bad term count");

    Trunc t = trunc_str == "inf" ? Trunc::inf() : Trunc::at(parse_rat(trunc_str));
    PuiseuxSeries f = PuiseuxSeries::zero(order, t);
    unsigned long deg = euler_phi(order);
    for (size_t i = 0; i < nterms; ++i) {
        long k;
        if (!(is >> word >> k) || word != "term") bad_format("bad term record");
        std::vector<Rat> coords(deg);
        for (unsigned long j = 0; j < deg; ++j) {
            std::string s;
            if (!(is >> s)) bad_format("bad coordinate");
            coords[j] = parse_rat(s);
        }
        f.set_term(make_rat(Int(k), Int(ram)), CycNum(order, coords));
    }
    if (!(is >> word) || word != "end") bad_format("missing 'end'");
    return f;
}

void save_series(const std::string& path, const PuiseuxSeries& f) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
        write_series(os, f);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

PuiseuxSeries load_series(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_series(is);
}

}  // namespace modeq
