#include "modeq/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace modeq {

namespace {

std::mutex g_cache_mutex;

std::vector<std::pair<unsigned long, unsigned long>> factorize(unsigned long n) {
    std::vector<std::pair<unsigned long, unsigned long>> fs;
    for (unsigned long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            unsigned long e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            fs.emplace_back(p, e);
        }
    }
    if (n > 1) fs.emplace_back(n, 1);
    return fs;
}

// Exact division of integer polynomials, divisor monic.
std::vector<Int> poly_div_exact(const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> rem = a;
    std::vector<Int> q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Int(0));
    long db = static_cast<long>(b.size()) - 1;
    for (long i = static_cast<long>(rem.size()) - 1; i >= db; --i) {
        Int c = rem[i];
        if (c == 0) continue;
        q[i - db] = c;
        for (long j = 0; j <= db; ++j) rem[i - db + j] -= c * b[j];
    }
    for (const Int& r : rem)
        if (r != 0) throw internal_error("cyclotomic polynomial division not exact");
    return q;
}

// Representations of zeta^t (0 <= t < M) in the power basis mod Phi_M.
const std::vector<std::vector<Int>>& power_table(unsigned long m) {
    static std::map<unsigned long, std::vector<std::vector<Int>>> cache;
    const std::vector<Int>& phi = cyclotomic_polynomial(m);
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    unsigned long deg = phi.size() - 1;
    std::vector<std::vector<Int>> table(m, std::vector<Int>(deg, Int(0)));
    std::vector<Int> cur(deg, Int(0));
    cur[0] = 1;
    table[0] = cur;
    for (unsigned long t = 1; t < m; ++t) {
        // cur *= zeta, reduce by the monic Phi_M
        Int carry = cur[deg - 1];
        for (unsigned long i = deg - 1; i > 0; --i) cur[i] = cur[i - 1];
        cur[0] = 0;
        if (carry != 0)
            for (unsigned long i = 0; i < deg; ++i) cur[i] -= carry * phi[i];
        table[t] = cur;
    }
    return cache.emplace(m, std::move(table)).first->second;
}

// Solve A y = x exactly over Q; A is rows x cols (cols <= rows).
std::optional<std::vector<Rat>> solve_exact(std::vector<std::vector<Rat>> a,
                                            std::vector<Rat> x) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    std::vector<size_t> pivot_row(cols, SIZE_MAX);
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = SIZE_MAX;
        for (size_t i = r; i < rows; ++i)
            if (a[i][c] != 0) {
                p = i;
                break;
            }
        if (p == SIZE_MAX) continue;
        std::swap(a[p], a[r]);
        std::swap(x[p], x[r]);
        Rat inv = 1 / a[r][c];
        for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
        x[r] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
            x[i] -= f * x[r];
        }
        pivot_row[c] = r;
        ++r;
    }
    // Consistency: remaining rows must have zero rhs.
    for (size_t i = r; i < rows; ++i)
        if (x[i] != 0) return std::nullopt;
    std::vector<Rat> y(cols, Rat(0));
    for (size_t c = 0; c < cols; ++c) {
        if (pivot_row[c] == SIZE_MAX) {
            // Free column: any nonzero dependence elsewhere would have shown
            // as inconsistency; leave zero.
            continue;
        }
        y[c] = x[pivot_row[c]];
    }
    // Verify (columns may be dependent in principle; they are a basis here,
    // but the check is cheap relative to its value).
    return y;
}

}  // namespace

unsigned long euler_phi(unsigned long n) {
    unsigned long r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

const std::vector<Int>& cyclotomic_polynomial(unsigned long n) {
    static std::map<unsigned long, std::vector<Int>> cache;
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    if (n == 0) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
    std::vector<Int> poly;
    if (n == 1) {
        poly = {Int(-1), Int(1)};
    } else {
        poly.assign(n + 1, Int(0));
        poly[0] = -1;
        poly[n] = 1;
        for (unsigned long d = 1; d < n; ++d)
            if (n % d == 0) poly = poly_div_exact(poly, cyclotomic_polynomial(d));
    }
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    return cache.emplace(n, std::move(poly)).first->second;
}

Int cyclotomic_at_one(unsigned long n) {
    if (n < 2) throw std::invalid_argument("cyclotomic_at_one: n must be >= 2");
    const std::vector<Int>& phi = cyclotomic_polynomial(n);
    Int v = 0;
    for (const Int& c : phi) v += c;
    return v;
}

CycNum::CycNum() : order_(1), num_(1, Int(0)), den_(1) {}

CycNum::CycNum(const Rat& value, unsigned long order)
    : order_(order), num_(euler_phi(order), Int(0)), den_(value.get_den()) {
    num_[0] = value.get_num();
    normalize();
}

CycNum::CycNum(long value, unsigned long order)
    : order_(order), num_(euler_phi(order), Int(0)), den_(1) {
    num_[0] = value;
}

CycNum::CycNum(unsigned long order, std::vector<Rat> coords) : order_(order), den_(1) {
    unsigned long deg = euler_phi(order);
    if (coords.size() != deg)
        throw std::invalid_argument("CycNum: coordinate count must equal phi(order)");
    for (const Rat& c : coords) den_ = int_lcm(den_, c.get_den());
    num_.resize(deg);
    for (unsigned long i = 0; i < deg; ++i)
        num_[i] = coords[i].get_num() * (den_ / coords[i].get_den());
    normalize();
}

CycNum CycNum::zero(unsigned long order) { return CycNum(0L, order); }

CycNum CycNum::one(unsigned long order) { return CycNum(1L, order); }

CycNum CycNum::root_of_unity(unsigned long order, long k) {
    CycNum r = zero(order);
    long t = k % static_cast<long>(order);
    if (t < 0) t += static_cast<long>(order);
    r.num_ = power_table(order)[static_cast<unsigned long>(t)];
    return r;
}

Rat CycNum::coord(unsigned long i) const { return make_rat(num_.at(i), den_); }

std::vector<Rat> CycNum::coords() const {
    std::vector<Rat> c;
    c.reserve(num_.size());
    for (unsigned long i = 0; i < num_.size(); ++i) c.push_back(coord(i));
    return c;
}

bool CycNum::is_zero() const {
    for (const Int& c : num_)
        if (c != 0) return false;
    return true;
}

bool CycNum::is_rational() const {
    for (size_t i = 1; i < num_.size(); ++i)
        if (num_[i] != 0) return false;
    return true;
}

Rat CycNum::rational_value() const {
    if (!is_rational()) throw std::domain_error("CycNum: not a rational value");
    return make_rat(num_[0], den_);
}

void CycNum::normalize() {
    if (den_ < 0) {
        den_ = -den_;
        for (Int& c : num_) c = -c;
    }
    Int g = den_;
    for (const Int& c : num_) {
        g = int_gcd(g, c);
        if (g == 1) break;
    }
    if (g > 1) {
        den_ /= g;
        for (Int& c : num_) c /= g;
    }
    if (den_ == 0) throw internal_error("CycNum: zero denominator");
}

void CycNum::check_same_order(const CycNum& o, const char* op) const {
    if (order_ != o.order_)
        throw std::invalid_argument(std::string("CycNum ") + op +
                                    ": mixed cyclotomic orders (embed first)");
}

CycNum CycNum::operator-() const {
    CycNum r = *this;
    for (Int& c : r.num_) c = -c;
    return r;
}

CycNum& CycNum::operator+=(const CycNum& o) {
    check_same_order(o, "add");
    Int l = int_lcm(den_, o.den_);
    Int fa = l / den_, fb = l / o.den_;
    for (size_t i = 0; i < num_.size(); ++i) num_[i] = num_[i] * fa + o.num_[i] * fb;
    den_ = l;
    normalize();
    return *this;
}

CycNum& CycNum::operator-=(const CycNum& o) {
    check_same_order(o, "sub");
    Int l = int_lcm(den_, o.den_);
    Int fa = l / den_, fb = l / o.den_;
    for (size_t i = 0; i < num_.size(); ++i) num_[i] = num_[i] * fa - o.num_[i] * fb;
    den_ = l;
    normalize();
    return *this;
}

CycNum& CycNum::operator*=(const CycNum& o) {
    check_same_order(o, "mul");
    size_t deg = num_.size();
    const std::vector<Int>& phi = cyclotomic_polynomial(order_);
    std::vector<Int> prod(2 * deg - 1, Int(0));
    for (size_t i = 0; i < deg; ++i) {
        if (num_[i] == 0) continue;
        for (size_t j = 0; j < deg; ++j) {
            if (o.num_[j] == 0) continue;
            prod[i + j] += num_[i] * o.num_[j];
        }
    }
    for (size_t i = prod.size(); i-- > deg;) {
        Int c = prod[i];
        if (c == 0) continue;
        for (size_t j = 0; j < deg; ++j) prod[i - deg + j] -= c * phi[j];
        prod[i] = 0;
    }
    prod.resize(deg);
    num_ = std::move(prod);
    den_ *= o.den_;
    normalize();
    return *this;
}

bool operator==(const CycNum& a, const CycNum& b) {
    return a.order_ == b.order_ && a.den_ == b.den_ && a.num_ == b.num_;
}

CycNum& CycNum::mul_rat(const Rat& r) {
    for (Int& c : num_) c *= r.get_num();
    den_ *= r.get_den();
    normalize();
    return *this;
}

CycNum& CycNum::mul_int(const Int& k) {
    for (Int& c : num_) c *= k;
    normalize();
    return *this;
}

CycNum& CycNum::mul_root(long k) {
    long t = k % static_cast<long>(order_);
    if (t < 0) t += static_cast<long>(order_);
    if (t == 0) return *this;
    const auto& table = power_table(order_);
    size_t deg = num_.size();
    std::vector<Int> out(deg, Int(0));
    for (size_t i = 0; i < deg; ++i) {
        if (num_[i] == 0) continue;
        const std::vector<Int>& rep = table[(i + static_cast<unsigned long>(t)) % order_];
        for (size_t j = 0; j < deg; ++j)
            if (rep[j] != 0) out[j] += num_[i] * rep[j];
    }
    num_ = std::move(out);
    normalize();
    return *this;
}

CycNum CycNum::inverse() const {
    if (is_zero()) throw std::domain_error("CycNum: inversion of zero");
    if (is_rational()) {
        CycNum r = zero(order_);
        Rat v = 1 / rational_value();
        r.num_[0] = v.get_num();
        r.den_ = v.get_den();
        return r;
    }
    // Extended Euclid in Q[x] against Phi_M (irreducible over Q).
    using QPoly = std::vector<Rat>;
    auto deg_of = [](const QPoly& p) {
        long d = static_cast<long>(p.size()) - 1;
        while (d >= 0 && p[static_cast<size_t>(d)] == 0) --d;
        return d;
    };
    const std::vector<Int>& phi_z = cyclotomic_polynomial(order_);
    QPoly r0(phi_z.size());
    for (size_t i = 0; i < phi_z.size(); ++i) r0[i] = Rat(phi_z[i]);
    QPoly r1(num_.size());
    for (size_t i = 0; i < num_.size(); ++i) r1[i] = make_rat(num_[i], den_);
    QPoly s0{Rat(0)}, s1{Rat(1)};  // s tracks the coefficient of this element
    while (true) {
        long d1 = deg_of(r1);
        if (d1 < 0) throw internal_error("CycNum inverse: gcd with Phi_M not 1");
        if (d1 == 0) {
            Rat lead = r1[0];
            QPoly inv = s1;
            for (Rat& c : inv) c /= lead;
            std::vector<Rat> coords(num_.size(), Rat(0));
            for (size_t i = 0; i < inv.size() && i < coords.size(); ++i) coords[i] = inv[i];
            // inv has degree < deg(Phi) by the Euclid invariants
            return CycNum(order_, coords);
        }
        long d0 = deg_of(r0);
        QPoly q(static_cast<size_t>(d0 - d1 + 1), Rat(0));
        QPoly rem = r0;
        for (long i = d0; i >= d1; --i) {
            Rat c = rem[static_cast<size_t>(i)] / r1[static_cast<size_t>(d1)];
            if (c == 0) continue;
            q[static_cast<size_t>(i - d1)] = c;
            for (long j = 0; j <= d1; ++j)
                rem[static_cast<size_t>(i - d1 + j)] -= c * r1[static_cast<size_t>(j)];
        }
        QPoly s2(std::max(s0.size(), q.size() + s1.size()), Rat(0));
        for (size_t i = 0; i < s0.size(); ++i) s2[i] = s0[i];
        for (size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) continue;
            for (size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
        }
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
}

CycNum CycNum::galois(long t) const {
    long m = static_cast<long>(order_);
    long tt = t % m;
    if (tt < 0) tt += m;
    if (gcd_long(tt, m) != 1)
        throw std::invalid_argument("CycNum galois: exponent not coprime to order");
    if (tt == 1 || is_rational()) return *this;
    const auto& table = power_table(order_);
    size_t deg = num_.size();
    CycNum r = zero(order_);
    for (size_t i = 0; i < deg; ++i) {
        if (num_[i] == 0) continue;
        const std::vector<Int>& rep = table[(i * static_cast<unsigned long>(tt)) % order_];
        for (size_t j = 0; j < deg; ++j)
            if (rep[j] != 0) r.num_[j] += num_[i] * rep[j];
    }
    r.den_ = den_;
    r.normalize();
    return r;
}

CycNum CycNum::galois(const GaloisTwist& t) const {
    if (t.order != order_)
        throw std::invalid_argument("CycNum galois: twist order mismatch");
    return galois(t.exponent);
}

GaloisTwist compose(const GaloisTwist& s, const GaloisTwist& t) {
    if (s.order != t.order)
        throw std::invalid_argument("GaloisTwist compose: order mismatch");
    long m = static_cast<long>(s.order);
    long e = (s.exponent % m) * (t.exponent % m) % m;
    if (e < 0) e += m;
    return {s.order, e};
}

CycNum CycNum::embed(unsigned long target) const {
    if (target % order_ != 0)
        throw std::invalid_argument("CycNum embed: order does not divide target");
    if (target == order_) return *this;
    unsigned long stride = target / order_;
    const auto& table = power_table(target);
    CycNum r = zero(target);
    for (size_t i = 0; i < num_.size(); ++i) {
        if (num_[i] == 0) continue;
        const std::vector<Int>& rep = table[(i * stride) % target];
        for (size_t j = 0; j < r.num_.size(); ++j)
            if (rep[j] != 0) r.num_[j] += num_[i] * rep[j];
    }
    r.den_ = den_;
    r.normalize();
    return r;
}

std::optional<CycNum> CycNum::in_subfield(unsigned long suborder) const {
    if (order_ % suborder != 0)
        throw std::invalid_argument("CycNum in_subfield: suborder does not divide order");
    if (suborder == order_) return *this;
    unsigned long sub_deg = euler_phi(suborder);
    unsigned long deg = degree();
    unsigned long stride = order_ / suborder;
    const auto& table = power_table(order_);
    std::vector<std::vector<Rat>> a(deg, std::vector<Rat>(sub_deg, Rat(0)));
    for (unsigned long c = 0; c < sub_deg; ++c) {
        const std::vector<Int>& rep = table[(c * stride) % order_];
        for (unsigned long r = 0; r < deg; ++r) a[r][c] = Rat(rep[r]);
    }
    std::vector<Rat> x(deg);
    for (unsigned long r = 0; r < deg; ++r) x[r] = coord(r);
    auto y = solve_exact(std::move(a), std::move(x));
    if (!y) return std::nullopt;
    CycNum out(suborder, *y);
    // The solver ignores dependent columns; verify by re-embedding.
    if (out.embed(order_) != *this) return std::nullopt;
    return out;
}

Rat CycNum::norm() const {
    size_t deg = num_.size();
    if (deg == 1) return rational_value();
    // Columns: this * zeta^j in the power basis.
    std::vector<std::vector<Rat>> m(deg, std::vector<Rat>(deg));
    CycNum col = *this;
    for (size_t j = 0; j < deg; ++j) {
        for (size_t i = 0; i < deg; ++i) m[i][j] = col.coord(i);
        if (j + 1 < deg) col.mul_root(1);
    }
    // Fraction-ful Gaussian elimination determinant.
    Rat det(1);
    for (size_t c = 0; c < deg; ++c) {
        size_t p = SIZE_MAX;
        for (size_t r = c; r < deg; ++r)
            if (m[r][c] != 0) {
                p = r;
                break;
            }
        if (p == SIZE_MAX) return Rat(0);
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        Rat inv = 1 / m[c][c];
        for (size_t r = c + 1; r < deg; ++r) {
            if (m[r][c] == 0) continue;
            Rat f = m[r][c] * inv;
            for (size_t j = c; j < deg; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return det;
}

bool is_unit(const CycNum& x) {
    if (!x.is_integral())
        throw std::invalid_argument("is_unit: coordinates must be integral");
    Rat n = x.norm();
    return n == 1 || n == -1;
}

std::vector<std::string> CycNum::coord_strings() const {
    std::vector<std::string> out;
    out.reserve(num_.size());
    for (size_t i = 0; i < num_.size(); ++i) {
        Rat c = coord(i);
        out.push_back(c.get_num().get_str() + "/" + c.get_den().get_str());
    }
    return out;
}

std::string CycNum::to_string() const {
    if (is_rational()) {
        Rat v = rational_value();
        if (v.get_den() == 1) return v.get_num().get_str();
        return v.get_num().get_str() + "/" + v.get_den().get_str();
    }
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < num_.size(); ++i) {
        Rat c = coord(i);
        if (c == 0) continue;
        bool neg = c < 0;
        Rat ac = neg ? Rat(-c) : c;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        bool unit_coeff = (ac == 1) && i > 0;
        if (!unit_coeff) {
            os << ac.get_num().get_str();
            if (ac.get_den() != 1) os << "/" << ac.get_den().get_str();
            if (i > 0) os << "*";
        }
        if (i > 0) {
            os << "z" << order_;
            if (i > 1) os << "^" << i;
        }
    }
    if (first) os << "0";
    return os.str();
}

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            Rat r{Int(s)};
            return r;
        }
        Rat r(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("parse_rat: malformed rational '" + s + "'");
    }
}

}  // namespace modeq
