#include "modeq/cmpoints.hpp"

#include <sstream>

namespace modeq {

void QuadraticIrrational::validate() const {
    if (a <= 0) throw std::invalid_argument("quadratic irrational: leading coefficient must be positive");
    if (disc() >= 0) throw std::invalid_argument("quadratic irrational: discriminant must be negative");
}

std::string QuadraticIrrational::to_string() const {
    return a.get_str() + "," + b.get_str() + "," + c.get_str();
}

QuadraticIrrational QuadraticIrrational::parse(const std::string& s) {
    std::vector<Int> v;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
        try {
            v.emplace_back(cur);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("tau: malformed entry '" + cur + "'");
        }
    }
    if (v.size() != 3) throw std::invalid_argument("tau: expected a,b,c");
    QuadraticIrrational t{v[0], v[1], v[2]};
    t.validate();
    return t;
}

bool fixes_tau(const IntMat2& m, const QuadraticIrrational& tau) {
    // (p tau + q) / (r tau + s) = tau  <=>  r tau^2 + (s - p) tau - q = 0;
    // with a tau^2 = -(b tau + c) this is linear in tau over Q, and tau is
    // irrational, so both rational coefficients must vanish:
    //   -r b + a (s - p) = 0   and   a q + r c = 0.
    return (-m.c * tau.b + tau.a * (m.d - m.a)) == 0 && (tau.a * m.b + m.c * tau.c) == 0;
}

TraceNorm algebraic_integer_data(const QuadraticIrrational& tau0) {
    tau0.validate();
    if (tau0.a != 1)
        throw std::invalid_argument("algebraic_integer_data: leading coefficient must be 1");
    return {-tau0.b, tau0.c};
}

QForm build_form(const QuadraticIrrational& tau0, long level) {
    TraceNorm tn = algebraic_integer_data(tau0);
    Int n(level);
    return {tn.nm * n * n, tn.tr * n, Int(1)};
}

RepresentedPrime find_represented_prime(const QForm& q, long level, const std::set<Int>& skip,
                                        long search_bound) {
    for (long s = 1; s <= search_bound; ++s) {
        for (long c = 0; c <= s; ++c) {
            for (long d = s; d >= -s; --d) {
                if (std::max(c, d < 0 ? -d : d) != s) continue;
                Int value = q(Int(c), Int(d));
                if (!is_prime(value)) continue;
                if (Int(level) % value == 0) continue;  // l must not divide N
                if (skip.count(value)) continue;
                return {value, Int(c), Int(d)};
            }
        }
    }
    throw bound_exhausted("find_represented_prime: no admissible prime within the scan bound");
}

IntMat2 build_rho(const QuadraticIrrational& tau0, long level, const Int& c, const Int& d) {
    TraceNorm tn = algebraic_integer_data(tau0);
    Int n(level);
    IntMat2 rho{c * n * tn.tr + d, -c * n * tn.nm, c * n, d};
    QForm q = build_form(tau0, level);
    if (rho.det() != q(c, d)) throw internal_error("build_rho: determinant mismatch");
    if (!fixes_tau(rho, tau0)) throw internal_error("build_rho: rho does not fix tau0");
    return rho;
}

PrimitivePrime find_primitive_square_prime(const QuadraticIrrational& tau0, long level,
                                           long search_bound, const std::set<Int>& skip) {
    TraceNorm tn = algebraic_integer_data(tau0);
    QForm q = build_form(tau0, level);
    Int obstruction = 4 * tn.nm - tn.tr * tn.tr;  // = |disc(tau0)|
    bool use_filter = tn.tr != 0;

    PrimitivePrime result;
    std::set<Int> seen = skip;
    for (;;) {
        RepresentedPrime rp = find_represented_prime(q, level, seen, search_bound);
        seen.insert(rp.l);
        if (use_filter) {
            // Heuristic skip list only; soundness rests on the direct test.
            if (rp.l == 2 || Int(level) % rp.l == 0 || tn.tr % rp.l == 0 ||
                obstruction % rp.l == 0)
                continue;
        }
        IntMat2 rho = build_rho(tau0, level, rp.c, rp.d);
        IntMat2 rho_sq = rho * rho;
        if (!rho_sq.is_primitive()) {
            result.rejected.push_back({rp.l, rho_sq});
            continue;
        }
        if (!fixes_tau(rho_sq, tau0)) throw internal_error("rho^2 lost the fixed point");
        if (rho_sq.det() != rp.l * rp.l) throw internal_error("rho^2 determinant mismatch");
        if (int_gcd(rho_sq.a, Int(level)) != 1)
            throw internal_error("rho^2 upper-left entry not coprime to the level");
        if (rho_sq.c % level != 0)
            throw internal_error("rho^2 lower-left entry not divisible by the level");
        result.p = rp.l;
        result.rho = rho;
        result.rho_sq = rho_sq;
        return result;
    }
}

Decomposition decompose(const IntMat2& rho, long level) {
    if (!rho.is_primitive()) throw std::invalid_argument("decompose: matrix must be primitive");
    Int m = rho.det();
    if (m <= 0) throw std::invalid_argument("decompose: determinant must be positive");
    if (int_gcd(rho.a, Int(level)) != 1)
        throw std::invalid_argument("decompose: upper-left entry must be coprime to the level");
    if (rho.c % level != 0)
        throw std::invalid_argument("decompose: lower-left entry must be divisible by the level");

    // Row-reduce (a c)^T to (g 0)^T with a unimodular U, tracking U.
    IntMat2 r = rho;
    IntMat2 u = IntMat2::identity();
    auto row_op = [&](const Int& k) {  // row1 -= k * row2
        r.a -= k * r.c;
        r.b -= k * r.d;
        u.a -= k * u.c;
        u.b -= k * u.d;
    };
    auto swap_rows = [&]() {
        std::swap(r.a, r.c);
        std::swap(r.b, r.d);
        std::swap(u.a, u.c);
        std::swap(u.b, u.d);
    };
    while (r.c != 0) {
        Int k = int_fdiv(r.a, r.c);
        row_op(k);
        swap_rows();
    }
    if (r.a < 0) {
        r.a = -r.a;
        r.b = -r.b;
        u.a = -u.a;
        u.b = -u.b;
    }
    if (r.d < 0) {
        r.d = -r.d;
        u.c = -u.c;
        u.d = -u.d;
    }
    // Reduce b into [0, d).
    Int t = int_fdiv(r.b, r.d);
    if (t != 0) {
        r.b -= t * r.d;
        u.a -= t * u.c;
        u.b -= t * u.d;
    }
    if (u.det() != 1) throw internal_error("decompose: reduction is not unimodular");
    IntMat2 gamma{u.d, -u.b, -u.c, u.a};  // u^{-1}
    if (!(gamma * r == rho)) throw internal_error("decompose: recomposition failed");
    if (gamma.det() != 1 || gamma.c % level != 0)
        throw internal_error("decompose: gamma is not in Gamma_0(N)");
    if (!r.is_omega_shape() || r.a * r.d != m || !r.is_primitive())
        throw internal_error("decompose: omega is not in Omega(m)");
    return {gamma, r};
}

namespace {

int count_distinct_primes(Int n) {
    int cnt = 0;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ++cnt;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ++cnt;
    return cnt;
}

}  // namespace

ScaledPoint scale_to_integer_point(const QuadraticIrrational& tau, long level) {
    tau.validate();
    if (int_gcd(tau.a, Int(level)) != 1)
        throw std::invalid_argument(
            "scale_to_integer_point: leading coefficient must be coprime to the level "
            "(theorem hypothesis (a, N) = 1)");
    if (tau.a == 1) return {tau, IntMat2::identity(), Int(1), true};
    for (Int s = 1;; ++s) {
        Int a2 = s * s;
        if (a2 % tau.a != 0) continue;
        if (int_gcd(a2, Int(level)) != 1) continue;
        if (count_distinct_primes(a2) < 2) continue;
        Int k = a2 / tau.a;
        // a tau^2 + b tau + c = 0 scaled by k: tau0 = a' tau satisfies
        // tau0^2 + (k b) tau0 + (a c k^2) = 0.
        QuadraticIrrational tau0{Int(1), k * tau.b, tau.a * tau.c * k * k};
        tau0.validate();
        IntMat2 w0{Int(1), Int(0), Int(0), a2};
        if (!w0.is_omega_shape() || int_gcd(int_gcd(w0.a, w0.b), w0.d) != 1)
            throw internal_error("scale_to_integer_point: omega0 malformed");
        return {tau0, w0, a2, false};
    }
}

}  // namespace modeq
