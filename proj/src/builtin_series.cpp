#include "modeq/builtin_series.hpp"

#include <map>
#include <mutex>

namespace modeq {

namespace {

using Dense = std::vector<Int>;  // coefficients of q^0 .. q^{K-1}

Dense dense_mul(const Dense& a, const Dense& b, size_t k) {
    Dense r(k, Int(0));
    for (size_t i = 0; i < a.size() && i < k; ++i) {
        if (a[i] == 0) continue;
        size_t jmax = std::min(b.size(), k - i);
        for (size_t j = 0; j < jmax; ++j) {
            if (b[j] == 0) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

// a / b for b with constant term 1.
Dense dense_div(const Dense& a, const Dense& b, size_t k) {
    if (b.empty() || b[0] != 1) throw internal_error("dense_div: divisor must start at 1");
    Dense q(k, Int(0));
    for (size_t n = 0; n < k; ++n) {
        Int c = n < a.size() ? a[n] : Int(0);
        size_t jmax = std::min(b.size() - 1, n);
        for (size_t j = 1; j <= jmax; ++j) {
            if (b[j] == 0) continue;
            c -= b[j] * q[n - j];
        }
        q[n] = c;
    }
    return q;
}

Dense dense_pow(const Dense& a, unsigned long e, size_t k) {
    Dense r(1, Int(1));
    Dense base = a;
    for (;;) {
        if (e & 1) r = dense_mul(r, base, k);
        e >>= 1;
        if (e == 0) break;
        base = dense_mul(base, base, k);
    }
    return r;
}

// Euler's product prod_{n>=1} (1 - q^n) via the pentagonal number theorem.
Dense euler_product(size_t k) {
    Dense r(k, Int(0));
    r[0] = 1;
    for (long g = 1;; ++g) {
        long p1 = g * (3 * g - 1) / 2;
        long p2 = g * (3 * g + 1) / 2;
        if (static_cast<size_t>(p1) >= k && static_cast<size_t>(p2) >= k) break;
        Int s = (g % 2 == 0) ? 1 : -1;
        if (static_cast<size_t>(p1) < k) r[p1] = s;
        if (static_cast<size_t>(p2) < k) r[p2] = s;
    }
    return r;
}

Dense stretch(const Dense& a, size_t factor, size_t k) {
    Dense r(k, Int(0));
    for (size_t i = 0; i * factor < k && i < a.size(); ++i) r[i * factor] = a[i];
    return r;
}

// sigma_3 divisor sums for 1..k-1 by sieving.
std::vector<Int> sigma3(size_t k) {
    std::vector<Int> s(k, Int(0));
    for (size_t d = 1; d < k; ++d) {
        Int d3 = Int(d) * Int(d) * Int(d);
        for (size_t n = d; n < k; n += d) s[n] += d3;
    }
    return s;
}

// Dense coefficients of the regular part; series is q^{-1} * sum c_n q^n.
PuiseuxSeries from_dense_shifted(const Dense& c, long T) {
    PuiseuxSeries f = PuiseuxSeries::zero(1, Trunc::at(T));
    for (size_t n = 0; n < c.size(); ++n) {
        if (c[n] == 0) continue;
        long e = static_cast<long>(n) - 1;
        if (e >= T) break;
        f.set_term(Rat(e), CycNum(Rat(c[n])));
    }
    return f;
}

Dense j_regular_part(size_t k) {
    // q*j = E4^3 / (Delta/q), all with integer coefficients.
    std::vector<Int> s3 = sigma3(k);
    Dense e4(k, Int(0));
    e4[0] = 1;
    for (size_t n = 1; n < k; ++n) e4[n] = 240 * s3[n];
    Dense e4cubed = dense_mul(dense_mul(e4, e4, k), e4, k);
    Dense delta_over_q = dense_pow(euler_product(k), 24, k);
    return dense_div(e4cubed, delta_over_q, k);
}

std::mutex g_builtin_mutex;

const Dense& cached_j_regular(size_t k) {
    static std::map<size_t, Dense> cache;
    std::lock_guard<std::mutex> lock(g_builtin_mutex);
    // Reuse any cached expansion that is long enough.
    auto it = cache.lower_bound(k);
    if (it != cache.end()) return it->second;
    return cache.emplace(k, j_regular_part(k)).first->second;
}

}  // namespace

PuiseuxSeries gen_j(long T) {
    if (T < 2) throw std::invalid_argument("gen_j: truncation must be >= 2");
    return from_dense_shifted(cached_j_regular(static_cast<size_t>(T) + 1), T);
}

PuiseuxSeries gen_J(long T) {
    PuiseuxSeries f = gen_j(T);
    f.set_term(Rat(0), CycNum());
    return f;
}

PuiseuxSeries gen_gamma0_3(long T) {
    if (T < 2) throw std::invalid_argument("gen_gamma0_3: truncation must be >= 2");
    size_t k = static_cast<size_t>(T) + 1;
    Dense eta1_12 = dense_pow(euler_product(k), 12, k);
    Dense eta3_12 = dense_pow(stretch(euler_product(k / 3 + 1), 3, k), 12, k);
    Dense t = dense_mul(eta1_12, dense_div(Dense{Int(1)}, eta3_12, k), k);
    PuiseuxSeries f = from_dense_shifted(t, T);
    // remove the constant term; the result must be q^{-1} + 0 + O(q)
    f.set_term(Rat(0), CycNum());
    if (!is_normalized_hauptmodul(f))
        throw internal_error("gen_gamma0_3: generator lost its normalization");
    return f;
}

bool has_builtin(const std::string& name) {
    return name == "j" || name == "J" || name == "gamma0_3";
}

PuiseuxSeries builtin_series(const std::string& name, long T) {
    if (name == "j") return gen_j(T);
    if (name == "J") return gen_J(T);
    if (name == "gamma0_3") return gen_gamma0_3(T);
    throw std::invalid_argument("unknown builtin series '" + name +
                                "' (expected j, J or gamma0_3)");
}

}  // namespace modeq
