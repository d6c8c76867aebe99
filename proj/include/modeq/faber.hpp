#ifndef MODEQ_FABER_HPP
#define MODEQ_FABER_HPP

#include <map>
#include <optional>
#include <vector>

#include "modeq/puiseux.hpp"

namespace modeq {

// Monic polynomial P_{n,f} of degree n with P_{n,f}(f) = q^{-n} + O(q).
struct FaberPoly {
    long n = 0;
    unsigned long coeff_order = 1;
    std::vector<CycNum> coeff;  // ascending, coeff[n] = 1

    std::string to_string(const std::string& var = "X") const;
    // Evaluate at a series argument.
    PuiseuxSeries operator()(const PuiseuxSeries& x) const;
};

// The double sequence h_{m,n} = [q^m] P_{n,f}(f) / n for 1 <= m, n <= bound.
struct HTable {
    long bound = 0;
    unsigned long coeff_order = 1;
    std::map<std::pair<long, long>, CycNum> h;

    const CycNum& at(long m, long n) const;
};

struct ReplicabilityResult {
    bool replicable = false;
    // lexicographically least violating (m, n, r, s) when not replicable
    std::optional<std::array<long, 4>> witness;
};

// Greedy principal-part elimination; f must be a normalized Hauptmodul-shaped
// series with truncation >= n + 1.
FaberPoly faber(const PuiseuxSeries& f, long n);

// Requires truncation >= bound^2 + 1.
HTable h_table(const PuiseuxSeries& f, long bound);

// h_{m,n} depends only on (gcd, lcm) for indices up to the bound.
ReplicabilityResult is_replicable(const PuiseuxSeries& f, long bound);

// Replicates f^{(s)} for 1 <= s <= max_index, each with coefficients through
// q^{coeff_bound} (truncation coeff_bound + 1).  Solves the triangular system
// c^{(s)}_t = s h_{st,s} - sum_{e | s, e > 1} e c^{(s/e)}_{e^2 t} and then
// re-verifies the defining Hecke-like identity, throwing replicability_error
// if the input is inconsistent with it.
std::map<long, PuiseuxSeries> extract_replicates(const PuiseuxSeries& f, long max_index,
                                                 long coeff_bound);

// Every f^{(s)} (s <= max_s) replicable to coeff bound and
// (f^{(s)})^{(t)} = f^{(st)} for t <= max_t, coefficient-wise to the bound.
bool is_completely_replicable(const PuiseuxSeries& f, long max_s, long max_t,
                              long coeff_bound);

// Least k <= k_max with f^{(s+k)} = f^{(s)} for all s <= k_max, coefficients
// compared through q^{coeff_bound}.
std::optional<long> replicate_period(const PuiseuxSeries& f, long k_max, long coeff_bound);

// Input truncation sufficient for extract_replicates(f, max_index, coeff_bound).
long replicates_truncation(long max_index, long coeff_bound);
// ... and for is_completely_replicable(f, max_s, max_t, coeff_bound).
long complete_replicability_truncation(long max_s, long max_t, long coeff_bound);

// --- file format -----------------------------------------------------------
// modeq-htable 1 / bound M / cyclotomic_order M' / entries k
// h <m> <n> <coords> ... end   (sorted by (m, n))
void write_htable(std::ostream& os, const HTable& t);
HTable read_htable(std::istream& is);
void save_htable(const std::string& path, const HTable& t);

}  // namespace modeq

#endif  // MODEQ_FABER_HPP
