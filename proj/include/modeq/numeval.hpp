#ifndef MODEQ_NUMEVAL_HPP
#define MODEQ_NUMEVAL_HPP

#include <functional>
#include <optional>

#include "modeq/bigfloat.hpp"
#include "modeq/cmpoints.hpp"
#include "modeq/modpoly.hpp"
#include "modeq/puiseux.hpp"

namespace modeq {

// A q-series that may be regenerated at a larger truncation (builtins) or is
// pinned to whatever a file provided.
struct SeriesSource {
    std::string id;
    std::function<PuiseuxSeries(long)> make;  // truncation >= requested
    long max_truncation = 4096;

    static SeriesSource builtin(const std::string& name, long cap = 4096);
    static SeriesSource fixed(const std::string& id, PuiseuxSeries f);
};

// Numeric value of a CycNum at precision prec.
Complex cyc_to_complex(const CycNum& c, long prec);

// Sum of the series at q = exp(2 pi i tau), with the truncation grown until
// two successive evaluations agree to the requested precision.
Complex eval_at(const SeriesSource& src, const QuadraticIrrational& tau, long prec);

// |(1/sqrt(5)) (j((1+sqrt(-15))/4) - j((1+sqrt(-15))/2)) - 85995|.
Real verify_thompson_identity(long prec);

// |(1/sqrt(-11)) (j3((-1+sqrt(-11))/6) - j3((1+sqrt(-11))/6)) - 16|.
Real verify_mathieu_identity(long prec);

// Monic integer polynomial of degree <= degree_bound annihilating the value
// within 2^{-prec/2}, confirmed by re-running at doubled precision; ascending
// coefficients, empty optional when no stable relation exists.
std::optional<std::vector<Int>> recover_monic_minpoly(
    const std::function<Complex(long)>& value, long degree_bound, long prec);

struct CertifyConfig {
    long precision = 192;
    long degree_cap = 8;
    long modpoly_order_cap = 50;     // build F_n diagonals only for n <= cap
    long prime_search_bound = 4000;  // scan shells for represented primes
    std::optional<Rat> value_override;  // testing hook: replaces h(tau)
};

struct PrimeEvidence {
    Int l = 0, c = 0, d = 0;  // Q(c, d) = l
    IntMat2 rho, rho_sq;
    std::vector<PrimitivePrime::Rejected> rejected;
    bool diagonal_built = false;
    std::string diag_class;  // "unit" or "p*unit"
    Int diag_p = 0;
    std::string diag_residual;
    std::string diag_skipped;  // reason when not built
};

struct Certificate {
    std::string series_id;
    QuadraticIrrational tau{Int(1), Int(0), Int(1)};
    long level = 1;
    long precision = 192;

    bool scaled = false;
    Int a_scaled = 1;
    IntMat2 omega0 = IntMat2::identity();
    QuadraticIrrational tau0{Int(1), Int(0), Int(1)};

    PrimeEvidence first, second;

    bool scale_poly_built = false;  // F_{a'} evidence for the scaled case
    std::string scale_class;
    Int scale_p = 0;
    std::string scale_residual;
    std::string scale_skipped;

    std::string value_str;   // h(tau)
    std::string value0_str;  // h(tau0)
    std::vector<Int> minpoly;  // ascending, monic; empty when absent
    std::string minpoly_residual;
    bool stable = false;

    enum class Verdict { certified, inconclusive } verdict = Verdict::inconclusive;
    std::string failed_stage;  // first failing stage when inconclusive

    std::string to_text() const;
};

Certificate certify_cm_integrality(const SeriesSource& src, const QuadraticIrrational& tau,
                                   long level, const CertifyConfig& config = {});

}  // namespace modeq

#endif  // MODEQ_NUMEVAL_HPP
