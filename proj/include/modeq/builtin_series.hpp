#ifndef MODEQ_BUILTIN_SERIES_HPP
#define MODEQ_BUILTIN_SERIES_HPP

#include "modeq/puiseux.hpp"

namespace modeq {

// j = q^{-1} + 744 + 196884 q + ...; exponents in [-1, T), truncation T.
// Generated from E4(q)^3 / Delta(q) with exact integer series arithmetic.
PuiseuxSeries gen_j(long T);

// J = j - 744, the normalized Hauptmodul for SL2(Z).
PuiseuxSeries gen_J(long T);

// The normalized Hauptmodul for Gamma_0(3): (eta(z)/eta(3z))^12 with the
// constant term removed.
PuiseuxSeries gen_gamma0_3(long T);

// Registry used by the CLI and the file-format tooling.
bool has_builtin(const std::string& name);
PuiseuxSeries builtin_series(const std::string& name, long T);

}  // namespace modeq

#endif  // MODEQ_BUILTIN_SERIES_HPP
