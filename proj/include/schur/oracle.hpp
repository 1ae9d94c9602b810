#pragma once

#include <gmpxx.h>

#include "schur/engine.hpp"
#include "schur/random.hpp"

namespace schur {

/// The exact value of a finite double. ConfigError for NaN or ±∞.
mpq_class exact(double x);

/// g evaluated exactly; g must have an integer power form of degree ≤ 5.
mpq_class exact_g(const GFunctionSpec& g, const mpq_class& x);

/// f evaluated exactly: integer power weights, piecewise-linear and table
/// functions. ConfigError for kinds without a rational closed form.
mpq_class exact_f(const CoeffFunctionSpec& f, const mpq_class& x);

/// The margin of a scalar case computed in exact rational arithmetic from the
/// binary values of the instance's doubles. Independent of the float
/// evaluator: same definitions, separate code path.
mpq_class oracle_margin_exact(CaseId id, const SchurInstance& inst);

/// A scalar-case instance whose inputs are p/q (q ≤ 16) in [0, 1], with g of
/// integer power form and f of a rational kind. Hypotheses are not enforced.
SchurInstance gen_rational_instance(CaseId id, Rng& rng);

}  // namespace schur
