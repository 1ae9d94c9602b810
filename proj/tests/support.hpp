#pragma once

#include <algorithm>
#include <cmath>

#include "schur/engine.hpp"

namespace schur::testing {

inline CaseId scalar_counterpart(CaseId ring) {
  switch (ring) {
    case CaseId::R4: return CaseId::S4;
    case CaseId::R5: return CaseId::S5;
    case CaseId::R6: return CaseId::S6;
    default: return CaseId::S7;
  }
}

/// For a ring instance with diagonal data: largest gap between a diagonal
/// entry of the ring margin and the scalar case evaluated on that coordinate
/// with g = x^n, relative to the coordinate's scale.
inline double diagonal_reduction_error(CaseId ring, const SchurInstance& inst) {
  const auto m = eval_margin(ring, inst);
  const Matrix& e = m.element->as_matrix();
  double worst = 0.0;
  for (std::size_t k = 0; k < e.rows(); ++k) {
    SchurInstance s;
    s.g = GFunctionSpec::power(inst.n);
    for (const auto& x : inst.xs) s.xs.push_back(OrderedElement::scalar(x.as_matrix()(k, k)));
    for (const auto& a : inst.coeffs) s.coeffs.push_back(OrderedElement::scalar(a.as_matrix()(k, k)));
    const auto sm = eval_margin(scalar_counterpart(ring), s);
    worst = std::max(worst, std::abs(e(k, k) - sm.value) / std::max(1.0, sm.scale));
  }
  return worst;
}

}  // namespace schur::testing
