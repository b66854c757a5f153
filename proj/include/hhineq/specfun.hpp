#pragma once

namespace hhineq {

// ln Γ(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

// Euler Beta function β(x, y) = Γ(x)Γ(y)/Γ(x+y), evaluated in log space.
// Throws DomainError unless x > 0 and y > 0.
double beta(double x, double y);

}  // namespace hhineq
