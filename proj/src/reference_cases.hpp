#pragma once

#include "bulkq/model.hpp"

namespace bulkq::cases {

// The two bundled reference configurations shipped with the project.
//
// ex1: a = 8, b = 15, lambda = 0.055, batch size uniform on {1..4}; service
//      times are order-3 phase-type laws with theta_i = 0.2 / (i - 7) (exact
//      rationals behind the 6-digit figures), beta = (0.25, 0.25, 0.5);
//      geometric vacations with eta = 0.4.
// ex2: a = 15, b = 25, lambda = 0.10, batch size in {1, 5} with equal mass;
//      order-3 negative binomial service with mu_i = 3 / (2i - 20);
//      geometric vacations with eta = 0.2.
ValidatedModel ex1(VacationSpec::Mode mode);
ValidatedModel ex2(VacationSpec::Mode mode);

// kind: "ex1" or "ex2"
ValidatedModel by_name(const std::string& kind, VacationSpec::Mode mode);

} // namespace bulkq::cases
