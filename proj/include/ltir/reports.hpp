#pragma once

#include "ltir/physics.hpp"

#include <string>

namespace ltir {

// Human-readable resolution report. Prints Eq-form vertical resolution and
// flags that the commonly quoted ~0.3 mm figure corresponds to c*T alone.
std::string resolve_report(double t_pulse, double f, double eps_r, double depth);

std::string budget_report_text(const BudgetLedger& ledger);
std::string budget_report_csv(const BudgetLedger& ledger);

} // namespace ltir
