#pragma once

// Structured-text reports: one "key: value" pair per line, nested keys joined
// with dots, numbers in round-trippable form.

#include <iosfwd>
#include <string>

#include "ksplit/analytic.hpp"
#include "ksplit/ksplit.hpp"
#include "ksplit/weights.hpp"

namespace ksplit {

void write_report(std::ostream& os, const HypothesisReport& rep, const std::string& prefix = "hypotheses");
void write_report(std::ostream& os, const Partition& part, const std::string& prefix = "partition");
void write_report(std::ostream& os, const SplitReport& rep);
void write_report(std::ostream& os, const FiberwiseReport& rep);
void write_report(std::ostream& os, const GlueReport& rep);

}  // namespace ksplit
