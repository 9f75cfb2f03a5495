#ifndef WEILLIFT_ACCEPTANCE_HPP
#define WEILLIFT_ACCEPTANCE_HPP

#include <iosfwd>

namespace weillift {
namespace acceptance {

// Runs every criterion, printing one PASS/FAIL line each; returns true iff
// all pass.  `heavy` enables the long-running lattice case (under 30 min by
// contract, seconds in practice).
bool run_all(std::ostream& os, bool heavy = true);

}  // namespace acceptance
}  // namespace weillift

#endif
