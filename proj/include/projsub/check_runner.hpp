#pragma once

#include "projsub/config.hpp"
#include "projsub/diagnostics.hpp"

#include <string>
#include <vector>

namespace projsub {

/// A check was requested for a trace it does not apply to (wrong method, missing inner
/// iterates, no reference value, ...).
class CheckNotApplicable : public Error {
  public:
    using Error::Error;
};

struct CheckOptions {
    double feasibility_threshold = 1e-2;
    double constant_step_slack = 1e-9;
};

/// key-estimate, feasibility-decay, ppa-lemma, spa-lemma, inner-drift, cyclic-window,
/// constant-step, asymptotic-regularity
const std::vector<std::string> &check_names();

/// Copies method, ordering, cutter anchor and schedule description from the config into a
/// trace read back from CSV.
void attach_metadata(RunTrace &trace, const RunConfig &config);

/// Runs one named check. Throws CheckNotApplicable, or Error for an unknown name.
CheckReport run_check(const std::string &name, const RunTrace &trace, const RunConfig &config,
                      const CheckOptions &options = {});

/// Runs the listed checks in order. "all" expands to every check, with inapplicable ones
/// reported as skipped; explicitly named checks that do not apply throw.
std::vector<CheckReport> run_checks(const std::vector<std::string> &names, const RunTrace &trace,
                                    const RunConfig &config, const CheckOptions &options = {});

} // namespace projsub
