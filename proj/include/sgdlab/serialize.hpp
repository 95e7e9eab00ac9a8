#pragma once

#include <string>

#include "sgdlab/constructions.hpp"
#include "sgdlab/quadratic.hpp"
#include "sgdlab/shufflers.hpp"

namespace sgdlab {

/// Problem document with fixed field order
/// {"d","n","components":[{"A","b"}...],"meta":{"mu","L","G","P","construction"}}
/// and every number rendered with 17 significant digits.
std::string problem_to_json(const FiniteSumProblem& p);

/// Bundle document: the problem plus per-dimension regime intervals, bound
/// constants, and the analytic bound.
std::string bundle_to_json(const ConstructionBundle& b);

/// RunRecord CSV: header `epoch,gap,x_1..x_d`, one row per epoch start plus
/// the final row.
std::string run_record_to_csv(const RunRecord& r);

/// Full-trace CSV (requires record_every_iterate): `epoch,step,x_1..x_d`.
std::string trace_to_csv(const RunRecord& r, int dim);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sgdlab
