#pragma once
// Runs one CLI job and renders the versioned JSON report.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ats/config.hpp"

namespace ats {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "ats-report/1";

struct RunOptions {
  std::optional<uint64_t> seed;  // overrides [job] seed
  std::optional<int> max_dim;    // overrides [job] max_dim and [census] max_dim
  bool verify = false;           // decide-iso: certify the decision
  Exec exec = Exec::Parallel;
};

struct JobResult {
  Json report;
  bool ok = true;
  std::vector<std::string> lines;  // human-readable summary, one check per line
};

class JobError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// decide-iso takes two configs, every other command one. Throws JobError for
/// jobs that cannot start (missing sections, dimension over the limit).
JobResult run_job(Command cmd, const std::vector<JobConfig>& configs, const RunOptions& opt = {});

Json scalar_json(const Scalar& s);
/// Basis labels, sparse structure tensors as [i1, ..., in, out, "coef"] rows, degmap.
Json algebra_json(const OmegaAlgebra& A, const Grading* G = nullptr);
Json report_json(const std::string& name, const Report& r);

/// The triple named by a config: [triple], or W(A) for a [matrix] algebra.
TripleSystem triple_of(const JobConfig& c);

}  // namespace ats
