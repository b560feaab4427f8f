#pragma once
// Index scans shared by the verification kernels.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ats/omega.hpp"

namespace ats::detail {

// Runs f(k) for k in [0, n); failures come back ordered by k whatever the schedule.
template <class F>
Report scan(size_t n, Exec exec, F f) {
  std::vector<std::pair<size_t, std::string>> bad;
  if (exec == Exec::Serial) {
    for (size_t k = 0; k < n; ++k)
      if (auto msg = f(k)) bad.emplace_back(k, std::move(*msg));
  } else {
#pragma omp parallel
    {
      std::vector<std::pair<size_t, std::string>> local;
#pragma omp for schedule(dynamic, 16) nowait
      for (long long k = 0; k < static_cast<long long>(n); ++k)
        if (auto msg = f(static_cast<size_t>(k))) local.emplace_back(k, std::move(*msg));
#pragma omp critical
      bad.insert(bad.end(), std::make_move_iterator(local.begin()),
                 std::make_move_iterator(local.end()));
    }
    std::sort(bad.begin(), bad.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  Report r;
  r.checked = static_cast<long>(n);
  for (auto& [k, msg] : bad) r.fail(std::move(msg));
  return r;
}

}  // namespace ats::detail
