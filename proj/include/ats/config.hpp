#pragma once
// Job files: line-oriented "key = value" entries under [section] headers.
// The grammar is documented in docs/config.md.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ats/classify.hpp"
#include "ats/triples.hpp"

namespace ats {

struct ConfigIssue {
  int line = 0;  // 1-based; 0 when the issue concerns the file as a whole
  std::string message;
  std::string file;
  std::string str() const;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

enum class Command { Construct, Verify, Envelope, Triple, CheckAt2, DecideIso, Census };
std::string command_name(Command c);
std::optional<Command> parse_command(const std::string& s);

struct DivisionInput {
  Subgroup T;
  Bicharacter beta;
  std::optional<QuadraticForm> tau;
  std::optional<GroupElement> t;  // exchange double
};

struct TripleInput {
  enum class Source { Scalar, Zero, DirectSum, Table, Matrix } source = Source::Scalar;
  int dim = 0;
  std::vector<TripleInput> parts;  // DirectSum
  struct Entry {
    int i, j, k, m;
    Scalar c;
  };
  std::vector<Entry> entries;  // Table
};

struct ExchangeIsoInput {
  Subgroup T1, T2;
  QuadraticForm tau1;
  GroupElement t;
};

struct RemoveTauInput {
  Subgroup T1;
  QuadraticForm tau1, tau_prime;
  GroupElement t;
};

struct JobConfig {
  std::optional<Command> command;
  uint64_t seed = 0;
  int max_dim = 16;
  At2Options at2;
  long search_cap = 1000000;

  AbelianGroup G;
  std::optional<DivisionInput> division;
  std::optional<MatrixParams> matrix;
  std::optional<TripleInput> triple;
  std::optional<CensusOptions> census;
  std::vector<ExchangeIsoInput> exchange_iso;
  std::vector<RemoveTauInput> remove_tau;
};

/// Throws ConfigError with every issue found, each with its line.
JobConfig parse_config(const std::string& text);
JobConfig load_config(const std::string& path);

}  // namespace ats
