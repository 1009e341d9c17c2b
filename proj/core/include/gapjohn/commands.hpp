#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gapjohn/io.hpp"
#include "gapjohn/john.hpp"
#include "gapjohn/oracle.hpp"

namespace gapjohn {

struct CommandOptions {
  Rational t = 1;
  Rational t_prime = 1;
  std::int64_t l = 1;
  int d = 1;
  std::size_t cap = kDefaultCap;
  int retry_limit = kDefaultRetryLimit;
  std::uint64_t seed = 0;
  std::int64_t n = 8;
  Rational threshold = 8;
};

inline const std::vector<std::string> kCommands{"properize",   "john",     "john-outer",       "discrete-john",
                                                "cover",       "coalesce", "sumset-structure", "sarkozy",
                                                "demo-counterexample"};

// Runs one pipeline command on an input document and returns the certificate
// document {"version", "command", "parameters", "input", "result"}.
Json run_command(const std::string& command, const Json& input, const CommandOptions& options);

struct AuditReport {
  bool passed = true;
  std::vector<oracle::VerificationReport> checks;
};

// Re-checks every claim of a certificate with the oracle alone.
AuditReport audit_certificate(const Json& certificate, std::size_t cap = kDefaultCap);
Json to_json(const AuditReport& report);

}  // namespace gapjohn
