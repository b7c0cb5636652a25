#pragma once

#include <stdexcept>
#include <string>

namespace zrp {

// Base class for all numeric / domain failures. The CLI maps these to exit
// code 1, config problems to exit code 2.
struct Error : std::runtime_error {
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind(std::move(kind)) {}
  std::string kind;
};

struct CocycleViolation : Error {
  CocycleViolation(long k1, long k2, double rel)
      : Error("CocycleViolation",
              "rate cocycle inconsistent at k=(" + std::to_string(k1) + "," +
                  std::to_string(k2) + "), relative mismatch " +
                  std::to_string(rel)),
        k1(k1), k2(k2) {}
  long k1, k2;
};

struct UnknownName : Error {
  explicit UnknownName(const std::string& name)
      : Error("UnknownName", "no builtin weight named '" + name + "'") {}
};

struct InvalidParam : Error {
  explicit InvalidParam(const std::string& msg) : Error("InvalidParam", msg) {}
};

struct Diverged : Error {
  explicit Diverged(const std::string& msg) : Error("Diverged", msg) {}
};

struct NoCertificate : Error {
  explicit NoCertificate(const std::string& msg)
      : Error("NoCertificate", msg) {}
};

struct RadiusExhausted : Error {
  explicit RadiusExhausted(const std::string& msg)
      : Error("RadiusExhausted", msg) {}
};

struct SolverStall : Error {
  explicit SolverStall(const std::string& msg) : Error("SolverStall", msg) {}
};

struct OutOfRange : Error {
  explicit OutOfRange(const std::string& msg) : Error("OutOfRange", msg) {}
};

struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& msg)
      : Error("BudgetExceeded", msg) {}
};

struct ZeroRate : Error {
  explicit ZeroRate(const std::string& msg) : Error("ZeroRate", msg) {}
};

struct NotInDomain : Error {
  explicit NotInDomain(const std::string& msg) : Error("NotInDomain", msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("ConfigError", msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error("ParseError", msg) {}
};

}  // namespace zrp
