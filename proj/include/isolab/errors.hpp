#pragma once

#include <stdexcept>
#include <string>

namespace isolab {

enum class Err {
  InvalidModulus,
  EllEqualsP,
  DegenerateModulus,
  ZeroPolynomial,
  SupersingularCurve,
  FactorCapExceeded,
  CountAmbiguous,
  SearchExhausted,
  InertPrime,
  BadEigenvalue,
  InvalidKernel,
  EmptyPrimeBasis,
  DiscriminantMismatch,
  CapExceeded,
  NotGenerated,
  NotInIsogenyClass,
  DegenerateBasis,
  NotAModuleMatrix,
  MessageLength,
  EmptyConstraint,
  PoolExhausted,
  NotCoprime,
  DualAmbiguous,
  Mismatch,
  BadLevel,
  NonMaximalOrder,
  InternalError,
};

const char* err_name(Err e);

/// Domain error carrying a stable machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

}  // namespace isolab
