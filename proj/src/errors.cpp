#include "isolab/errors.hpp"

namespace isolab {

const char* err_name(Err e) {
  switch (e) {
    case Err::InvalidModulus: return "InvalidModulus";
    case Err::EllEqualsP: return "EllEqualsP";
    case Err::DegenerateModulus: return "DegenerateModulus";
    case Err::ZeroPolynomial: return "ZeroPolynomial";
    case Err::SupersingularCurve: return "SupersingularCurve";
    case Err::FactorCapExceeded: return "FactorCapExceeded";
    case Err::CountAmbiguous: return "CountAmbiguous";
    case Err::SearchExhausted: return "SearchExhausted";
    case Err::InertPrime: return "InertPrime";
    case Err::BadEigenvalue: return "BadEigenvalue";
    case Err::InvalidKernel: return "InvalidKernel";
    case Err::EmptyPrimeBasis: return "EmptyPrimeBasis";
    case Err::DiscriminantMismatch: return "DiscriminantMismatch";
    case Err::CapExceeded: return "CapExceeded";
    case Err::NotGenerated: return "NotGenerated";
    case Err::NotInIsogenyClass: return "NotInIsogenyClass";
    case Err::DegenerateBasis: return "DegenerateBasis";
    case Err::NotAModuleMatrix: return "NotAModuleMatrix";
    case Err::MessageLength: return "MessageLength";
    case Err::EmptyConstraint: return "EmptyConstraint";
    case Err::PoolExhausted: return "PoolExhausted";
    case Err::NotCoprime: return "NotCoprime";
    case Err::DualAmbiguous: return "DualAmbiguous";
    case Err::Mismatch: return "Mismatch";
    case Err::BadLevel: return "BadLevel";
    case Err::NonMaximalOrder: return "NonMaximalOrder";
    case Err::InternalError: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace isolab
