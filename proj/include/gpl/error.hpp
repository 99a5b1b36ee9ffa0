#pragma once

#include <stdexcept>
#include <string>

namespace gpl {

enum class Errc {
  InvalidRing,
  RingMismatch,
  WrongRingKind,
  NotInvertible,
  EmptyBlock,
  SizeMismatch,
  UnknownGenerator,
  CapExceeded,
  BadVertex,
  BadIndex,
  ArityMismatch,
  OddWeightViolation,
  UnitArgument,
  NotAComplexSpec,
  ModelMismatch,
  DegreeError,
  NotMaurerCartan,
  BudgetExceeded,
  NotFiniteField,
  IdealConditionViolated,
  FiberConditionViolated,
  NotAComplex,
  NotUnital,
  NotEquivariant,
  SyntaxError,
  UnknownIdentifier,
  ConfigError,
  InternalInvariant,
};

const char* errc_name(Errc code);

/// Every domain failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace gpl
