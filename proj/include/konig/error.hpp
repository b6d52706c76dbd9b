#pragma once

#include <stdexcept>
#include <string>

namespace konig {

/// Error codes for precondition and validation failures. Absence of a
/// solution/witness is never an error; operations return std::optional
/// for that.
enum class Errc {
  UnknownReference,
  UnknownObject,
  UnknownArrow,
  MissingIdentity,
  CompositionNotClosed,
  UnitLawViolated,
  AssociativityViolated,
  MissingCarrier,
  MissingAction,
  NotAFunction,
  FunctorialityViolated,
  NotAFunctor,
  NotSurjective,
  NotFibration,
  NotAWitness,
  InvalidColorCount,
  NoCocone,
  NoWitness,
  ConfluentPair,
  EmptyCarrier,
  SignatureMismatch,
  SignatureOverlap,
  NoAmalgam,
  BoundTooSmall,
  NotDomainPreserving,
  NotClosed,
  NotNatural,
  NotASolution,
  BadInput,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::UnknownReference: return "UnknownReference";
    case Errc::UnknownObject: return "UnknownObject";
    case Errc::UnknownArrow: return "UnknownArrow";
    case Errc::MissingIdentity: return "MissingIdentity";
    case Errc::CompositionNotClosed: return "CompositionNotClosed";
    case Errc::UnitLawViolated: return "UnitLawViolated";
    case Errc::AssociativityViolated: return "AssociativityViolated";
    case Errc::MissingCarrier: return "MissingCarrier";
    case Errc::MissingAction: return "MissingAction";
    case Errc::NotAFunction: return "NotAFunction";
    case Errc::FunctorialityViolated: return "FunctorialityViolated";
    case Errc::NotAFunctor: return "NotAFunctor";
    case Errc::NotSurjective: return "NotSurjective";
    case Errc::NotFibration: return "NotFibration";
    case Errc::NotAWitness: return "NotAWitness";
    case Errc::InvalidColorCount: return "InvalidColorCount";
    case Errc::NoCocone: return "NoCocone";
    case Errc::NoWitness: return "NoWitness";
    case Errc::ConfluentPair: return "ConfluentPair";
    case Errc::EmptyCarrier: return "EmptyCarrier";
    case Errc::SignatureMismatch: return "SignatureMismatch";
    case Errc::SignatureOverlap: return "SignatureOverlap";
    case Errc::NoAmalgam: return "NoAmalgam";
    case Errc::BoundTooSmall: return "BoundTooSmall";
    case Errc::NotDomainPreserving: return "NotDomainPreserving";
    case Errc::NotClosed: return "NotClosed";
    case Errc::NotNatural: return "NotNatural";
    case Errc::NotASolution: return "NotASolution";
    case Errc::BadInput: return "BadInput";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

} // namespace konig
