#pragma once

#include <stdexcept>
#include <string>

namespace pem {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define PEM_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                    \
  public:                                                        \
    explicit Name(const std::string& what) : Error(what) {}      \
  }

// geometry kernel
PEM_DEFINE_ERROR(SingularMetric);
PEM_DEFINE_ERROR(OutOfDomain);
PEM_DEFINE_ERROR(JetUnavailable);
PEM_DEFINE_ERROR(DimensionUnsupported);
PEM_DEFINE_ERROR(DegreeMismatch);
PEM_DEFINE_ERROR(OrientationUnset);
PEM_DEFINE_ERROR(IntegrationFailure);

// einstein catalog
PEM_DEFINE_ERROR(BadDimension);
PEM_DEFINE_ERROR(ZeroScale);
PEM_DEFINE_ERROR(SignMismatch);
PEM_DEFINE_ERROR(IncompatibleScalars);

// constructions
PEM_DEFINE_ERROR(RicciFlatBase);
PEM_DEFINE_ERROR(LambdaMismatch);
PEM_DEFINE_ERROR(BadMu);
PEM_DEFINE_ERROR(BadNormalization);
PEM_DEFINE_ERROR(NotSpecialKilling);

// verifier
PEM_DEFINE_ERROR(ProjectionUndefined);

// cli runner
PEM_DEFINE_ERROR(ParseError);
PEM_DEFINE_ERROR(ValidationError);
PEM_DEFINE_ERROR(IoError);

#undef PEM_DEFINE_ERROR

}  // namespace pem
