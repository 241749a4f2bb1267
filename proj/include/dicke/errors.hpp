#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DICKE_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

DICKE_DEFINE_ERROR(InvalidParams);
DICKE_DEFINE_ERROR(DegenerateCoupling);
DICKE_DEFINE_ERROR(ZeroCooperation);
DICKE_DEFINE_ERROR(DimensionOverflow);
DICKE_DEFINE_ERROR(DimensionMismatch);
DICKE_DEFINE_ERROR(NoConvergence);
DICKE_DEFINE_ERROR(ProjectionCollapse);
DICKE_DEFINE_ERROR(TruncationLoss);
DICKE_DEFINE_ERROR(NoTransitionInRange);
DICKE_DEFINE_ERROR(UsageError);
DICKE_DEFINE_ERROR(IoError);

#undef DICKE_DEFINE_ERROR

}  // namespace dicke
