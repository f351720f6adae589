#ifndef INTERESTFLOW_ERRORS_HPP_
#define INTERESTFLOW_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace iflow {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define IFLOW_DEFINE_ERROR(Name)                  \
  class Name : public Error {                     \
   public:                                        \
    using Error::Error;                           \
    Name() : Error(#Name) {}                      \
  }

// Ingestion
IFLOW_DEFINE_ERROR(MalformedRecord);
IFLOW_DEFINE_ERROR(MissingField);
IFLOW_DEFINE_ERROR(DuplicateEntry);
IFLOW_DEFINE_ERROR(UnknownTopicClass);

// Statistics and fitting
IFLOW_DEFINE_ERROR(EmptyInput);
IFLOW_DEFINE_ERROR(InsufficientSupport);
IFLOW_DEFINE_ERROR(NonConvergence);

// Concentration
IFLOW_DEFINE_ERROR(ZeroActivity);
IFLOW_DEFINE_ERROR(DegenerateNormalization);

// Interest dynamics
IFLOW_DEFINE_ERROR(ZeroVector);
IFLOW_DEFINE_ERROR(TooFewBins);
IFLOW_DEFINE_ERROR(MisalignedSequences);
IFLOW_DEFINE_ERROR(UncatalogedSubreddit);

// Bot filter
IFLOW_DEFINE_ERROR(EmptyPopulation);

// Harness
IFLOW_DEFINE_ERROR(InvalidSpec);
IFLOW_DEFINE_ERROR(ConfigError);
IFLOW_DEFINE_ERROR(IoError);

#undef IFLOW_DEFINE_ERROR

}  // namespace iflow

#endif  // INTERESTFLOW_ERRORS_HPP_
