#pragma once

#include <stdexcept>
#include <string>

namespace sbncl {

// Base class for every error this library raises deliberately.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define SBNCL_DEFINE_ERROR(Name)                                 \
  struct Name final : Error {                                    \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

// signal-io
SBNCL_DEFINE_ERROR(TruncatedData);
SBNCL_DEFINE_ERROR(UnsupportedFormat);
SBNCL_DEFINE_ERROR(MalformedHeader);
SBNCL_DEFINE_ERROR(MalformedAnnotation);
SBNCL_DEFINE_ERROR(LeadNotFound);
SBNCL_DEFINE_ERROR(RecordTooShort);

// preprocess
SBNCL_DEFINE_ERROR(EmptySignal);
SBNCL_DEFINE_ERROR(ZeroVariance);

// diff-engine / model
SBNCL_DEFINE_ERROR(ShapeMismatch);
SBNCL_DEFINE_ERROR(NonFiniteValue);
SBNCL_DEFINE_ERROR(LengthNotDivisible);
SBNCL_DEFINE_ERROR(DimensionMismatch);

// trainer
SBNCL_DEFINE_ERROR(NoValidPair);
SBNCL_DEFINE_ERROR(VersionMismatch);
SBNCL_DEFINE_ERROR(CorruptCheckpoint);

// eval
SBNCL_DEFINE_ERROR(TooFewItems);
SBNCL_DEFINE_ERROR(EmptyTrainSet);
SBNCL_DEFINE_ERROR(DegenerateInput);
SBNCL_DEFINE_ERROR(ConstantTarget);
SBNCL_DEFINE_ERROR(SingleClass);
SBNCL_DEFINE_ERROR(LengthMismatch);
SBNCL_DEFINE_ERROR(DatasetOverlap);

// cli / io
SBNCL_DEFINE_ERROR(ConfigError);
SBNCL_DEFINE_ERROR(IoError);

#undef SBNCL_DEFINE_ERROR

}  // namespace sbncl
