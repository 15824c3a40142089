#pragma once

#include <stdexcept>
#include <string>

namespace breptok {

// Base class for all breptok errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define BREPTOK_ERROR(Name)                                                  \
    class Name : public Error {                                             \
    public:                                                                  \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {}  \
    };

// geometry / model
BREPTOK_ERROR(NonFiniteGeometry)
BREPTOK_ERROR(NonFiniteInput)
BREPTOK_ERROR(InvariantError)

// ingestion
BREPTOK_ERROR(ParseError)
BREPTOK_ERROR(SchemaError)
BREPTOK_ERROR(ParamError)

// quantizers / codebook
BREPTOK_ERROR(IndexOutOfRange)
BREPTOK_ERROR(EmptyCodebook)
BREPTOK_ERROR(EmptyDataset)

// sequencer
BREPTOK_ERROR(TooManyFaces)
BREPTOK_ERROR(CoordOutOfRange)

// generator
BREPTOK_ERROR(EmptyCorpus)
BREPTOK_ERROR(TokenOutOfVocab)
BREPTOK_ERROR(SequenceTooLong)
BREPTOK_ERROR(DegenerateDistribution)

// metrics
BREPTOK_ERROR(EmptyModel)
BREPTOK_ERROR(EmptyCloud)

// artifact files / cli
BREPTOK_ERROR(FormatError)
BREPTOK_ERROR(HashMismatch)
BREPTOK_ERROR(UsageError)

#undef BREPTOK_ERROR

}  // namespace breptok
