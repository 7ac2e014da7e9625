#pragma once

#include <stdexcept>
#include <string>

namespace mftd {

// All library failures derive from Error so callers can catch one type and
// still report the category.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& what)
        : std::runtime_error(category + " error: " + what), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

#define MFTD_DEFINE_ERROR(Name, tag)                                           \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(tag, what) {}           \
    };

MFTD_DEFINE_ERROR(DomainError, "domain")
MFTD_DEFINE_ERROR(ConfigError, "configuration")
MFTD_DEFINE_ERROR(GeometryError, "geometry")
MFTD_DEFINE_ERROR(ResonanceError, "resonance")
MFTD_DEFINE_ERROR(SingularityError, "singularity")
MFTD_DEFINE_ERROR(StateError, "state")
MFTD_DEFINE_ERROR(FlatMapError, "flat-map")
MFTD_DEFINE_ERROR(EmptySignalError, "empty-signal")
MFTD_DEFINE_ERROR(EmptyNoiseSubspaceError, "empty-noise-subspace")
MFTD_DEFINE_ERROR(DegenerateBandError, "degenerate-band")
MFTD_DEFINE_ERROR(ExtractionError, "extraction")
MFTD_DEFINE_ERROR(FitError, "fit")
MFTD_DEFINE_ERROR(ComparisonError, "comparison")
MFTD_DEFINE_ERROR(FormatError, "format")

#undef MFTD_DEFINE_ERROR

}  // namespace mftd
