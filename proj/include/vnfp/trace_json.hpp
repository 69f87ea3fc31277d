#pragma once

/**
 * TraceDocument serialization (see docs/trace_schema.md). Every number is
 * written as an exact string: "p/q", "p" or "inf".
 */

#include <string>
#include <string_view>

#include "vnfp/iso.hpp"

namespace vnfp {

std::string normalize_document(std::string_view input, const NormalizeResult& result, bool with_steps);

std::string iso_document(std::string_view input1, std::string_view input2, const IsoVerdict& verdict,
                         bool with_steps);

std::string fg_document(std::string_view input, const FGVerdict& verdict, bool with_steps);

/// `value` empty means NotApplicable.
std::string fdim_document(std::string_view input, const std::optional<ExtScalar>& value);

/// Text rendering of a canonical form, as printed by the CLI.
std::string describe(const CanonicalForm& form);

}  // namespace vnfp
