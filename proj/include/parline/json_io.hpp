#pragma once

// JSON forms of maps, records and reports. Key order is fixed, so dumps of
// equal values are byte-identical.

#include "json.hpp"
#include "parline/charclass.hpp"
#include "parline/witness.hpp"

namespace parline::io {

using Json = nlohmann::ordered_json;

Json coords_to_json(const witness::MapDescriptor& f);
/// Builtin form when the descriptor came from a builtin, coordinate form otherwise.
Json map_to_json(const witness::MapDescriptor& f);
/// Accepts either form; throws witness::WitnessError on malformed input.
witness::MapDescriptor map_from_json(const Json& j);

Json config_to_json(const witness::Configuration& c);
Json record_to_json(const witness::WitnessRecord& r);
witness::WitnessRecord record_from_json(const Json& j);

Json report_to_json(const charclass::VerificationReport& r);
Json hurwitz_to_json(const charclass::HurwitzComparison& h);
Json verify_to_json(const witness::VerifyReport& v);
Json find1d_to_json(const witness::Find1dResult& r);
Json singularity_to_json(const witness::SingularityEstimate& s);

}  // namespace parline::io
