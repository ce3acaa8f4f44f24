#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "ppk/drivers.hpp"

namespace ppk {

// Serialization of solver outputs.  Every JSON document carries `schema: 1`
// and the seed used, so reruns with the same inputs are byte-identical.

nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const CorrectionReport& r);
nlohmann::json to_json(const PofReport& r);
nlohmann::json to_json(const SplineReport& r);
nlohmann::json to_json(const PPGmresResult& r);  // excludes the solution vector
nlohmann::json to_json(const EigenResult& r);

// cycle,shortcut_resnorm,true_resnorm,matvecs_cum
void write_history_csv(std::ostream& os, const SolveReport& r);

// canonical dump: 2-space indent, keys sorted by construction order, '\n'
std::string render_json(const nlohmann::json& j);

}  // namespace ppk
