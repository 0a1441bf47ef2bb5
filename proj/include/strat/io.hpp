#ifndef STRAT_IO_HPP
#define STRAT_IO_HPP

#include <json.hpp>

#include "strat/special.hpp"

namespace strat {

using json = nlohmann::json;

json pexp_to_json(const PExp& a);
PExp pexp_from_json(const json& j);

// gm elements serialize as a sorted [[exponent, coeff], ...] array; disc
// elements wrap the terms with {"side": "at0"|"atInf", "precision": P}.
json series_to_json(const Series& s);
Series series_from_json(const json& j, i64 p);

json unipclass_to_json(const UnipClass& c);
UnipClass unipclass_from_json(const json& j);

json additive_witness_to_json(const AdditiveWitness& w);

json tower_to_json(const Tower& t);
Tower tower_from_json(const json& j);

json gauge_witness_to_json(const GaugeWitness& w);
GaugeWitness gauge_witness_from_json(const json& j);

// Parse text as JSON, mapping malformed input to Errc::parse.
json parse_json_text(const std::string& text);

// Dispatch a CLI command on already-parsed JSON inputs.
json run_command(const std::string& cmd, const std::vector<json>& inputs,
                 const RunConfig& cfg, const std::string& ring_flag,
                 const std::string& side_flag);

}  // namespace strat

#endif
