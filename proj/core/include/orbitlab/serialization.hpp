#pragma once

// JSON descriptors for shifts, vectors, phases, target points and bundles.
//
//   shift:   "2B" | {"constant": "2"} | {"periodic": ["1", "2"]}
//            | {"closed_form": "1 + 1/k", "sup": "2"}
//   vector:  {"coords": {"0": "1/2+3/4 i"}}
//            | {"blocks": [{"offset": 5, "scale": "1/32", "coords": {...}}]}
//            | {"hc": {"offsets": "k^2"}}          (dense family, s_k = k)
//   phase:   {"kind": "constant", "turn": "1/2"}
//            | {"kind": "polynomial", "poly": "sqrt2*t^2"}   (radians)
//            | {"kind": "polynomial", "coeffs": [{"pi": "1/2"}, ...]}  (coeffs[i] multiplies t^{i+1})
//            | {"kind": "slow_growth", "expr": "log(n)", "radians": true}
//            | {"kind": "geometric", "c": 1, "base": 2, "theta": "stream:seed=7" | "1/3"}
//            | {"kind": "explicit", "start": 1, "turns": ["1/2", ...]}
//            | {"kind": "random", "seed": 7, "horizon": 100}
//   point:   {"vector": <vector coords>, "torus": ["0", ...]}

#include <string>

#include "json.hpp"
#include "orbitlab/constructions.hpp"
#include "orbitlab/density.hpp"
#include "orbitlab/phases.hpp"
#include "orbitlab/space.hpp"

namespace orbitlab {

using Json = nlohmann::json;

WeightedShift shift_from_json(const Json& j);
Json to_json(const WeightedShift& T);

FiniteVector finite_vector_from_json(const Json& j);
Json to_json(const FiniteVector& v);
BlockVector block_vector_from_json(const Json& j);

/// Throws ParseError for patched phases, which are only reachable through bundles.
PhaseSeq phase_from_json(const Json& j);
Json to_json(const PhaseSeq& s);

Turn turn_from_json(const Json& j);
ProductPoint point_from_json(const Json& j);
Json to_json(const ProductPoint& p);

/// Offsets rule n_k given as an exact expression in k.
std::function<BigInt(std::uint64_t)> offsets_from_text(const std::string& rule);

/// Bundle descriptor: name, parameters, claim, provenance and (for prop41) the alpha log.
Json to_json(const Bundle& b);
/// Re-assembles a bundle from its descriptor.
Bundle bundle_from_json(const Json& j);
/// Assembles a named bundle ("prop41", "example44", "prop53") with default parameters.
Bundle assemble_bundle(const std::string& name, std::uint64_t horizon);

Json to_json(const AvoidanceCertificate& c);
Json to_json(const HitReport& r);

}  // namespace orbitlab
