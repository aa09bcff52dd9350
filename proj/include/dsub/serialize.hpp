#pragma once

#include <string>

#include <json.hpp>

#include "dsub/directed_set.hpp"
#include "dsub/expr.hpp"
#include "dsub/theorems.hpp"

namespace dsub {

nlohmann::json to_json(const DirectedSet& a);
/// Inverse of to_json. Grid ids are recomputed and must match the stored id.
DirectedSet directed_set_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Expr& e);
nlohmann::json to_json(const VerificationReport& r);

/// Lines "px,py,qx,qy,inverted" with a header row.
std::string segments_csv(const SegmentList& segments);
/// Standalone SVG; hue follows the direction index, inverted parts dashed.
std::string segments_svg(const SegmentList& segments);

}  // namespace dsub
