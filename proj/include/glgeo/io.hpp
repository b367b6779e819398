#pragma once

#include <string>
#include <string_view>

#include "glgeo/distance.hpp"
#include "glgeo/geodesics.hpp"
#include "glgeo/matrix.hpp"

namespace glgeo::io {

/// Parses a JSON array-of-rows literal such as [[1,0],[0,1]]. Ragged rows,
/// non-square shapes, non-numeric and non-finite entries raise ErrorKind::parse.
SquareMat parse_matrix(std::string_view json);

/// Parses {"times": [...], "points": [[[...]], ...]}; extra keys are ignored.
DiscreteCurve parse_curve(std::string_view json);

/// 17 significant digits, so every double round-trips exactly. Non-finite
/// values become "inf", "-inf" or "nan".
std::string format_double(double v);

/// JSON token for a number: finite values as format_double, infinities as the
/// strings "inf" / "-inf", NaN as null.
std::string json_number(double v);

std::string matrix_to_json(const SquareMat& m);
std::string curve_to_json(const DiscreteCurve& c);
std::string distance_to_json(const DistanceResult& r);

}  // namespace glgeo::io
