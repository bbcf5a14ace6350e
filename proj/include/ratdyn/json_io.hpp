#pragma once

#include <string>

#include <json.hpp>

#include "ratdyn/exotic.hpp"
#include "ratdyn/family.hpp"
#include "ratdyn/orbits.hpp"
#include "ratdyn/potential.hpp"
#include "ratdyn/scan.hpp"
#include "ratdyn/symbolic.hpp"

namespace ratdyn {

/// Objects keep keys sorted, so dumps are canonical.
using Json = nlohmann::json;

Json encode(Complex z);
Json encode(const Point& z);  ///< "inf" or [re, im]
Json encode(const Window& w);
Json encode(const MapParams& p);
Json encode(const KWParams& q);
Json encode(const OrbitFate& f);
Json encode(const CriticalFates& f);
Json encode(const FixedPointData& f);
Json encode(const NewtonReport& r);
Json encode(const EventResult& r);
Json encode(const MilestoneCheck& m);
Json encode(const CodingReport& r);
Json encode(const CensusEntry& e);
Json encode(const ImmediateBasin& b);
Json encode(const ConnectivityLevel& l);
Json encode(const ConnectivityReport& r);
Json encode(const ExoticVerdict& v);
Json encode(const PotentialValue& v);
Json encode(const FigureEightResult& r);
Json encode(const SaddleSpectrum& s);
Json encode(const LevelCurve& c);

/// Sidecar describing an 8-bit label raster: width, height, window and codes.
Json mask_sidecar(const BasinMask& mask);

/// Number, [re], [re, im], or {"re":x,"im":y}. Throws Validation.
Complex decode_complex(const Json& j);
/// {"a":..,"b":..,"c":..} or {"k":x,"w":y}; unknown keys are rejected. Throws Validation.
MapParams decode_params(const Json& j);
/// {"k":x,"w":y} only.
KWParams decode_kw(const Json& j);

/// Two-space indented dump followed by a newline.
std::string dump(const Json& j);

}  // namespace ratdyn
