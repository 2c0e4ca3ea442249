#pragma once

// Plain-text output: CSV tables with 17 significant digits, written atomically.

#include <filesystem>
#include <string>

#include "phasespace/aharonov_bohm.hpp"
#include "phasespace/bargmann.hpp"
#include "phasespace/wigner.hpp"

namespace phasespace::csv {

/// 17 significant digits, enough to round-trip any double.
std::string number(double v);

/// Writes to a sibling temporary file and renames it over the target, so a
/// reader never sees a half-written file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// t,prob,phase
std::string timeseries(const ScenarioResult& r);
/// q,density,phase
std::string frame(const Frame& f);
/// q,p,w
std::string wigner(const WignerField& w);
/// re_z,im_z,h
std::string husimi(const HusimiField& h);

}  // namespace phasespace::csv
