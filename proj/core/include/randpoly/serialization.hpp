#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "randpoly/comparison.hpp"
#include "randpoly/ensembles.hpp"
#include "randpoly/interval.hpp"
#include "randpoly/kacrice.hpp"
#include "randpoly/montecarlo.hpp"
#include "randpoly/noise.hpp"

// JSON forms of the core types. Doubles are written with the shortest
// representation that reads back to the same value; intervals use the text
// form of to_string(Interval) so infinite endpoints survive.

namespace randpoly {

void to_json(nlohmann::json& j, const Interval& iv);
void from_json(const nlohmann::json& j, Interval& iv);

void to_json(nlohmann::json& j, const NoiseSpec& s);
void from_json(const nlohmann::json& j, NoiseSpec& s);

/// {"n", "rho", "b", "c", "family"}.
nlohmann::json profile_to_json(const CoefficientProfile& p);
CoefficientProfile profile_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const KacRiceResult& r);
void from_json(const nlohmann::json& j, KacRiceResult& r);

void to_json(nlohmann::json& j, const SideReport& s);
void from_json(const nlohmann::json& j, SideReport& s);
void to_json(nlohmann::json& j, const RegimeReport& r);
void from_json(const nlohmann::json& j, RegimeReport& r);

void to_json(nlohmann::json& j, const TrialStatistics& s);
void from_json(const nlohmann::json& j, TrialStatistics& s);

void to_json(nlohmann::json& j, const SlopeFit& f);
void from_json(const nlohmann::json& j, SlopeFit& f);

/// "n,trials,mean,stderr,ci_lo,ci_hi,discarded"
std::string trial_statistics_csv_header();
std::string to_csv_row(std::size_t n, const TrialStatistics& s);

/// Decimal text that reads back to exactly x ("inf", "-inf", "nan" for the
/// non-finite values).
std::string format_double(double x);

}  // namespace randpoly
