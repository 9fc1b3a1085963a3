#pragma once

// JSON (de)serialization for every value the CLI reads or writes. Complex
// scalars are two-element arrays [re, im]; operator families are nested
// [x][a][row][col]. Numbers round-trip bit-exactly.

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "steerkit/assemblage.hpp"
#include "steerkit/filter.hpp"
#include "steerkit/robustness.hpp"
#include "steerkit/seo.hpp"

namespace steerkit {

using Json = nlohmann::json;

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, const std::string& where);

Json assemblage_to_json(const Assemblage& asmb);
Assemblage assemblage_from_json(const Json& j);

Json measurement_to_json(const MeasurementAssemblage& meas);
MeasurementAssemblage measurement_from_json(const Json& j);

Json filter_to_json(const Filter& f);
Filter filter_from_json(const Json& j);

Json certificate_to_json(const EquivalenceCertificate& cert);
Json report_to_json(const RobustnessReport& rep, const Scenario& sc);

// File helpers. Loaders parse strictly; when `repair_tol > 0` and strict
// validation fails, the symmetric repair is attempted and the applied
// correction is returned (fixtures are printed to four decimals).
Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

struct LoadedAssemblage {
    Assemblage value;
    double correction = 0.0;
};
struct LoadedMeasurement {
    MeasurementAssemblage value;
    double correction = 0.0;
};

LoadedAssemblage load_assemblage(const std::string& path, double repair_tol = 1e-3,
                                 const Tolerances& tol = {});
LoadedMeasurement load_measurement(const std::string& path, double repair_tol = 1e-3,
                                   const Tolerances& tol = {});

}  // namespace steerkit
