#include "steerkit/json_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace steerkit {

Json matrix_to_json(const CMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw SchemaError(where + ": expected a nonempty array of rows");
    const size_t rows = j.size();
    size_t cols = 0;
    CMatrix m;
    for (size_t r = 0; r < rows; ++r) {
        const Json& row = j[r];
        if (!row.is_array() || row.empty())
            throw SchemaError(where + "[" + std::to_string(r) + "]: expected an array");
        if (r == 0) {
            cols = row.size();
            m.resize(rows, cols);
        } else if (row.size() != cols) {
            throw SchemaError(where + "[" + std::to_string(r) + "]: ragged row");
        }
        for (size_t c = 0; c < cols; ++c) {
            const Json& cell = row[c];
            if (cell.is_number()) {
                m(r, c) = Complex(cell.get<double>(), 0.0);
            } else if (cell.is_array() && cell.size() == 2 && cell[0].is_number() &&
                       cell[1].is_number()) {
                m(r, c) = Complex(cell[0].get<double>(), cell[1].get<double>());
            } else {
                throw SchemaError(where + "[" + std::to_string(r) + "][" + std::to_string(c) +
                                  "]: expected [re, im]");
            }
        }
    }
    return m;
}

namespace {

Scenario scenario_from_json(const Json& j) {
    for (const char* key : {"dim", "inputs", "outcomes"})
        if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<int>() <= 0)
            throw SchemaError(std::string("field '") + key + "': expected a positive integer");
    return Scenario{j["inputs"].get<int>(), j["outcomes"].get<int>(), j["dim"].get<int>()};
}

template <typename Family>
Family family_from_json(const Json& j, const char* key) {
    Scenario sc = scenario_from_json(j);
    if (!j.contains(key) || !j[key].is_array())
        throw SchemaError(std::string("field '") + key + "': expected [x][a][row][col]");
    const Json& fam = j[key];
    if (static_cast<int>(fam.size()) != sc.inputs)
        throw SchemaError(std::string("field '") + key + "': expected " +
                          std::to_string(sc.inputs) + " input slices");
    Family out(sc);
    for (int x = 0; x < sc.inputs; ++x) {
        if (!fam[x].is_array() || static_cast<int>(fam[x].size()) != sc.outcomes)
            throw SchemaError(std::string(key) + "[" + std::to_string(x) + "]: expected " +
                              std::to_string(sc.outcomes) + " outcome entries");
        for (int a = 0; a < sc.outcomes; ++a) {
            CMatrix m = matrix_from_json(fam[x][a], std::string(key) + "[" + std::to_string(x) +
                                                        "][" + std::to_string(a) + "]");
            if (m.rows() != sc.dim || m.cols() != sc.dim)
                throw SchemaError(std::string(key) + "[" + std::to_string(x) + "][" +
                                  std::to_string(a) + "]: expected a " + std::to_string(sc.dim) +
                                  "x" + std::to_string(sc.dim) + " matrix");
            out.at(a, x) = m;
        }
    }
    return out;
}

template <typename Family>
Json family_to_json(const Family& fam, const char* key) {
    Json j;
    j["dim"] = fam.scenario.dim;
    j["inputs"] = fam.scenario.inputs;
    j["outcomes"] = fam.scenario.outcomes;
    Json arr = Json::array();
    for (int x = 0; x < fam.scenario.inputs; ++x) {
        Json slice = Json::array();
        for (int a = 0; a < fam.scenario.outcomes; ++a)
            slice.push_back(matrix_to_json(fam.at(a, x)));
        arr.push_back(std::move(slice));
    }
    j[key] = std::move(arr);
    return j;
}

}  // namespace

Json assemblage_to_json(const Assemblage& asmb) { return family_to_json(asmb, "sigma"); }

Assemblage assemblage_from_json(const Json& j) { return family_from_json<Assemblage>(j, "sigma"); }

Json measurement_to_json(const MeasurementAssemblage& meas) {
    return family_to_json(meas, "povm");
}

MeasurementAssemblage measurement_from_json(const Json& j) {
    return family_from_json<MeasurementAssemblage>(j, "povm");
}

Json filter_to_json(const Filter& f) {
    Json j;
    j["kraus"] = matrix_to_json(f.kraus);
    j["p_succ"] = f.p_succ;
    j["construction"] = to_string(f.kind);
    j["seed"] = f.seed;
    return j;
}

Filter filter_from_json(const Json& j) {
    Filter f;
    if (!j.contains("kraus")) throw SchemaError("filter: missing 'kraus'");
    f.kraus = matrix_from_json(j["kraus"], "kraus");
    if (!j.contains("p_succ") || !j["p_succ"].is_number())
        throw SchemaError("filter: missing numeric 'p_succ'");
    f.p_succ = j["p_succ"].get<double>();
    const std::string kind = j.value("construction", "custom");
    if (kind == "synthesized") f.kind = FilterKind::Synthesized;
    else if (kind == "distill") f.kind = FilterKind::Distill;
    else if (kind == "dilute") f.kind = FilterKind::Dilute;
    else f.kind = FilterKind::Custom;
    f.seed = j.value("seed", std::uint64_t{0});
    return f;
}

Json certificate_to_json(const EquivalenceCertificate& cert) {
    Json j;
    switch (cert.verdict) {
        case EquivalenceCertificate::Verdict::Equivalent: j["verdict"] = "equivalent"; break;
        case EquivalenceCertificate::Verdict::NotEquivalent: j["verdict"] = "not_equivalent"; break;
        case EquivalenceCertificate::Verdict::Undetermined: j["verdict"] = "undetermined"; break;
    }
    j["residual"] = cert.residual;
    j["seed"] = cert.seed;
    if (!cert.reason.empty()) j["reason"] = cert.reason;
    if (cert.verdict == EquivalenceCertificate::Verdict::Equivalent)
        j["unitary"] = matrix_to_json(cert.unitary);
    return j;
}

Json report_to_json(const RobustnessReport& rep, const Scenario& sc) {
    Json j;
    j["value"] = rep.value;
    j["duality_gap"] = rep.duality_gap;
    j["iterations"] = rep.iterations;
    j["status"] = rep.status;
    Json w = Json::array();
    for (int x = 0; x < sc.inputs; ++x) {
        Json slice = Json::array();
        for (int a = 0; a < sc.outcomes; ++a)
            slice.push_back(matrix_to_json(rep.witness_at(a, x, sc)));
        w.push_back(std::move(slice));
    }
    j["witness"] = std::move(w);
    if (rep.eta.size() > 0) j["eta"] = matrix_to_json(rep.eta);
    return j;
}

Json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open: " + path);
    try {
        return Json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    f << j.dump(2) << "\n";
}

LoadedAssemblage load_assemblage(const std::string& path, double repair_tol,
                                 const Tolerances& tol) {
    LoadedAssemblage out{assemblage_from_json(load_json_file(path)), 0.0};
    if (!validate(out.value, tol).passed() && repair_tol > 0.0)
        out.correction = repair(out.value, repair_tol, tol);
    return out;
}

LoadedMeasurement load_measurement(const std::string& path, double repair_tol,
                                   const Tolerances& tol) {
    LoadedMeasurement out{measurement_from_json(load_json_file(path)), 0.0};
    if (!validate(out.value, tol).passed() && repair_tol > 0.0)
        out.correction = repair(out.value, repair_tol, tol);
    return out;
}

}  // namespace steerkit
