#pragma once

// JSON forms of loops and sweep records.
//
// Loop:  { "k": 2, "coeffs": [ { "mode": -1, "matrix": [[[re, im], ...], ...] } ] }

#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "bottlab/approx.hpp"
#include "bottlab/asymptotics.hpp"
#include "bottlab/errors.hpp"
#include "bottlab/pairing.hpp"

namespace bottlab {

// Input that does not follow the loop schema. Distinct from NotAUnitaryLoop,
// which is raised for well-formed data describing a non-unitary loop.
class LoopFormatError : public Error
{
public:
    using Error::Error;
};

using Json = nlohmann::json;

namespace detail {

inline Complex parse_entry(const Json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw LoopFormatError("loop json: matrix entries must be [re, im] number pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace detail

inline LoopUnitary loop_from_json(const Json& j, BasepointPolicy policy = BasepointPolicy::Identity)
{
    if (!j.is_object())
        throw LoopFormatError("loop json: top level must be an object");
    if (!j.contains("k") || !j["k"].is_number_integer() || j["k"].get<long long>() < 1)
        throw LoopFormatError("loop json: \"k\" must be a positive integer");
    if (!j.contains("coeffs") || !j["coeffs"].is_array())
        throw LoopFormatError("loop json: \"coeffs\" must be an array");
    const int k = j["k"].get<int>();

    std::map<int, Matrix> coeffs;
    for (const Json& c : j["coeffs"]) {
        if (!c.is_object() || !c.contains("mode") || !c["mode"].is_number_integer() || !c.contains("matrix"))
            throw LoopFormatError("loop json: each coefficient needs an integer \"mode\" and a \"matrix\"");
        const int mode = c["mode"].get<int>();
        if (coeffs.contains(mode))
            throw LoopFormatError("loop json: mode " + std::to_string(mode) + " appears twice");
        const Json& rows = c["matrix"];
        if (!rows.is_array() || rows.size() != static_cast<std::size_t>(k))
            throw LoopFormatError("loop json: matrix of mode " + std::to_string(mode) + " must have k rows");
        Matrix a(k, k);
        for (int r = 0; r < k; ++r) {
            if (!rows[r].is_array() || rows[r].size() != static_cast<std::size_t>(k))
                throw LoopFormatError("loop json: matrix of mode " + std::to_string(mode) + " must have k columns");
            for (int col = 0; col < k; ++col)
                a(r, col) = detail::parse_entry(rows[r][col]);
        }
        coeffs.emplace(mode, std::move(a));
    }
    return LoopUnitary(k, std::move(coeffs), policy);
}

inline LoopUnitary loop_from_json(std::istream& in, BasepointPolicy policy = BasepointPolicy::Identity)
{
    Json j;
    try {
        in >> j;
    }
    catch (const Json::parse_error& e) {
        throw LoopFormatError(std::string("loop json: ") + e.what());
    }
    return loop_from_json(j, policy);
}

inline Json loop_to_json(const LoopUnitary& v)
{
    Json coeffs = Json::array();
    for (const auto& [mode, a] : v.coeffs()) {
        Json rows = Json::array();
        for (Index r = 0; r < a.rows(); ++r) {
            Json row = Json::array();
            for (Index c = 0; c < a.cols(); ++c)
                row.push_back({a(r, c).real(), a(r, c).imag()});
            rows.push_back(std::move(row));
        }
        coeffs.push_back({{"mode", mode}, {"matrix", std::move(rows)}});
    }
    return {{"k", v.k()}, {"coeffs", std::move(coeffs)}};
}

inline Json sweep_to_json(const std::vector<SweepRecord>& rows)
{
    Json out = Json::array();
    for (const auto& r : rows) {
        Json row = {{"N", r.N},
                    {"tr_e", r.tr_e},
                    {"tr_e2", r.tr_e2},
                    {"tr_e3", r.tr_e3},
                    {"norm_chi_minus_e", r.norm_chi_minus_e},
                    {"norm_e2_minus_e", r.norm_e2_minus_e},
                    {"gap", r.gap},
                    {"raw_index", r.raw_index},
                    {"index", r.index ? Json(*r.index) : Json(nullptr)},
                    {"flagged", r.flagged}};
        if (!r.note.empty())
            row["note"] = r.note;
        out.push_back(std::move(row));
    }
    return out;
}

inline Json index_result_to_json(const IndexResult& r)
{
    return {{"index", r.index}, {"gap", r.gap}, {"defect", r.defect}, {"raw_trace", r.raw_trace}};
}

} // namespace bottlab
