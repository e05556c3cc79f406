#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "opsent/search.hpp"

namespace opsent {

using Json = nlohmann::json;

// JSON forms
//   DalitzPoint        {"x1": f, "x2": f}                    (x3 derived)
//   Orientation        {"alpha": f, "beta": f, "gamma": f}   (radians)
//   StateTensor        {"basis": "circular"|"linear",
//                       "amplitudes": [[re, im] x 8]}        (lexicographic,
//                                                             + < - / 0 < 1)
//   PhotonTriple       {"k": [3], "theta": [3], "phi": [3],
//                       "dalitz": {...}, "orientation": {...}}
//   AnalyzerSetting    {"formalism": "qubit_2d"|"spin1_3d",
//                       "axes": [[x,y,z], ...],
//                       "local_bases": [[[re,im] x 4], ...]}  (optional,
//                                                             row-major 2x2)
//   EventRecord        {"photons": {...}, "state": {...}, "weight": f}

Json to_json(const DalitzPoint& d);
DalitzPoint dalitz_from_json(const Json& j);

Json to_json(const Orientation& o);
Orientation orientation_from_json(const Json& j);

Json to_json(const StateTensor& s);
StateTensor state_tensor_from_json(const Json& j);

Json to_json(const PhotonTriple& t);
PhotonTriple photon_triple_from_json(const Json& j);

Json to_json(const EntanglementReport& r);

Json to_json(const AnalyzerSetting& s);
AnalyzerSetting analyzer_setting_from_json(const Json& j);

Json to_json(const ClosedFormComparison& c);

Json to_json(const MerminSettings& s);

Json to_json(const EventRecord& e);
EventRecord event_record_from_json(const Json& j);

Json to_json(const SearchResult& r);

// Class label including the cut, e.g. "BISEPARABLE(3|12)".
std::string class_label(StateClass c, const std::optional<Cut>& cut);

// 17 significant digits, enough to round-trip a double exactly.
std::string format_double(double v);

// Scan CSV: header
//   x1,x2,theta1,theta2,theta3,phi1,phi2,phi3,s_z,observable,value,class,norm
// then one line per row, doubles at 17 significant digits.
std::string scan_csv_header();
std::string scan_csv_row(const ScanRow& row, Observable observable);

}  // namespace opsent
