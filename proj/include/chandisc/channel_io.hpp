// JSON channel-spec files.
//
// Channel:  {"dimIn": 2, "dimOut": 2, "kraus": [ [[ [re,im], ... ], ...], ... ]}
// Pair:     {"family": "werner_holevo", "params": {...}, "phi0": <channel>, "phi1": <channel>}
//
// "family" and "params" are optional on input (default "custom"); they are
// written on export so a re-imported pair keeps its analytic registry entries
// and LOCC protocols.
#pragma once

#include "chandisc/channels.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace chandisc {

using Json = nlohmann::json;

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) throw Error("parse", "matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw Error("parse", "ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& z = row[static_cast<std::size_t>(c)];
      if (z.is_number()) {
        m(r, c) = Complex(z.get<double>(), 0.0);
      } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
        m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
      } else {
        throw Error("parse", "complex entries must be [re, im]");
      }
    }
  }
  return m;
}

inline Json matrices_to_json(const std::vector<Matrix>& ms) {
  Json arr = Json::array();
  for (const Matrix& m : ms) arr.push_back(matrix_to_json(m));
  return arr;
}

inline std::vector<Matrix> matrices_from_json(const Json& j) {
  if (!j.is_array()) throw Error("parse", "expected an array of matrices");
  std::vector<Matrix> out;
  for (const Json& m : j) out.push_back(matrix_from_json(m));
  return out;
}

inline Json channel_to_json(const Channel& ch) {
  return {{"dimIn", ch.dim_in}, {"dimOut", ch.dim_out}, {"kraus", matrices_to_json(ch.kraus)}};
}

inline Channel channel_from_json(const Json& j) {
  try {
    return make_channel(j.at("dimIn").get<int>(), j.at("dimOut").get<int>(),
                        matrices_from_json(j.at("kraus")));
  } catch (const Json::exception& e) {
    throw Error("parse", e.what());
  }
}

inline Json pair_to_json(const ChannelPair& pair) {
  Json params = Json::object();
  const FamilyParams& p = pair.params;
  if (p.d) params["d"] = p.d;
  if (p.n) params["n"] = p.n;
  if (p.N) params["N"] = p.N;
  if (!p.unitaries.empty()) params["unitaries"] = matrices_to_json(p.unitaries);
  if (!p.flag_kraus0.empty()) params["flag_kraus0"] = matrices_to_json(p.flag_kraus0);
  if (!p.flag_kraus1.empty()) params["flag_kraus1"] = matrices_to_json(p.flag_kraus1);
  return {{"family", std::string(family_name(pair.family))},
          {"params", params},
          {"phi0", channel_to_json(pair.phi0)},
          {"phi1", channel_to_json(pair.phi1)}};
}

inline ChannelPair pair_from_json(const Json& j) {
  try {
    ChannelPair pair{channel_from_json(j.at("phi0")), channel_from_json(j.at("phi1")), Family::custom, {}};
    if (pair.phi0.dim_in != pair.phi1.dim_in || pair.phi0.dim_out != pair.phi1.dim_out) {
      throw Error("bad_shape", "phi0 and phi1 dimensions differ");
    }
    if (j.contains("family")) pair.family = family_from_name(j.at("family").get<std::string>());
    if (j.contains("params")) {
      const Json& p = j.at("params");
      pair.params.d = p.value("d", 0);
      pair.params.n = p.value("n", 0);
      pair.params.N = p.value("N", 0);
      if (p.contains("unitaries")) pair.params.unitaries = matrices_from_json(p.at("unitaries"));
      if (p.contains("flag_kraus0")) pair.params.flag_kraus0 = matrices_from_json(p.at("flag_kraus0"));
      if (p.contains("flag_kraus1")) pair.params.flag_kraus1 = matrices_from_json(p.at("flag_kraus1"));
    }
    return pair;
  } catch (const Json::exception& e) {
    throw Error("parse", e.what());
  }
}

inline ChannelPair load_pair(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw Error("parse", e.what());
  }
  return pair_from_json(j);
}

inline void save_pair(const ChannelPair& pair, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("io", "cannot write " + path);
  out << pair_to_json(pair).dump(2) << '\n';
  if (!out) throw Error("io", "write failed for " + path);
}

}  // namespace chandisc
