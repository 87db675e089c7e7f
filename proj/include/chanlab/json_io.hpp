#pragma once

#include <json.hpp>

#include "chanlab/holo.hpp"
#include "chanlab/qec.hpp"

namespace chanlab {

using json = nlohmann::json;

/// Reports emitted by the CLI carry this schema version.
inline constexpr int kSchemaVersion = 1;

//=========================================================================
// Operator schema: {re: [[...]], im: [[...]], row_dims, col_dims}
//=========================================================================

inline json to_json(const Operator& op) {
  json re = json::array(), im = json::array();
  for (Index i = 0; i < op.rows(); ++i) {
    json re_row = json::array(), im_row = json::array();
    for (Index j = 0; j < op.cols(); ++j) {
      re_row.push_back(op.mat()(i, j).real());
      im_row.push_back(op.mat()(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"re", std::move(re)},
              {"im", std::move(im)},
              {"row_dims", op.row_dims()},
              {"col_dims", op.col_dims()}};
}

inline Operator operator_from_json(const json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  const Index rows = static_cast<Index>(re.size());
  if (rows == 0) throw Error("operator JSON: empty matrix");
  const Index cols = static_cast<Index>(re.at(0).size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(re.at(r).size()) != cols ||
        static_cast<Index>(im.at(r).size()) != cols)
      throw Error("operator JSON: ragged matrix");
    for (Index c = 0; c < cols; ++c)
      m(r, c) = Complex(re.at(r).at(c).get<double>(), im.at(r).at(c).get<double>());
  }
  Dims row_dims = j.at("row_dims").get<Dims>();
  Dims col_dims = j.at("col_dims").get<Dims>();
  return Operator(std::move(m), std::move(row_dims), std::move(col_dims));
}

//=========================================================================
// States: operator schema plus "kind"
//=========================================================================

inline json to_json(const DensityOperator& rho) {
  json j = to_json(rho.op());
  j["kind"] = "density";
  return j;
}

inline json to_json(const PureState& psi) {
  Matrix column = psi.amplitudes();
  json j = to_json(Operator(std::move(column), psi.factor_dims(), Dims{1}));
  j["kind"] = "pure";
  return j;
}

inline DensityOperator density_from_json(const json& j, const Tolerance& tol = {}) {
  if (j.value("kind", "density") == "pure") {
    Operator op = operator_from_json(j);
    PureState psi = PureState::normalized(op.mat().col(0), op.row_dims(), tol);
    return psi.to_density();
  }
  return make_density(operator_from_json(j), tol);
}

//=========================================================================
// Channels: {kraus: [operator...], in_dim, out_dim}
//=========================================================================

inline json to_json(const KrausChannel& ch) {
  json ops = json::array();
  for (const Matrix& m : ch.kraus())
    ops.push_back(to_json(Operator(m, Dims{ch.out_dim()}, Dims{ch.in_dim()})));
  return json{{"kraus", std::move(ops)}, {"in_dim", ch.in_dim()}, {"out_dim", ch.out_dim()}};
}

inline KrausChannel channel_from_json(const json& j, const Tolerance& tol = {}) {
  const Index in_dim = j.at("in_dim").get<Index>();
  const Index out_dim = j.at("out_dim").get<Index>();
  std::vector<Matrix> kraus;
  for (const json& op : j.at("kraus")) kraus.push_back(operator_from_json(op).mat());
  return KrausChannel::make(std::move(kraus), in_dim, out_dim, tol);
}

//=========================================================================
// Reports
//=========================================================================

inline json to_json(const InequalityReport& r) {
  json j{{"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.slack},
         {"passed", r.passed}};
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

inline json to_json(const CptpReport& r) {
  return json{{"completeness_residual", r.completeness_residual},
              {"choi_min_eigenvalue", r.choi_min_eigenvalue},
              {"trace_preserving", r.trace_preserving},
              {"completely_positive", r.completely_positive},
              {"passed", r.passed}};
}

inline json to_json(const RecoveryReport& r, const QuadratureGrid& grid) {
  return json{{"gap", r.gap},
              {"fidelity", r.recovery_fidelity},
              {"bound_slack", r.bound_slack},
              {"l1_residual", r.trace_distance_residual},
              {"grid", json{{"nodes", grid.nodes.size()}, {"T", grid.truncation}}}};
}

inline json to_json(const ReconstructionReport& r) {
  json ops = json::array();
  for (const ReconstructionEntry& e : r.per_operator)
    ops.push_back(json{{"label", e.label}, {"lhs", e.lhs}, {"rhs", e.rhs},
                       {"passed", e.passed}});
  return json{{"epsilon", r.epsilon_measured}, {"delta1", r.delta1}, {"delta2", r.delta2},
              {"delta", r.delta}, {"per_operator", std::move(ops)},
              {"all_passed", r.all_passed}};
}

inline json to_json(const AmpssReport& r) {
  return json{{"cond_i_entangled_pure_pair", r.cond_entangled_pure_pair},
              {"cond_ii_radiation_closure", r.cond_radiation_closure},
              {"cond_iii_entropy_decrease", r.cond_entropy_decrease},
              {"cond_iii_marginal", r.cond_iii_marginal},
              {"cond_iv_ssa", r.cond_ssa},
              {"chain",
               json{{"S_R_plus_S_B", r.chain_start},
                    {"S_ABR_plus_S_B", r.chain_after_ii},
                    {"S_AB_plus_S_BR", r.chain_after_iv},
                    {"S_AB_plus_S_R", r.chain_after_iii},
                    {"S_R", r.chain_end}}},
              {"contradiction", r.contradiction},
              {"jointly_consistent", r.jointly_consistent}};
}

inline json to_json(const RoundtripReport& r) {
  json j{{"syndrome", r.syndrome.bits},
         {"fidelity", r.fidelity},
         {"logical_preserved", r.logical_preserved},
         {"logical_flipped", r.logical_flipped},
         {"uncorrectable", r.uncorrectable}};
  j["correction"] = r.correction ? r.correction->label() : "uncorrectable";
  return j;
}

}  // namespace chanlab
