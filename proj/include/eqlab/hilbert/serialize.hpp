#pragma once

#include <json.hpp>

#include "eqlab/hilbert/operator.hpp"
#include "eqlab/hilbert/spectrum.hpp"

namespace eqlab::hilbert {

// JSON schema (field names follow the domain types):
//   BasisSpec:      {kind, dimension, grid_lo, grid_hi, grid_scale, stencil_order}
//   OperatorMatrix: {basis, hermitian_flag, entries: {rows, cols, triplets: [[row, col, re, im], ...]}}
//   SpectrumResult: {eigenvalues, e0_subtracted, solver_meta: {dimension, method, residual,
//                    discretization_error, e0}}

inline nlohmann::json to_json(const BasisSpec& b) {
  return {{"kind", to_string(b.kind)},         {"dimension", b.dimension},
          {"grid_lo", b.grid_lo},              {"grid_hi", b.grid_hi},
          {"grid_scale", to_string(b.grid_scale)}, {"stencil_order", b.stencil_order}};
}

inline BasisSpec basis_from_json(const nlohmann::json& j) {
  BasisSpec b;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "FockBasis") b.kind = BasisKind::Fock;
  else if (kind == "HalfLineGrid") b.kind = BasisKind::HalfLineGrid;
  else throw ConfigError("unknown basis kind: " + kind);
  b.dimension = j.at("dimension").get<std::size_t>();
  b.grid_lo = j.value("grid_lo", 0.0);
  b.grid_hi = j.value("grid_hi", 0.0);
  const auto scale = j.value("grid_scale", std::string("Logarithmic"));
  if (scale == "Uniform") b.grid_scale = GridScale::Uniform;
  else if (scale == "Logarithmic") b.grid_scale = GridScale::Logarithmic;
  else throw ConfigError("unknown grid scale: " + scale);
  b.stencil_order = j.value("stencil_order", 8);
  return b;
}

inline nlohmann::json to_json(const OperatorMatrix& op) {
  nlohmann::json triplets = nlohmann::json::array();
  const CSparse& m = op.entries();
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (CSparse::InnerIterator it(m, k); it; ++it)
      triplets.push_back({it.row(), it.col(), it.value().real(), it.value().imag()});
  return {{"basis", to_json(op.basis())},
          {"hermitian_flag", op.hermitian_flag()},
          {"entries", {{"rows", m.rows()}, {"cols", m.cols()}, {"triplets", triplets}}}};
}

inline OperatorMatrix operator_from_json(const nlohmann::json& j) {
  const BasisSpec basis = basis_from_json(j.at("basis"));
  const auto& e = j.at("entries");
  const auto n = e.at("rows").get<Eigen::Index>();
  std::vector<CTriplet> t;
  for (const auto& row : e.at("triplets"))
    t.emplace_back(row.at(0).get<Eigen::Index>(), row.at(1).get<Eigen::Index>(),
                   cplx(row.at(2).get<double>(), row.at(3).get<double>()));
  CSparse m(n, e.at("cols").get<Eigen::Index>());
  m.setFromTriplets(t.begin(), t.end());
  return {basis, std::move(m)};
}

inline nlohmann::json to_json(const SpectrumResult& s) {
  const auto& m = s.solver_meta;
  return {{"eigenvalues", s.eigenvalues},
          {"e0_subtracted", s.e0_subtracted},
          {"solver_meta",
           {{"dimension", m.dimension},
            {"method", m.method},
            {"residual", m.residual},
            {"discretization_error", m.discretization_error},
            {"e0", m.e0}}}};
}

inline SpectrumResult spectrum_from_json(const nlohmann::json& j) {
  SpectrumResult s;
  s.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
  s.e0_subtracted = j.at("e0_subtracted").get<bool>();
  const auto& m = j.at("solver_meta");
  s.solver_meta.dimension = m.at("dimension").get<std::size_t>();
  s.solver_meta.method = m.at("method").get<std::string>();
  s.solver_meta.residual = m.at("residual").get<double>();
  s.solver_meta.discretization_error = m.at("discretization_error").get<double>();
  s.solver_meta.e0 = m.at("e0").get<double>();
  return s;
}

}  // namespace eqlab::hilbert
