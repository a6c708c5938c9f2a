#include "sqpt/json_io.hpp"

#include <fstream>

#include "sqpt/errors.hpp"

namespace sqpt {

using nlohmann::json;

namespace {

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("expected a complex number as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::size_t dim_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("dim") || !doc["dim"].is_number_integer() ||
      doc["dim"].get<long long>() < 1) {
    throw ParseError("missing or invalid \"dim\"");
  }
  return doc["dim"].get<std::size_t>();
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

} // namespace

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

json channel_to_json(const QuantumChannel& ch) {
  json kraus = json::array();
  for (const auto& k : ch.kraus()) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < k.cols(); ++j) row.push_back(complex_to_json(k(i, j)));
      rows.push_back(std::move(row));
    }
    kraus.push_back(std::move(rows));
  }
  return json{{"dim", ch.dim()}, {"kraus", std::move(kraus)}};
}

QuantumChannel channel_from_json(const json& doc) {
  const std::size_t dim = dim_from_json(doc);
  if (!doc.contains("kraus") || !doc["kraus"].is_array() || doc["kraus"].empty()) {
    throw ParseError("missing or empty \"kraus\" array");
  }
  const auto d = static_cast<Eigen::Index>(dim);
  std::vector<ComplexMatrix> kraus;
  for (const auto& m : doc["kraus"]) {
    if (!m.is_array() || m.size() != dim) {
      throw ParseError("Kraus operator does not have " + std::to_string(dim) + " rows");
    }
    ComplexMatrix k(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto& row = m[static_cast<std::size_t>(i)];
      if (!row.is_array() || row.size() != dim) {
        throw ParseError("Kraus operator row does not have " + std::to_string(dim) + " entries");
      }
      for (Eigen::Index j = 0; j < d; ++j) k(i, j) = complex_from_json(row[static_cast<std::size_t>(j)]);
    }
    kraus.push_back(std::move(k));
  }
  return QuantumChannel(dim, std::move(kraus));
}

QuantumChannel load_channel(const std::filesystem::path& path) {
  return channel_from_json(read_json(path));
}

json chi_to_json(const ChiMatrix& chi) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < chi.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < chi.entries.cols(); ++j) {
      entries.push_back(complex_to_json(chi.entries(i, j)));
    }
  }
  return json{{"dim", chi.dim},
              {"convention", chi.basis == ChiBasis::choi ? kChoiConvention : kPauliConvention},
              {"entries", std::move(entries)}};
}

ChiMatrix chi_from_json(const json& doc) {
  const std::size_t dim = dim_from_json(doc);
  ChiMatrix chi;
  chi.dim = dim;
  const std::string convention = doc.value("convention", std::string(kChoiConvention));
  if (convention == kChoiConvention) {
    chi.basis = ChiBasis::choi;
  } else if (convention == kPauliConvention) {
    chi.basis = ChiBasis::pauli;
  } else {
    throw ParseError("unknown chi convention: " + convention);
  }
  const std::size_t n = dim * dim;
  if (!doc.contains("entries") || !doc["entries"].is_array() || doc["entries"].size() != n * n) {
    throw ParseError("\"entries\" must hold D^4 complex numbers");
  }
  const auto nn = static_cast<Eigen::Index>(n);
  chi.entries.resize(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    for (Eigen::Index j = 0; j < nn; ++j) {
      chi.entries(i, j) = complex_from_json(doc["entries"][static_cast<std::size_t>(i * nn + j)]);
    }
  }
  return chi;
}

ChiMatrix load_chi(const std::filesystem::path& path) { return chi_from_json(read_json(path)); }

} // namespace sqpt
