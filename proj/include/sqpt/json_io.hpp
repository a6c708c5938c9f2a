#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "sqpt/chi.hpp"
#include "sqpt/qchannel.hpp"

namespace sqpt {

inline constexpr const char* kChoiConvention = "choi-row-ef";
inline constexpr const char* kPauliConvention = "pauli-row-major";

/// {"dim": D, "kraus": [M1, ...]}, each M an array of rows of [re, im] pairs.
nlohmann::json channel_to_json(const QuantumChannel& ch);
/// Throws ParseError on malformed documents, non-square or wrong-dimension matrices.
QuantumChannel channel_from_json(const nlohmann::json& doc);
QuantumChannel load_channel(const std::filesystem::path& path);

/// {"dim": D, "convention": ..., "entries": [[re, im], ...]} row-major over D^2 x D^2.
nlohmann::json chi_to_json(const ChiMatrix& chi);
ChiMatrix chi_from_json(const nlohmann::json& doc);
ChiMatrix load_chi(const std::filesystem::path& path);

nlohmann::json complex_to_json(Complex c);

} // namespace sqpt
